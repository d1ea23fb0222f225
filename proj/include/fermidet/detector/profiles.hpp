#pragma once

#include "fermidet/types.hpp"

namespace fermidet::detector {

/// Spatial profile f(xbar) of the coupling, normalized to unit integral.
/// Gaussians are truncated at 8 sigma so every profile is compactly
/// supported (truncated mass < 1e-13).
class SmearingProfile {
public:
    enum class Kind { pointlike, gaussian, gaussian_shifted, hard_sphere };

    static SmearingProfile pointlike();
    static SmearingProfile gaussian(double sigma);
    static SmearingProfile gaussian_shifted(double sigma, const Vec3& center);
    static SmearingProfile hard_sphere(double radius);

    Kind kind() const { return kind_; }
    double characteristic_size() const { return size_; }
    const Vec3& center() const { return center_; }

    /// Profile value; exactly zero outside the support.
    double operator()(const Vec3& xbar) const;

    /// Radius of the support ball around the origin (0 for pointlike).
    double support_radius() const;

    /// Profile with the anisotropy data rotated: center -> R * center.
    SmearingProfile rotated(const Mat3& rotation) const;

    static constexpr double gaussian_cut = 8.0;  // truncation in units of sigma

private:
    Kind kind_ = Kind::pointlike;
    double size_ = 0.0;
    Vec3 center_ = Vec3::Zero();
};

/// Switching profile chi(tau), max value 1 (intensity lives in lambda),
/// compactly supported (Gaussians truncated at 8 T).
class SwitchingProfile {
public:
    enum class Kind { gaussian, cosine_bump, top_hat_smoothed };

    static SwitchingProfile gaussian(double width, double center = 0.0);
    static SwitchingProfile cosine_bump(double half_width, double center = 0.0);
    static SwitchingProfile top_hat_smoothed(double half_width, double ramp, double center = 0.0);

    Kind kind() const { return kind_; }
    double width() const { return width_; }
    double center() const { return center_; }
    double ramp() const { return ramp_; }

    double operator()(double tau) const;

    double support_lo() const;
    double support_hi() const;

private:
    Kind kind_ = Kind::gaussian;
    double width_ = 1.0;
    double center_ = 0.0;
    double ramp_ = 0.0;
};

}  // namespace fermidet::detector
