#include "fermidet/detector/profiles.hpp"

#include <cmath>

namespace fermidet::detector {

SmearingProfile SmearingProfile::pointlike() {
    SmearingProfile p;
    p.kind_ = Kind::pointlike;
    return p;
}

SmearingProfile SmearingProfile::gaussian(double sigma) {
    if (!(sigma > 0)) throw ValidationError("smearing gaussian: require sigma > 0");
    SmearingProfile p;
    p.kind_ = Kind::gaussian;
    p.size_ = sigma;
    return p;
}

SmearingProfile SmearingProfile::gaussian_shifted(double sigma, const Vec3& center) {
    if (!(sigma > 0)) throw ValidationError("smearing gaussian-shifted: require sigma > 0");
    SmearingProfile p;
    p.kind_ = Kind::gaussian_shifted;
    p.size_ = sigma;
    p.center_ = center;
    return p;
}

SmearingProfile SmearingProfile::hard_sphere(double radius) {
    if (!(radius > 0)) throw ValidationError("smearing hard-sphere: require R > 0");
    SmearingProfile p;
    p.kind_ = Kind::hard_sphere;
    p.size_ = radius;
    return p;
}

double SmearingProfile::operator()(const Vec3& xbar) const {
    switch (kind_) {
        case Kind::pointlike:
            throw ValidationError("pointlike smearing has no density; use the moment interface");
        case Kind::gaussian:
        case Kind::gaussian_shifted: {
            const Vec3 d = xbar - center_;
            const double r2 = d.squaredNorm();
            const double cut = gaussian_cut * size_;
            if (r2 > cut * cut) return 0.0;
            const double s2 = size_ * size_;
            const double norm = std::pow(2.0 * M_PI * s2, -1.5);
            return norm * std::exp(-0.5 * r2 / s2);
        }
        case Kind::hard_sphere: {
            if (xbar.norm() > size_) return 0.0;
            return 3.0 / (4.0 * M_PI * size_ * size_ * size_);
        }
    }
    return 0.0;
}

double SmearingProfile::support_radius() const {
    switch (kind_) {
        case Kind::pointlike:
            return 0.0;
        case Kind::gaussian:
            return gaussian_cut * size_;
        case Kind::gaussian_shifted:
            return gaussian_cut * size_ + center_.norm();
        case Kind::hard_sphere:
            return size_;
    }
    return 0.0;
}

SmearingProfile SmearingProfile::rotated(const Mat3& rotation) const {
    SmearingProfile p = *this;
    p.center_ = rotation * center_;
    return p;
}

SwitchingProfile SwitchingProfile::gaussian(double width, double center) {
    if (!(width > 0)) throw ValidationError("switching gaussian: require T > 0");
    SwitchingProfile s;
    s.kind_ = Kind::gaussian;
    s.width_ = width;
    s.center_ = center;
    return s;
}

SwitchingProfile SwitchingProfile::cosine_bump(double half_width, double center) {
    if (!(half_width > 0)) throw ValidationError("switching cosine-bump: require T > 0");
    SwitchingProfile s;
    s.kind_ = Kind::cosine_bump;
    s.width_ = half_width;
    s.center_ = center;
    return s;
}

SwitchingProfile SwitchingProfile::top_hat_smoothed(double half_width, double ramp,
                                                    double center) {
    if (!(half_width > 0) || !(ramp > 0) || ramp > half_width)
        throw ValidationError("switching top-hat: require 0 < ramp <= T");
    SwitchingProfile s;
    s.kind_ = Kind::top_hat_smoothed;
    s.width_ = half_width;
    s.center_ = center;
    s.ramp_ = ramp;
    return s;
}

double SwitchingProfile::operator()(double tau) const {
    const double u = tau - center_;
    switch (kind_) {
        case Kind::gaussian: {
            if (std::abs(u) > 8.0 * width_) return 0.0;
            const double z = u / width_;
            return std::exp(-0.5 * z * z);
        }
        case Kind::cosine_bump: {
            if (std::abs(u) >= width_) return 0.0;
            const double c = std::cos(0.5 * M_PI * u / width_);
            return c * c;
        }
        case Kind::top_hat_smoothed: {
            const double a = std::abs(u);
            if (a >= width_) return 0.0;
            if (a <= width_ - ramp_) return 1.0;
            // smoothstep ramp down to the edge
            const double v = (width_ - a) / ramp_;  // 0 at edge, 1 at plateau
            return v * v * (3.0 - 2.0 * v);
        }
    }
    return 0.0;
}

double SwitchingProfile::support_lo() const {
    const double half = (kind_ == Kind::gaussian) ? 8.0 * width_ : width_;
    return center_ - half;
}

double SwitchingProfile::support_hi() const {
    const double half = (kind_ == Kind::gaussian) ? 8.0 * width_ : width_;
    return center_ + half;
}

}  // namespace fermidet::detector
