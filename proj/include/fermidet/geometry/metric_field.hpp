#pragma once

#include "fermidet/types.hpp"

#include <array>
#include <functional>
#include <string>
#include <utility>

namespace fermidet::geometry {

/// A spacetime metric on a single coordinate chart, signature (-,+,+,+).
/// Components (and optionally their first derivatives) are supplied as
/// functions of the chart coordinates; derivatives fall back to central
/// finite differences when no analytic form is given.
class MetricField {
public:
    using Components = std::function<Mat4(const Vec4&)>;
    using Derivatives = std::function<std::array<Mat4, 4>(const Vec4&)>;  // index = d/dx^rho
    using DomainPredicate = std::function<bool(const Vec4&)>;

    MetricField() = default;
    MetricField(std::string name, Components g, Derivatives dg = nullptr,
                DomainPredicate domain = nullptr, bool flat = false)
        : name_(std::move(name)),
          g_(std::move(g)),
          dg_(std::move(dg)),
          domain_(std::move(domain)),
          flat_(flat) {}

    const std::string& name() const { return name_; }
    bool has_analytic_derivatives() const { return static_cast<bool>(dg_); }

    /// True when the chart is known a priori to describe flat spacetime
    /// (curvature evaluations can be skipped).
    bool known_flat() const { return flat_; }

    bool in_domain(const Vec4& x) const { return domain_ ? domain_(x) : true; }

    /// g_{mu nu}(x).  Throws ValidationError outside the chart domain.
    Mat4 components(const Vec4& x) const;

    /// d_rho g_{mu nu}(x), analytic when available, else O(h^2) central
    /// differences with h = eps^(1/3) * max(1, |x_rho|).
    std::array<Mat4, 4> derivatives(const Vec4& x) const;

    /// Inverse metric.  Throws NumericalError when g is singular at x.
    Mat4 inverse(const Vec4& x) const;

private:
    std::string name_;
    Components g_;
    Derivatives dg_;
    DomainPredicate domain_;
    bool flat_ = false;
};

/// Finite-difference step for metric derivatives along coordinate rho.
double derivative_step(const Vec4& x, int rho);

}  // namespace fermidet::geometry
