#include "fermidet/geometry/metric_field.hpp"

#include <cmath>

namespace fermidet::geometry {

double derivative_step(const Vec4& x, int rho) {
    constexpr double cbrt_eps = 6.055454452393343e-06;  // eps^(1/3)
    return cbrt_eps * std::max(1.0, std::abs(x[rho]));
}

Mat4 MetricField::components(const Vec4& x) const {
    if (!in_domain(x))
        throw ValidationError("MetricField(" + name_ + "): point outside chart domain");
    Mat4 g = g_(x);
    if (!g.allFinite())
        throw NumericalError("MetricField(" + name_ + "): non-finite components");
    return g;
}

std::array<Mat4, 4> MetricField::derivatives(const Vec4& x) const {
    if (dg_) return dg_(x);
    std::array<Mat4, 4> dg;
    for (int rho = 0; rho < 4; ++rho) {
        const double h = derivative_step(x, rho);
        Vec4 xp = x, xm = x;
        xp[rho] += h;
        xm[rho] -= h;
        dg[rho] = (components(xp) - components(xm)) / (2.0 * h);
    }
    return dg;
}

Mat4 MetricField::inverse(const Vec4& x) const {
    const Mat4 g = components(x);
    Eigen::FullPivLU<Mat4> lu(g);
    if (!lu.isInvertible())
        throw NumericalError("MetricField(" + name_ + "): singular metric");
    return lu.inverse();
}

}  // namespace fermidet::geometry
