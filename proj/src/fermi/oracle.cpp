#include "fermidet/fermi/oracle.hpp"

#include "fermidet/geometry/curvature.hpp"

#include <cmath>

namespace fermidet::fermi {

namespace {

Eigen::VectorXd geodesic_state(const Vec4& x, const Vec4& p) {
    Eigen::VectorXd y(8);
    y.segment<4>(0) = x;
    y.segment<4>(4) = p;
    return y;
}

}  // namespace

ExponentialMapResult exponential_map(const MetricField& metric, const Tetrad& tetrad,
                                     const Vec3& xbar, double rel_tol, double abs_tol) {
    Vec4 tangent = Vec4::Zero();
    for (int i = 0; i < 3; ++i) tangent += xbar[i] * tetrad.legs[i + 1];

    ExponentialMapResult result;
    if (xbar.norm() == 0.0) {
        result.point = tetrad.base_point;
        return result;
    }

    const auto rhs = [&metric](double, const Eigen::VectorXd& y, Eigen::VectorXd& d) {
        const Vec4 x = y.segment<4>(0);
        const Vec4 p = y.segment<4>(4);
        const auto gamma = geometry::christoffel(metric, x);
        d.segment<4>(0) = p;
        for (int mu = 0; mu < 4; ++mu) d[4 + mu] = -p.dot(gamma[mu] * p);
    };

    numerics::OdeOptions opts;
    opts.rel_tol = rel_tol;
    opts.abs_tol = abs_tol;
    result.geodesic =
        numerics::integrate_ode(rhs, geodesic_state(tetrad.base_point, tangent), 0.0, 1.0, opts);
    result.point = result.geodesic.eval(1.0).segment<4>(0);
    return result;
}

namespace {

// Fixed-grid RK4 geodesic solve in displacement form: integrates
// w(lambda) = x(lambda) - x(0) so that roundoff accumulates on the scale
// of the displacement, not of the ambient coordinates.  Returns the final
// displacement.
Vec4 geodesic_displacement(const MetricField& metric, const Vec4& base, const Vec4& tangent,
                           int steps) {
    struct State {
        Vec4 w, p;
    };
    const auto rhs = [&](const State& s) {
        State d;
        d.w = s.p;
        const auto gamma = geometry::christoffel(metric, base + s.w);
        for (int mu = 0; mu < 4; ++mu) d.p[mu] = -s.p.dot(gamma[mu] * s.p);
        return d;
    };

    State y{Vec4::Zero(), tangent};
    const double h = 1.0 / steps;
    for (int n = 0; n < steps; ++n) {
        const State k1 = rhs(y);
        const State y2{y.w + 0.5 * h * k1.w, y.p + 0.5 * h * k1.p};
        const State k2 = rhs(y2);
        const State y3{y.w + 0.5 * h * k2.w, y.p + 0.5 * h * k2.p};
        const State k3 = rhs(y3);
        const State y4{y.w + h * k3.w, y.p + h * k3.p};
        const State k4 = rhs(y4);
        y.w += (h / 6.0) * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
        y.p += (h / 6.0) * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
    }
    return y.w;
}

Vec4 chart_point_displacement(const MetricField& metric, const Tetrad& tetrad, const Vec3& xbar,
                              int steps) {
    Vec4 tangent = Vec4::Zero();
    for (int i = 0; i < 3; ++i) tangent += xbar[i] * tetrad.legs[i + 1];
    if (tangent.isZero()) return Vec4::Zero();
    return geodesic_displacement(metric, tetrad.base_point, tangent, steps);
}

}  // namespace

NumericChartResult numeric_fermi_metric(const MetricField& metric, const TetradField& frames,
                                        const FermiPoint& p, const NumericChartOptions& opts) {
    const double tau = p.tau;
    const Tetrad center = frames.at(tau);

    // Mapped event.
    const Vec4 phi0 = center.base_point + chart_point_displacement(metric, center, p.xbar,
                                                                   opts.geodesic_steps);

    // tau direction: central differences through the transported tetrads.
    const double ht = opts.tau_step;
    const Tetrad tp = frames.at(tau + ht);
    const Tetrad tm = frames.at(tau - ht);
    const Vec4 phi_tp =
        tp.base_point + chart_point_displacement(metric, tp, p.xbar, opts.geodesic_steps);
    const Vec4 phi_tm =
        tm.base_point + chart_point_displacement(metric, tm, p.xbar, opts.geodesic_steps);
    std::array<Vec4, 4> basis;
    basis[0] = (phi_tp - phi_tm) / (2.0 * ht);

    // Spatial directions: 4-point stencils in xbar.  The base point cancels
    // exactly inside each difference.
    const double hx = opts.xbar_step;
    for (int i = 0; i < 3; ++i) {
        Vec3 e = Vec3::Zero();
        e[i] = 1.0;
        const Vec4 f1 = chart_point_displacement(metric, center, p.xbar + hx * e, opts.geodesic_steps);
        const Vec4 f2 =
            chart_point_displacement(metric, center, p.xbar + 2.0 * hx * e, opts.geodesic_steps);
        const Vec4 b1 = chart_point_displacement(metric, center, p.xbar - hx * e, opts.geodesic_steps);
        const Vec4 b2 =
            chart_point_displacement(metric, center, p.xbar - 2.0 * hx * e, opts.geodesic_steps);
        basis[i + 1] = (8.0 * (f1 - b1) - (f2 - b2)) / (12.0 * hx);
    }

    const Mat4 g = metric.components(phi0);
    NumericChartResult result;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) result.metric(a, b) = basis[a].dot(g * basis[b]);
    // Symmetrize away the last bits of stencil asymmetry.
    result.metric = 0.5 * (result.metric + result.metric.transpose()).eval();

    const Mat3 spatial = result.metric.bottomRightCorner<3, 3>();
    const double det_spatial = spatial.determinant();
    const double det_full = result.metric.determinant();
    result.sqrt_det_spatial = det_spatial > 0 ? std::sqrt(det_spatial) : 0.0;
    result.sqrt_det_full = det_full < 0 ? std::sqrt(-det_full) : 0.0;

    result.jacobian_det = det_spatial;
    if (!(det_spatial > 1e-6))
        throw NumericalError("numeric_fermi_metric: spatial pushforward near-degenerate "
                             "(caustic suspicion)");
    return result;
}

}  // namespace fermidet::fermi
