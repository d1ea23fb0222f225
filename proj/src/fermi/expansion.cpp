#include "fermidet/fermi/expansion.hpp"

#include <cmath>

namespace fermidet::fermi {

Mat3 FermiExpansion::spatial_trace() const {
    Mat3 s = Mat3::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) s(i, j) += spatial(k, i, k, j);
    return s;
}

FermiExpansion FermiExpansion::flat(double tau, const Vec3& accel) {
    FermiExpansion e;
    e.tau = tau;
    e.accel = accel;
    return e;
}

FermiExpansion expansion_coefficients(const Worldline& w, const ProperTimeMap& map,
                                      const Tetrad& tetrad, double tau) {
    if (std::abs(tetrad.tau - tau) > 1e-9 * (1.0 + std::abs(tau)))
        throw ValidationError("expansion_coefficients: tetrad not transported to tau");

    FermiExpansion e;
    e.tau = tau;
    e.base_tetrad = tetrad;

    const Mat4 g = w.metric.components(tetrad.base_point);
    const Vec4 acc = kinematics::proper_acceleration(w, map, tau);
    for (int i = 0; i < 3; ++i) e.accel[i] = acc.dot(g * tetrad.legs[i + 1]);

    if (w.metric.known_flat()) return e;

    const geometry::CurvatureAtPoint curv = geometry::riemann_at(w.metric, tetrad.base_point);
    const geometry::FrameCurvature frame = geometry::frame_components(curv, g, tetrad.legs);

    e.r_titj = frame.electric_block();
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) e.r_tkij[k](i, j) = frame(0, k + 1, i + 1, j + 1);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l)
                    e.spatial_at(i, k, j, l) = frame(i + 1, k + 1, j + 1, l + 1);
    return e;
}

Mat4 metric_second_order(const FermiExpansion& exp, const FermiPoint& p) {
    const Vec3& x = p.xbar;
    const double ax = exp.accel.dot(x);
    const double rxx = x.dot(exp.r_titj * x);

    Mat4 g = Mat4::Zero();
    g(0, 0) = -(1.0 + 2.0 * ax + ax * ax + rxx);
    for (int i = 0; i < 3; ++i) {
        double gti = 0.0;
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) gti += exp.r_tkij[k](i, j) * x[k] * x[j];
        g(0, i + 1) = g(i + 1, 0) = -(2.0 / 3.0) * gti;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double gij = (i == j) ? 1.0 : 0.0;
            double corr = 0.0;
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) corr += exp.spatial(i, k, j, l) * x[k] * x[l];
            g(i + 1, j + 1) = gij - corr / 3.0;
        }
    return g;
}

double sqrt_det_spatial(const FermiExpansion& exp, const FermiPoint& p) {
    const Mat3 s = exp.spatial_trace();
    return 1.0 - p.xbar.dot(s * p.xbar) / 6.0;
}

double sqrt_det_full(const FermiExpansion& exp, const FermiPoint& p) {
    const Mat3 s = exp.spatial_trace();
    const Vec3& x = p.xbar;
    return 1.0 + exp.accel.dot(x) + 0.5 * x.dot((exp.r_titj - s / 3.0) * x);
}

double sqrt_det_ratio(const FermiExpansion& exp, const FermiPoint& p) {
    const Vec3& x = p.xbar;
    return 1.0 + exp.accel.dot(x) + 0.5 * x.dot(exp.r_titj * x);
}

double validity_radius(const FermiExpansion& exp, double factor) {
    double radius = constants::infinity;
    const double a = exp.accel.norm();
    if (a > 0) radius = std::min(radius, 1.0 / a);

    double max_curv = exp.r_titj.cwiseAbs().maxCoeff();
    for (int k = 0; k < 3; ++k)
        max_curv = std::max(max_curv, exp.r_tkij[k].cwiseAbs().maxCoeff());
    for (double c : exp.r_ikjl) max_curv = std::max(max_curv, std::abs(c));
    if (max_curv > 0) radius = std::min(radius, 1.0 / std::sqrt(max_curv));

    return factor * radius;
}

}  // namespace fermidet::fermi
