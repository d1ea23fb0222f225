#include "fermidet/geometry/catalog.hpp"

#include <cmath>

namespace fermidet::geometry {

namespace {

double require_param(const SpacetimeId& id, const std::string& key) {
    auto it = id.params.find(key);
    if (it == id.params.end())
        throw ValidationError("spacetime '" + id.name + "': missing parameter '" + key + "'");
    return it->second;
}

MetricField make_minkowski() {
    Mat4 eta = Mat4::Identity();
    eta(0, 0) = -1.0;
    auto g = [eta](const Vec4&) { return eta; };
    auto dg = [](const Vec4&) {
        std::array<Mat4, 4> z;
        for (auto& m : z) m.setZero();
        return z;
    };
    return MetricField("minkowski-inertial", g, dg, nullptr, /*flat=*/true);
}

MetricField make_rindler(double a) {
    if (!(a > 0)) throw ValidationError("minkowski-rindler-chart: require a > 0");
    // ds^2 = -(1 + a xi)^2 deta^2 + dxi^2 + dy^2 + dz^2, coords (eta, xi, y, z)
    auto g = [a](const Vec4& x) {
        Mat4 m = Mat4::Identity();
        const double w = 1.0 + a * x[1];
        m(0, 0) = -w * w;
        return m;
    };
    auto dg = [a](const Vec4& x) {
        std::array<Mat4, 4> d;
        for (auto& m : d) m.setZero();
        const double w = 1.0 + a * x[1];
        d[1](0, 0) = -2.0 * a * w;
        return d;
    };
    auto domain = [a](const Vec4& x) { return 1.0 + a * x[1] > 1e-12; };
    return MetricField("minkowski-rindler-chart", g, dg, domain, /*flat=*/true);
}

MetricField make_schwarzschild(double mass) {
    if (!(mass > 0)) throw ValidationError("schwarzschild: require M > 0");
    // coords (t, r, theta, phi), exterior chart r > 2M away from the axis
    auto g = [mass](const Vec4& x) {
        const double r = x[1], th = x[2];
        const double f = 1.0 - 2.0 * mass / r;
        Mat4 m = Mat4::Zero();
        m(0, 0) = -f;
        m(1, 1) = 1.0 / f;
        m(2, 2) = r * r;
        const double s = std::sin(th);
        m(3, 3) = r * r * s * s;
        return m;
    };
    auto dg = [mass](const Vec4& x) {
        const double r = x[1], th = x[2];
        const double f = 1.0 - 2.0 * mass / r;
        const double df = 2.0 * mass / (r * r);
        const double s = std::sin(th), c = std::cos(th);
        std::array<Mat4, 4> d;
        for (auto& m : d) m.setZero();
        d[1](0, 0) = -df;
        d[1](1, 1) = -df / (f * f);
        d[1](2, 2) = 2.0 * r;
        d[1](3, 3) = 2.0 * r * s * s;
        d[2](3, 3) = r * r * 2.0 * s * c;
        return d;
    };
    auto domain = [mass](const Vec4& x) {
        return x[1] > 2.0 * mass * (1.0 + 1e-10) && std::abs(std::sin(x[2])) > 1e-8;
    };
    return MetricField("schwarzschild", g, dg, domain);
}

MetricField make_de_sitter(double hubble) {
    if (!(hubble > 0)) throw ValidationError("de-sitter-static: require H > 0");
    // static chart (t, r, theta, phi), r < 1/H
    auto g = [hubble](const Vec4& x) {
        const double r = x[1], th = x[2];
        const double f = 1.0 - hubble * hubble * r * r;
        Mat4 m = Mat4::Zero();
        m(0, 0) = -f;
        m(1, 1) = 1.0 / f;
        m(2, 2) = r * r;
        const double s = std::sin(th);
        m(3, 3) = r * r * s * s;
        return m;
    };
    auto dg = [hubble](const Vec4& x) {
        const double r = x[1], th = x[2];
        const double f = 1.0 - hubble * hubble * r * r;
        const double df = -2.0 * hubble * hubble * r;
        const double s = std::sin(th), c = std::cos(th);
        std::array<Mat4, 4> d;
        for (auto& m : d) m.setZero();
        d[1](0, 0) = -df;
        d[1](1, 1) = -df / (f * f);
        d[1](2, 2) = 2.0 * r;
        d[1](3, 3) = 2.0 * r * s * s;
        d[2](3, 3) = r * r * 2.0 * s * c;
        return d;
    };
    auto domain = [hubble](const Vec4& x) {
        return x[1] > 0 && x[1] < (1.0 - 1e-10) / hubble && std::abs(std::sin(x[2])) > 1e-8;
    };
    return MetricField("de-sitter-static", g, dg, domain);
}

}  // namespace

MetricField lookup(const SpacetimeId& id) {
    if (id.name == "minkowski-inertial") return make_minkowski();
    if (id.name == "minkowski-rindler-chart") return make_rindler(require_param(id, "a"));
    if (id.name == "schwarzschild") return make_schwarzschild(require_param(id, "M"));
    if (id.name == "de-sitter-static") return make_de_sitter(require_param(id, "H"));
    throw ValidationError("unknown spacetime '" + id.name + "'");
}

std::array<Vec4, 4> static_frame(const MetricField& metric, const Vec4& x) {
    const Mat4 g = metric.components(x);
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            if (std::abs(g(a, b)) > 1e-12 * (1.0 + std::abs(g(a, a))))
                throw ValidationError("static_frame: metric not diagonal at this point");
    std::array<Vec4, 4> legs;
    for (int a = 0; a < 4; ++a) {
        legs[a] = Vec4::Zero();
        legs[a][a] = 1.0 / std::sqrt(std::abs(g(a, a)));
    }
    return legs;
}

double curvature_radius(const SpacetimeId& id, const Vec4& x) {
    const MetricField metric = lookup(id);
    if (metric.known_flat()) return constants::infinity;
    const CurvatureAtPoint curv = riemann_at(metric, x);
    const FrameCurvature frame = frame_components(curv, metric.components(x), static_frame(metric, x));
    const double max_component = frame.max_abs();
    if (max_component < 1e-14) return constants::infinity;
    return 1.0 / std::sqrt(max_component);
}

}  // namespace fermidet::geometry
