#include "fermidet/geometry/catalog.hpp"
#include "fermidet/geometry/curvature.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fermidet;
using namespace fermidet::geometry;

namespace {

// Textbook Schwarzschild Christoffel symbols, coded independently of the
// library path (static chart, coordinates t, r, theta, phi).
double schwarzschild_gamma_oracle(int mu, int nu, int rho, double M, double r, double th) {
    const double f = 1.0 - 2.0 * M / r;
    auto sym = [&](int a, int b, int c) -> double {
        if (a == 0 && ((b == 0 && c == 1) || (b == 1 && c == 0))) return M / (r * r * f);
        if (a == 1 && b == 0 && c == 0) return M * f / (r * r);
        if (a == 1 && b == 1 && c == 1) return -M / (r * r * f);
        if (a == 1 && b == 2 && c == 2) return -r * f;
        if (a == 1 && b == 3 && c == 3) return -r * f * std::sin(th) * std::sin(th);
        if (a == 2 && ((b == 1 && c == 2) || (b == 2 && c == 1))) return 1.0 / r;
        if (a == 2 && b == 3 && c == 3) return -std::sin(th) * std::cos(th);
        if (a == 3 && ((b == 1 && c == 3) || (b == 3 && c == 1))) return 1.0 / r;
        if (a == 3 && ((b == 2 && c == 3) || (b == 3 && c == 2)))
            return std::cos(th) / std::sin(th);
        return 0.0;
    };
    return sym(mu, nu, rho);
}

Vec4 schwarzschild_point(double r) { return Vec4(0.0, r, M_PI / 2.0, 0.3); }

}  // namespace

TEST_CASE("Minkowski Christoffel symbols vanish") {
    const MetricField metric = lookup({"minkowski-inertial", {}});
    const auto gamma = christoffel(metric, Vec4(0.3, -1.2, 5.0, 2.0));
    for (int mu = 0; mu < 4; ++mu) CHECK(gamma[mu].cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Rindler chart Christoffel symbols") {
    const double a = 0.7;
    const MetricField metric = lookup({"minkowski-rindler-chart", {{"a", a}}});
    const double xi = 0.3;
    const auto gamma = christoffel(metric, Vec4(0.0, xi, 0.0, 0.0));
    const double w = 1.0 + a * xi;
    CHECK(gamma[1](0, 0) == doctest::Approx(a * w).epsilon(1e-10));
    CHECK(gamma[0](0, 1) == doctest::Approx(a / w).epsilon(1e-10));
    CHECK(gamma[0](1, 0) == doctest::Approx(a / w).epsilon(1e-10));
    // everything else zero
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
            for (int rho = 0; rho < 4; ++rho) {
                const bool named = (mu == 1 && nu == 0 && rho == 0) ||
                                   (mu == 0 && ((nu == 0 && rho == 1) || (nu == 1 && rho == 0)));
                if (!named) CHECK(std::abs(gamma[mu](nu, rho)) < 1e-12);
            }
}

TEST_CASE("Schwarzschild Christoffel symbols match the textbook oracle") {
    const double M = 1.0;
    const MetricField metric = lookup({"schwarzschild", {{"M", M}}});
    for (double r : {4.0, 10.0, 25.0}) {
        const Vec4 x = schwarzschild_point(r);
        const auto gamma = christoffel(metric, x);
        CHECK(gamma[1](0, 0) == doctest::Approx((M / (r * r)) * (1.0 - 2.0 * M / r)).epsilon(1e-10));
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu)
                for (int rho = 0; rho < 4; ++rho) {
                    const double expected = schwarzschild_gamma_oracle(mu, nu, rho, M, r, x[2]);
                    CHECK(gamma[mu](nu, rho) == doctest::Approx(expected).epsilon(1e-8).scale(1.0));
                }
    }
}

TEST_CASE("flat spacetime in the Rindler chart has vanishing Riemann") {
    const MetricField metric = lookup({"minkowski-rindler-chart", {{"a", 0.5}}});
    const auto curv = riemann_at(metric, Vec4(0.2, 0.4, 1.0, -2.0));
    double max_abs = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) max_abs = std::max(max_abs, std::abs(curv(a, b, c, d)));
    CHECK(max_abs < 1e-9);
}

TEST_CASE("Schwarzschild Kretschmann scalar at r = 6M") {
    const double M = 1.0, r = 6.0;
    const MetricField metric = lookup({"schwarzschild", {{"M", M}}});
    const Vec4 x = schwarzschild_point(r);
    const auto curv = riemann_at(metric, x);
    const double expected = 48.0 * M * M / std::pow(r, 6);
    CHECK(curv.kretschmann(metric.inverse(x)) == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("Schwarzschild is Ricci flat") {
    const MetricField metric = lookup({"schwarzschild", {{"M", 1.0}}});
    const Vec4 x = schwarzschild_point(8.0);
    const auto ricci = riemann_at(metric, x).ricci(metric.inverse(x));
    CHECK(ricci.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("de Sitter static chart satisfies the maximal-symmetry identity") {
    const double H = 0.05;
    const MetricField metric = lookup({"de-sitter-static", {{"H", H}}});
    const Vec4 x(0.0, 6.0, 1.1, 0.7);
    const auto curv = riemann_at(metric, x);
    const Mat4 g = metric.components(x);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    const double expected = H * H * (g(a, c) * g(b, d) - g(a, d) * g(b, c));
                    CHECK(curv(a, b, c, d) == doctest::Approx(expected).epsilon(1e-6).scale(1.0));
                }
}

TEST_CASE("Riemann symmetries hold at random chart points") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> ur(4.0, 30.0);
    std::uniform_real_distribution<double> uth(0.5, 2.6);

    const MetricField schw = lookup({"schwarzschild", {{"M", 1.0}}});
    const MetricField ds = lookup({"de-sitter-static", {{"H", 0.02}}});
    for (int trial = 0; trial < 25; ++trial) {
        const Vec4 xs(0.0, ur(rng), uth(rng), 0.1);
        CHECK(riemann_at(schw, xs).symmetry_residual() < 1e-8);
        const Vec4 xd(0.0, ur(rng), uth(rng), 0.1);
        CHECK(riemann_at(ds, xd).symmetry_residual() < 1e-8);
    }
}

TEST_CASE("finite-difference derivatives agree with the analytic ones") {
    const MetricField analytic = lookup({"schwarzschild", {{"M", 1.0}}});
    // strip the analytic derivative to force the finite-difference path
    const MetricField numeric("schwarzschild-fd",
                              [&analytic](const Vec4& x) { return analytic.components(x); });
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> ur(5.0, 20.0);
    std::uniform_real_distribution<double> uth(0.6, 2.5);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec4 x(0.0, ur(rng), uth(rng), 0.4);
        const auto da = analytic.derivatives(x);
        const auto dn = numeric.derivatives(x);
        for (int rho = 0; rho < 4; ++rho)
            CHECK((da[rho] - dn[rho]).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("frame components of Schwarzschild static observer tidal tensor") {
    const double M = 1.0;
    const MetricField metric = lookup({"schwarzschild", {{"M", M}}});
    for (double r : {6.0, 10.0}) {
        const Vec4 x = schwarzschild_point(r);
        const auto curv = riemann_at(metric, x);
        const auto legs = static_frame(metric, x);
        const auto frame = frame_components(curv, metric.components(x), legs);
        // radial leg: R_{t1t1} = -2M/r^3; transverse: +M/r^3
        CHECK(frame(0, 1, 0, 1) == doctest::Approx(-2.0 * M / std::pow(r, 3)).epsilon(1e-6));
        CHECK(frame(0, 2, 0, 2) == doctest::Approx(M / std::pow(r, 3)).epsilon(1e-6));
        CHECK(frame(0, 3, 0, 3) == doctest::Approx(M / std::pow(r, 3)).epsilon(1e-6));
        // pair symmetry within the frame block
        const Mat3 electric = frame.electric_block();
        CHECK((electric - electric.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("frame_components rejects non-orthonormal tetrads") {
    const MetricField metric = lookup({"minkowski-inertial", {}});
    const Vec4 x = Vec4::Zero();
    const auto curv = riemann_at(metric, x);
    std::array<Vec4, 4> bad{Vec4(1, 0, 0, 0), Vec4(0, 2, 0, 0), Vec4(0, 0, 1, 0),
                            Vec4(0, 0, 0, 1)};
    CHECK_THROWS_AS(frame_components(curv, metric.components(x), bad), ValidationError);
}

TEST_CASE("curvature radius catalog values") {
    CHECK(curvature_radius({"minkowski-inertial", {}}, Vec4(0, 1, 1, 1)) ==
          constants::infinity);

    // solar mass horizon: largest frame component 2M/r^3 at r = 2M gives 2M
    const double Msun = constants::sun_mass_geometric;
    const double r_eval = 2.0 * Msun * 1.001;
    const double radius = curvature_radius({"schwarzschild", {{"M", Msun}}},
                                           Vec4(0.0, r_eval, M_PI / 2, 0.0));
    CHECK(radius == doctest::Approx(2.0 * Msun).epsilon(5e-3));
    CHECK(radius > 1000.0);   // kilometre scale
    CHECK(radius < 10000.0);

    const double H = 0.01;
    const double ds_radius =
        curvature_radius({"de-sitter-static", {{"H", H}}}, Vec4(0.0, 5.0, M_PI / 2, 0.0));
    CHECK(ds_radius == doctest::Approx(1.0 / H).epsilon(1e-4));
}

TEST_CASE("singular metric is reported") {
    const MetricField degenerate("degenerate", [](const Vec4&) {
        Mat4 g = Mat4::Zero();
        g(0, 0) = -1.0;
        g(1, 1) = 1.0;
        g(2, 2) = 1.0;  // g(3,3) = 0 -> singular
        return g;
    });
    CHECK_THROWS_AS(degenerate.inverse(Vec4::Zero()), NumericalError);
}

TEST_CASE("catalog rejects unknown names and bad parameters") {
    CHECK_THROWS_AS(lookup({"kerr", {}}), ValidationError);
    CHECK_THROWS_AS(lookup({"schwarzschild", {{"M", -1.0}}}), ValidationError);
    CHECK_THROWS_AS(lookup({"schwarzschild", {}}), ValidationError);
    const MetricField schw = lookup({"schwarzschild", {{"M", 1.0}}});
    CHECK_THROWS_AS(schw.components(Vec4(0.0, 1.5, M_PI / 2, 0.0)), ValidationError);
}

TEST_CASE("catalog basics: Minkowski, Schwarzschild g_tt, Rindler on the axis") {
    const MetricField mink = lookup({"minkowski-inertial", {}});
    Mat4 eta = Mat4::Identity();
    eta(0, 0) = -1;
    CHECK((mink.components(Vec4(1, 2, 3, 4)) - eta).cwiseAbs().maxCoeff() == 0.0);

    const MetricField schw = lookup({"schwarzschild", {{"M", 1.0}}});
    CHECK(schw.components(Vec4(0.0, 4.0, M_PI / 2, 0.0))(0, 0) ==
          doctest::Approx(-0.5).epsilon(1e-14));

    const MetricField rind = lookup({"minkowski-rindler-chart", {{"a", 2.0}}});
    CHECK((rind.components(Vec4(0.7, 0.0, 0.0, 0.0)) - eta).cwiseAbs().maxCoeff() < 1e-14);
}
