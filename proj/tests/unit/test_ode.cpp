#include "fermidet/numerics/ode.hpp"

#include <doctest.h>

#include <cmath>

using namespace fermidet;
using numerics::integrate_ode;
using numerics::OdeOptions;

namespace {

Eigen::VectorXd scalar_state(double v) {
    Eigen::VectorXd y(1);
    y[0] = v;
    return y;
}

}  // namespace

TEST_CASE("constant rhs keeps the state constant") {
    auto rhs = [](double, const Eigen::VectorXd&, Eigen::VectorXd& d) { d.setZero(); };
    const auto sol = integrate_ode(rhs, scalar_state(1.0), 0.0, 10.0);
    CHECK(sol.eval(10.0)[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sol.eval(3.7)[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("exponential growth reaches e within tolerance") {
    auto rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& d) { d = y; };
    OdeOptions opts;
    opts.rel_tol = 1e-10;
    opts.abs_tol = 1e-12;
    const auto sol = integrate_ode(rhs, scalar_state(1.0), 0.0, 1.0, opts);
    CHECK(sol.eval(1.0)[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
}

TEST_CASE("circular motion returns to the start after a full period") {
    auto rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& d) {
        d[0] = y[1];
        d[1] = -y[0];
    };
    Eigen::VectorXd y0(2);
    y0 << 1.0, 0.0;
    OdeOptions opts;
    opts.rel_tol = 1e-11;
    opts.abs_tol = 1e-13;
    const auto sol = integrate_ode(rhs, y0, 0.0, 2.0 * M_PI, opts);
    CHECK(sol.eval(2.0 * M_PI)[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.eval(2.0 * M_PI)[1] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("dense output matches knots and interpolates between them") {
    auto rhs = [](double t, const Eigen::VectorXd&, Eigen::VectorXd& d) { d[0] = std::cos(t); };
    const auto sol = integrate_ode(rhs, scalar_state(0.0), 0.0, 3.0);
    for (std::size_t k = 0; k < sol.knot_count(); ++k) {
        const double t = sol.knot_parameter(k);
        CHECK(sol.eval(t)[0] == doctest::Approx(sol.knot_state(k)[0]).epsilon(1e-13));
        if (k > 0) CHECK(sol.knot_parameter(k) > sol.knot_parameter(k - 1));
    }
    CHECK(sol.eval(1.234)[0] == doctest::Approx(std::sin(1.234)).epsilon(1e-8));
}

TEST_CASE("backwards integration works") {
    auto rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& d) { d = y; };
    const auto sol = integrate_ode(rhs, scalar_state(1.0), 0.0, -1.0);
    CHECK(sol.eval(-1.0)[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("halving tolerance improves the exponential benchmark monotonically") {
    auto rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& d) { d = y; };
    double previous_error = 1.0;
    for (double tol : {1e-6, 1e-8, 1e-10, 1e-12}) {
        OdeOptions opts;
        opts.rel_tol = tol;
        opts.abs_tol = tol * 1e-2;
        const auto sol = integrate_ode(rhs, scalar_state(1.0), 0.0, 1.0, opts);
        const double error = std::abs(sol.eval(1.0)[0] - std::exp(1.0));
        CHECK(error < previous_error);
        previous_error = error;
    }
}

TEST_CASE("determinism: identical inputs give bit-identical solves") {
    auto rhs = [](double t, const Eigen::VectorXd& y, Eigen::VectorXd& d) {
        d[0] = std::sin(t) * y[0];
    };
    const auto a = integrate_ode(rhs, scalar_state(1.0), 0.0, 5.0);
    const auto b = integrate_ode(rhs, scalar_state(1.0), 0.0, 5.0);
    REQUIRE(a.knot_count() == b.knot_count());
    for (std::size_t k = 0; k < a.knot_count(); ++k) {
        CHECK(a.knot_parameter(k) == b.knot_parameter(k));
        CHECK(a.knot_state(k)[0] == b.knot_state(k)[0]);
    }
}

TEST_CASE("bad inputs are rejected") {
    auto rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& d) { d = y; };
    CHECK_THROWS_AS(integrate_ode(rhs, scalar_state(1.0), 0.0, 0.0), ValidationError);
    OdeOptions opts;
    opts.rel_tol = -1.0;
    CHECK_THROWS_AS(integrate_ode(rhs, scalar_state(1.0), 0.0, 1.0, opts), ValidationError);
}

TEST_CASE("singular rhs triggers step-size underflow") {
    // y' = 1/(1 - t) blows up before t = 1.5
    auto rhs = [](double t, const Eigen::VectorXd&, Eigen::VectorXd& d) {
        d[0] = 1.0 / (1.0 - t);
    };
    CHECK_THROWS_AS(integrate_ode(rhs, scalar_state(0.0), 0.0, 1.5), NumericalError);
}
