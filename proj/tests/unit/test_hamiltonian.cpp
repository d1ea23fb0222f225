#include "fermidet/hamiltonian/magnitudes.hpp"
#include "fermidet/hamiltonian/weight.hpp"

#include "fermidet/geometry/catalog.hpp"
#include "fermidet/kinematics/families.hpp"
#include "fermidet/numerics/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace fermidet;
using namespace fermidet::hamiltonian;
using namespace fermidet::kinematics;
using detector::DetectorSpec;
using detector::SmearingProfile;
using detector::SwitchingProfile;
using fermi::FermiExpansion;
using geometry::lookup;

namespace {

const geometry::MetricField& minkowski() {
    static const geometry::MetricField m = lookup({"minkowski-inertial", {}});
    return m;
}

ExpansionFamily constant_family(const FermiExpansion& e) {
    return [e](double tau) {
        FermiExpansion out = e;
        out.tau = tau;
        return out;
    };
}

DetectorSpec centered_gaussian(double sigma) {
    DetectorSpec d;
    d.smearing = SmearingProfile::gaussian(sigma);
    d.switching = SwitchingProfile::gaussian(1.0);
    return d;
}

}  // namespace

TEST_CASE("reparam factor examples") {
    SUBCASE("inertial at rest") {
        const Worldline w = inertial(minkowski(), 0.0, {-5, 5});
        const ProperTimeMap map = reparametrize(w);
        CHECK(reparam_factor(w, map, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("v = 0.6 time dilation") {
        const Worldline w = inertial(minkowski(), 0.6, {-5, 5});
        const ProperTimeMap map = reparametrize(w);
        CHECK(reparam_factor(w, map, 1.0) == doctest::Approx(0.8).epsilon(1e-10));
    }
    SUBCASE("static Schwarzschild redshift") {
        const double M = 1.0, r = 10.0;
        const auto metric = lookup({"schwarzschild", {{"M", M}}});
        const Worldline w = static_observer(metric, Vec3(r, M_PI / 2, 0), {-30, 30});
        const ProperTimeMap map = reparametrize(w);
        CHECK(reparam_factor(w, map, 2.0) ==
              doctest::Approx(std::sqrt(1.0 - 2.0 * M / r)).epsilon(1e-10));
    }
}

TEST_CASE("weights: flat inertial covariant equals noncovariant pointwise") {
    const FermiExpansion e = FermiExpansion::flat(0.0, Vec3::Zero());
    const DetectorSpec det = centered_gaussian(0.05);
    const auto cov = build_weight(det, WeightKind::covariant, constant_family(e));
    const auto noncov = build_weight(det, WeightKind::noncovariant, constant_family(e));
    for (double tau : {-0.5, 0.0, 1.0})
        for (double x : {-0.1, 0.0, 0.2}) {
            const Vec3 xb(x, 0.05, -0.02);
            CHECK(cov.density(tau, xb) == doctest::Approx(noncov.density(tau, xb)));
        }
}

TEST_CASE("weights: accelerated ratio is 1 + a.x") {
    const double a = 0.4;
    const FermiExpansion e = FermiExpansion::flat(0.0, Vec3(a, 0, 0));
    const DetectorSpec det = centered_gaussian(0.02);
    const auto cov = build_weight(det, WeightKind::covariant, constant_family(e));
    const auto noncov = build_weight(det, WeightKind::noncovariant, constant_family(e));
    const Vec3 xb(0.1, 0.0, 0.0);
    const double ratio = cov.density(0.0, xb) / noncov.density(0.0, xb);
    CHECK(ratio == doctest::Approx(1.0 + a * 0.1).epsilon(1e-12));
}

TEST_CASE("pointlike limit: weight ratio at the origin tends to 1") {
    const FermiExpansion e = FermiExpansion::flat(0.0, Vec3(0.4, 0, 0));
    for (double sigma : {0.02, 0.01, 0.005}) {
        const DetectorSpec det = centered_gaussian(sigma);
        const auto cov = build_weight(det, WeightKind::covariant, constant_family(e));
        const auto noncov = build_weight(det, WeightKind::noncovariant, constant_family(e));
        CHECK(cov.measure(0.0, Vec3::Zero()) == doctest::Approx(1.0));
        CHECK(noncov.measure(0.0, Vec3::Zero()) == doctest::Approx(1.0));
        CHECK(cov.density(0.0, Vec3::Zero()) ==
              doctest::Approx(noncov.density(0.0, Vec3::Zero())));
    }
}

TEST_CASE("build_weight rejects support beyond the validity radius") {
    const FermiExpansion e = FermiExpansion::flat(0.0, Vec3(2.0, 0, 0));  // validity 0.05
    const DetectorSpec det = centered_gaussian(0.02);                     // support 0.16
    CHECK_THROWS_AS(build_weight(det, WeightKind::covariant, constant_family(e)),
                    ValidationError);
}

TEST_CASE("multipole decomposition: centered gaussian, flat accelerated") {
    const double a = 0.3;
    const FermiExpansion e = FermiExpansion::flat(0.0, Vec3(a, 0, 0));
    const auto weight =
        build_weight(centered_gaussian(0.02), WeightKind::covariant, constant_family(e));
    const auto report = multipole_decomposition(weight, 0.0);
    CHECK(report.monopole_term == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(report.dipole_term) < 1e-10);     // parity
    CHECK(std::abs(report.quadrupole_term) < 1e-12);  // flat
    CHECK(report.relative_correction < 1e-9);
}

TEST_CASE("multipole decomposition: shifted gaussian dipole = a.d") {
    const double a = 0.3, d = 0.04, sigma = 0.01;
    const FermiExpansion e = FermiExpansion::flat(0.0, Vec3(a, 0, 0));
    DetectorSpec det;
    det.smearing = SmearingProfile::gaussian_shifted(sigma, Vec3(d, 0, 0));
    det.switching = SwitchingProfile::gaussian(1.0);
    const auto weight = build_weight(det, WeightKind::covariant, constant_family(e));
    const auto report = multipole_decomposition(weight, 0.0);
    CHECK(report.dipole_term == doctest::Approx(a * d).epsilon(1e-9));
    CHECK(report.relative_correction == doctest::Approx(a * d).epsilon(1e-7));
    // chi(tau) scales every term
    const auto away = multipole_decomposition(weight, 1.3);
    const double chi = det.switching(1.3);
    CHECK(away.monopole_term == doctest::Approx(chi * report.monopole_term).epsilon(1e-9));
    CHECK(away.dipole_term == doctest::Approx(chi * report.dipole_term).epsilon(1e-9));
    CHECK(away.relative_correction == doctest::Approx(report.relative_correction).epsilon(1e-9));
}

TEST_CASE("multipole decomposition: Schwarzschild static centered gaussian") {
    const double M = 1.0, r = 10.0, sigma = 0.05;
    const auto metric = lookup({"schwarzschild", {{"M", M}}});
    const Worldline w = static_observer(metric, Vec3(r, M_PI / 2, 0), {-30, 30});
    const ProperTimeMap map = reparametrize(w);
    const Tetrad tetrad = initial_tetrad(w, map, 0.0);
    const FermiExpansion e = fermi::expansion_coefficients(w, map, tetrad, 0.0);

    const auto weight =
        build_weight(centered_gaussian(sigma), WeightKind::covariant, constant_family(e),
                     0.1, [&](double tau) { return reparam_factor(w, map, tau); });
    const auto report = multipole_decomposition(weight, 0.0);

    // quadrupole term = (1/2) sigma^2 tr(R_titj) chi -> 0 in vacuum
    const double predicted = 0.5 * sigma * sigma * e.r_titj.trace();
    CHECK(report.quadrupole_term == doctest::Approx(predicted).epsilon(1e-4).scale(1e-8));
    CHECK(std::abs(report.quadrupole_term) < 1e-8);  // Ricci flatness
    CHECK(report.reparam_factor == doctest::Approx(std::sqrt(0.8)).epsilon(1e-10));

    // the t-frame report scales by dtau/dt
    const auto tframe = hamiltonian_difference(weight, 0.0);
    CHECK(tframe.monopole_term ==
          doctest::Approx(report.monopole_term * std::sqrt(0.8)).epsilon(1e-10));
    CHECK(tframe.relative_correction == doctest::Approx(report.relative_correction).epsilon(1e-12));
}

TEST_CASE("hamiltonian difference: Rindler shifted gaussian at the turning point") {
    const double a = 0.2, d = 0.03;
    const Worldline w = uniform_acceleration(minkowski(), a, {-6, 6});
    const ProperTimeMap map = reparametrize(w);
    const FermiExpansion e = FermiExpansion::flat(0.0, Vec3(a, 0, 0));
    DetectorSpec det;
    det.smearing = SmearingProfile::gaussian_shifted(0.01, Vec3(d, 0, 0));
    det.switching = SwitchingProfile::gaussian(1.0);
    const auto weight = build_weight(det, WeightKind::covariant, constant_family(e), 0.1,
                                     [&](double tau) { return reparam_factor(w, map, tau); });
    const auto report = hamiltonian_difference(weight, 0.0);
    // dtau/dt = 1 at the turning point; difference = a d times the monopole
    CHECK(report.reparam_factor == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(report.dipole_term ==
          doctest::Approx(a * d * report.monopole_term).epsilon(1e-7));
}

TEST_CASE("difference scales linearly in the acceleration") {
    const double d = 0.02;
    DetectorSpec det;
    det.smearing = SmearingProfile::gaussian_shifted(0.01, Vec3(d, 0, 0));
    det.switching = SwitchingProfile::gaussian(1.0);
    const FermiExpansion e1 = FermiExpansion::flat(0.0, Vec3(0.1, 0, 0));
    const FermiExpansion e2 = FermiExpansion::flat(0.0, Vec3(0.2, 0, 0));
    const auto w1 = build_weight(det, WeightKind::covariant, constant_family(e1));
    const auto w2 = build_weight(det, WeightKind::covariant, constant_family(e2));
    const auto r1 = multipole_decomposition(w1, 0.0);
    const auto r2 = multipole_decomposition(w2, 0.0);
    CHECK(r2.dipole_term == doctest::Approx(2.0 * r1.dipole_term).epsilon(1e-9));
}

TEST_CASE("measure identity: integrated difference equals the moment formula") {
    // int d^3x (covariant - noncovariant) density = chi (a.M^i + R/2 : M^ij)
    const double a = 0.25;
    FermiExpansion e = FermiExpansion::flat(0.0, Vec3(a, 0, 0));
    e.r_titj = (Mat3() << 0.4, 0.1, 0.0, 0.1, -0.2, 0.05, 0.0, 0.05, 0.3).finished();

    DetectorSpec det;
    det.smearing = SmearingProfile::gaussian_shifted(0.01, Vec3(0.015, 0.005, 0.0));
    det.switching = SwitchingProfile::gaussian(1.0);
    const auto cov = build_weight(det, WeightKind::covariant, constant_family(e));
    const auto noncov = build_weight(det, WeightKind::noncovariant, constant_family(e));

    const double tau = 0.4;
    const double support = det.smearing.support_radius();
    Eigen::VectorXd lo(3), hi(3);
    for (int i = 0; i < 3; ++i) {
        lo[i] = -support;
        hi[i] = support;
    }
    const auto integral = numerics::quad_adaptive(
        [&](const Eigen::VectorXd& q) {
            const Vec3 xb(q[0], q[1], q[2]);
            return cov.density(tau, xb) - noncov.density(tau, xb);
        },
        numerics::Box::cube(lo, hi), 1e-10, 1e-14);

    detector::MomentOptions mopts;
    mopts.with_spatial_measure = false;
    const auto unit_moments = detector::smearing_moments(det, e, mopts);
    const double chi = det.switching(tau);
    const double expected = chi * (e.accel.dot(unit_moments.dipole) +
                                   0.5 * (e.r_titj.cwiseProduct(unit_moments.quadrupole)).sum());
    CHECK(integral.value == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("remainder envelope scales cubically") {
    const FermiExpansion e = FermiExpansion::flat(0.0, Vec3(0.5, 0, 0));
    const double r1 = remainder_envelope(e, 0.01);
    const double r2 = remainder_envelope(e, 0.02);
    CHECK(r2 == doctest::Approx(8.0 * r1).epsilon(1e-12));
    CHECK(remainder_envelope(FermiExpansion::flat(0.0, Vec3::Zero()), 0.1) == 0.0);
}

TEST_CASE("magnitude estimates reproduce the published scales") {
    // Bohr-diameter detector: threshold acceleration ~ 1e26 g
    const double L = 1e-10;
    const double threshold_g = threshold_acceleration_g(L);
    CHECK(threshold_g > 1e25);
    CHECK(threshold_g < 1e27);

    // collider-ring orbit: ~1e12-1e13 g, dipole scale ~1e-13
    const double a_lhc = circular_orbit_acceleration_si(4243.0);
    CHECK(a_lhc / constants::g_earth_si > 1e12);
    CHECK(a_lhc / constants::g_earth_si < 1e14);
    CHECK(dipole_scale(a_lhc, L) > 1e-15);
    CHECK(dipole_scale(a_lhc, L) < 1e-12);

    // solar-mass horizon curvature radius ~ km
    const double radius = horizon_curvature_radius_m(constants::sun_mass_geometric);
    CHECK(radius > 100.0);
    CHECK(radius < 10000.0);
    CHECK(quadrupole_scale(L, radius) ==
          doctest::Approx((L / radius) * (L / radius)).epsilon(1e-12));

    CHECK_THROWS_AS(dipole_scale(-1.0, 1.0), ValidationError);
}
