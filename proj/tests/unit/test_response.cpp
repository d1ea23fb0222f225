#include "fermidet/response/response.hpp"

#include "fermidet/numerics/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace fermidet;
using namespace fermidet::response;
using detector::DetectorSpec;
using detector::SmearingProfile;
using detector::SwitchingProfile;
using fermi::FermiExpansion;
using hamiltonian::build_weight;
using hamiltonian::WeightKind;

namespace {

hamiltonian::ExpansionFamily constant_family(const FermiExpansion& e) {
    return [e](double tau) {
        FermiExpansion out = e;
        out.tau = tau;
        return out;
    };
}

DetectorSpec pointlike_detector(double gap, double width, double coupling = 1.0) {
    DetectorSpec d;
    d.gap = gap;
    d.coupling = coupling;
    d.smearing = SmearingProfile::pointlike();
    d.switching = SwitchingProfile::gaussian(width);
    return d;
}

// Analytically reduced radial integral for the inertial pointlike detector
// with Gaussian switching and a massless field:
// P = (lambda^2 T^2 / 2 pi) int_0^inf k e^{-T^2 (Omega + k)^2} dk.
double pointlike_probability_oracle(double gap, double width, double coupling) {
    const double k_hi = gap + 12.0 / width;
    const auto integral = numerics::quad_interval(
        [&](double k) {
            const double arg = width * (gap + k);
            return k * std::exp(-arg * arg);
        },
        0.0, k_hi, 1e-12, 1e-20);
    return coupling * coupling * width * width / (2.0 * M_PI) * integral.value;
}

}  // namespace

TEST_CASE("zero coupling gives zero amplitude") {
    const auto det = pointlike_detector(1.0, 1.0, 0.0);
    const auto weight = build_weight(det, WeightKind::covariant,
                                     constant_family(FermiExpansion::flat(0.0, Vec3::Zero())));
    const Complex a = first_order_amplitude(weight, FlatChartMap::inertial(), {}, Vec3(1, 0, 0));
    CHECK(std::abs(a) == 0.0);
}

TEST_CASE("pointlike inertial amplitude matches the Gaussian Fourier transform") {
    const double gap = 1.0, width = 1.0;
    const auto det = pointlike_detector(gap, width);
    const auto weight = build_weight(det, WeightKind::noncovariant,
                                     constant_family(FermiExpansion::flat(0.0, Vec3::Zero())));
    for (double k : {0.3, 1.0, 2.5}) {
        const Complex a =
            first_order_amplitude(weight, FlatChartMap::inertial(), {}, Vec3(k, 0, 0));
        const double omega = k;
        const double expected = std::sqrt(2.0 * M_PI) * width *
                                std::exp(-0.5 * width * width * (gap + omega) * (gap + omega)) /
                                std::sqrt(std::pow(2.0 * M_PI, 3) * 2.0 * omega);
        CHECK(std::abs(a) == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("narrow switching approaches the instantaneous limit") {
    // As T -> 0, A -> -i lambda sqrt(2 pi) T u_k^*(z(0)) (pointlike, tau0 = 0)
    const double k = 1.3;
    for (double width : {1e-2, 1e-3}) {
        const auto det = pointlike_detector(2.0, width);
        const auto weight = build_weight(det, WeightKind::covariant,
                                         constant_family(FermiExpansion::flat(0.0, Vec3::Zero())));
        const Complex a =
            first_order_amplitude(weight, FlatChartMap::inertial(), {}, Vec3(k, 0, 0));
        const double expected =
            std::sqrt(2.0 * M_PI) * width / std::sqrt(std::pow(2.0 * M_PI, 3) * 2.0 * k);
        CHECK(std::abs(a) == doctest::Approx(expected).epsilon(5e-4 / width * 1e-2));
    }
}

TEST_CASE("pointlike probability matches the radial oracle to 1e-6") {
    const double gap = 1.0, width = 1.0;
    const auto det = pointlike_detector(gap, width);
    const auto weight = build_weight(det, WeightKind::noncovariant,
                                     constant_family(FermiExpansion::flat(0.0, Vec3::Zero())));
    ResponseSettings settings;
    settings.radial_rel_tol = 1e-9;
    settings.amp_rel_tol = 1e-10;
    settings.n_theta = 8;
    settings.n_phi = 2;
    const auto result = excitation_probability(weight, FlatChartMap::inertial(), {}, settings);
    const double oracle = pointlike_probability_oracle(gap, width, 1.0);
    CHECK(result.probability == doctest::Approx(oracle).epsilon(1e-6));
    CHECK(result.converged);
    CHECK(result.probability > 0.0);
}

TEST_CASE("probability decays monotonically at large gap") {
    double previous = 1e300;
    for (double gap : {1.0, 2.0, 4.0, 8.0}) {
        const auto det = pointlike_detector(gap, 1.0);
        const auto weight = build_weight(det, WeightKind::noncovariant,
                                         constant_family(FermiExpansion::flat(0.0, Vec3::Zero())));
        ResponseSettings settings;
        settings.n_theta = 6;
        settings.n_phi = 1;
        const auto result =
            excitation_probability(weight, FlatChartMap::inertial(), {}, settings);
        CHECK(result.probability < previous);
        previous = result.probability;
    }
}

TEST_CASE("inertial smeared: both prescriptions coincide exactly") {
    DetectorSpec det;
    det.gap = 1.0;
    det.smearing = SmearingProfile::gaussian(0.05);
    det.switching = SwitchingProfile::gaussian(1.0);
    ResponseSettings settings;
    settings.n_theta = 8;
    settings.n_phi = 2;
    const auto comparison = compare_prescriptions(
        det, constant_family(FermiExpansion::flat(0.0, Vec3::Zero())),
        FlatChartMap::inertial(), {}, settings);
    CHECK(comparison.delta == 0.0);
    CHECK(comparison.p_covariant == comparison.p_noncovariant);
    CHECK(comparison.inconclusive);  // zero difference sits inside any error bar
    CHECK(comparison.p_noncovariant > 0.0);
}

TEST_CASE("gaussian accelerated amplitude agrees with a direct 4-D quadrature oracle") {
    const double a = 0.3, sigma = 0.04, gap = 1.0;
    DetectorSpec det;
    det.gap = gap;
    det.smearing = SmearingProfile::gaussian_shifted(sigma, Vec3(0.02, 0.0, 0.0));
    det.switching = SwitchingProfile::gaussian(0.8);
    const FermiExpansion exp = FermiExpansion::flat(0.0, Vec3(a, 0, 0));
    const auto weight = build_weight(det, WeightKind::covariant, constant_family(exp));
    const FlatChartMap map = FlatChartMap::accelerated(a);

    const Vec3 k(0.9, 0.3, -0.2);
    const Complex fast = first_order_amplitude(weight, map, {}, k);

    // independent direct integration of the defining integral
    const double omega = k.norm();
    Eigen::VectorXd lo(4), hi(4);
    const double support = det.smearing.support_radius();
    lo << det.switching.support_lo(), -support, -support, -support;
    hi << det.switching.support_hi(), support, support, support;
    const auto direct = numerics::quad_adaptive_vec<2>(
        [&](const Eigen::VectorXd& q) {
            const double tau = q[0];
            const Vec3 xb(q[1], q[2], q[3]);
            VecN<2> v = VecN<2>::Zero();
            const double density = weight.density(tau, xb);
            if (density == 0.0) return v;
            const Vec4 ev = map.event(tau, xb);
            const double phase =
                gap * tau + omega * ev[0] - k[0] * ev[1] - k[1] * ev[2] - k[2] * ev[3];
            v[0] = density * std::cos(phase);
            v[1] = density * std::sin(phase);
            return v;
        },
        numerics::Box::cube(lo, hi), {1e-8, 1e-14, 20000000});
    const Complex pref(0.0, -1.0 / std::sqrt(std::pow(2.0 * M_PI, 3) * 2.0 * omega));
    const Complex oracle = pref * Complex(direct.value[0], direct.value[1]);
    CHECK(std::abs(fast - oracle) < 1e-6 * std::abs(oracle) + 1e-14);
}

TEST_CASE("dipole difference scales linearly with the smearing scale") {
    const double a = 0.1;
    ResponseSettings settings;
    settings.n_theta = 8;
    settings.n_phi = 2;
    settings.radial_rel_tol = 1e-6;
    settings.amp_rel_tol = 1e-7;
    const FermiExpansion exp = FermiExpansion::flat(0.0, Vec3(a, 0, 0));
    const FlatChartMap map = FlatChartMap::accelerated(a);

    std::vector<double> scales = {0.01, 0.02, 0.04};
    std::vector<double> ratios;
    for (double scale : scales) {
        DetectorSpec det;
        det.gap = 1.0;
        det.smearing = SmearingProfile::gaussian_shifted(0.25 * scale, Vec3(0.5 * scale, 0, 0));
        det.switching = SwitchingProfile::gaussian(1.0);
        const auto c = compare_prescriptions(det, constant_family(exp), map, {}, settings);
        REQUIRE_FALSE(c.inconclusive);
        ratios.push_back(std::abs(c.delta) / c.p_noncovariant);
    }
    const double slope01 = std::log(ratios[1] / ratios[0]) / std::log(scales[1] / scales[0]);
    const double slope12 = std::log(ratios[2] / ratios[1]) / std::log(scales[2] / scales[1]);
    CHECK(slope01 == doctest::Approx(1.0).epsilon(0.1));
    CHECK(slope12 == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("refinement stability: halving tolerances moves P less than its error bar") {
    DetectorSpec det;
    det.gap = 1.0;
    det.smearing = SmearingProfile::gaussian(0.05);
    det.switching = SwitchingProfile::gaussian(1.0);
    const FermiExpansion exp = FermiExpansion::flat(0.0, Vec3(0.1, 0, 0));
    const FlatChartMap map = FlatChartMap::accelerated(0.1);

    ResponseSettings coarse;
    coarse.n_theta = 10;
    coarse.n_phi = 2;
    coarse.radial_rel_tol = 1e-5;
    coarse.amp_rel_tol = 1e-6;
    ResponseSettings fine = coarse;
    fine.radial_rel_tol = 5e-7;
    fine.amp_rel_tol = 5e-8;

    const auto weight = build_weight(det, WeightKind::covariant, constant_family(exp));
    const auto p_coarse = excitation_probability(weight, map, {}, coarse);
    const auto p_fine = excitation_probability(weight, map, {}, fine);
    CHECK(std::abs(p_coarse.probability - p_fine.probability) <=
          p_coarse.integration_error + p_fine.integration_error);
}

TEST_CASE("probabilities are non-negative within integration error") {
    const auto det = pointlike_detector(3.0, 0.5);
    const auto weight = build_weight(det, WeightKind::noncovariant,
                                     constant_family(FermiExpansion::flat(0.0, Vec3::Zero())));
    ResponseSettings settings;
    settings.n_theta = 6;
    settings.n_phi = 1;
    const auto result = excitation_probability(weight, FlatChartMap::inertial(), {}, settings);
    CHECK(result.probability + result.integration_error >= 0.0);
}

TEST_CASE("massive field raises the threshold and lowers the response") {
    const auto det = pointlike_detector(1.0, 1.0);
    const auto weight = build_weight(det, WeightKind::noncovariant,
                                     constant_family(FermiExpansion::flat(0.0, Vec3::Zero())));
    ResponseSettings settings;
    settings.n_theta = 6;
    settings.n_phi = 1;
    const auto massless = excitation_probability(weight, FlatChartMap::inertial(), {}, settings);
    const auto massive =
        excitation_probability(weight, FlatChartMap::inertial(), {2.0}, settings);
    CHECK(massive.probability < massless.probability);
}
