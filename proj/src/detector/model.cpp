#include "fermidet/detector/model.hpp"

#include <cmath>

namespace fermidet::detector {

TwoLevelOperator sigma_plus() {
    TwoLevelOperator op;
    op.matrix(0, 1) = 1.0;
    return op;
}

TwoLevelOperator sigma_minus() {
    TwoLevelOperator op;
    op.matrix(1, 0) = 1.0;
    return op;
}

TwoLevelOperator free_hamiltonian(const DetectorSpec& spec) {
    if (!(spec.gap > 0)) throw ValidationError("free_hamiltonian: require Omega > 0");
    TwoLevelOperator op;
    op.matrix(0, 0) = spec.gap;
    return op;
}

TwoLevelOperator monopole(const DetectorSpec& spec, double tau) {
    const Complex phase = std::exp(Complex(0.0, spec.gap * tau));
    TwoLevelOperator op;
    op.matrix(0, 1) = phase;
    op.matrix(1, 0) = std::conj(phase);
    return op;
}

std::function<double(double, const Vec3&)> spacetime_smearing(const DetectorSpec& spec) {
    return [smearing = spec.smearing, switching = spec.switching](double tau, const Vec3& xbar) {
        const double chi = switching(tau);
        if (chi == 0.0) return 0.0;
        return chi * smearing(xbar);
    };
}

namespace {

using numerics::Box;
using numerics::QuadOptions;
using numerics::QuadResult;

// Integrand components: [f, x f (3), xx f (6: 00,11,22,01,02,12)] * w.
template <class Density>
VecN<10> moment_integrand(const Vec3& x, double density, Density&& measure) {
    VecN<10> v;
    const double fw = density * measure(x);
    v[0] = fw;
    v[1] = x[0] * fw;
    v[2] = x[1] * fw;
    v[3] = x[2] * fw;
    v[4] = x[0] * x[0] * fw;
    v[5] = x[1] * x[1] * fw;
    v[6] = x[2] * x[2] * fw;
    v[7] = x[0] * x[1] * fw;
    v[8] = x[0] * x[2] * fw;
    v[9] = x[1] * x[2] * fw;
    return v;
}

SmearingMoments from_vector(const QuadResult<10>& q) {
    SmearingMoments m;
    m.monopole = q.value[0];
    m.dipole = Vec3(q.value[1], q.value[2], q.value[3]);
    m.quadrupole(0, 0) = q.value[4];
    m.quadrupole(1, 1) = q.value[5];
    m.quadrupole(2, 2) = q.value[6];
    m.quadrupole(0, 1) = m.quadrupole(1, 0) = q.value[7];
    m.quadrupole(0, 2) = m.quadrupole(2, 0) = q.value[8];
    m.quadrupole(1, 2) = m.quadrupole(2, 1) = q.value[9];
    m.quadrature_error = q.error_estimate.maxCoeff();
    if (!q.converged) throw NumericalError("smearing_moments: quadrature did not converge");
    return m;
}

}  // namespace

SmearingMoments smearing_moments(const DetectorSpec& spec, const FermiExpansion& exp,
                                 const MomentOptions& opts) {
    const double support = spec.smearing.support_radius();
    const double validity = fermi::validity_radius(exp);
    if (support > validity)
        throw ValidationError("smearing_moments: profile support exceeds Fermi validity radius");

    const auto measure = [&](const Vec3& x) {
        if (!opts.with_spatial_measure) return 1.0;
        return fermi::sqrt_det_spatial(exp, fermi::FermiPoint{exp.tau, x});
    };

    QuadOptions qopts{opts.rel_tol, opts.abs_tol, 50000000};

    switch (spec.smearing.kind()) {
        case SmearingProfile::Kind::pointlike: {
            SmearingMoments m;  // delta at the origin: measure there is 1
            return m;
        }
        case SmearingProfile::Kind::gaussian:
        case SmearingProfile::Kind::gaussian_shifted: {
            const double cut = SmearingProfile::gaussian_cut * spec.smearing.characteristic_size();
            const Vec3 c = spec.smearing.center();
            Eigen::VectorXd lo(3), hi(3);
            for (int i = 0; i < 3; ++i) {
                lo[i] = c[i] - cut;
                hi[i] = c[i] + cut;
            }
            auto f = [&](const Eigen::VectorXd& q) {
                const Vec3 x(q[0], q[1], q[2]);
                return moment_integrand(x, spec.smearing(x), measure);
            };
            return from_vector(numerics::quad_adaptive_vec<10>(f, Box::cube(lo, hi), qopts));
        }
        case SmearingProfile::Kind::hard_sphere: {
            // Spherical coordinates keep the integrand smooth: (r, cos
            // theta, phi) over the ball.
            const double radius = spec.smearing.characteristic_size();
            const double density = 3.0 / (4.0 * M_PI * radius * radius * radius);
            Eigen::VectorXd lo(3), hi(3);
            lo << 0.0, -1.0, 0.0;
            hi << radius, 1.0, 2.0 * M_PI;
            auto f = [&](const Eigen::VectorXd& q) {
                const double r = q[0], ct = q[1], phi = q[2];
                const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
                const Vec3 x(r * st * std::cos(phi), r * st * std::sin(phi), r * ct);
                return moment_integrand(x, density * r * r, measure);
            };
            return from_vector(numerics::quad_adaptive_vec<10>(f, Box::cube(lo, hi), qopts));
        }
    }
    throw ValidationError("smearing_moments: unknown profile kind");
}

}  // namespace fermidet::detector
