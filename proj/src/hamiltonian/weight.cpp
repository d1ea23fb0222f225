#include "fermidet/hamiltonian/weight.hpp"

#include <cmath>

namespace fermidet::hamiltonian {

double reparam_factor(const kinematics::Worldline& w, const kinematics::ProperTimeMap& map,
                      double tau, int t_index) {
    const Vec4 u = kinematics::four_velocity(w, map, tau);
    if (!(u[t_index] > 0))
        throw ValidationError("reparam_factor: u^t <= 0 (bad time orientation)");
    return 1.0 / u[t_index];
}

double HamiltonianWeight::measure(double tau, const Vec3& xbar) const {
    const FermiExpansion exp = expansion(tau);
    const FermiPoint p{tau, xbar};
    return kind == WeightKind::covariant ? fermi::sqrt_det_full(exp, p)
                                         : fermi::sqrt_det_spatial(exp, p);
}

double HamiltonianWeight::density(double tau, const Vec3& xbar) const {
    const double chi = detector.switching(tau);
    if (chi == 0.0) return 0.0;
    const double f = detector.smearing(xbar);
    if (f == 0.0) return 0.0;
    return chi * f * measure(tau, xbar);
}

double measure_difference(const FermiExpansion& exp, const Vec3& xbar) {
    return exp.accel.dot(xbar) + 0.5 * xbar.dot(exp.r_titj * xbar);
}

HamiltonianWeight build_weight(const DetectorSpec& det, WeightKind kind, ExpansionFamily family,
                               double validity_factor, std::function<double(double)> reparam) {
    if (!family) throw ValidationError("build_weight: missing expansion family");

    // Check the support against the validity radius across the switching
    // support (sampled; coefficients vary smoothly).
    const double support = det.smearing.support_radius();
    const double lo = det.switching.support_lo();
    const double hi = det.switching.support_hi();
    for (int s = 0; s <= 8; ++s) {
        const double tau = lo + (hi - lo) * s / 8.0;
        const double validity = fermi::validity_radius(family(tau), validity_factor);
        if (support > validity)
            throw ValidationError(
                "build_weight: smearing support exceeds the Fermi validity radius at tau = " +
                std::to_string(tau));
    }

    HamiltonianWeight w;
    w.kind = kind;
    w.detector = det;
    w.expansion = std::move(family);
    w.reparam = std::move(reparam);
    w.validity_factor = validity_factor;
    return w;
}

ComparisonReport multipole_decomposition(const HamiltonianWeight& weight, double tau,
                                         const MultipoleOptions& opts) {
    const FermiExpansion exp = weight.expansion(tau);
    const double chi = weight.detector.switching(tau);

    detector::MomentOptions mopts;
    mopts.rel_tol = opts.rel_tol;
    mopts.abs_tol = opts.abs_tol;

    mopts.with_spatial_measure = true;
    const auto weighted = detector::smearing_moments(weight.detector, exp, mopts);
    mopts.with_spatial_measure = false;
    const auto euclidean = detector::smearing_moments(weight.detector, exp, mopts);

    ComparisonReport report;
    report.tau = tau;
    report.monopole_term = chi * weighted.monopole;
    report.dipole_term = chi * exp.accel.dot(euclidean.dipole);
    report.quadrupole_term = chi * 0.5 * (exp.r_titj.cwiseProduct(euclidean.quadrupole)).sum();
    if (report.monopole_term != 0.0)
        report.relative_correction =
            std::abs(report.dipole_term + report.quadrupole_term) / std::abs(report.monopole_term);
    report.reparam_factor = weight.reparam_at(tau);
    return report;
}

ComparisonReport hamiltonian_difference(const HamiltonianWeight& weight, double tau,
                                        const MultipoleOptions& opts) {
    ComparisonReport report = multipole_decomposition(weight, tau, opts);
    const double dtau_dt = report.reparam_factor;
    report.monopole_term *= dtau_dt;
    report.dipole_term *= dtau_dt;
    report.quadrupole_term *= dtau_dt;
    return report;
}

double remainder_envelope(const FermiExpansion& exp, double support_radius, double constant) {
    const double validity = fermi::validity_radius(exp, 1.0);  // min(1/|a|, curv radius)
    if (!std::isfinite(validity)) return 0.0;
    const double ratio = support_radius / validity;
    return constant * ratio * ratio * ratio;
}

}  // namespace fermidet::hamiltonian
