#pragma once

#include "fermidet/detector/model.hpp"
#include "fermidet/fermi/expansion.hpp"

#include <functional>

namespace fermidet::hamiltonian {

using detector::DetectorSpec;
using fermi::FermiExpansion;
using fermi::FermiPoint;

/// Expansion coefficients as a function of proper time.  Real frames come
/// from `frame_expansion_family`; synthetic coefficient sets (for measure
/// studies on flat backgrounds) can be injected directly.
using ExpansionFamily = std::function<FermiExpansion(double tau)>;

enum class WeightKind { covariant, noncovariant };

/// dtau/dt = 1/u^t on the centre-of-mass worldline, with t the chart time
/// coordinate `t_index`.
double reparam_factor(const kinematics::Worldline& w, const kinematics::ProperTimeMap& map,
                      double tau, int t_index = 0);

/// The c-number weight multiplying lambda mu(tau) phi(xbar) in the
/// interaction Hamiltonian density:
///   covariant:     chi(tau) f(xbar) sqrt(-g)(tau, xbar)
///   noncovariant:  chi(tau) f(xbar) sqrt(g_Sigma)(tau, xbar)
/// with the truncated second-order determinant series.
struct HamiltonianWeight {
    WeightKind kind = WeightKind::noncovariant;
    DetectorSpec detector;
    ExpansionFamily expansion;
    std::function<double(double)> reparam;  // dtau/dt at tau; 1 when absent
    double validity_factor = 0.1;

    double measure(double tau, const Vec3& xbar) const;
    double density(double tau, const Vec3& xbar) const;  // Lambda * measure
    double reparam_at(double tau) const { return reparam ? reparam(tau) : 1.0; }
};

/// Difference of the two measures at one sheaf point,
/// a_i x^i + (1/2) R_{titj} x^i x^j (exact for the truncated series).
double measure_difference(const FermiExpansion& exp, const Vec3& xbar);

/// Validate the support against the expansion validity radius over the
/// switching support and assemble the weight.
HamiltonianWeight build_weight(const DetectorSpec& det, WeightKind kind, ExpansionFamily family,
                               double validity_factor = 0.1,
                               std::function<double(double)> reparam = nullptr);

/// One row of the covariant-vs-noncovariant comparison at fixed tau.
/// All entries are c-number coefficients of the common operator kernel
/// lambda mu(tau) phi.
struct ComparisonReport {
    double tau = 0.0;
    double monopole_term = 0.0;       // chi M^0
    double dipole_term = 0.0;         // chi a_i M^i
    double quadrupole_term = 0.0;     // chi (1/2) R_{titj} M^ij
    double relative_correction = 0.0; // |dipole + quadrupole| / |monopole|
    double reparam_factor = 1.0;      // dtau/dt
};

struct MultipoleOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-13;
};

/// Decompose the weight at tau into monopole/dipole/quadrupole terms.
/// The monopole carries the sqrt(g_Sigma) measure; the correction moments
/// use the Euclidean measure, consistent with the truncation order.
ComparisonReport multipole_decomposition(const HamiltonianWeight& weight, double tau,
                                         const MultipoleOptions& opts = {});

/// Same decomposition normalized to the lab (t) frame: every term picks up
/// the factor dtau/dt.
ComparisonReport hamiltonian_difference(const HamiltonianWeight& weight, double tau,
                                        const MultipoleOptions& opts = {});

/// Configurable bound on the neglected O(r^3) remainder over the support:
/// envelope = C (r_support / l)^3 with l = min(1/|a|, curvature radius).
double remainder_envelope(const FermiExpansion& exp, double support_radius, double constant = 1.0);

}  // namespace fermidet::hamiltonian
