#pragma once

#include "fermidet/hamiltonian/weight.hpp"

namespace fermidet::response {

using hamiltonian::ExpansionFamily;
using hamiltonian::HamiltonianWeight;
using hamiltonian::WeightKind;

/// Free scalar field on the Minkowski vacuum, plane-wave modes
/// u_k = e^{i(k.x - w t)} / sqrt((2 pi)^3 2 w), w = sqrt(k^2 + m^2).
struct FieldSpec {
    double mass = 0.0;  // inverse length
};

/// Exact Fermi chart map of a flat-spacetime trajectory, expressed in the
/// lab inertial chart: x(tau, xbar) = z(tau) + xbar^i e_i(tau).  Supported
/// families: inertial (boost along x) and uniform acceleration along x.
class FlatChartMap {
public:
    static FlatChartMap inertial(double v = 0.0);
    static FlatChartMap accelerated(double accel);

    bool is_linear() const { return accel_ == 0.0; }
    double accel() const { return accel_; }
    const Vec4& u() const { return u_; }
    const std::array<Vec4, 3>& legs() const { return legs_; }

    /// Lab-chart event of the Fermi point (tau, xbar).
    Vec4 event(double tau, const Vec3& xbar) const;

private:
    double accel_ = 0.0;
    Vec4 u_ = Vec4(1, 0, 0, 0);
    std::array<Vec4, 3> legs_{Vec4(0, 1, 0, 0), Vec4(0, 0, 1, 0), Vec4(0, 0, 0, 1)};
};

struct ResponseSettings {
    double radial_rel_tol = 1e-6;
    double radial_abs_tol = 1e-30;
    double amp_rel_tol = 1e-7;
    double amp_abs_tol = 1e-15;
    long amp_max_evals = 2000000;
    int n_theta = 16;  // Gauss-Legendre nodes in cos(theta), polar axis = x
    int n_phi = 8;     // uniform azimuthal nodes (any n is exact for axisymmetric weights)
    double k_max = 0.0;  // 0 = choose from the switching tail
    long radial_max_evals = 20000000;
};

/// First-order excitation amplitude A(k) of the weight against mode k.
/// Gaussian and pointlike profiles take reduced 1-D/2-D quadrature paths;
/// other profiles integrate the full defining integral.
Complex first_order_amplitude(const HamiltonianWeight& weight, const FlatChartMap& map,
                              const FieldSpec& field, const Vec3& k,
                              const ResponseSettings& settings = {});

struct ResponseResult {
    double probability = 0.0;
    double integration_error = 0.0;
    long evaluations = 0;
    bool converged = true;
    WeightKind prescription = WeightKind::noncovariant;
};

/// P = int d^3k |A(k)|^2 on an adaptive radial grid times a fixed closed
/// sphere rule.
ResponseResult excitation_probability(const HamiltonianWeight& weight, const FlatChartMap& map,
                                      const FieldSpec& field,
                                      const ResponseSettings& settings = {});

struct PrescriptionComparison {
    double p_covariant = 0.0;
    double p_noncovariant = 0.0;
    double delta = 0.0;        // P_cov - P_noncov, integrated directly
    double delta_error = 0.0;
    double probability_error = 0.0;
    long evaluations = 0;
    bool converged = true;
    bool inconclusive = false;  // |delta| below its error bar
};

/// Both prescriptions on one shared quadrature grid.  The difference is
/// integrated as its own component (never by subtracting two near-equal
/// probabilities), so its relative accuracy matches the integrand's.
PrescriptionComparison compare_prescriptions(const detector::DetectorSpec& det,
                                             const ExpansionFamily& family,
                                             const FlatChartMap& map, const FieldSpec& field,
                                             const ResponseSettings& settings = {});

}  // namespace fermidet::response
