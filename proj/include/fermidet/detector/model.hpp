#pragma once

#include "fermidet/detector/profiles.hpp"
#include "fermidet/fermi/expansion.hpp"
#include "fermidet/numerics/quadrature.hpp"

#include <functional>

namespace fermidet::detector {

using fermi::FermiExpansion;

/// Two-level detector parameters.  Basis ordering is {excited, ground}:
/// index 0 = excited, index 1 = ground.
struct DetectorSpec {
    double gap = 1.0;        // Omega, inverse length
    double coupling = 1.0;   // lambda
    SmearingProfile smearing = SmearingProfile::pointlike();
    SwitchingProfile switching = SwitchingProfile::gaussian(1.0);
};

/// 2x2 operator on the detector Hilbert space, {e, g} ordering.
struct TwoLevelOperator {
    Mat2c matrix = Mat2c::Zero();

    bool is_hermitian(double tol = 1e-12) const {
        return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() < tol;
    }
};

TwoLevelOperator sigma_plus();   // |e><g|
TwoLevelOperator sigma_minus();  // |g><e|

/// Free Hamiltonian Omega sigma+ sigma- = Omega diag(1, 0).
TwoLevelOperator free_hamiltonian(const DetectorSpec& spec);

/// Interaction-picture monopole operator
/// mu(tau) = e^{i Omega tau} sigma+ + e^{-i Omega tau} sigma-.
TwoLevelOperator monopole(const DetectorSpec& spec, double tau);

/// Factorized spacetime smearing Lambda(tau, xbar) = chi(tau) f(xbar),
/// identically zero outside the compact support box.
std::function<double(double, const Vec3&)> spacetime_smearing(const DetectorSpec& spec);

/// Multipole moments of the smearing against a spatial measure on a sheaf.
struct SmearingMoments {
    double monopole = 1.0;            // M^0
    Vec3 dipole = Vec3::Zero();       // M^i
    Mat3 quadrupole = Mat3::Zero();   // M^ij, symmetric
    double quadrature_error = 0.0;
};

struct MomentOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    /// Weigh the moments with the truncated sqrt(det g_ij) series of the
    /// expansion.  With false the spatial measure is Euclidean, the
    /// consistent choice for the dipole/quadrupole correction terms.
    bool with_spatial_measure = true;
};

/// M^0 = int f w, M^i = int xbar^i f w, M^ij = int xbar^i xbar^j f w over
/// the sheaf, with w the selected spatial measure.  Throws ValidationError
/// when the profile support exceeds the expansion's validity radius.
SmearingMoments smearing_moments(const DetectorSpec& spec, const FermiExpansion& exp,
                                 const MomentOptions& opts = {});

}  // namespace fermidet::detector
