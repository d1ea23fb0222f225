#pragma once

#include "fermidet/geometry/curvature.hpp"
#include "fermidet/kinematics/worldline.hpp"

#include <array>

namespace fermidet::fermi {

using geometry::MetricField;
using kinematics::ProperTimeMap;
using kinematics::Tetrad;
using kinematics::Worldline;

/// Frame-component coefficients of the second-order metric expansion
/// around a worldline at one proper time: acceleration a_i and the
/// curvature blocks R_{tau i tau j}, R_{tau k i j}, R_{i k j l}.
struct FermiExpansion {
    FermiExpansion() {
        for (auto& m : r_tkij) m.setZero();
        r_ikjl.fill(0.0);
    }

    double tau = 0.0;
    Vec3 accel = Vec3::Zero();         // a_i, inverse length
    Mat3 r_titj = Mat3::Zero();        // R_{tau i tau j}, symmetric
    std::array<Mat3, 3> r_tkij;        // [k](i, j) = R_{tau k i j}
    std::array<double, 81> r_ikjl;     // flattened R_{i k j l}
    Tetrad base_tetrad;

    double spatial(int i, int k, int j, int l) const {
        return r_ikjl[((i * 3 + k) * 3 + j) * 3 + l];
    }
    double& spatial_at(int i, int k, int j, int l) {
        return r_ikjl[((i * 3 + k) * 3 + j) * 3 + l];
    }

    /// S_ij = sum_k R_{k i k j}, the trace entering the spatial determinant.
    Mat3 spatial_trace() const;

    /// Expansion with only an acceleration (flat spacetime).
    static FermiExpansion flat(double tau, const Vec3& accel);
};

/// A point of the Fermi chart: proper time and frame coordinates.
struct FermiPoint {
    double tau = 0.0;
    Vec3 xbar = Vec3::Zero();
    double r() const { return xbar.norm(); }
};

/// Assemble the expansion coefficients at z(tau) from the transported
/// tetrad: frame components of the proper acceleration and of the Riemann
/// tensor.
FermiExpansion expansion_coefficients(const Worldline& w, const ProperTimeMap& map,
                                      const Tetrad& tetrad, double tau);

/// Second-order metric components in Fermi normal coordinates:
///   g_tt = -(1 + 2 a.x + (a.x)^2 + R_{titj} x^i x^j)
///   g_ti = -(2/3) R_{tkij} x^k x^j
///   g_ij = delta_ij - (1/3) R_{ikjl} x^k x^l
Mat4 metric_second_order(const FermiExpansion& exp, const FermiPoint& p);

/// sqrt(det g_ij) truncated series: 1 - (1/6) S_ij x^i x^j.
double sqrt_det_spatial(const FermiExpansion& exp, const FermiPoint& p);

/// sqrt(-det g) truncated series:
/// 1 + a.x + (1/2)(R_{titj} - (1/3) S_ij) x^i x^j.
double sqrt_det_full(const FermiExpansion& exp, const FermiPoint& p);

/// Ratio sqrt(-g)/sqrt(g_Sigma) truncated series:
/// 1 + a.x + (1/2) R_{titj} x^i x^j.  This is the factor separating the
/// covariant and non-covariant interaction measures.
double sqrt_det_ratio(const FermiExpansion& exp, const FermiPoint& p);

/// Chart-validity radius at this expansion point:
/// factor * min(curvature radius, 1/|a|), infinite in flat inertial cases.
double validity_radius(const FermiExpansion& exp, double factor = 0.1);

}  // namespace fermidet::fermi
