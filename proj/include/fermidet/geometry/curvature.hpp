#pragma once

#include "fermidet/geometry/metric_field.hpp"

#include <array>

namespace fermidet::geometry {

/// Christoffel symbols of the Levi-Civita connection, Gamma[mu](nu, rho)
/// = Gamma^mu_{nu rho}, symmetric in (nu, rho).
std::array<Mat4, 4> christoffel(const MetricField& metric, const Vec4& x);

/// Fully lowered Riemann tensor at one point, coordinate basis.
/// Convention: R^mu_{nu rho sigma} = d_rho Gamma^mu_{nu sigma}
///                                 - d_sigma Gamma^mu_{nu rho}
///                                 + Gamma^mu_{rho lam} Gamma^lam_{nu sigma}
///                                 - Gamma^mu_{sigma lam} Gamma^lam_{nu rho},
/// lowered with g_{mu lam}.
class CurvatureAtPoint {
public:
    CurvatureAtPoint() { components_.fill(0.0); }

    double operator()(int mu, int nu, int rho, int sigma) const {
        return components_[index(mu, nu, rho, sigma)];
    }
    double& at(int mu, int nu, int rho, int sigma) {
        return components_[index(mu, nu, rho, sigma)];
    }

    const Vec4& point() const { return point_; }
    void set_point(const Vec4& x) { point_ = x; }

    /// Ricci tensor R_{nu sigma} = g^{mu rho} R_{mu nu rho sigma}.
    Mat4 ricci(const Mat4& g_inverse) const;

    /// Kretschmann scalar R_{abcd} R^{abcd}.
    double kretschmann(const Mat4& g_inverse) const;

    /// Largest violation of the index symmetries (antisymmetry in both
    /// pairs, pair exchange, first Bianchi).
    double symmetry_residual() const;

private:
    static int index(int mu, int nu, int rho, int sigma) {
        return ((mu * 4 + nu) * 4 + rho) * 4 + sigma;
    }
    std::array<double, 256> components_;
    Vec4 point_ = Vec4::Zero();
};

/// Riemann tensor from second derivatives of the metric.  Christoffel
/// symbols are differentiated by central differences with per-coordinate
/// steps; with analytic metric derivatives this is accurate to ~1e-10.
CurvatureAtPoint riemann_at(const MetricField& metric, const Vec4& x);

/// Curvature components in an orthonormal frame {E_0 = u, E_1..E_3}:
/// R_{abcd} = R_{mu nu rho sigma} E_a^mu E_b^nu E_c^rho E_d^sigma.
class FrameCurvature {
public:
    FrameCurvature() { components_.fill(0.0); }

    double operator()(int a, int b, int c, int d) const {
        return components_[((a * 4 + b) * 4 + c) * 4 + d];
    }
    double& at(int a, int b, int c, int d) { return components_[((a * 4 + b) * 4 + c) * 4 + d]; }

    /// R_{tau i tau j} block as a 3x3 matrix (i, j = 1..3 mapped to 0..2).
    Mat3 electric_block() const;

    double max_abs() const;

private:
    std::array<double, 256> components_;
};

/// Project coordinate-basis curvature onto an orthonormal tetrad given as
/// columns {u, e1, e2, e3}.  Throws ValidationError if the tetrad fails
/// orthonormality beyond `tol`.
FrameCurvature frame_components(const CurvatureAtPoint& curv, const Mat4& g_at_point,
                                const std::array<Vec4, 4>& legs, double tol = 1e-8);

}  // namespace fermidet::geometry
