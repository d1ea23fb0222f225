#pragma once

#include "fermidet/fermi/expansion.hpp"
#include "fermidet/numerics/ode.hpp"

namespace fermidet::fermi {

using kinematics::TetradField;

struct ExponentialMapResult {
    Vec4 point = Vec4::Zero();
    numerics::OdeSolution geodesic;  // dense solution of (x, dx/dlambda), affine [0, 1]
};

/// Exponentiate the spatial vector xbar^i e_i(tau) from the tetrad's base
/// point: the spacelike geodesic with that initial tangent, affine
/// parameter in [0, 1].  The mapped point lies at geodesic distance |xbar|.
ExponentialMapResult exponential_map(const MetricField& metric, const Tetrad& tetrad,
                                     const Vec3& xbar, double rel_tol = 1e-12,
                                     double abs_tol = 1e-13);

struct NumericChartOptions {
    double tau_step = 1e-4;    // central-difference step for the tau direction
    double xbar_step = 5e-3;   // 4-point stencil step for the spatial directions
    int geodesic_steps = 64;   // fixed RK4 subdivisions of the affine interval
};

struct NumericChartResult {
    Mat4 metric = Mat4::Zero();       // chart components at p
    double sqrt_det_full = 0.0;       // sqrt(-det g)
    double sqrt_det_spatial = 0.0;    // sqrt(det g_ij)
    double jacobian_det = 0.0;        // det of the spatial pushforward; ~0 flags a caustic
};

/// Numerically built Fermi-chart metric at p: pushes the chart basis
/// vectors through the exponential map by finite differences and contracts
/// with the ambient metric at the mapped point.  Test-time oracle for the
/// second-order expansion; the geodesics inside the stencil are integrated
/// in displacement form on a fixed grid so that differences of neighbouring
/// solves stay well conditioned at small r.
NumericChartResult numeric_fermi_metric(const MetricField& metric, const TetradField& frames,
                                        const FermiPoint& p,
                                        const NumericChartOptions& opts = {});

}  // namespace fermidet::fermi
