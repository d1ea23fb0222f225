#pragma once

#include "fermidet/types.hpp"

namespace fermidet::hamiltonian {

/// Dimensionless dipole-term scale a L / c^2 for an SI acceleration and a
/// detector size in meters.
double dipole_scale(double accel_si, double size_m);

/// Dimensionless quadrupole-term scale (L / l_curv)^2.
double quadrupole_scale(double size_m, double curvature_radius_m);

/// Acceleration (m/s^2) at which the dipole scale reaches 1: c^2 / L.
double threshold_acceleration_si(double size_m);

/// Same threshold in units of Earth surface gravity.
double threshold_acceleration_g(double size_m);

/// Centripetal acceleration of an ultrarelativistic circular orbit of the
/// given radius: c^2 / R, in m/s^2.
double circular_orbit_acceleration_si(double orbit_radius_m);

/// Operational curvature radius on the Schwarzschild horizon: the largest
/// frame curvature component there is 2M/r^3 |_{r=2M}, giving radius 2M.
double horizon_curvature_radius_m(double mass_geometric_m);

}  // namespace fermidet::hamiltonian
