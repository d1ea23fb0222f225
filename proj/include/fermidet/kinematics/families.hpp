#pragma once

#include "fermidet/kinematics/worldline.hpp"

namespace fermidet::kinematics {

/// Inertial motion in a Minkowski inertial chart: x(lambda) = (lambda, v*lambda, 0, 0).
Worldline inertial(const MetricField& minkowski, double vx, const Interval& range);

/// Uniformly accelerated worldline in a Minkowski inertial chart, shifted
/// so it passes through the origin at lambda = 0:
/// x(lambda) = (sinh(a lambda)/a, (cosh(a lambda) - 1)/a, 0, 0).
/// The parameter is proper time.
Worldline uniform_acceleration(const MetricField& minkowski, double accel, const Interval& range);

/// Static observer in a static chart: x(lambda) = (lambda, spatial).
Worldline static_observer(const MetricField& metric, const Vec3& spatial, const Interval& range);

/// Circular motion in a Minkowski inertial chart with orbit radius R and
/// coordinate angular velocity omega (speed R*omega < 1).
Worldline circular(const MetricField& minkowski, double radius, double omega,
                   const Interval& range);

}  // namespace fermidet::kinematics
