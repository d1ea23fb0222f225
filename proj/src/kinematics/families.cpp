#include "fermidet/kinematics/families.hpp"

#include <cmath>

namespace fermidet::kinematics {

Worldline inertial(const MetricField& minkowski, double vx, const Interval& range) {
    if (std::abs(vx) >= 1.0) throw ValidationError("inertial: |v| must be < 1");
    Worldline w;
    w.metric = minkowski;
    w.coords = [vx](double lam) { return Vec4(lam, vx * lam, 0.0, 0.0); };
    w.velocity = [vx](double) { return Vec4(1.0, vx, 0.0, 0.0); };
    w.param_range = range;
    return w;
}

Worldline uniform_acceleration(const MetricField& minkowski, double accel, const Interval& range) {
    if (!(accel > 0)) throw ValidationError("uniform_acceleration: require a > 0");
    Worldline w;
    w.metric = minkowski;
    w.coords = [accel](double lam) {
        return Vec4(std::sinh(accel * lam) / accel, (std::cosh(accel * lam) - 1.0) / accel, 0.0,
                    0.0);
    };
    w.velocity = [accel](double lam) {
        return Vec4(std::cosh(accel * lam), std::sinh(accel * lam), 0.0, 0.0);
    };
    w.param_range = range;
    return w;
}

Worldline static_observer(const MetricField& metric, const Vec3& spatial, const Interval& range) {
    Worldline w;
    w.metric = metric;
    w.coords = [spatial](double lam) { return Vec4(lam, spatial[0], spatial[1], spatial[2]); };
    w.velocity = [](double) { return Vec4(1.0, 0.0, 0.0, 0.0); };
    w.param_range = range;
    return w;
}

Worldline circular(const MetricField& minkowski, double radius, double omega,
                   const Interval& range) {
    if (std::abs(radius * omega) >= 1.0)
        throw ValidationError("circular: orbital speed R*omega must be < 1");
    Worldline w;
    w.metric = minkowski;
    w.coords = [radius, omega](double lam) {
        return Vec4(lam, radius * std::cos(omega * lam), radius * std::sin(omega * lam), 0.0);
    };
    w.velocity = [radius, omega](double lam) {
        return Vec4(1.0, -radius * omega * std::sin(omega * lam),
                    radius * omega * std::cos(omega * lam), 0.0);
    };
    w.param_range = range;
    return w;
}

}  // namespace fermidet::kinematics
