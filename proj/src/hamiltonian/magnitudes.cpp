#include "fermidet/hamiltonian/magnitudes.hpp"

namespace fermidet::hamiltonian {

namespace {
void require_positive(double v, const char* what) {
    if (!(v > 0)) throw ValidationError(std::string("magnitudes: require positive ") + what);
}
}  // namespace

double dipole_scale(double accel_si, double size_m) {
    require_positive(accel_si, "acceleration");
    require_positive(size_m, "size");
    return accel_si * size_m / constants::c_si_sq;
}

double quadrupole_scale(double size_m, double curvature_radius_m) {
    require_positive(size_m, "size");
    require_positive(curvature_radius_m, "curvature radius");
    const double ratio = size_m / curvature_radius_m;
    return ratio * ratio;
}

double threshold_acceleration_si(double size_m) {
    require_positive(size_m, "size");
    return constants::c_si_sq / size_m;
}

double threshold_acceleration_g(double size_m) {
    return threshold_acceleration_si(size_m) / constants::g_earth_si;
}

double circular_orbit_acceleration_si(double orbit_radius_m) {
    require_positive(orbit_radius_m, "orbit radius");
    return constants::c_si_sq / orbit_radius_m;
}

double horizon_curvature_radius_m(double mass_geometric_m) {
    require_positive(mass_geometric_m, "mass");
    return 2.0 * mass_geometric_m;
}

}  // namespace fermidet::hamiltonian
