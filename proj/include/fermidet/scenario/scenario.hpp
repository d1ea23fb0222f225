#pragma once

#include "fermidet/geometry/catalog.hpp"
#include "fermidet/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fermidet::scenario {

/// Trajectory selection: one of the catalog families with its parameters
/// (geometric units after parsing).
struct TrajectorySpec {
    std::string family = "inertial";  // inertial | uniform-acceleration |
                                      // static-observer | circular
    double v = 0.0;
    double a = 1.0;
    double r = 10.0;
    double theta = 1.5707963267948966;
    double phi = 0.0;
    double radius = 10.0;
    double omega = 0.05;
};

struct DetectorConfig {
    double gap = 1.0;        // Omega [1/m]
    double coupling = 1.0;   // lambda
    std::string smearing = "gaussian";  // pointlike | gaussian | gaussian-shifted | hard-sphere
    double size = 0.01;      // sigma or R [m]
    Vec3 shift = Vec3::Zero();
    std::string switching = "gaussian";  // gaussian | cosine-bump | top-hat-smoothed
    double width = 1.0;      // T [m]
    double ramp = 0.1;       // top-hat ramp [m]
    double center = 0.0;     // tau_0 [m]
};

struct RunSettings {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double tau = 0.0;
    double tau_min = 0.0;
    double tau_max = 0.0;
    int tau_samples = 1;
    double r_min = 1e-3;
    double r_max = 1e-1;
    int r_samples = 12;
    Vec3 direction = Vec3(1, 0, 0);
    int n_theta = 16;
    int n_phi = 8;
    double k_max = 0.0;
    double validity_factor = 0.1;
    std::string prescription = "both";  // covariant | noncovariant | both
    std::vector<double> sweep_sizes;
    double field_mass = 0.0;
    double synthetic_curvature = 0.0;  // kappa injected into R_{titj} [1/m^2]
    double size_si = 1e-10;            // detector size for magnitude estimates [m]
    double orbit_radius_si = 4243.0;   // collider-ring radius for magnitude estimates [m]
    bool emit_plot = true;
};

struct Scenario {
    geometry::SpacetimeId spacetime{"minkowski-inertial", {}};
    TrajectorySpec trajectory;
    DetectorConfig detector;
    RunSettings run;
    long seed = 0;

    bool operator==(const Scenario& other) const;
};

/// Parse a scenario file (sectioned key = value text, SI units accepted and
/// converted to geometric on the spot).  Errors carry file/line context.
Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(const std::string& text, const std::string& origin = "<string>");

/// Canonical text form; parse(serialize(s)) == s.
std::string serialize(const Scenario& s);

/// FNV-1a 64-bit hash of a byte string, hex-encoded (manifest checksums).
std::string fnv1a_hex(const std::string& bytes);

}  // namespace fermidet::scenario
