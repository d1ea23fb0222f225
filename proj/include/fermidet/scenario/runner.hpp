#pragma once

#include "fermidet/scenario/scenario.hpp"

#include "fermidet/detector/model.hpp"
#include "fermidet/hamiltonian/weight.hpp"
#include "fermidet/kinematics/families.hpp"
#include "fermidet/response/response.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <memory>
#include <string>

namespace fermidet::scenario {

/// Kinematic machinery assembled from a scenario: metric, worldline,
/// proper-time map, transported frame, and the expansion-coefficient
/// family (with any synthetic curvature injected).
struct FrameBundle {
    geometry::MetricField metric;
    kinematics::Worldline worldline;
    kinematics::ProperTimeMap map;
    std::shared_ptr<kinematics::TetradField> tetrads;
    bool stationary = false;
    hamiltonian::ExpansionFamily expansion;
};

/// Build the frame over proper times [tau_lo, tau_hi] (plus padding for
/// the differentiation stencils).
FrameBundle build_frame(const Scenario& sc, double tau_lo, double tau_hi);

/// Detector assembled from the scenario config.
detector::DetectorSpec build_detector(const Scenario& sc);

/// Flat chart map for response subcommands; throws ValidationError when
/// the scenario is not a flat inertial/uniformly-accelerated setup.
response::FlatChartMap build_flat_map(const Scenario& sc);

struct RunResult {
    std::filesystem::path directory;
    std::string manifest_json;
};

/// Execute one subcommand (frame | volume | oracle | moments | compare |
/// response | magnitudes), writing CSV/JSON outputs plus manifest.json
/// into out_dir (empty = runs/<timestamp>-<hash>/ under the current
/// directory).
RunResult run_subcommand(const std::string& name, const Scenario& sc,
                         std::filesystem::path out_dir = {});

}  // namespace fermidet::scenario
