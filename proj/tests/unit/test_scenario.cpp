#include "fermidet/scenario/runner.hpp"
#include "fermidet/scenario/scenario.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace fermidet;
using namespace fermidet::scenario;

namespace {

std::string minimal_scenario = R"([spacetime]
name = minkowski-inertial

[trajectory]
family = inertial
v = 0

[detector]
gap = 1.0
smearing = gaussian
size = 0.05
)";

std::filesystem::path temp_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() / ("fermidet-test-" + tag);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("minimal scenario parses with defaults filled") {
    const Scenario sc = parse_scenario_text(minimal_scenario);
    CHECK(sc.spacetime.name == "minkowski-inertial");
    CHECK(sc.detector.gap == 1.0);
    CHECK(sc.detector.switching == "gaussian");  // default
    CHECK(sc.run.rel_tol == 1e-9);               // default
    CHECK(sc.seed == 0);
}

TEST_CASE("unit conversions") {
    SUBCASE("acceleration in m/s^2") {
        const Scenario sc = parse_scenario_text("[trajectory]\nfamily = uniform-acceleration\n"
                                                "a = 9.8 m/s^2\n");
        CHECK(sc.trajectory.a == doctest::Approx(9.8 / constants::c_si_sq).epsilon(1e-12));
        CHECK(sc.trajectory.a == doctest::Approx(1.09e-16).epsilon(1e-2));
    }
    SUBCASE("mass in solar masses") {
        const Scenario sc =
            parse_scenario_text("[spacetime]\nname = schwarzschild\nM = 1 Msun\n");
        CHECK(sc.spacetime.params.at("M") == doctest::Approx(1476.62504));
    }
    SUBCASE("switching width in seconds") {
        const Scenario sc = parse_scenario_text("[detector]\ngap = 1\nwidth = 1e-9 s\n");
        CHECK(sc.detector.width == doctest::Approx(1e-9 * constants::c_si));
    }
    SUBCASE("gap in rad/s") {
        const Scenario sc = parse_scenario_text("[detector]\ngap = 3e8 rad/s\n");
        CHECK(sc.detector.gap == doctest::Approx(3e8 / constants::c_si));
    }
    SUBCASE("bad unit for the field errors out") {
        CHECK_THROWS_AS(parse_scenario_text("[detector]\ngap = 1 m\n"), ValidationError);
    }
}

TEST_CASE("diagnostics carry line numbers and field names") {
    try {
        parse_scenario_text("[detector]\nsmearing = gaussian\n", "case.scn");
        FAIL("expected an error about the missing gap");
    } catch (const ValidationError& err) {
        const std::string what = err.what();
        CHECK(what.find("gap") != std::string::npos);
    }

    try {
        parse_scenario_text("[spacetime]\nname = minkowski-inertial\nbogus = 3\n", "case.scn");
        FAIL("expected an unknown-key error");
    } catch (const ValidationError& err) {
        const std::string what = err.what();
        CHECK(what.find("case.scn:3") != std::string::npos);
        CHECK(what.find("bogus") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_scenario_text("[run]\nrel_tol = -1\n"), ValidationError);
    CHECK_THROWS_AS(parse_scenario_text("key_outside = 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_scenario_text("[trajectory]\nfamily = warp-drive\n"), ValidationError);
}

TEST_CASE("serialize/parse round trip") {
    Scenario sc = parse_scenario_text(minimal_scenario);
    sc.run.sweep_sizes = {0.001, 0.01, 0.1};
    sc.run.direction = Vec3(0.3, 0.4, 1.0);
    sc.trajectory.a = 0.123456789012345;
    sc.seed = 42;
    const Scenario back = parse_scenario_text(serialize(sc));
    CHECK(back == sc);
    CHECK(serialize(back) == serialize(sc));
}

TEST_CASE("fnv hash is deterministic and content sensitive") {
    CHECK(fnv1a_hex("abc") == fnv1a_hex("abc"));
    CHECK(fnv1a_hex("abc") != fnv1a_hex("abd"));
}

TEST_CASE("magnitudes subcommand writes outputs and a manifest") {
    const Scenario sc = parse_scenario_text(minimal_scenario);
    const auto dir = temp_dir("magnitudes");
    const auto result = run_subcommand("magnitudes", sc, dir);
    CHECK(std::filesystem::exists(dir / "manifest.json"));
    CHECK(std::filesystem::exists(dir / "magnitudes.csv"));
    CHECK(std::filesystem::exists(dir / "summary.json"));
    const std::string summary = slurp(dir / "summary.json");
    CHECK(summary.find("dipole_threshold_acceleration_g") != std::string::npos);
    const std::string csv = slurp(dir / "magnitudes.csv");
    CHECK(csv.find("quantity") != std::string::npos);  // header row present
    std::filesystem::remove_all(dir);
}

TEST_CASE("deterministic subcommands reproduce byte-identical outputs") {
    const Scenario sc = parse_scenario_text(minimal_scenario);
    const auto dir1 = temp_dir("repro1");
    const auto dir2 = temp_dir("repro2");
    run_subcommand("magnitudes", sc, dir1);
    run_subcommand("magnitudes", sc, dir2);
    CHECK(slurp(dir1 / "magnitudes.csv") == slurp(dir2 / "magnitudes.csv"));
    CHECK(slurp(dir1 / "summary.json") == slurp(dir2 / "summary.json"));
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("frame subcommand runs on a catalog scenario") {
    Scenario sc = parse_scenario_text(minimal_scenario);
    sc.trajectory.family = "uniform-acceleration";
    sc.trajectory.a = 0.5;
    sc.run.tau_min = 0.0;
    sc.run.tau_max = 3.0;
    sc.run.tau_samples = 7;
    const auto dir = temp_dir("frame");
    run_subcommand("frame", sc, dir);
    const std::string csv = slurp(dir / "frame.csv");
    CHECK(csv.find("gram_dev [1]") != std::string::npos);
    // header plus 7 sample rows
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);
    std::filesystem::remove_all(dir);
}

TEST_CASE("unknown subcommand is rejected") {
    const Scenario sc = parse_scenario_text(minimal_scenario);
    CHECK_THROWS_AS(run_subcommand("bogus", sc, temp_dir("bogus")), ValidationError);
}
