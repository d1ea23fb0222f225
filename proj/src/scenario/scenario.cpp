#include "fermidet/scenario/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace fermidet::scenario {

namespace {

enum class Dimension {
    length,          // m, km, Msun; bare = m
    time,            // s (-> m via c), m; bare = m of proper time
    inverse_length,  // 1/m, 1/s, rad/s; bare = 1/m
    inverse_length_sq,
    acceleration,    // 1/m, m/s^2, g0; bare = 1/m
    velocity,        // fraction of c; m/s accepted
    dimensionless,
    si_length,  // stays in SI meters
};

struct ParseCursor {
    std::string origin;
    int line = 0;
};

[[noreturn]] void fail(const ParseCursor& at, const std::string& message) {
    throw ValidationError(at.origin + ":" + std::to_string(at.line) + ": " + message);
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& token, const ParseCursor& at) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) fail(at, "trailing characters in number '" + token + "'");
        return v;
    } catch (const std::exception&) {
        fail(at, "expected a number, got '" + token + "'");
    }
}

double convert(double value, const std::string& unit, Dimension dim, const ParseCursor& at) {
    using namespace constants;
    switch (dim) {
        case Dimension::length:
            if (unit.empty() || unit == "m") return value;
            if (unit == "km") return value * 1e3;
            if (unit == "Msun") return value * sun_mass_geometric;
            break;
        case Dimension::time:
            if (unit.empty() || unit == "m") return value;
            if (unit == "s") return value * c_si;
            break;
        case Dimension::inverse_length:
            if (unit.empty() || unit == "1/m") return value;
            if (unit == "1/s" || unit == "rad/s") return value / c_si;
            break;
        case Dimension::inverse_length_sq:
            if (unit.empty() || unit == "1/m^2") return value;
            break;
        case Dimension::acceleration:
            if (unit.empty() || unit == "1/m") return value;
            if (unit == "m/s^2") return value / c_si_sq;
            if (unit == "g0") return value * g_earth_si / c_si_sq;
            break;
        case Dimension::velocity:
            if (unit.empty() || unit == "c") return value;
            if (unit == "m/s") return value / c_si;
            break;
        case Dimension::dimensionless:
            if (unit.empty()) return value;
            break;
        case Dimension::si_length:
            if (unit.empty() || unit == "m") return value;
            break;
    }
    fail(at, "unit '" + unit + "' not valid for this field");
}

double parse_quantity(const std::string& value, Dimension dim, const ParseCursor& at) {
    std::istringstream in(value);
    std::string number, unit, extra;
    in >> number >> unit >> extra;
    if (number.empty()) fail(at, "empty value");
    if (!extra.empty()) fail(at, "unexpected trailing token '" + extra + "'");
    return convert(to_double(number, at), unit, dim, at);
}

std::vector<double> parse_list(const std::string& value, const ParseCursor& at) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(at, "empty element in list");
        out.push_back(to_double(item, at));
    }
    if (out.empty()) fail(at, "empty list");
    return out;
}

Vec3 parse_vec3(const std::string& value, const ParseCursor& at) {
    const auto items = parse_list(value, at);
    if (items.size() != 3) fail(at, "expected 3 comma-separated components");
    return Vec3(items[0], items[1], items[2]);
}

int parse_int(const std::string& value, const ParseCursor& at) {
    const double v = to_double(trim(value), at);
    if (v != std::floor(v)) fail(at, "expected an integer");
    return static_cast<int>(v);
}

bool parse_bool(const std::string& value, const ParseCursor& at) {
    const std::string v = trim(value);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(at, "expected true/false");
}

struct Assembler {
    Scenario s;
    bool saw_detector_section = false;
    bool saw_gap = false;

    void apply(const std::string& section, const std::string& key, const std::string& value,
               const ParseCursor& at) {
        if (section == "spacetime") {
            if (key == "name") {
                s.spacetime.name = value;
            } else if (key == "M") {
                s.spacetime.params["M"] = parse_quantity(value, Dimension::length, at);
            } else if (key == "H") {
                s.spacetime.params["H"] = parse_quantity(value, Dimension::inverse_length, at);
            } else if (key == "a") {
                s.spacetime.params["a"] = parse_quantity(value, Dimension::acceleration, at);
            } else {
                fail(at, "unknown spacetime key '" + key + "'");
            }
            return;
        }
        if (section == "trajectory") {
            auto& t = s.trajectory;
            if (key == "family") t.family = value;
            else if (key == "v") t.v = parse_quantity(value, Dimension::velocity, at);
            else if (key == "a") t.a = parse_quantity(value, Dimension::acceleration, at);
            else if (key == "r") t.r = parse_quantity(value, Dimension::length, at);
            else if (key == "theta") t.theta = parse_quantity(value, Dimension::dimensionless, at);
            else if (key == "phi") t.phi = parse_quantity(value, Dimension::dimensionless, at);
            else if (key == "radius") t.radius = parse_quantity(value, Dimension::length, at);
            else if (key == "omega") t.omega = parse_quantity(value, Dimension::inverse_length, at);
            else fail(at, "unknown trajectory key '" + key + "'");
            return;
        }
        if (section == "detector") {
            saw_detector_section = true;
            auto& d = s.detector;
            if (key == "gap") {
                d.gap = parse_quantity(value, Dimension::inverse_length, at);
                saw_gap = true;
            } else if (key == "coupling") d.coupling = parse_quantity(value, Dimension::dimensionless, at);
            else if (key == "smearing") d.smearing = value;
            else if (key == "size") d.size = parse_quantity(value, Dimension::length, at);
            else if (key == "shift") d.shift = parse_vec3(value, at);
            else if (key == "switching") d.switching = value;
            else if (key == "width") d.width = parse_quantity(value, Dimension::time, at);
            else if (key == "ramp") d.ramp = parse_quantity(value, Dimension::time, at);
            else if (key == "center") d.center = parse_quantity(value, Dimension::time, at);
            else fail(at, "unknown detector key '" + key + "'");
            return;
        }
        if (section == "run") {
            auto& r = s.run;
            if (key == "rel_tol") r.rel_tol = parse_quantity(value, Dimension::dimensionless, at);
            else if (key == "abs_tol") r.abs_tol = parse_quantity(value, Dimension::dimensionless, at);
            else if (key == "tau") r.tau = parse_quantity(value, Dimension::time, at);
            else if (key == "tau_min") r.tau_min = parse_quantity(value, Dimension::time, at);
            else if (key == "tau_max") r.tau_max = parse_quantity(value, Dimension::time, at);
            else if (key == "tau_samples") r.tau_samples = parse_int(value, at);
            else if (key == "r_min") r.r_min = parse_quantity(value, Dimension::length, at);
            else if (key == "r_max") r.r_max = parse_quantity(value, Dimension::length, at);
            else if (key == "r_samples") r.r_samples = parse_int(value, at);
            else if (key == "direction") r.direction = parse_vec3(value, at);
            else if (key == "n_theta") r.n_theta = parse_int(value, at);
            else if (key == "n_phi") r.n_phi = parse_int(value, at);
            else if (key == "k_max") r.k_max = parse_quantity(value, Dimension::inverse_length, at);
            else if (key == "validity_factor") r.validity_factor = parse_quantity(value, Dimension::dimensionless, at);
            else if (key == "prescription") r.prescription = value;
            else if (key == "sweep_sizes") r.sweep_sizes = parse_list(value, at);
            else if (key == "field_mass") r.field_mass = parse_quantity(value, Dimension::inverse_length, at);
            else if (key == "synthetic_curvature") r.synthetic_curvature = parse_quantity(value, Dimension::inverse_length_sq, at);
            else if (key == "size_si") r.size_si = parse_quantity(value, Dimension::si_length, at);
            else if (key == "orbit_radius_si") r.orbit_radius_si = parse_quantity(value, Dimension::si_length, at);
            else if (key == "emit_plot") r.emit_plot = parse_bool(value, at);
            else if (key == "seed") s.seed = parse_int(value, at);
            else fail(at, "unknown run key '" + key + "'");
            return;
        }
        fail(at, "unknown section '" + section + "'");
    }

    void finish(const ParseCursor& at) {
        if (saw_detector_section && !saw_gap) fail(at, "detector section is missing 'gap'");
        if (!(s.run.rel_tol > 0) || !(s.run.abs_tol > 0))
            fail(at, "tolerances must be positive");
        static const char* families[] = {"inertial", "uniform-acceleration", "static-observer",
                                         "circular"};
        bool ok = false;
        for (const char* f : families) ok = ok || s.trajectory.family == f;
        if (!ok) fail(at, "unknown trajectory family '" + s.trajectory.family + "'");
    }
};

}  // namespace

bool Scenario::operator==(const Scenario& other) const {
    return serialize(*this) == serialize(other);
}

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
    Assembler assembler;
    ParseCursor at{origin, 0};
    std::string section;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        at.line++;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(at, "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) fail(at, "empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(at, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(at, "empty key");
        if (value.empty()) fail(at, "empty value for '" + key + "'");
        if (section.empty()) fail(at, "key outside any [section]");
        assembler.apply(section, key, value, at);
    }
    assembler.finish(at);
    return assembler.s;
}

Scenario parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str(), path.string());
}

namespace {

std::string num(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

std::string serialize(const Scenario& s) {
    std::ostringstream out;
    out << "[spacetime]\n";
    out << "name = " << s.spacetime.name << "\n";
    for (const auto& [k, v] : s.spacetime.params) out << k << " = " << num(v) << "\n";
    out << "\n[trajectory]\n";
    const auto& t = s.trajectory;
    out << "family = " << t.family << "\n";
    out << "v = " << num(t.v) << "\n";
    out << "a = " << num(t.a) << "\n";
    out << "r = " << num(t.r) << "\n";
    out << "theta = " << num(t.theta) << "\n";
    out << "phi = " << num(t.phi) << "\n";
    out << "radius = " << num(t.radius) << "\n";
    out << "omega = " << num(t.omega) << "\n";
    out << "\n[detector]\n";
    const auto& d = s.detector;
    out << "gap = " << num(d.gap) << "\n";
    out << "coupling = " << num(d.coupling) << "\n";
    out << "smearing = " << d.smearing << "\n";
    out << "size = " << num(d.size) << "\n";
    out << "shift = " << num(d.shift[0]) << ", " << num(d.shift[1]) << ", " << num(d.shift[2])
        << "\n";
    out << "switching = " << d.switching << "\n";
    out << "width = " << num(d.width) << "\n";
    out << "ramp = " << num(d.ramp) << "\n";
    out << "center = " << num(d.center) << "\n";
    out << "\n[run]\n";
    const auto& r = s.run;
    out << "rel_tol = " << num(r.rel_tol) << "\n";
    out << "abs_tol = " << num(r.abs_tol) << "\n";
    out << "tau = " << num(r.tau) << "\n";
    out << "tau_min = " << num(r.tau_min) << "\n";
    out << "tau_max = " << num(r.tau_max) << "\n";
    out << "tau_samples = " << r.tau_samples << "\n";
    out << "r_min = " << num(r.r_min) << "\n";
    out << "r_max = " << num(r.r_max) << "\n";
    out << "r_samples = " << r.r_samples << "\n";
    out << "direction = " << num(r.direction[0]) << ", " << num(r.direction[1]) << ", "
        << num(r.direction[2]) << "\n";
    out << "n_theta = " << r.n_theta << "\n";
    out << "n_phi = " << r.n_phi << "\n";
    out << "k_max = " << num(r.k_max) << "\n";
    out << "validity_factor = " << num(r.validity_factor) << "\n";
    out << "prescription = " << r.prescription << "\n";
    if (!r.sweep_sizes.empty()) {
        out << "sweep_sizes = ";
        for (std::size_t i = 0; i < r.sweep_sizes.size(); ++i)
            out << (i ? ", " : "") << num(r.sweep_sizes[i]);
        out << "\n";
    }
    out << "field_mass = " << num(r.field_mass) << "\n";
    out << "synthetic_curvature = " << num(r.synthetic_curvature) << "\n";
    out << "size_si = " << num(r.size_si) << "\n";
    out << "orbit_radius_si = " << num(r.orbit_radius_si) << "\n";
    out << "emit_plot = " << (r.emit_plot ? "true" : "false") << "\n";
    out << "seed = " << s.seed << "\n";
    return out.str();
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << hash;
    return out.str();
}

}  // namespace fermidet::scenario
