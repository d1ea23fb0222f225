#include "fermidet/scenario/runner.hpp"

#include "fermidet/fermi/oracle.hpp"
#include "fermidet/hamiltonian/magnitudes.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fermidet::scenario {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// output helpers

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

    void row(const std::vector<std::string>& fields) {
        if (fields.size() != header_.size())
            throw NumericalError("csv writer: column count mismatch");
        rows_.push_back(fields);
    }

    std::string str() const {
        std::ostringstream out;
        for (std::size_t i = 0; i < header_.size(); ++i)
            out << (i ? "," : "") << csv_quote(header_[i]);
        out << "\n";
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_quote(r[i]);
            out << "\n";
        }
        return out.str();
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(16);
    out << v;
    return out.str();
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y%m%d-%H%M%S");
    return out.str();
}

std::string utc_timestamp_iso() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

// Collects output files, then writes the manifest naming them all.
class RunDirectory {
public:
    RunDirectory(const std::filesystem::path& dir) : dir_(dir) {
        std::filesystem::create_directories(dir_);
    }

    void write(const std::string& name, const std::string& contents) {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) throw NumericalError("cannot write output file " + (dir_ / name).string());
        out << contents;
        files_.push_back({name, contents.size(), fnv1a_hex(contents)});
    }

    json finalize(const std::string& subcommand, const Scenario& sc, bool complete) {
        json manifest;
        manifest["tool"] = "fermi-detector";
        manifest["version"] = "0.1.0";
        manifest["subcommand"] = subcommand;
        manifest["created_utc"] = utc_timestamp_iso();
        manifest["scenario_fnv1a64"] = fnv1a_hex(serialize(sc));
        manifest["seed"] = sc.seed;
        manifest["tolerances"] = {{"rel_tol", sc.run.rel_tol}, {"abs_tol", sc.run.abs_tol}};
        manifest["status"] = complete ? "complete" : "partial";
        manifest["outputs"] = json::array();
        for (const auto& f : files_)
            manifest["outputs"].push_back(
                {{"file", f.name}, {"bytes", f.bytes}, {"fnv1a64", f.hash}});
        const std::string text = manifest.dump(2) + "\n";
        std::ofstream out(dir_ / "manifest.json", std::ios::binary);
        out << text;
        return manifest;
    }

    const std::filesystem::path& dir() const { return dir_; }

private:
    struct FileRecord {
        std::string name;
        std::size_t bytes;
        std::string hash;
    };
    std::filesystem::path dir_;
    std::vector<FileRecord> files_;
};

std::string gnuplot_script(const std::string& csv, const std::string& title, int xcol, int ycol,
                           bool loglog) {
    std::ostringstream out;
    out << "# plot script for a generic gnuplot-compatible tool\n";
    out << "set datafile separator ','\n";
    out << "set key autotitle columnhead\n";
    if (loglog) out << "set logscale xy\n";
    out << "set title '" << title << "'\n";
    out << "plot '" << csv << "' using " << xcol << ":" << ycol << " with linespoints\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// scenario -> physics objects

bool is_flat_inertial_chart(const Scenario& sc) {
    return sc.spacetime.name == "minkowski-inertial";
}

double proper_time_rate_at_zero(const kinematics::Worldline& w) {
    const Vec4 x = w.coords(0.0);
    const Vec4 v = w.tangent(0.0);
    const double s = v.dot(w.metric.components(x) * v);
    if (!(s < 0)) throw ValidationError("trajectory is not timelike at lambda = 0");
    return std::sqrt(-s);
}

kinematics::Worldline build_worldline(const Scenario& sc, const geometry::MetricField& metric,
                                      double lambda_extent) {
    const auto& t = sc.trajectory;
    const kinematics::Interval range{-lambda_extent, lambda_extent};
    if (t.family == "inertial") {
        if (!is_flat_inertial_chart(sc))
            throw ValidationError("inertial trajectory requires minkowski-inertial spacetime");
        return kinematics::inertial(metric, t.v, range);
    }
    if (t.family == "uniform-acceleration") {
        if (!is_flat_inertial_chart(sc))
            throw ValidationError(
                "uniform-acceleration trajectory requires minkowski-inertial spacetime");
        return kinematics::uniform_acceleration(metric, t.a, range);
    }
    if (t.family == "circular") {
        if (!is_flat_inertial_chart(sc))
            throw ValidationError("circular trajectory requires minkowski-inertial spacetime");
        return kinematics::circular(metric, t.radius, t.omega, range);
    }
    if (t.family == "static-observer") {
        return kinematics::static_observer(metric, Vec3(t.r, t.theta, t.phi), range);
    }
    throw ValidationError("unknown trajectory family '" + t.family + "'");
}

}  // namespace

detector::DetectorSpec build_detector(const Scenario& sc) {
    const auto& d = sc.detector;
    detector::DetectorSpec spec;
    spec.gap = d.gap;
    spec.coupling = d.coupling;
    if (d.smearing == "pointlike")
        spec.smearing = detector::SmearingProfile::pointlike();
    else if (d.smearing == "gaussian")
        spec.smearing = detector::SmearingProfile::gaussian(d.size);
    else if (d.smearing == "gaussian-shifted")
        spec.smearing = detector::SmearingProfile::gaussian_shifted(d.size, d.shift);
    else if (d.smearing == "hard-sphere")
        spec.smearing = detector::SmearingProfile::hard_sphere(d.size);
    else
        throw ValidationError("unknown smearing kind '" + d.smearing + "'");

    if (d.switching == "gaussian")
        spec.switching = detector::SwitchingProfile::gaussian(d.width, d.center);
    else if (d.switching == "cosine-bump")
        spec.switching = detector::SwitchingProfile::cosine_bump(d.width, d.center);
    else if (d.switching == "top-hat-smoothed")
        spec.switching = detector::SwitchingProfile::top_hat_smoothed(d.width, d.ramp, d.center);
    else
        throw ValidationError("unknown switching kind '" + d.switching + "'");
    return spec;
}

FrameBundle build_frame(const Scenario& sc, double tau_lo, double tau_hi) {
    FrameBundle bundle;
    bundle.metric = geometry::lookup(sc.spacetime);

    const double pad = 1.0 + 0.1 * (std::abs(tau_lo) + std::abs(tau_hi));
    const double tau_span = std::max({std::abs(tau_lo), std::abs(tau_hi), 1.0}) + pad;

    // Parameter extent from the (constant) proper-time rate of the family.
    kinematics::Worldline probe = build_worldline(sc, bundle.metric, 1.0);
    const double rate = proper_time_rate_at_zero(probe);
    const double lambda_extent = 1.2 * tau_span / rate + 1.0;

    bundle.worldline = build_worldline(sc, bundle.metric, lambda_extent);
    bundle.map = kinematics::reparametrize(bundle.worldline);

    const kinematics::Tetrad start = kinematics::initial_tetrad(bundle.worldline, bundle.map, 0.0);
    bundle.tetrads = std::make_shared<kinematics::TetradField>(
        bundle.worldline, bundle.map, start, -tau_span, tau_span);

    bundle.stationary = sc.trajectory.family == "static-observer" ||
                        sc.trajectory.family == "inertial" ||
                        sc.trajectory.family == "uniform-acceleration";

    const double kappa = sc.run.synthetic_curvature;
    auto inject = [kappa](fermi::FermiExpansion e) {
        if (kappa != 0.0) e.r_titj += kappa * Mat3::Identity();
        return e;
    };

    if (bundle.stationary) {
        auto cached = std::make_shared<fermi::FermiExpansion>(inject(fermi::expansion_coefficients(
            bundle.worldline, bundle.map, bundle.tetrads->at(0.0), 0.0)));
        bundle.expansion = [cached](double tau) {
            fermi::FermiExpansion e = *cached;
            e.tau = tau;
            return e;
        };
    } else {
        auto w = std::make_shared<kinematics::Worldline>(bundle.worldline);
        auto map = std::make_shared<kinematics::ProperTimeMap>(bundle.map);
        auto tetrads = bundle.tetrads;
        bundle.expansion = [w, map, tetrads, inject](double tau) {
            return inject(fermi::expansion_coefficients(*w, *map, tetrads->at(tau), tau));
        };
    }
    return bundle;
}

response::FlatChartMap build_flat_map(const Scenario& sc) {
    if (!is_flat_inertial_chart(sc))
        throw ValidationError("response requires the minkowski-inertial spacetime");
    if (sc.trajectory.family == "inertial") return response::FlatChartMap::inertial(sc.trajectory.v);
    if (sc.trajectory.family == "uniform-acceleration")
        return response::FlatChartMap::accelerated(sc.trajectory.a);
    throw ValidationError("response requires an inertial or uniformly accelerated trajectory");
}

namespace {

response::ResponseSettings response_settings(const Scenario& sc) {
    response::ResponseSettings s;
    s.radial_rel_tol = std::max(sc.run.rel_tol, 1e-10);
    s.radial_abs_tol = 1e-30;
    s.amp_rel_tol = std::max(0.05 * sc.run.rel_tol, 1e-11);
    s.n_theta = sc.run.n_theta;
    s.n_phi = sc.run.n_phi;
    s.k_max = sc.run.k_max;
    return s;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    if (!(lo > 0) || !(hi > lo) || n < 2)
        throw ValidationError("need 0 < r_min < r_max and at least 2 samples");
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return out;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > 0) || !(x[i] > 0)) continue;
        const double lx = std::log10(x[i]);
        const double ly = std::log10(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    const double denom = n * sxx - sx * sx;
    if (denom == 0) return 0.0;
    return (n * sxy - sx * sy) / denom;
}

// ---------------------------------------------------------------------------
// subcommands

void run_frame(const Scenario& sc, RunDirectory& dir) {
    double lo = sc.run.tau_min, hi = sc.run.tau_max;
    if (!(hi > lo)) {
        lo = 0.0;
        hi = 10.0;
    }
    const int samples = std::max(sc.run.tau_samples, 2);
    FrameBundle frame = build_frame(sc, lo, hi);

    CsvWriter csv({"tau [m]", "gram_dev [1]", "a1 [1/m]", "a2 [1/m]", "a3 [1/m]",
                   "abs_a [1/m]", "u0 [1]", "u1 [1]", "u2 [1]", "u3 [1]"});
    double max_dev = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double tau = lo + (hi - lo) * i / (samples - 1);
        const kinematics::Tetrad t = frame.tetrads->at(tau);
        const double dev = t.gram_deviation(frame.metric);
        max_dev = std::max(max_dev, dev);
        const fermi::FermiExpansion e = frame.expansion(tau);
        csv.row({fmt(tau), fmt(dev), fmt(e.accel[0]), fmt(e.accel[1]), fmt(e.accel[2]),
                 fmt(e.accel.norm()), fmt(t.u()[0]), fmt(t.u()[1]), fmt(t.u()[2]),
                 fmt(t.u()[3])});
    }
    dir.write("frame.csv", csv.str());

    json summary;
    summary["max_gram_deviation"] = max_dev;
    summary["reorthonormalizations"] = frame.tetrads->correction_count();
    summary["tau_range"] = {lo, hi};
    dir.write("summary.json", summary.dump(2) + "\n");
    if (sc.run.emit_plot)
        dir.write("plot.txt", gnuplot_script("frame.csv", "tetrad Gram deviation", 1, 2, false));
}

void run_volume(const Scenario& sc, RunDirectory& dir, bool fit_slopes) {
    const double tau = sc.run.tau;
    FrameBundle frame = build_frame(sc, tau - 1.0, tau + 1.0);
    const fermi::FermiExpansion exp = frame.expansion(tau);

    Vec3 direction = sc.run.direction;
    if (direction.norm() == 0) throw ValidationError("volume: zero direction");
    direction.normalize();

    const double validity = fermi::validity_radius(exp, sc.run.validity_factor);
    if (sc.run.r_max > validity)
        throw ValidationError("volume: r_max exceeds the validity radius " + std::to_string(validity));

    const auto radii = log_spaced(sc.run.r_min, sc.run.r_max, sc.run.r_samples);

    CsvWriter csv({"r [m]", "component", "numeric [1]", "expansion [1]", "residual [1]"});
    std::vector<double> res_gtt, res_det, res_spatial;
    for (double r : radii) {
        const fermi::FermiPoint p{tau, r * direction};
        const auto numeric = fermi::numeric_fermi_metric(frame.metric, *frame.tetrads, p);
        const Mat4 series = fermi::metric_second_order(exp, p);
        const double det_series = fermi::sqrt_det_full(exp, p);
        const double spatial_series = fermi::sqrt_det_spatial(exp, p);

        const double d_gtt = std::abs(numeric.metric(0, 0) - series(0, 0));
        const double d_det = std::abs(numeric.sqrt_det_full - det_series);
        const double d_spatial = std::abs(numeric.sqrt_det_spatial - spatial_series);
        res_gtt.push_back(d_gtt);
        res_det.push_back(d_det);
        res_spatial.push_back(d_spatial);

        csv.row({fmt(r), "g_tautau", fmt(numeric.metric(0, 0)), fmt(series(0, 0)), fmt(d_gtt)});
        csv.row({fmt(r), "sqrt_det_full", fmt(numeric.sqrt_det_full), fmt(det_series), fmt(d_det)});
        csv.row({fmt(r), "sqrt_det_spatial", fmt(numeric.sqrt_det_spatial), fmt(spatial_series),
                 fmt(d_spatial)});
    }
    dir.write(fit_slopes ? "oracle.csv" : "volume.csv", csv.str());

    json summary;
    summary["tau"] = tau;
    summary["direction"] = {direction[0], direction[1], direction[2]};
    summary["max_residual_g_tautau"] = *std::max_element(res_gtt.begin(), res_gtt.end());
    summary["max_residual_sqrt_det_full"] = *std::max_element(res_det.begin(), res_det.end());
    if (fit_slopes) {
        summary["slope_g_tautau"] = fit_loglog_slope(radii, res_gtt);
        summary["slope_sqrt_det_full"] = fit_loglog_slope(radii, res_det);
        summary["slope_sqrt_det_spatial"] = fit_loglog_slope(radii, res_spatial);
    }
    dir.write("summary.json", summary.dump(2) + "\n");
    if (sc.run.emit_plot)
        dir.write("plot.txt", gnuplot_script(fit_slopes ? "oracle.csv" : "volume.csv",
                                             "expansion residuals", 1, 5, true));
}

void run_moments(const Scenario& sc, RunDirectory& dir) {
    double lo = sc.run.tau_min, hi = sc.run.tau_max;
    int samples = sc.run.tau_samples;
    if (!(hi > lo)) {
        lo = hi = sc.run.tau;
        samples = 1;
    }
    const detector::DetectorSpec det = build_detector(sc);
    const double chi_lo = det.switching.support_lo();
    const double chi_hi = det.switching.support_hi();
    FrameBundle frame =
        build_frame(sc, std::min(lo, chi_lo) - 1.0, std::max(hi, chi_hi) + 1.0);

    const auto weight = hamiltonian::build_weight(
        det, hamiltonian::WeightKind::covariant, frame.expansion, sc.run.validity_factor,
        [&frame](double tau) { return hamiltonian::reparam_factor(frame.worldline, frame.map, tau); });

    hamiltonian::MultipoleOptions mopts;
    mopts.rel_tol = sc.run.rel_tol;
    mopts.abs_tol = sc.run.abs_tol;

    CsvWriter csv({"tau [m]", "M0 [1]", "M1 [m]", "M2 [m]", "M3 [m]", "M11 [m^2]", "M22 [m^2]",
                   "M33 [m^2]", "M12 [m^2]", "M13 [m^2]", "M23 [m^2]", "monopole [1]",
                   "dipole [1]", "quadrupole [1]", "relative [1]", "reparam [1]"});
    for (int i = 0; i < samples; ++i) {
        const double tau = samples == 1 ? lo : lo + (hi - lo) * i / (samples - 1);
        const fermi::FermiExpansion exp = frame.expansion(tau);
        detector::MomentOptions dm;
        dm.rel_tol = mopts.rel_tol;
        dm.abs_tol = mopts.abs_tol;
        dm.with_spatial_measure = true;
        const auto weighted = detector::smearing_moments(det, exp, dm);
        dm.with_spatial_measure = false;
        const auto unit = detector::smearing_moments(det, exp, dm);
        const auto report = hamiltonian::multipole_decomposition(weight, tau, mopts);
        csv.row({fmt(tau), fmt(weighted.monopole), fmt(unit.dipole[0]), fmt(unit.dipole[1]),
                 fmt(unit.dipole[2]), fmt(unit.quadrupole(0, 0)), fmt(unit.quadrupole(1, 1)),
                 fmt(unit.quadrupole(2, 2)), fmt(unit.quadrupole(0, 1)),
                 fmt(unit.quadrupole(0, 2)), fmt(unit.quadrupole(1, 2)),
                 fmt(report.monopole_term), fmt(report.dipole_term), fmt(report.quadrupole_term),
                 fmt(report.relative_correction), fmt(report.reparam_factor)});
    }
    dir.write("moments.csv", csv.str());

    const auto report = hamiltonian::multipole_decomposition(weight, sc.run.tau, mopts);
    const fermi::FermiExpansion exp0 = frame.expansion(sc.run.tau);
    json summary;
    summary["tau"] = report.tau;
    summary["monopole"] = report.monopole_term;
    summary["dipole"] = report.dipole_term;
    summary["quadrupole"] = report.quadrupole_term;
    summary["relative_correction"] = report.relative_correction;
    summary["reparam_factor"] = report.reparam_factor;
    summary["remainder_envelope"] =
        hamiltonian::remainder_envelope(exp0, det.smearing.support_radius());
    dir.write("summary.json", summary.dump(2) + "\n");
    if (sc.run.emit_plot)
        dir.write("plot.txt",
                  gnuplot_script("moments.csv", "multipole correction terms", 1, 15, false));
}

json comparison_to_json(const response::PrescriptionComparison& c) {
    json j;
    j["p_covariant"] = c.p_covariant;
    j["p_noncovariant"] = c.p_noncovariant;
    j["delta"] = c.delta;
    j["delta_error"] = c.delta_error;
    j["probability_error"] = c.probability_error;
    j["relative_difference"] = c.p_noncovariant != 0 ? c.delta / c.p_noncovariant : 0.0;
    j["inconclusive"] = c.inconclusive;
    j["converged"] = c.converged;
    j["amplitude_evaluations"] = c.evaluations;
    return j;
}

void run_compare(const Scenario& sc, RunDirectory& dir) {
    const detector::DetectorSpec det = build_detector(sc);
    double lo = sc.run.tau_min, hi = sc.run.tau_max;
    int samples = sc.run.tau_samples;
    if (!(hi > lo)) {
        lo = det.switching.support_lo();
        hi = det.switching.support_hi();
        samples = std::max(samples, 21);
    }
    FrameBundle frame = build_frame(sc, lo - 1.0, hi + 1.0);
    const auto weight = hamiltonian::build_weight(
        det, hamiltonian::WeightKind::covariant, frame.expansion, sc.run.validity_factor,
        [&frame](double tau) { return hamiltonian::reparam_factor(frame.worldline, frame.map, tau); });

    hamiltonian::MultipoleOptions mopts;
    mopts.rel_tol = sc.run.rel_tol;
    mopts.abs_tol = sc.run.abs_tol;

    CsvWriter csv({"tau [m]", "monopole_t [1]", "dipole_t [1]", "quadrupole_t [1]",
                   "relative [1]", "reparam [1]"});
    for (int i = 0; i < samples; ++i) {
        const double tau = samples == 1 ? lo : lo + (hi - lo) * i / (samples - 1);
        const auto rep = hamiltonian::hamiltonian_difference(weight, tau, mopts);
        csv.row({fmt(tau), fmt(rep.monopole_term), fmt(rep.dipole_term),
                 fmt(rep.quadrupole_term), fmt(rep.relative_correction),
                 fmt(rep.reparam_factor)});
    }
    dir.write("compare.csv", csv.str());

    json summary;
    summary["measure_comparison_tau"] = sc.run.tau;
    const auto rep = hamiltonian::hamiltonian_difference(weight, sc.run.tau, mopts);
    summary["monopole_t"] = rep.monopole_term;
    summary["dipole_t"] = rep.dipole_term;
    summary["quadrupole_t"] = rep.quadrupole_term;
    summary["relative_correction"] = rep.relative_correction;

    const bool flat_response = is_flat_inertial_chart(sc) &&
                               (sc.trajectory.family == "inertial" ||
                                sc.trajectory.family == "uniform-acceleration");
    if (flat_response) {
        const auto map = build_flat_map(sc);
        response::FieldSpec field{sc.run.field_mass};
        const auto comparison =
            response::compare_prescriptions(det, frame.expansion, map, field,
                                            response_settings(sc));
        summary["response"] = comparison_to_json(comparison);
    } else {
        summary["response"] = "skipped: response comparison needs a flat background";
    }
    dir.write("summary.json", summary.dump(2) + "\n");
    if (sc.run.emit_plot)
        dir.write("plot.txt", gnuplot_script("compare.csv", "t-frame corrections", 1, 5, false));
}

void run_response(const Scenario& sc, RunDirectory& dir) {
    const detector::DetectorSpec base_det = build_detector(sc);
    const double chi_lo = base_det.switching.support_lo();
    const double chi_hi = base_det.switching.support_hi();
    FrameBundle frame = build_frame(sc, chi_lo - 1.0, chi_hi + 1.0);
    const auto map = build_flat_map(sc);
    response::FieldSpec field{sc.run.field_mass};
    const auto settings = response_settings(sc);

    json summary;
    if (sc.run.sweep_sizes.empty()) {
        const auto comparison =
            response::compare_prescriptions(base_det, frame.expansion, map, field, settings);
        summary = comparison_to_json(comparison);
        CsvWriter csv({"P_cov [1]", "P_noncov [1]", "delta [1]", "delta_err [1]", "p_err [1]"});
        csv.row({fmt(comparison.p_covariant), fmt(comparison.p_noncovariant),
                 fmt(comparison.delta), fmt(comparison.delta_error),
                 fmt(comparison.probability_error)});
        dir.write("response.csv", csv.str());
    } else {
        CsvWriter csv({"scale [1]", "sigma [m]", "shift_x [m]", "P_cov [1]", "P_noncov [1]",
                       "delta [1]", "delta_rel [1]", "delta_err [1]", "p_err [1]"});
        std::vector<double> scales, ratios;
        for (double scale : sc.run.sweep_sizes) {
            detector::DetectorSpec det = base_det;
            const double sigma = sc.detector.size * scale;
            const Vec3 shift = sc.detector.shift * scale;
            if (sc.detector.smearing == "gaussian-shifted")
                det.smearing = detector::SmearingProfile::gaussian_shifted(sigma, shift);
            else if (sc.detector.smearing == "gaussian")
                det.smearing = detector::SmearingProfile::gaussian(sigma);
            else if (sc.detector.smearing == "hard-sphere")
                det.smearing = detector::SmearingProfile::hard_sphere(sigma);
            else
                throw ValidationError("response sweep requires a smeared profile");
            const auto comparison =
                response::compare_prescriptions(det, frame.expansion, map, field, settings);
            const double rel =
                comparison.p_noncovariant != 0 ? comparison.delta / comparison.p_noncovariant : 0;
            csv.row({fmt(scale), fmt(sigma), fmt(shift[0]), fmt(comparison.p_covariant),
                     fmt(comparison.p_noncovariant), fmt(comparison.delta), fmt(rel),
                     fmt(comparison.delta_error), fmt(comparison.probability_error)});
            scales.push_back(scale);
            ratios.push_back(std::abs(rel));
        }
        summary["sweep_slope_delta_rel"] = fit_loglog_slope(scales, ratios);
        dir.write("response.csv", csv.str());
    }
    dir.write("summary.json", summary.dump(2) + "\n");
    if (sc.run.emit_plot)
        dir.write("plot.txt",
                  gnuplot_script("response.csv", "prescription comparison", 1, 7, true));
}

void run_magnitudes(const Scenario& sc, RunDirectory& dir) {
    namespace mag = hamiltonian;
    const double L = sc.run.size_si;
    const double a_threshold_si = mag::threshold_acceleration_si(L);
    const double a_threshold_g = mag::threshold_acceleration_g(L);
    const double a_orbit_si = mag::circular_orbit_acceleration_si(sc.run.orbit_radius_si);
    const double a_orbit_g = a_orbit_si / constants::g_earth_si;
    const double orbit_dipole = mag::dipole_scale(a_orbit_si, L);

    double mass_geom = constants::sun_mass_geometric;
    if (auto it = sc.spacetime.params.find("M"); it != sc.spacetime.params.end())
        mass_geom = it->second;
    const double horizon_radius = mag::horizon_curvature_radius_m(mass_geom);
    const double quad_scale = mag::quadrupole_scale(L, horizon_radius);

    CsvWriter csv({"quantity", "value", "unit"});
    csv.row({"detector_size", fmt(L), "m"});
    csv.row({"dipole_threshold_acceleration", fmt(a_threshold_si), "m/s^2"});
    csv.row({"dipole_threshold_acceleration", fmt(a_threshold_g), "g0"});
    csv.row({"orbit_radius", fmt(sc.run.orbit_radius_si), "m"});
    csv.row({"orbit_acceleration", fmt(a_orbit_si), "m/s^2"});
    csv.row({"orbit_acceleration", fmt(a_orbit_g), "g0"});
    csv.row({"orbit_dipole_scale", fmt(orbit_dipole), "1"});
    csv.row({"horizon_curvature_radius", fmt(horizon_radius), "m"});
    csv.row({"horizon_quadrupole_scale", fmt(quad_scale), "1"});
    dir.write("magnitudes.csv", csv.str());

    json summary;
    summary["detector_size_m"] = L;
    summary["dipole_threshold_acceleration_si"] = a_threshold_si;
    summary["dipole_threshold_acceleration_g"] = a_threshold_g;
    summary["orbit_acceleration_si"] = a_orbit_si;
    summary["orbit_acceleration_g"] = a_orbit_g;
    summary["orbit_dipole_scale"] = orbit_dipole;
    summary["horizon_curvature_radius_m"] = horizon_radius;
    summary["horizon_quadrupole_scale"] = quad_scale;
    dir.write("summary.json", summary.dump(2) + "\n");
}

}  // namespace

RunResult run_subcommand(const std::string& name, const Scenario& sc,
                         std::filesystem::path out_dir) {
    if (out_dir.empty()) {
        const std::string hash = fnv1a_hex(serialize(sc)).substr(0, 8);
        out_dir = std::filesystem::path("runs") / (utc_timestamp() + "-" + hash);
    }
    RunDirectory dir(out_dir);
    dir.write("scenario.txt", serialize(sc));

    if (name == "frame")
        run_frame(sc, dir);
    else if (name == "volume")
        run_volume(sc, dir, false);
    else if (name == "oracle")
        run_volume(sc, dir, true);
    else if (name == "moments")
        run_moments(sc, dir);
    else if (name == "compare")
        run_compare(sc, dir);
    else if (name == "response")
        run_response(sc, dir);
    else if (name == "magnitudes")
        run_magnitudes(sc, dir);
    else
        throw ValidationError("unknown subcommand '" + name + "'");

    const json manifest = dir.finalize(name, sc, true);
    return {dir.dir(), manifest.dump(2)};
}

}  // namespace fermidet::scenario
