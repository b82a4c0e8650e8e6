#include "cbw/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cbw/metrology.hpp"
#include "cbw/sha256.hpp"

namespace cbw {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

json geometry_json(const CouplingGeometry& g) {
    return {{"link_style", g.link_style == LinkStyle::Straight ? "straight" : "crossed"},
            {"mirror_alternate", g.mirror_alternate},
            {"leading_sign", g.leading_sign},
            {"control_bias", g.control_bias},
            {"compensated_coupler", g.compensated_coupler}};
}

json model_json(const FringeSignalModel& m) {
    return {{"mu", m.mu},     {"a", m.a},         {"b", m.b},
            {"phi0", m.phi0}, {"n", m.n_fold},    {"sigma", m.sigma}};
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct ArtifactSet {
    std::map<std::string, std::string> files;  // name -> content
    json extra;                                // kind-specific manifest section
};

ArtifactSet run_sweep(const Scenario& s) {
    ArtifactSet out;
    const auto& geometry = calibrated_geometry();
    auto spec = build_cbw_chain(s.n, 0.0, s.psi, geometry);
    const auto scan = sweep_fringe(spec, phi_grid(s.grid_points));
    std::ostringstream csv;
    write_fringe_csv(scan, csv);
    out.files["fringe.csv"] = csv.str();
    out.extra["geometry"] = geometry_json(geometry);
    return out;
}

ArtifactSet run_time(const Scenario& s) {
    ArtifactSet out;
    const auto& geometry = calibrated_geometry();
    EventSchedule schedule{s.events};
    const auto trace = simulate_trace(aom_config_from(s), schedule, imperfections_from(s), s.duration_s,
                                      s.sample_rate_hz, geometry, s.psi);
    std::ostringstream csv;
    write_trace_csv(trace, csv);
    out.files["trace.csv"] = csv.str();

    // Per-segment spectral summary between event times.
    std::vector<double> bounds{0.0};
    for (const auto& e : s.events)
        if (e.time < s.duration_s) bounds.push_back(e.time);
    bounds.push_back(s.duration_s);
    json segments = json::array();
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
        const double t0 = bounds[k], t1 = bounds[k + 1];
        json seg{{"t0", t0}, {"t1", t1}};
        const auto samples_in =
            static_cast<std::size_t>(std::floor((t1 - t0) * s.sample_rate_hz));
        if (samples_in >= 8) {
            const auto peak = dominant_frequency(trace, t0, t1);
            seg["dominant_hz"] = peak.hz;
            seg["no_peak"] = peak.no_peak;
        } else {
            seg["no_peak"] = true;
        }
        segments.push_back(seg);
    }
    json summary;
    summary["segments"] = segments;
    try {
        summary["visibility_i3"] = visibility(trace.i3);
    } catch (const std::domain_error&) {
        summary["visibility_i3"] = nullptr;  // dark port, contrast undefined
    }
    summary["geometry"] = geometry_json(geometry);
    out.files["summary.json"] = summary.dump(2) + "\n";
    return out;
}

ArtifactSet run_fisher(const Scenario& s) {
    ArtifactSet out;
    const FringeSignalModel model = signal_model_from(s);
    const double phi_true = s.phi_true_set ? s.phi_true : quadrature_phase(model);
    const auto mc = monte_carlo_crlb_check(model, phi_true, s.samples, s.trials, s.seed);
    json report;
    report["model"] = model_json(model);
    report["M"] = s.samples;
    report["trials"] = s.trials;
    report["fisher"] = fisher_information(model, phi_true, s.samples);
    report["crlb"] = mc.crlb;
    report["empirical_std"] = mc.empirical_std;
    report["ratio"] = mc.ratio;
    report["seed"] = s.seed;
    out.files["fisher.json"] = report.dump(2) + "\n";
    out.extra["phi_true"] = phi_true;
    return out;
}

ArtifactSet run_harmonics(const Scenario& s) {
    ArtifactSet out;
    const auto& geometry = calibrated_geometry();
    auto spec = build_cbw_chain(s.n, 0.0, s.psi, geometry);
    const auto scan = sweep_fringe(spec, phi_grid(s.grid_points));
    const auto spectrum = harmonic_spectrum(scan);
    std::ostringstream csv;
    write_spectrum_csv(spectrum, csv);
    out.files["spectrum.csv"] = csv.str();
    json summary;
    summary["n"] = s.n;
    summary["zero_ac"] = spectrum.zero_ac;
    summary["purity"] = spectrum.zero_ac ? 0.0 : purity(spectrum, s.n);
    out.files["harmonics.json"] = summary.dump(2) + "\n";
    return out;
}

ArtifactSet run_calibrate(const Scenario&) {
    ArtifactSet out;
    const auto result = calibrate_convention();
    json report;
    report["geometry"] = geometry_json(result.geometry);
    json all = json::array();
    for (const auto& g : result.satisfiers) all.push_back(geometry_json(g));
    report["satisfiers"] = all;
    report["warnings"] = result.warnings;
    out.files["calibration.json"] = report.dump(2) + "\n";
    return out;
}

ArtifactSet run_compare_pbw(const Scenario& s) {
    ArtifactSet out;
    const auto grid = phi_grid(s.grid_points);

    FringeScan contaminated;
    contaminated.phi = grid;
    contaminated.i3.resize(grid.size());
    contaminated.i4.resize(grid.size());
    contaminated.n_nominal = s.n;

    std::ostringstream csv;
    csv << "phi,cbw_p0,pbw_p0,contaminated_p0\n";
    char buf[160];
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto cbw = projection_probabilities(s.n, grid[k]);
        const auto pbw = pbw_probabilities(s.n, grid[k]);
        const auto mix = pbw_contaminated(s.weights, grid[k]);
        contaminated.i3[k] = mix.first;
        contaminated.i4[k] = mix.second;
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", grid[k], cbw.first,
                      pbw.first, mix.first);
        csv << buf;
    }
    out.files["compare.csv"] = csv.str();

    double weight_power = 0.0;
    for (double w : s.weights) weight_power += w * w;
    const double analytic =
        weight_power > 0.0 ? s.weights.back() * s.weights.back() / weight_power : 0.0;

    json summary;
    summary["n"] = s.n;
    summary["weights"] = s.weights;
    summary["purity_contaminated"] = purity(harmonic_spectrum(contaminated), s.n);
    summary["purity_analytic"] = analytic;
    out.files["compare.json"] = summary.dump(2) + "\n";
    return out;
}

}  // namespace

RunOutcome run_scenario(const Scenario& scenario) {
    RunOutcome outcome;

    ArtifactSet artifacts;
    try {
        switch (scenario.kind) {
            case ScenarioKind::Sweep: artifacts = run_sweep(scenario); break;
            case ScenarioKind::Time: artifacts = run_time(scenario); break;
            case ScenarioKind::Fisher: artifacts = run_fisher(scenario); break;
            case ScenarioKind::Harmonics: artifacts = run_harmonics(scenario); break;
            case ScenarioKind::Calibrate: artifacts = run_calibrate(scenario); break;
            case ScenarioKind::ComparePbw: artifacts = run_compare_pbw(scenario); break;
        }
    } catch (const std::exception& e) {
        outcome.exit_code = 3;
        outcome.message = e.what();
        return outcome;
    }

    std::error_code ec;
    fs::create_directories(scenario.output_dir, ec);
    if (ec) {
        outcome.exit_code = 4;
        outcome.message = "cannot create output directory: " + scenario.output_dir;
        return outcome;
    }

    json manifest;
    manifest["version"] = "cbw-sim 0.1.0";
    manifest["generated_at"] = timestamp_utc();
    manifest["seed"] = scenario.seed;
    {
        // echo the fully resolved scenario, line by line
        json resolved = json::array();
        std::istringstream text(serialize_scenario(scenario));
        std::string line;
        while (std::getline(text, line)) resolved.push_back(line);
        manifest["scenario"] = resolved;
    }
    if (!artifacts.extra.is_null()) manifest["derived"] = artifacts.extra;

    json sums;
    for (const auto& [name, content] : artifacts.files) sums[name] = sha256_hex(content);
    manifest["artifacts"] = sums;
    artifacts.files["manifest.json"] = manifest.dump(2) + "\n";

    for (const auto& [name, content] : artifacts.files) {
        const fs::path path = fs::path(scenario.output_dir) / name;
        std::ofstream os(path, std::ios::binary);
        os << content;
        os.flush();
        if (!os) {
            outcome.exit_code = 4;
            outcome.message = "cannot write " + path.string();
            return outcome;
        }
        outcome.artifacts.push_back(path.string());
    }
    return outcome;
}

}  // namespace cbw
