// Command-line front end: one subcommand per scenario kind, scenario files
// plus --set overrides, deterministic artifacts in --out.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cbw/run.hpp"

namespace {

struct CommonArgs {
    std::string scenario_file;
    std::string preset;
    std::string preset_dir;
    std::vector<std::string> overrides;
    std::string out;
    std::string seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--scenario", args.scenario_file, "Scenario file");
    cmd->add_option("--preset", args.preset, "Named preset shipped under presets/");
    cmd->add_option("--preset-dir", args.preset_dir, "Directory holding preset scenarios");
    cmd->add_option("--set", args.overrides, "Override: key=value")->take_all();
    cmd->add_option("--out", args.out, "Output directory");
    cmd->add_option("--seed", args.seed, "Scenario seed");
}

std::filesystem::path locate_preset(const CommonArgs& args, const char* argv0) {
    namespace fs = std::filesystem;
    std::vector<fs::path> roots;
    if (!args.preset_dir.empty()) roots.emplace_back(args.preset_dir);
    if (const char* env = std::getenv("CBW_PRESET_DIR")) roots.emplace_back(env);
    roots.emplace_back("presets");
    const fs::path exe(argv0);
    if (exe.has_parent_path()) {
        roots.push_back(exe.parent_path() / "presets");
        roots.push_back(exe.parent_path() / ".." / "presets");
        roots.push_back(exe.parent_path() / ".." / ".." / "presets");
    }
    for (const auto& root : roots) {
        const fs::path candidate = root / (args.preset + ".scn");
        if (fs::exists(candidate)) return candidate;
    }
    throw std::runtime_error("preset '" + args.preset + "' not found (try --preset-dir)");
}

int run_command(const std::string& kind_name, const CommonArgs& args, const char* argv0) {
    cbw::Scenario scenario;
    try {
        std::string text;
        if (!args.preset.empty()) {
            std::ifstream is(locate_preset(args, argv0));
            std::stringstream buffer;
            buffer << is.rdbuf();
            text = buffer.str();
        } else if (!args.scenario_file.empty()) {
            std::ifstream is(args.scenario_file);
            if (!is) {
                std::cerr << "error: cannot read scenario file " << args.scenario_file << "\n";
                return 2;
            }
            std::stringstream buffer;
            buffer << is.rdbuf();
            text = buffer.str();
        } else {
            text = "kind = " + kind_name + "\n";
            if (kind_name == "compare-pbw") text += "weights = 0, 1\n";
        }

        scenario = cbw::parse_scenario(text);
        if (cbw::to_string(scenario.kind) != kind_name) {
            std::cerr << "error: scenario kind '" << cbw::to_string(scenario.kind)
                      << "' does not match subcommand '" << kind_name << "'\n";
            return 2;
        }
        for (const auto& kv : args.overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
                return 2;
            }
            cbw::apply_override(scenario, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!args.seed.empty()) cbw::apply_override(scenario, "seed", args.seed);
        if (!args.out.empty()) cbw::apply_override(scenario, "out", args.out);
    } catch (const cbw::ScenarioError& e) {
        std::cerr << "error: " << e.what();
        if (e.line > 0) std::cerr << " (line " << e.line << ", column " << e.column << ")";
        if (!e.field.empty()) std::cerr << " [field: " << e.field << "]";
        std::cerr << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    const cbw::RunOutcome outcome = cbw::run_scenario(scenario);
    if (outcome.exit_code != 0) {
        std::cerr << "error: " << outcome.message << "\n";
        return outcome.exit_code;
    }
    for (const auto& path : outcome.artifacts) std::cout << path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled Mach-Zehnder chain simulator and metrology toolkit"};
    app.require_subcommand(1);

    static const char* kinds[] = {"sweep", "time", "fisher", "harmonics", "calibrate",
                                  "compare-pbw"};
    static const char* descriptions[] = {
        "Fringe sweep over a phase grid",
        "AOM-driven time trace with an event schedule",
        "Fisher information / CRLB Monte-Carlo report",
        "Fringe harmonic spectrum and purity",
        "Resolve the chain wiring against the reference patterns",
        "Chain probabilities vs ideal and contaminated N00N fringes"};

    CommonArgs args[6];
    for (int k = 0; k < 6; ++k) {
        CLI::App* cmd = app.add_subcommand(kinds[k], descriptions[k]);
        add_common(cmd, args[k]);
    }

    CLI11_PARSE(app, argc, argv);

    for (int k = 0; k < 6; ++k)
        if (app.get_subcommand(kinds[k])->parsed()) return run_command(kinds[k], args[k], argv[0]);
    return 2;
}
