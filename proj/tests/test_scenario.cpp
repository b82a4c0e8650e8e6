#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cbw/run.hpp"
#include "cbw/scenario.hpp"

using namespace cbw;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    std::stringstream buffer;
    buffer << is.rdbuf();
    return buffer.str();
}

std::string without_timestamp(const std::string& text) {
    std::istringstream is(text);
    std::ostringstream os;
    std::string line;
    while (std::getline(is, line))
        if (line.find("generated_at") == std::string::npos) os << line << '\n';
    return os.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("minimal scenario applies documented defaults") {
    const Scenario s = parse_scenario("kind = sweep\nn = 2\npsi = 0\n");
    CHECK(s.kind == ScenarioKind::Sweep);
    CHECK(s.n == 2);
    CHECK(s.psi == 0.0);
    CHECK(s.grid_points == 1024);
    CHECK(s.seed == 0);
}

TEST_CASE("unknown keys and malformed lines are rejected with location") {
    try {
        parse_scenario("kind = sweep\nwavelength = 3\n");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(e.line == 2);
        CHECK(e.field == "wavelength");
        CHECK(std::string(e.what()).find("wavelength") != std::string::npos);
    }

    try {
        parse_scenario("kind = sweep\nthis line has no equals\n");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(e.line == 2);
        CHECK(e.column > 0);
    }

    try {
        parse_scenario("kind = sweep\nn = 0\n");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(e.field == "n");
    }

    CHECK_THROWS_AS(parse_scenario("kind = sweep\nn = two\n"), ScenarioError);
    CHECK_THROWS_AS(parse_scenario("kind = warp\n"), ScenarioError);
}

TEST_CASE("scenario serialization round-trips") {
    Scenario s;
    s.kind = ScenarioKind::Time;
    s.seed = 12345;
    s.n = 2;
    s.duration_s = 12.0;
    s.sample_rate_hz = 100.0;
    s.delta_f_hz = {1.0, -1.0};
    s.initial_phase = {1.5707963267948966, 1.5707963267948966};
    s.events = {{4.0, EventAction::BlockArm, BlockKind::Dummy, 0, Arm::Upper, 0.0},
                {5.5, EventAction::SetDummyPhase, BlockKind::Dummy, 0, Arm::Upper, 3.14},
                {8.0, EventAction::SetUpperFrequency, BlockKind::Dummy, 1, Arm::Upper, 80000001.0}};
    s.transmissions = {{BlockKind::Control, 0, 1.0, 0.33}};
    s.bs_deviation = 0.02;
    s.phase_jitter = 0.15;

    const Scenario back = parse_scenario(serialize_scenario(s));
    CHECK(back == s);

    Scenario fisher;
    fisher.kind = ScenarioKind::Fisher;
    fisher.sigma = 0.1;
    fisher.samples = 1000;
    fisher.trials = 500;
    fisher.phi_true = 0.7853981633974483;
    fisher.phi_true_set = true;
    CHECK(parse_scenario(serialize_scenario(fisher)) == fisher);
}

TEST_CASE("overrides mutate and revalidate") {
    Scenario s = parse_scenario("kind = sweep\n");
    apply_override(s, "n", "5");
    CHECK(s.n == 5);
    apply_override(s, "psi", "3.141592653589793");
    CHECK(s.psi == doctest::Approx(3.141592653589793));
    CHECK_THROWS_AS(apply_override(s, "grid_points", "2"), ScenarioError);
    CHECK_THROWS_AS(apply_override(s, "unknown_key", "1"), ScenarioError);
}

TEST_CASE("shipped presets parse and declare the expected kinds") {
    const fs::path presets(CBW_PRESET_PATH);
    const struct {
        const char* name;
        ScenarioKind kind;
    } expected[] = {{"fig2-left", ScenarioKind::Sweep},   {"fig2-right", ScenarioKind::Sweep},
                    {"fig3a", ScenarioKind::Time},        {"fig3b", ScenarioKind::Time},
                    {"fig3c", ScenarioKind::Time},        {"fig3d", ScenarioKind::Time}};
    for (const auto& p : expected) {
        const auto path = presets / (std::string(p.name) + ".scn");
        INFO(path.string());
        CHECK(fs::exists(path));
        const Scenario s = parse_scenario(slurp(path));
        CHECK(s.kind == p.kind);
    }
}

TEST_CASE("scenario mapping to simulation inputs") {
    Scenario s = parse_scenario(
        "kind = time\nn = 2\ndelta_f = 1, -1\ninitial_phase = 0.5, 0.25\n"
        "transmission = control 1 1 0.5\ntransmission = dummy 0 0.9 1\n"
        "bs_deviation = 0.01\nphase_jitter = 0.2\nseed = 9\n");
    const AomConfig cfg = aom_config_from(s);
    CHECK(cfg.mzis.size() == 2);
    CHECK(cfg.mzis[0].f_upper_hz == doctest::Approx(80e6 + 1.0));
    CHECK(cfg.mzis[1].f_upper_hz == doctest::Approx(80e6 - 1.0));
    CHECK(cfg.mzis[1].initial_phase == doctest::Approx(0.25));

    const ImperfectionModel imp = imperfections_from(s);
    CHECK(imp.rng_seed == 9);
    CHECK(imp.bs_reflectivity_deviation == doctest::Approx(0.01));
    CHECK(imp.arm_transmissions.at(2).second == doctest::Approx(0.5));  // control 1 -> block 2
    CHECK(imp.arm_transmissions.at(1).first == doctest::Approx(0.9));   // dummy 0 -> block 1
}

TEST_CASE("run writes artifacts plus manifest and is byte-reproducible") {
    Scenario s = parse_scenario("kind = sweep\nn = 2\npsi = 0\ngrid_points = 256\n");

    const fs::path dir1 = fresh_dir("cbw-run-a");
    const fs::path dir2 = fresh_dir("cbw-run-b");
    s.output_dir = dir1.string();
    const RunOutcome first = run_scenario(s);
    CHECK(first.exit_code == 0);
    CHECK(fs::exists(dir1 / "fringe.csv"));
    CHECK(fs::exists(dir1 / "manifest.json"));

    s.output_dir = dir2.string();
    const RunOutcome second = run_scenario(s);
    CHECK(second.exit_code == 0);

    CHECK(slurp(dir1 / "fringe.csv") == slurp(dir2 / "fringe.csv"));
    CHECK(without_timestamp(slurp(dir1 / "manifest.json")) ==
          without_timestamp(slurp(dir2 / "manifest.json")));

    const std::string manifest = slurp(dir1 / "manifest.json");
    CHECK(manifest.find("fringe.csv") != std::string::npos);
    CHECK(manifest.find("\"seed\"") != std::string::npos);

    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("fisher and compare runs produce their reports") {
    Scenario fisher = parse_scenario("kind = fisher\nn = 2\ntrials = 50\nsamples = 100\n");
    const fs::path dir = fresh_dir("cbw-run-fisher");
    fisher.output_dir = dir.string();
    CHECK(run_scenario(fisher).exit_code == 0);
    const std::string report = slurp(dir / "fisher.json");
    for (const char* field : {"\"model\"", "\"M\"", "\"trials\"", "\"fisher\"", "\"crlb\"",
                              "\"empirical_std\"", "\"ratio\"", "\"seed\""})
        CHECK(report.find(field) != std::string::npos);
    fs::remove_all(dir);

    Scenario compare = parse_scenario("kind = compare-pbw\nn = 2\nweights = 0.3, 0.7\n");
    const fs::path cdir = fresh_dir("cbw-run-compare");
    compare.output_dir = cdir.string();
    CHECK(run_scenario(compare).exit_code == 0);
    CHECK(fs::exists(cdir / "compare.csv"));
    CHECK(fs::exists(cdir / "compare.json"));
    fs::remove_all(cdir);
}

TEST_CASE("unwritable output directory yields exit 4") {
    Scenario s = parse_scenario("kind = sweep\ngrid_points = 16\n");
    s.output_dir = "/proc/cbw-cannot-write-here";
    const RunOutcome outcome = run_scenario(s);
    CHECK(outcome.exit_code == 4);
}

TEST_CASE("command-line interface smoke") {
    const std::string cli = CBW_CLI_PATH;
    if (!fs::exists(cli)) return;  // binary not built yet

    const fs::path dir = fresh_dir("cbw-cli-out");
    const std::string ok = cli + " sweep --set n=2 --set grid_points=64 --out " + dir.string() +
                           " > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(ok.c_str())) == 0);
    CHECK(fs::exists(dir / "fringe.csv"));

    const std::string bad_key =
        cli + " sweep --set wavelength=3 --out " + dir.string() + " > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(bad_key.c_str())) == 2);

    const std::string bad_value = cli + " sweep --set n=0 > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(bad_value.c_str())) == 2);

    const std::string preset = cli + " time --preset fig3a --preset-dir " CBW_PRESET_PATH
                               " --out " + dir.string() + "-trace > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(preset.c_str())) == 0);
    CHECK(fs::exists(fs::path(dir.string() + "-trace") / "trace.csv"));

    fs::remove_all(dir);
    fs::remove_all(dir.string() + "-trace");
}
