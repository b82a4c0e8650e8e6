/**
 * @file scenario.hpp
 * @brief Flat key-value scenario files. A scenario fully determines every
 *        output artifact byte-for-byte: all randomness flows from its
 *        single seed through named substreams.
 */

#ifndef CBW_SCENARIO_HPP
#define CBW_SCENARIO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cbw/metrology.hpp"
#include "cbw/time_domain.hpp"

namespace cbw {

enum class ScenarioKind { Sweep, Time, Fisher, Harmonics, Calibrate, ComparePbw };

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from(const std::string& name);

struct TransmissionEntry {
    BlockKind kind = BlockKind::Control;
    int ordinal = 0;
    double t_upper = 1.0, t_lower = 1.0;

    friend bool operator==(const TransmissionEntry&, const TransmissionEntry&) = default;
};

struct Scenario {
    ScenarioKind kind = ScenarioKind::Sweep;
    std::uint64_t seed = 0;
    std::string output_dir = "out";

    // chain
    int n = 2;
    double psi = 0.0;
    int grid_points = 1024;

    // time domain
    double duration_s = 12.0;
    double sample_rate_hz = 100.0;
    double carrier_hz = 80e6;
    std::vector<double> delta_f_hz = {1.0, -1.0};
    std::vector<double> initial_phase;  ///< defaults to zeros
    std::vector<Event> events;
    std::vector<TransmissionEntry> transmissions;
    double bs_deviation = 0.0;
    double phase_jitter = 0.0;

    // fringe signal model
    double mu = 1.0, a = 1.0, b = 1.0, phi0 = 0.0, sigma = 0.1;
    int samples = 1000;
    int trials = 500;
    double phi_true = 0.0;
    bool phi_true_set = false;  ///< defaults to the quadrature point

    // PBW comparison
    std::vector<double> weights;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct ScenarioError : std::runtime_error {
    int line = 0, column = 0;
    std::string field;

    ScenarioError(std::string msg, int line_, int col, std::string field_)
        : std::runtime_error(std::move(msg)), line(line_), column(col), field(std::move(field_)) {}
};

/// Parses the documented flat format. Unknown keys are rejected; syntax
/// errors carry line/column, semantic errors the offending field name.
Scenario parse_scenario(const std::string& text);

/// Canonical text form; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

/// Applies one "key=value" override (the CLI --set flag).
void apply_override(Scenario& scenario, const std::string& key, const std::string& value);

/// Semantic validation shared by parse and overrides; throws ScenarioError.
void validate_scenario(const Scenario& scenario);

/// AOM table implied by the scenario: lower arms at the carrier, upper arms
/// at carrier + delta_f.
AomConfig aom_config_from(const Scenario& scenario);

ImperfectionModel imperfections_from(const Scenario& scenario);

FringeSignalModel signal_model_from(const Scenario& scenario);

}  // namespace cbw

#endif  // CBW_SCENARIO_HPP
