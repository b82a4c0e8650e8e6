#include "cbw/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace cbw {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(trim(current));
    return parts;
}

std::vector<std::string> words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

double parse_double(const std::string& v, int line, const std::string& field) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ScenarioError("expected a number, got '" + v + "'", line, 0, field);
    }
}

long parse_int(const std::string& v, int line, const std::string& field) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ScenarioError("expected an integer, got '" + v + "'", line, 0, field);
    }
}

std::vector<double> parse_double_list(const std::string& v, int line, const std::string& field) {
    std::vector<double> out;
    for (const auto& part : split(v, ','))
        if (!part.empty()) out.push_back(parse_double(part, line, field));
    if (out.empty()) throw ScenarioError("expected a comma-separated list", line, 0, field);
    return out;
}

Arm parse_arm(const std::string& v, int line, const std::string& field) {
    if (v == "upper") return Arm::Upper;
    if (v == "lower") return Arm::Lower;
    throw ScenarioError("expected 'upper' or 'lower', got '" + v + "'", line, 0, field);
}

BlockKind parse_block_kind(const std::string& v, int line, const std::string& field) {
    if (v == "control") return BlockKind::Control;
    if (v == "dummy") return BlockKind::Dummy;
    throw ScenarioError("expected 'control' or 'dummy', got '" + v + "'", line, 0, field);
}

Event parse_event(const std::string& v, int line) {
    const auto w = words(v);
    if (w.size() < 2) throw ScenarioError("event needs '<time> <action> ...'", line, 0, "event");
    Event e;
    e.time = parse_double(w[0], line, "event");
    const std::string& action = w[1];
    if (action == "block" || action == "unblock") {
        if (w.size() != 5)
            throw ScenarioError("expected '<t> " + action + " <control|dummy> <ordinal> <arm>'",
                                line, 0, "event");
        e.action = action == "block" ? EventAction::BlockArm : EventAction::UnblockArm;
        e.target = parse_block_kind(w[2], line, "event");
        e.index = static_cast<int>(parse_int(w[3], line, "event"));
        e.arm = parse_arm(w[4], line, "event");
    } else if (action == "set-psi") {
        if (w.size() != 3) throw ScenarioError("expected '<t> set-psi <value>'", line, 0, "event");
        e.action = EventAction::SetDummyPhase;
        e.value = parse_double(w[2], line, "event");
    } else if (action == "set-upper-freq") {
        if (w.size() != 4)
            throw ScenarioError("expected '<t> set-upper-freq <mzi> <hz>'", line, 0, "event");
        e.action = EventAction::SetUpperFrequency;
        e.index = static_cast<int>(parse_int(w[2], line, "event"));
        e.value = parse_double(w[3], line, "event");
    } else {
        throw ScenarioError("unknown event action '" + action + "'", line, 0, "event");
    }
    return e;
}

TransmissionEntry parse_transmission(const std::string& v, int line) {
    const auto w = words(v);
    if (w.size() != 4)
        throw ScenarioError("expected '<control|dummy> <ordinal> <t_upper> <t_lower>'", line, 0,
                            "transmission");
    TransmissionEntry t;
    t.kind = parse_block_kind(w[0], line, "transmission");
    t.ordinal = static_cast<int>(parse_int(w[1], line, "transmission"));
    t.t_upper = parse_double(w[2], line, "transmission");
    t.t_lower = parse_double(w[3], line, "transmission");
    return t;
}

void apply_key(Scenario& s, const std::string& key, const std::string& value, int line) {
    if (key == "kind") {
        try {
            s.kind = scenario_kind_from(value);
        } catch (const std::exception& e) {
            throw ScenarioError(e.what(), line, 0, "kind");
        }
    } else if (key == "seed") {
        try {
            std::size_t pos = 0;
            s.seed = std::stoull(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ScenarioError("expected an unsigned integer, got '" + value + "'", line, 0, key);
        }
    } else if (key == "out") {
        s.output_dir = value;
    } else if (key == "n") {
        s.n = static_cast<int>(parse_int(value, line, key));
    } else if (key == "psi") {
        s.psi = parse_double(value, line, key);
    } else if (key == "grid_points") {
        s.grid_points = static_cast<int>(parse_int(value, line, key));
    } else if (key == "duration") {
        s.duration_s = parse_double(value, line, key);
    } else if (key == "sample_rate") {
        s.sample_rate_hz = parse_double(value, line, key);
    } else if (key == "carrier") {
        s.carrier_hz = parse_double(value, line, key);
    } else if (key == "delta_f") {
        s.delta_f_hz = parse_double_list(value, line, key);
    } else if (key == "initial_phase") {
        s.initial_phase = parse_double_list(value, line, key);
    } else if (key == "event") {
        s.events.push_back(parse_event(value, line));
    } else if (key == "transmission") {
        s.transmissions.push_back(parse_transmission(value, line));
    } else if (key == "bs_deviation") {
        s.bs_deviation = parse_double(value, line, key);
    } else if (key == "phase_jitter") {
        s.phase_jitter = parse_double(value, line, key);
    } else if (key == "mu") {
        s.mu = parse_double(value, line, key);
    } else if (key == "a") {
        s.a = parse_double(value, line, key);
    } else if (key == "b") {
        s.b = parse_double(value, line, key);
    } else if (key == "phi0") {
        s.phi0 = parse_double(value, line, key);
    } else if (key == "sigma") {
        s.sigma = parse_double(value, line, key);
    } else if (key == "samples") {
        s.samples = static_cast<int>(parse_int(value, line, key));
    } else if (key == "trials") {
        s.trials = static_cast<int>(parse_int(value, line, key));
    } else if (key == "phi_true") {
        s.phi_true = parse_double(value, line, key);
        s.phi_true_set = true;
    } else if (key == "weights") {
        s.weights = parse_double_list(value, line, key);
    } else {
        throw ScenarioError("unknown key '" + key + "'", line, 0, key);
    }
}

}  // namespace

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::Sweep: return "sweep";
        case ScenarioKind::Time: return "time";
        case ScenarioKind::Fisher: return "fisher";
        case ScenarioKind::Harmonics: return "harmonics";
        case ScenarioKind::Calibrate: return "calibrate";
        case ScenarioKind::ComparePbw: return "compare-pbw";
    }
    return "?";
}

ScenarioKind scenario_kind_from(const std::string& name) {
    if (name == "sweep") return ScenarioKind::Sweep;
    if (name == "time") return ScenarioKind::Time;
    if (name == "fisher") return ScenarioKind::Fisher;
    if (name == "harmonics") return ScenarioKind::Harmonics;
    if (name == "calibrate") return ScenarioKind::Calibrate;
    if (name == "compare-pbw") return ScenarioKind::ComparePbw;
    throw std::runtime_error("unknown scenario kind '" + name + "'");
}

Scenario parse_scenario(const std::string& text) {
    Scenario s;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const auto comment = raw.find('#');
        if (comment != std::string::npos) raw = raw.substr(0, comment);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ScenarioError("expected 'key = value'", line,
                                static_cast<int>(stripped.size()), "");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw ScenarioError("missing key before '='", line, 1, "");
        if (value.empty())
            throw ScenarioError("missing value for '" + key + "'", line,
                                static_cast<int>(eq + 2), key);
        apply_key(s, key, value, line);
    }
    validate_scenario(s);
    return s;
}

void apply_override(Scenario& s, const std::string& key, const std::string& value) {
    apply_key(s, key, value, 0);
    validate_scenario(s);
}

void validate_scenario(const Scenario& s) {
    if (s.n < 1) throw ScenarioError("n must be >= 1", 0, 0, "n");
    if (s.grid_points < 8) throw ScenarioError("grid_points must be >= 8", 0, 0, "grid_points");
    if (!(s.duration_s > 0.0)) throw ScenarioError("duration must be > 0", 0, 0, "duration");
    if (!(s.sample_rate_hz > 0.0))
        throw ScenarioError("sample_rate must be > 0", 0, 0, "sample_rate");
    if (s.samples < 1) throw ScenarioError("samples must be >= 1", 0, 0, "samples");
    if (s.trials < 2) throw ScenarioError("trials must be >= 2", 0, 0, "trials");
    if (!(s.sigma >= 0.0)) throw ScenarioError("sigma must be >= 0", 0, 0, "sigma");
    if (!(s.mu > 0.0)) throw ScenarioError("mu must be > 0", 0, 0, "mu");
    if (!s.delta_f_hz.empty() && s.kind == ScenarioKind::Time &&
        s.delta_f_hz.size() != static_cast<std::size_t>(s.n))
        throw ScenarioError("delta_f needs one entry per MZI", 0, 0, "delta_f");
    if (!s.initial_phase.empty() && s.initial_phase.size() != static_cast<std::size_t>(s.n))
        throw ScenarioError("initial_phase needs one entry per MZI", 0, 0, "initial_phase");
    double prev = -1.0;
    for (const auto& e : s.events) {
        if (!(e.time > prev))
            throw ScenarioError("event times must be strictly increasing", 0, 0, "event");
        prev = e.time;
    }
    if (s.kind == ScenarioKind::ComparePbw) {
        if (s.weights.empty()) throw ScenarioError("weights are required", 0, 0, "weights");
        double sum = 0.0;
        for (double w : s.weights) {
            if (w < 0.0) throw ScenarioError("weights must be nonnegative", 0, 0, "weights");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw ScenarioError("weights must sum to 1", 0, 0, "weights");
        if (s.weights.size() != static_cast<std::size_t>(s.n))
            throw ScenarioError("weights need one entry per harmonic up to n", 0, 0, "weights");
    }
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string event_text(const Event& e) {
    std::ostringstream os;
    os << fmt(e.time) << ' ';
    switch (e.action) {
        case EventAction::BlockArm:
        case EventAction::UnblockArm:
            os << (e.action == EventAction::BlockArm ? "block " : "unblock ")
               << (e.target == BlockKind::Control ? "control " : "dummy ") << e.index << ' '
               << (e.arm == Arm::Upper ? "upper" : "lower");
            break;
        case EventAction::SetDummyPhase:
            os << "set-psi " << fmt(e.value);
            break;
        case EventAction::SetUpperFrequency:
            os << "set-upper-freq " << e.index << ' ' << fmt(e.value);
            break;
    }
    return os.str();
}

std::string list_text(const std::vector<double>& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out += ", ";
        out += fmt(v[k]);
    }
    return out;
}

}  // namespace

AomConfig aom_config_from(const Scenario& s) {
    AomConfig cfg;
    cfg.mzis.resize(static_cast<std::size_t>(s.n));
    for (int j = 0; j < s.n; ++j) {
        auto& m = cfg.mzis[static_cast<std::size_t>(j)];
        m.f_lower_hz = s.carrier_hz;
        const double df = j < static_cast<int>(s.delta_f_hz.size())
                              ? s.delta_f_hz[static_cast<std::size_t>(j)]
                              : 0.0;
        m.f_upper_hz = s.carrier_hz + df;
        m.initial_phase = j < static_cast<int>(s.initial_phase.size())
                              ? s.initial_phase[static_cast<std::size_t>(j)]
                              : 0.0;
    }
    return cfg;
}

ImperfectionModel imperfections_from(const Scenario& s) {
    ImperfectionModel imp;
    imp.bs_reflectivity_deviation = s.bs_deviation;
    imp.phase_jitter_sigma = s.phase_jitter;
    imp.rng_seed = s.seed;
    for (const auto& t : s.transmissions) {
        const int block = t.kind == BlockKind::Control ? 2 * t.ordinal : 2 * t.ordinal + 1;
        imp.arm_transmissions[block] = {t.t_upper, t.t_lower};
    }
    return imp;
}

FringeSignalModel signal_model_from(const Scenario& s) {
    FringeSignalModel m;
    m.mu = s.mu;
    m.a = s.a;
    m.b = s.b;
    m.phi0 = s.phi0;
    m.n_fold = s.n;
    m.sigma = s.sigma;
    return m;
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream os;
    os << "kind = " << to_string(s.kind) << '\n';
    os << "seed = " << s.seed << '\n';
    os << "out = " << s.output_dir << '\n';
    os << "n = " << s.n << '\n';
    os << "psi = " << fmt(s.psi) << '\n';
    os << "grid_points = " << s.grid_points << '\n';
    os << "duration = " << fmt(s.duration_s) << '\n';
    os << "sample_rate = " << fmt(s.sample_rate_hz) << '\n';
    os << "carrier = " << fmt(s.carrier_hz) << '\n';
    if (!s.delta_f_hz.empty()) os << "delta_f = " << list_text(s.delta_f_hz) << '\n';
    if (!s.initial_phase.empty()) os << "initial_phase = " << list_text(s.initial_phase) << '\n';
    for (const auto& e : s.events) os << "event = " << event_text(e) << '\n';
    for (const auto& t : s.transmissions)
        os << "transmission = " << (t.kind == BlockKind::Control ? "control " : "dummy ")
           << t.ordinal << ' ' << fmt(t.t_upper) << ' ' << fmt(t.t_lower) << '\n';
    os << "bs_deviation = " << fmt(s.bs_deviation) << '\n';
    os << "phase_jitter = " << fmt(s.phase_jitter) << '\n';
    os << "mu = " << fmt(s.mu) << '\n';
    os << "a = " << fmt(s.a) << '\n';
    os << "b = " << fmt(s.b) << '\n';
    os << "phi0 = " << fmt(s.phi0) << '\n';
    os << "sigma = " << fmt(s.sigma) << '\n';
    os << "samples = " << s.samples << '\n';
    os << "trials = " << s.trials << '\n';
    if (s.phi_true_set) os << "phi_true = " << fmt(s.phi_true) << '\n';
    if (!s.weights.empty()) os << "weights = " << list_text(s.weights) << '\n';
    return os.str();
}

}  // namespace cbw
