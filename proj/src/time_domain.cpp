#include "cbw/time_domain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "cbw/rng.hpp"
#include "cbw/spectral.hpp"

namespace cbw {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::size_t block_index_for(const ChainSpec& spec, BlockKind kind, int ordinal) {
    int seen = 0;
    for (std::size_t k = 0; k < spec.blocks.size(); ++k) {
        if (spec.blocks[k].kind != kind) continue;
        if (seen == ordinal) return k;
        ++seen;
    }
    throw std::domain_error("event references a nonexistent block");
}
}  // namespace

std::vector<double> phases_at(double t, const AomConfig& cfg) {
    std::vector<double> phases(cfg.mzis.size());
    for (std::size_t j = 0; j < cfg.mzis.size(); ++j)
        phases[j] = kTwoPi * cfg.mzis[j].delta_f() * t + cfg.mzis[j].initial_phase;
    return phases;
}

TimeTrace simulate_trace(const AomConfig& cfg, const EventSchedule& schedule,
                         const ImperfectionModel& imperfections, double duration_s,
                         double sample_rate_hz, const CouplingGeometry& geometry, double psi,
                         PhaseConvention conv) {
    if (!(duration_s > 0.0)) throw std::domain_error("simulate_trace: duration must be > 0");
    if (!(sample_rate_hz > 0.0)) throw std::domain_error("simulate_trace: sample rate must be > 0");
    const int n = static_cast<int>(cfg.mzis.size());
    if (n < 1) throw std::domain_error("simulate_trace: need at least one MZI");

    double max_offset = 0.0;
    for (const auto& m : cfg.mzis) max_offset = std::max(max_offset, std::abs(m.delta_f()));
    if (max_offset > 0.0 && sample_rate_hz < 20.0 * n * max_offset)
        throw std::domain_error("simulate_trace: sample rate below 20x the expected modulation");

    ChainSpec spec = build_cbw_chain(n, 0.0, psi, geometry);
    spec.conv = conv;
    spec.bs_deviation = imperfections.bs_reflectivity_deviation;
    for (const auto& [index, t_pair] : imperfections.arm_transmissions) {
        if (index < 0 || static_cast<std::size_t>(index) >= spec.blocks.size())
            throw std::domain_error("imperfection references a nonexistent block");
        spec.blocks[static_cast<std::size_t>(index)].t_upper = t_pair.first;
        spec.blocks[static_cast<std::size_t>(index)].t_lower = t_pair.second;
    }

    // Validate the schedule up front.
    double prev = -1.0;
    for (const auto& e : schedule.events) {
        if (!(e.time > prev))
            throw std::domain_error("simulate_trace: event times must be strictly increasing");
        prev = e.time;
        if (e.action == EventAction::BlockArm || e.action == EventAction::UnblockArm)
            (void)block_index_for(spec, e.target, e.index);
        if (e.action == EventAction::SetUpperFrequency && (e.index < 0 || e.index >= n))
            throw std::domain_error("simulate_trace: frequency event references a bad MZI");
    }

    std::vector<Rng> jitter;
    jitter.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        jitter.push_back(substream(imperfections.rng_seed, "phase-jitter", static_cast<std::uint64_t>(j)));

    AomConfig live = cfg;
    const auto total = static_cast<std::size_t>(std::floor(duration_s * sample_rate_hz));
    TimeTrace trace;
    trace.sample_rate_hz = sample_rate_hz;
    trace.t.resize(total);
    trace.i3.resize(total);
    trace.i4.resize(total);
    trace.segment_id.resize(total);

    std::size_t next_event = 0;
    int segment = 0;
    for (std::size_t k = 0; k < total; ++k) {
        const double t = static_cast<double>(k) / sample_rate_hz;
        while (next_event < schedule.events.size() && schedule.events[next_event].time <= t) {
            const Event& e = schedule.events[next_event];
            switch (e.action) {
                case EventAction::BlockArm:
                    spec.blocks[block_index_for(spec, e.target, e.index)].blocked = e.arm;
                    break;
                case EventAction::UnblockArm:
                    spec.blocks[block_index_for(spec, e.target, e.index)].blocked.reset();
                    break;
                case EventAction::SetDummyPhase:
                    for (auto& b : spec.blocks)
                        if (b.kind == BlockKind::Dummy) b.phase = e.value;
                    break;
                case EventAction::SetUpperFrequency:
                    live.mzis[static_cast<std::size_t>(e.index)].f_upper_hz = e.value;
                    break;
            }
            ++segment;
            ++next_event;
        }

        const auto phases = phases_at(t, live);
        int control = 0;
        for (auto& b : spec.blocks) {
            if (b.kind != BlockKind::Control) continue;
            double ph = phases[static_cast<std::size_t>(control)];
            if (imperfections.phase_jitter_sigma > 0.0)
                ph += imperfections.phase_jitter_sigma *
                      jitter[static_cast<std::size_t>(control)].next_normal();
            b.phase = ph;
            ++control;
        }

        const FieldState out = propagate(spec);
        trace.t[k] = t;
        trace.i3[k] = std::norm(out.u);
        trace.i4[k] = std::norm(out.l);
        trace.segment_id[k] = segment;
    }
    return trace;
}

DominantFrequency dominant_frequency(const TimeTrace& trace, double t0, double t1) {
    if (!(t1 > t0)) throw std::domain_error("dominant_frequency: empty window");
    std::vector<double> window;
    for (std::size_t k = 0; k < trace.t.size(); ++k)
        if (trace.t[k] >= t0 && trace.t[k] < t1) window.push_back(trace.i3[k]);
    if (window.size() < 8) throw std::domain_error("dominant_frequency: window too short");

    const SpectralPeak peak = dominant_bin(window, /*hann=*/true);
    DominantFrequency result;
    if (!peak.significant) {
        result.no_peak = true;
        return result;
    }
    const double span = static_cast<double>(window.size()) / trace.sample_rate_hz;
    result.hz = peak.bin / span;
    return result;
}

double visibility(const std::vector<double>& values, double robust_fraction) {
    if (values.empty()) throw std::domain_error("visibility: empty input");
    if (robust_fraction < 0.0 || robust_fraction > 0.5)
        throw std::domain_error("visibility: fraction must be in [0, 0.5]");
    bool all_zero = true;
    for (double v : values)
        if (v != 0.0) all_zero = false;
    if (all_zero) throw std::domain_error("visibility: all-zero input");

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const auto k = std::max<std::size_t>(
        1, static_cast<std::size_t>(robust_fraction * static_cast<double>(sorted.size())));
    const double lo = std::accumulate(sorted.begin(), sorted.begin() + static_cast<long>(k), 0.0) /
                      static_cast<double>(k);
    const double hi = std::accumulate(sorted.end() - static_cast<long>(k), sorted.end(), 0.0) /
                      static_cast<double>(k);
    if (hi + lo == 0.0) throw std::domain_error("visibility: zero total intensity");
    return (hi - lo) / (hi + lo);
}

void write_trace_csv(const TimeTrace& trace, std::ostream& os) {
    os << "t,i3,i4,segment_id\n";
    char buf[160];
    for (std::size_t k = 0; k < trace.t.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", trace.t[k], trace.i3[k],
                      trace.i4[k], trace.segment_id[k]);
        os << buf;
    }
}

}  // namespace cbw
