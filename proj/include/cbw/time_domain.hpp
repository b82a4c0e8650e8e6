/**
 * @file time_domain.hpp
 * @brief AOM-driven time traces: per-MZI frequency offsets turn the arm
 *        phase into phi_j(t) = 2 pi (f_upper - f_lower) t + phi_j(0); an
 *        event schedule blocks arms, toggles the dummy phase or retunes an
 *        AOM mid-run. Modulation frequency and fringe visibility are
 *        extracted from the sampled intensities.
 */

#ifndef CBW_TIME_DOMAIN_HPP
#define CBW_TIME_DOMAIN_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "cbw/chain.hpp"

namespace cbw {

struct MziAom {
    double f_lower_hz = 80e6;
    double f_upper_hz = 80e6;
    double initial_phase = 0.0;

    double delta_f() const { return f_upper_hz - f_lower_hz; }
};

struct AomConfig {
    std::vector<MziAom> mzis;  ///< one entry per control MZI
};

/// phi_j(t) for every control MZI.
std::vector<double> phases_at(double t, const AomConfig& cfg);

enum class EventAction { BlockArm, UnblockArm, SetDummyPhase, SetUpperFrequency };

struct Event {
    double time = 0.0;
    EventAction action = EventAction::BlockArm;
    BlockKind target = BlockKind::Dummy;  ///< BlockArm / UnblockArm
    int index = 0;                        ///< ordinal among blocks of that kind, or MZI index
    Arm arm = Arm::Upper;
    double value = 0.0;                   ///< psi or frequency in Hz

    friend bool operator==(const Event&, const Event&) = default;
};

struct EventSchedule {
    std::vector<Event> events;  ///< times strictly increasing
};

struct ImperfectionModel {
    std::map<int, std::pair<double, double>> arm_transmissions;  ///< block index -> (t_u, t_l)
    double bs_reflectivity_deviation = 0.0;
    double phase_jitter_sigma = 0.0;
    std::uint64_t rng_seed = 0;

    bool ideal() const {
        return arm_transmissions.empty() && bs_reflectivity_deviation == 0.0 &&
               phase_jitter_sigma == 0.0;
    }
};

struct TimeTrace {
    std::vector<double> t;
    std::vector<double> i3, i4;
    std::vector<int> segment_id;  ///< increments whenever an event fires
    double sample_rate_hz = 0.0;
};

/// Samples the chain over [0, duration). Events apply atomically between
/// samples (an event at time T affects every sample with t >= T).
/// Deterministic for a fixed ImperfectionModel seed.
/// Throws std::domain_error for bad durations/rates or a schedule that
/// references a nonexistent block or is not strictly increasing in time.
TimeTrace simulate_trace(const AomConfig& cfg, const EventSchedule& schedule,
                         const ImperfectionModel& imperfections, double duration_s,
                         double sample_rate_hz, const CouplingGeometry& geometry,
                         double psi = 0.0, PhaseConvention conv = PhaseConvention::Symmetric);

struct DominantFrequency {
    double hz = 0.0;
    bool no_peak = false;  ///< set when the windowed spectrum has no significant line
};

/// Hann-windowed DFT peak of the mean-removed i3 over [t0, t1), with
/// parabolic interpolation. Throws std::domain_error when the window holds
/// fewer than 8 samples.
DominantFrequency dominant_frequency(const TimeTrace& trace, double t0, double t1);

/// (Imax - Imin)/(Imax + Imin). Extrema are the means of the top and
/// bottom robust_fraction of the samples; a fraction of 0 degenerates to
/// the strict extrema. Throws std::domain_error on all-zero input.
double visibility(const std::vector<double>& values, double robust_fraction = 0.02);

/// CSV with header "t,i3,i4,segment_id", 17 significant digits.
void write_trace_csv(const TimeTrace& trace, std::ostream& os);

}  // namespace cbw

#endif  // CBW_TIME_DOMAIN_HPP
