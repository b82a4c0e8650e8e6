#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cbw/time_domain.hpp"

using namespace cbw;

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

AomConfig standard_pair(double initial0 = 0.0, double initial1 = 0.0) {
    AomConfig cfg;
    cfg.mzis = {{80e6, 80.000001e6, initial0}, {80e6, 79.999999e6, initial1}};
    return cfg;
}

const CouplingGeometry& geometry() { return calibrated_geometry(); }

}  // namespace

TEST_CASE("phases follow the AOM offsets") {
    AomConfig cfg;
    cfg.mzis = {{80e6, 80e6 + 1.0, 0.0}};
    CHECK(phases_at(0.25, cfg)[0] == doctest::Approx(kPi / 2.0).epsilon(1e-12));

    cfg.mzis[0].f_upper_hz = 80e6;  // zero offset: constant phase
    cfg.mzis[0].initial_phase = 1.25;
    CHECK(phases_at(0.0, cfg)[0] == doctest::Approx(1.25));
    CHECK(phases_at(9.0, cfg)[0] == doctest::Approx(1.25));

    const auto pair = phases_at(0.5, standard_pair());
    CHECK(pair[0] == doctest::Approx(2.0 * kPi * 0.5).epsilon(1e-9));
    CHECK(pair[1] == doctest::Approx(-2.0 * kPi * 0.5).epsilon(1e-9));
}

TEST_CASE("ideal trace equals the fringe sweep at phi(t)") {
    const auto trace =
        simulate_trace(standard_pair(), {}, {}, 2.0, 100.0, geometry(), 0.0);
    for (std::size_t k = 0; k < trace.t.size(); k += 17) {
        const double phi = 2.0 * kPi * trace.t[k];
        auto spec = build_cbw_chain(2, phi, 0.0, geometry());
        const FieldState out = propagate(spec);
        CHECK(std::abs(trace.i3[k] - std::norm(out.u)) < 1e-12);
        CHECK(std::abs(trace.i4[k] - std::norm(out.l)) < 1e-12);
    }
}

TEST_CASE("doubled modulation and dummy-blocking switch") {
    EventSchedule schedule;
    schedule.events = {{4.0, EventAction::BlockArm, BlockKind::Dummy, 0, Arm::Upper, 0.0},
                       {8.0, EventAction::UnblockArm, BlockKind::Dummy, 0, Arm::Upper, 0.0}};
    const auto trace = simulate_trace(standard_pair(kPi / 2.0, kPi / 2.0), schedule, {}, 12.0,
                                      100.0, geometry(), 0.0);

    const auto seg1 = dominant_frequency(trace, 0.0, 4.0);
    const auto seg2 = dominant_frequency(trace, 4.0, 8.0);
    const auto seg3 = dominant_frequency(trace, 8.0, 12.0);
    const double bin = 1.0 / 4.0;  // 4 s windows
    CHECK_FALSE(seg1.no_peak);
    CHECK_FALSE(seg2.no_peak);
    CHECK_FALSE(seg3.no_peak);
    CHECK(std::abs(seg1.hz - 2.0) <= bin);
    CHECK(std::abs(seg2.hz - 1.0) <= bin);
    CHECK(std::abs(seg3.hz - 2.0) <= bin);

    // segment ids advance with the events
    CHECK(trace.segment_id.front() == 0);
    CHECK(trace.segment_id.back() == 2);
}

TEST_CASE("dummy phase toggle freezes and restores the modulation") {
    EventSchedule schedule;
    schedule.events = {{4.0, EventAction::SetDummyPhase, BlockKind::Dummy, 0, Arm::Upper, kPi},
                       {8.0, EventAction::SetDummyPhase, BlockKind::Dummy, 0, Arm::Upper, 0.0}};
    const auto trace =
        simulate_trace(standard_pair(), schedule, {}, 12.0, 100.0, geometry(), 0.0);

    // frozen stretch: variance of i4 below 1e-10
    double mean = 0.0;
    int count = 0;
    for (std::size_t k = 0; k < trace.t.size(); ++k)
        if (trace.t[k] >= 4.0 && trace.t[k] < 8.0) {
            mean += trace.i4[k];
            ++count;
        }
    mean /= count;
    double var = 0.0;
    for (std::size_t k = 0; k < trace.t.size(); ++k)
        if (trace.t[k] >= 4.0 && trace.t[k] < 8.0)
            var += (trace.i4[k] - mean) * (trace.i4[k] - mean);
    var /= count;
    CHECK(var < 1e-10);

    const auto frozen = dominant_frequency(trace, 4.0, 8.0);
    CHECK(frozen.no_peak);
    CHECK(frozen.hz == 0.0);

    const auto restored = dominant_frequency(trace, 8.0, 12.0);
    CHECK_FALSE(restored.no_peak);
    CHECK(std::abs(restored.hz - 2.0) <= 0.25);
}

TEST_CASE("matching the detuning signs freezes the pair") {
    AomConfig cfg = standard_pair();
    cfg.mzis[1].f_upper_hz = 80.000001e6;  // same sign as the first MZI
    const auto trace = simulate_trace(cfg, {}, {}, 4.0, 100.0, geometry(), 0.0);
    const auto peak = dominant_frequency(trace, 0.0, 4.0);
    CHECK(peak.no_peak);

    // i4 stays dark the whole segment
    for (double v : trace.i4) CHECK(v < 1e-20);
}

TEST_CASE("frequency multiplication law for N = 1, 2, 3") {
    for (int n = 1; n <= 3; ++n) {
        AomConfig cfg;
        for (int j = 0; j < n; ++j) {
            const double sign = j % 2 == 0 ? 1.0 : -1.0;
            cfg.mzis.push_back({80e6, 80e6 + sign * 1.0, 0.0});
        }
        const auto trace = simulate_trace(cfg, {}, {}, 8.0, 100.0, geometry(), 0.0);
        const auto peak = dominant_frequency(trace, 0.0, 8.0);
        CHECK_FALSE(peak.no_peak);
        CHECK(std::abs(peak.hz - n) <= 1.0 / 8.0);
    }
}

TEST_CASE("traces are deterministic and ideal imperfections change nothing") {
    ImperfectionModel noisy;
    noisy.phase_jitter_sigma = 0.2;
    noisy.rng_seed = 77;

    const auto a = simulate_trace(standard_pair(), {}, noisy, 3.0, 100.0, geometry(), 0.0);
    const auto b = simulate_trace(standard_pair(), {}, noisy, 3.0, 100.0, geometry(), 0.0);
    for (std::size_t k = 0; k < a.i3.size(); ++k) {
        CHECK(a.i3[k] == b.i3[k]);  // bit identical
        CHECK(a.i4[k] == b.i4[k]);
    }

    ImperfectionModel ideal;
    ideal.rng_seed = 123;  // seed alone must not matter
    const auto c = simulate_trace(standard_pair(), {}, ideal, 3.0, 100.0, geometry(), 0.0);
    const auto d = simulate_trace(standard_pair(), {}, {}, 3.0, 100.0, geometry(), 0.0);
    for (std::size_t k = 0; k < c.i3.size(); ++k) CHECK(c.i3[k] == d.i3[k]);
}

TEST_CASE("schedule and argument validation") {
    EventSchedule bad_order;
    bad_order.events = {{5.0, EventAction::SetDummyPhase, BlockKind::Dummy, 0, Arm::Upper, 0.0},
                        {4.0, EventAction::SetDummyPhase, BlockKind::Dummy, 0, Arm::Upper, 0.0}};
    CHECK_THROWS_AS(simulate_trace(standard_pair(), bad_order, {}, 2, 100, geometry(), 0),
                    std::domain_error);

    EventSchedule bad_block;
    bad_block.events = {{1.0, EventAction::BlockArm, BlockKind::Dummy, 5, Arm::Upper, 0.0}};
    CHECK_THROWS_AS(simulate_trace(standard_pair(), bad_block, {}, 2, 100, geometry(), 0),
                    std::domain_error);

    CHECK_THROWS_AS(simulate_trace(standard_pair(), {}, {}, -1.0, 100, geometry(), 0),
                    std::domain_error);
    CHECK_THROWS_AS(simulate_trace(standard_pair(), {}, {}, 2.0, 10.0, geometry(), 0),
                    std::domain_error);  // under 20x the expected modulation

    const auto trace = simulate_trace(standard_pair(), {}, {}, 2.0, 100.0, geometry(), 0.0);
    CHECK_THROWS_AS(dominant_frequency(trace, 0.0, 0.01), std::domain_error);
}

TEST_CASE("visibility") {
    // ideal fringe touches 0 and 1: strict extrema give exactly 1
    std::vector<double> fringe(2048);
    for (std::size_t k = 0; k < fringe.size(); ++k)
        fringe[k] = 0.5 * (1.0 + std::cos(2.0 * kPi * k / 256.0));
    CHECK(std::abs(visibility(fringe, 0.0) - 1.0) < 1e-9);
    // the robust default shaves the extreme tails slightly
    CHECK(visibility(fringe) > 0.995);
    CHECK(visibility(fringe) <= 1.0);

    // single-MZI arm imbalance: V = 2t/(1+t^2), analytic two-amplitude case
    const double t = 0.5;
    auto spec = build_cbw_chain(1, 0.0, 0.0, calibrated_geometry());
    spec.blocks[0].t_lower = t;
    const auto scan = sweep_fringe(spec, phi_grid(4096));
    // both ports carry the same contrast for a two-amplitude fringe
    CHECK(std::abs(visibility(scan.i3, 0.0) - 2.0 * t / (1.0 + t * t)) < 1e-9);
    CHECK(std::abs(visibility(scan.i4, 0.0) - 2.0 * t / (1.0 + t * t)) < 1e-9);

    CHECK_THROWS_AS(visibility(std::vector<double>(16, 0.0)), std::domain_error);
    CHECK_THROWS_AS(visibility({}), std::domain_error);
}

TEST_CASE("trace CSV format") {
    const auto trace = simulate_trace(standard_pair(), {}, {}, 0.2, 100.0, geometry(), 0.0);
    std::ostringstream os;
    write_trace_csv(trace, os);
    CHECK(os.str().rfind("t,i3,i4,segment_id\n", 0) == 0);
}
