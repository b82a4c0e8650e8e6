#include "cbw/metrology.hpp"

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
constexpr double kPi = 3.141592653589793238462643383279;
constexpr double kTwoPi = 2.0 * kPi;

void validate(const FringeSignalModel& model) {
    if (model.n_fold < 1) throw std::domain_error("model: N must be >= 1");
    if (!(model.mu > 0.0)) throw std::domain_error("model: mu must be > 0");
    if (model.sigma < 0.0) throw std::domain_error("model: sigma must be >= 0");
    if (std::abs(model.b) > 1.0) throw std::domain_error("model: |b| must be <= 1");
}
}  // namespace

double signal_mean(const FringeSignalModel& model, double phi) {
    return model.mu * (model.a + model.b * std::cos(model.n_fold * phi + model.phi0));
}

double quadrature_phase(const FringeSignalModel& model) {
    return (kPi / 2.0 - model.phi0) / model.n_fold;
}

SampleSet sample_signal(const FringeSignalModel& model, double phi, int m,
                        std::uint64_t seed) {
    validate(model);
    if (m < 1) throw std::domain_error("sample_signal: M must be >= 1");
    SampleSet set;
    set.model = model;
    set.phi_true = phi;
    set.seed = seed;
    set.values.resize(static_cast<std::size_t>(m));
    const double mean = signal_mean(model, phi);
    Rng rng = substream(seed, "samples");
    for (auto& v : set.values) v = mean + model.sigma * rng.next_normal();
    return set;
}

double fisher_information(const FringeSignalModel& model, double phi, int m) {
    validate(model);
    if (m < 1) throw std::domain_error("fisher_information: M must be >= 1");
    if (!(model.sigma > 0.0)) throw std::domain_error("fisher_information: sigma must be > 0");
    const double s = std::sin(model.n_fold * phi + model.phi0);
    const double bmn = model.b * model.mu * model.n_fold;
    return bmn * bmn / (model.sigma * model.sigma) * static_cast<double>(m) * s * s;
}

double crlb_optimal(const FringeSignalModel& model, int m) {
    validate(model);
    if (m < 1) throw std::domain_error("crlb: M must be >= 1");
    if (!(model.sigma > 0.0)) throw std::domain_error("crlb: sigma must be > 0");
    if (model.b == 0.0) throw std::domain_error("crlb: b = 0 gives an unbounded bound");
    return model.sigma /
           (model.mu * std::abs(model.b) * model.n_fold * std::sqrt(static_cast<double>(m)));
}

double crlb_at(const FringeSignalModel& model, double phi, int m) {
    const double info = fisher_information(model, phi, m);
    if (info <= 0.0)
        throw std::domain_error("crlb_at: zero Fisher information, bound unbounded");
    return 1.0 / std::sqrt(info);
}

ResourceReport resource_comparison(int n, const FringeSignalModel& model, int m) {
    if (n < 1) throw std::domain_error("resource_comparison: N must be >= 1");
    FringeSignalModel scaled = model;
    scaled.n_fold = n;
    ResourceReport report;
    report.n = n;
    report.naive_bound = crlb_optimal(scaled, m);
    report.normalized_bound = report.naive_bound * std::sqrt(static_cast<double>(n));
    report.accounting_ratio = 1.0 / std::sqrt(static_cast<double>(n));
    report.beats_snl = false;
    return report;
}

namespace {

/// Least-squares objective is minimized where the fringe mean is closest
/// to the sample mean; everything reduces to the sufficient statistic.
struct MleObjective {
    const FringeSignalModel& model;
    double sample_mean;

    double value(double phi) const {
        const double d = sample_mean - signal_mean(model, phi);
        return d * d;
    }
    double derivative(double phi) const {
        const double arg = model.n_fold * phi + model.phi0;
        const double d = sample_mean - signal_mean(model, phi);
        return 2.0 * d * model.mu * model.b * model.n_fold * std::sin(arg);
    }
    double second_derivative(double phi) const {
        const double arg = model.n_fold * phi + model.phi0;
        const double bmn = model.mu * model.b * model.n_fold;
        const double d = sample_mean - signal_mean(model, phi);
        const double slope = bmn * std::sin(arg);
        return 2.0 * (slope * slope + d * bmn * model.n_fold * std::cos(arg));
    }
};

}  // namespace

double mle_estimate(const FringeSignalModel& model, const std::vector<double>& samples,
                    double phi_min, double phi_max) {
    validate(model);
    if (samples.empty()) throw std::domain_error("mle_estimate: no samples");
    if (model.b == 0.0) throw std::domain_error("mle_estimate: b = 0 is unidentifiable");
    if (!(phi_max > phi_min)) throw std::domain_error("mle_estimate: empty search interval");
    if (phi_max - phi_min >= kTwoPi / model.n_fold)
        throw std::domain_error("mle_estimate: interval spans a full period, estimate ambiguous");

    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) /
                        static_cast<double>(samples.size());
    const MleObjective obj{model, mean};

    constexpr int kGrid = 128;
    const double step = (phi_max - phi_min) / kGrid;
    int best_k = 0;
    double best_val = obj.value(phi_min);
    for (int k = 1; k <= kGrid; ++k) {
        const double v = obj.value(phi_min + step * k);
        if (v < best_val) {
            best_val = v;
            best_k = k;
        }
    }

    // Boundary minimum with the derivative pointing inward stays on the boundary.
    if (best_k == 0 && obj.derivative(phi_min) >= 0.0) return phi_min;
    if (best_k == kGrid && obj.derivative(phi_max) <= 0.0) return phi_max;

    double lo = std::max(phi_min, phi_min + step * (best_k - 1));
    double hi = std::min(phi_max, phi_min + step * (best_k + 1));

    // Safeguarded Newton on the objective derivative, bisecting whenever the
    // step leaves the bracket.
    double glo = obj.derivative(lo);
    double phi = phi_min + step * best_k;
    for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
        const double g = obj.derivative(phi);
        if (g == 0.0) break;
        if ((g < 0.0) == (glo < 0.0)) {
            lo = phi;
            glo = g;
        } else {
            hi = phi;
        }
        double next;
        const double h = obj.second_derivative(phi);
        if (std::abs(h) > 1e-300) {
            next = phi - g / h;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        } else {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - phi) < 1e-11) {
            phi = next;
            break;
        }
        phi = next;
    }
    return std::clamp(phi, phi_min, phi_max);
}

McReport monte_carlo_crlb_check(const FringeSignalModel& model, double phi_true, int m,
                                int trials, std::uint64_t seed) {
    validate(model);
    if (trials < 2) throw std::domain_error("monte_carlo_crlb_check: need at least 2 trials");

    const double period = kTwoPi / model.n_fold;
    const double half = 0.45 * period;
    const double lo = phi_true - half, hi = phi_true + half;

    // Welford accumulation over per-trial substream estimates.
    double mean = 0.0, m2 = 0.0;
    const double fringe_mean = signal_mean(model, phi_true);
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng = substream(seed, "mc-trial", static_cast<std::uint64_t>(trial));
        std::vector<double> samples(static_cast<std::size_t>(m));
        for (auto& v : samples) v = fringe_mean + model.sigma * rng.next_normal();
        const double est = mle_estimate(model, samples, lo, hi);
        const double delta = est - mean;
        mean += delta / (trial + 1);
        m2 += delta * (est - mean);
    }

    McReport report;
    report.trials = trials;
    report.mean_estimate = mean;
    report.empirical_std = std::sqrt(m2 / (trials - 1));
    report.crlb = crlb_optimal(model, m);
    report.ratio = report.empirical_std / report.crlb;
    return report;
}

HarmonicSpectrum harmonic_spectrum(const FringeScan& scan) {
    const std::size_t n = scan.phi.size();
    if (n < 4) throw std::domain_error("harmonic_spectrum: grid too short");
    const double step = scan.phi[1] - scan.phi[0];
    for (std::size_t k = 1; k < n; ++k)
        if (std::abs(scan.phi[k] - scan.phi[k - 1] - step) > 1e-9 * step)
            throw std::domain_error("harmonic_spectrum: grid must be uniform");
    if (std::abs(scan.phi.front()) > 1e-12 ||
        std::abs(static_cast<double>(n) * step - kTwoPi) > 1e-6)
        throw std::domain_error("harmonic_spectrum: grid must cover exactly [0, 2 pi)");

    const auto dft = dft_onesided(scan.i3);
    HarmonicSpectrum spectrum;
    spectrum.coefficients.resize(dft.size());
    spectrum.power.resize(dft.size());
    const double dn = static_cast<double>(n);
    for (std::size_t m = 0; m < dft.size(); ++m) {
        spectrum.coefficients[m] = dft[m] / dn;
        const bool interior = m > 0 && !(n % 2 == 0 && m == n / 2);
        const double weight = (m == 0) ? 1.0 : (interior ? 2.0 : 1.0);
        spectrum.power[m] = weight * std::norm(spectrum.coefficients[m]);
    }

    double ac = 0.0;
    for (std::size_t m = 1; m < spectrum.power.size(); ++m) ac += spectrum.power[m];
    spectrum.zero_ac = ac <= 1e-30 * std::max(1.0, spectrum.power[0]);
    return spectrum;
}

double purity(const HarmonicSpectrum& spectrum, int n) {
    if (n < 1 || static_cast<std::size_t>(n) >= spectrum.power.size())
        throw std::domain_error("purity: harmonic out of range");
    if (spectrum.zero_ac) return 0.0;
    double ac = 0.0;
    for (std::size_t m = 1; m < spectrum.power.size(); ++m) ac += spectrum.power[m];
    return spectrum.power[static_cast<std::size_t>(n)] / ac;
}

std::pair<double, double> pbw_probabilities(int n, double phi) {
    if (n < 1) throw std::domain_error("pbw_probabilities: N must be >= 1");
    const double c = std::cos(n * phi / 2.0);
    const double p0 = c * c;
    return {p0, 1.0 - p0};
}

std::pair<double, double> pbw_contaminated(const std::vector<double>& weights, double phi) {
    if (weights.empty()) throw std::domain_error("pbw_contaminated: no weights");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::domain_error("pbw_contaminated: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::domain_error("pbw_contaminated: weights must sum to 1");
    double p0 = 0.0;
    for (std::size_t m = 0; m < weights.size(); ++m)
        p0 += weights[m] * 0.5 * (1.0 + std::cos(static_cast<double>(m + 1) * phi));
    return {p0, 1.0 - p0};
}

void write_spectrum_csv(const HarmonicSpectrum& spectrum, std::ostream& os) {
    os << "m,re,im,power\n";
    char buf[160];
    for (std::size_t m = 0; m < spectrum.coefficients.size(); ++m) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", m,
                      spectrum.coefficients[m].real(), spectrum.coefficients[m].imag(),
                      spectrum.power[m]);
        os << buf;
    }
}

}  // namespace cbw
