/**
 * @file metrology.hpp
 * @brief Estimation layer for the N-fold fringe signal
 *        x_k = mu (a + b cos(N phi + phi0)) + n_k,  n_k ~ N(0, sigma^2):
 *        Fisher information, Cramer-Rao bounds under both resource
 *        accountings, maximum-likelihood phase estimation with Monte-Carlo
 *        efficiency checks, and fringe harmonic analysis against the
 *        N00N-state reference curves.
 */

#ifndef CBW_METROLOGY_HPP
#define CBW_METROLOGY_HPP

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cbw/chain.hpp"

namespace cbw {

struct FringeSignalModel {
    double mu = 1.0;     ///< mean detected intensity (detector units)
    double a = 1.0;      ///< DC offset
    double b = 1.0;      ///< visibility, in [-1, 1]
    double phi0 = 0.0;   ///< fringe phase offset
    int n_fold = 1;      ///< N
    double sigma = 0.1;  ///< additive noise std (detector units)
};

/// Noise-free detector mean mu (a + b cos(N phi + phi0)).
double signal_mean(const FringeSignalModel& model, double phi);

/// Phase at the optimal working point nearest 0: N phi + phi0 = pi/2.
double quadrature_phase(const FringeSignalModel& model);

struct SampleSet {
    std::vector<double> values;
    FringeSignalModel model;
    double phi_true = 0.0;
    std::uint64_t seed = 0;
};

/// M i.i.d. Gaussian draws around the fringe mean; deterministic per seed.
SampleSet sample_signal(const FringeSignalModel& model, double phi, int m,
                        std::uint64_t seed);

/// I(phi) = (b^2 mu^2 N^2 / sigma^2) M sin^2(N phi + phi0).
double fisher_information(const FringeSignalModel& model, double phi, int m);

/// Bound at the optimal working point: sigma / (mu |b| N sqrt(M)).
double crlb_optimal(const FringeSignalModel& model, int m);

/// 1/sqrt(I(phi)); throws std::domain_error where I(phi) = 0.
double crlb_at(const FringeSignalModel& model, double phi, int m);

/// Side-by-side resource accountings for the N-MZI chain.
struct ResourceReport {
    int n = 1;
    double naive_bound = 0.0;        ///< sigma / (mu |b| N sqrt(M)), scales 1/N
    double normalized_bound = 0.0;   ///< sigma / (mu |b| sqrt(N) sqrt(M)), scales 1/sqrt(N)
    double accounting_ratio = 1.0;   ///< naive / normalized = 1/sqrt(N)
    bool beats_snl = false;          ///< false: under N^2 resource accounting the chain
                                     ///< stays at the shot-noise limit
};
ResourceReport resource_comparison(int n, const FringeSignalModel& model, int m);

/// Gaussian-noise MLE of phi (least squares on the fringe mean): coarse
/// grid of at least 64 points, then Newton refinement to 1e-10 rad.
/// Throws std::domain_error when the interval spans a full fringe period
/// or more (aliased maxima) or when b = 0 (unidentifiable).
double mle_estimate(const FringeSignalModel& model, const std::vector<double>& samples,
                    double phi_min, double phi_max);

struct McReport {
    double empirical_std = 0.0;
    double crlb = 0.0;
    double ratio = 0.0;
    double mean_estimate = 0.0;
    int trials = 0;
};

/// Repeated sample/estimate cycles at phi_true (near quadrature); each
/// trial draws from its own substream, so results are order independent.
McReport monte_carlo_crlb_check(const FringeSignalModel& model, double phi_true, int m,
                                int trials, std::uint64_t seed);

struct HarmonicSpectrum {
    std::vector<std::complex<double>> coefficients;  ///< c_m, m = 0 .. n/2
    std::vector<double> power;                       ///< Parseval weights applied
    bool zero_ac = false;                            ///< constant scan, purity undefined
};

/// DFT of i3 over a uniform [0, 2 pi) grid.
/// Throws std::domain_error for non-uniform or partial grids.
HarmonicSpectrum harmonic_spectrum(const FringeScan& scan);

/// |c_N|^2 / sum_{m >= 1} |c_m|^2; 0 for a flagged zero-AC spectrum.
double purity(const HarmonicSpectrum& spectrum, int n);

/// Ideal N00N-state fringes ((1 + cos N phi)/2, (1 - cos N phi)/2);
/// identical in form to the chain's projection probabilities.
std::pair<double, double> pbw_probabilities(int n, double phi);

/// Mixture P0 = sum_m w_m (1 + cos m phi)/2 over harmonics m = 1..N.
/// Weights must be nonnegative and sum to 1.
std::pair<double, double> pbw_contaminated(const std::vector<double>& weights, double phi);

/// CSV with header "m,re,im,power".
void write_spectrum_csv(const HarmonicSpectrum& spectrum, std::ostream& os);

}  // namespace cbw

#endif  // CBW_METROLOGY_HPP
