/**
 * @file spectral.hpp
 * @brief Discrete-spectrum helpers: one-sided DFT power, Hann windowing,
 *        and peak location with parabolic interpolation.
 */

#ifndef CBW_SPECTRAL_HPP
#define CBW_SPECTRAL_HPP

#include <complex>
#include <vector>

namespace cbw {

/// One-sided DFT coefficients X_m = sum_k x_k e^{-2 pi i m k / n},
/// m = 0 .. n/2. Direct evaluation; the windows here are small.
std::vector<std::complex<double>> dft_onesided(const std::vector<double>& x);

std::vector<double> hann_window(std::size_t n);

struct SpectralPeak {
    double bin = 0.0;      ///< interpolated peak position in bin units
    double power = 0.0;    ///< |X|^2 at the peak bin (uninterpolated)
    double dc_power = 0.0; ///< |X_0|^2 of the unwindowed-mean content
    bool significant = false;
};

/// Locate the dominant nonzero bin of the mean-removed, optionally
/// Hann-windowed signal. The peak is flagged insignificant when its power
/// is below 1e-6 of the DC power of the raw windowed signal.
SpectralPeak dominant_bin(const std::vector<double>& samples, bool hann);

}  // namespace cbw

#endif  // CBW_SPECTRAL_HPP
