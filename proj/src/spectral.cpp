#include "cbw/spectral.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cbw {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

std::vector<std::complex<double>> dft_onesided(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n / 2 + 1);
    for (std::size_t m = 0; m < out.size(); ++m) {
        double re = 0.0, im = 0.0;
        const double w = kTwoPi * static_cast<double>(m) / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double a = w * static_cast<double>(k);
            re += x[k] * std::cos(a);
            im -= x[k] * std::sin(a);
        }
        out[m] = {re, im};
    }
    return out;
}

std::vector<double> hann_window(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k)
        w[k] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(k) / static_cast<double>(n));
    return w;
}

SpectralPeak dominant_bin(const std::vector<double>& samples, bool hann) {
    const std::size_t n = samples.size();
    if (n < 8) throw std::domain_error("dominant_bin: window too short");

    std::vector<double> w(n, 1.0);
    if (hann) w = hann_window(n);

    const double mean =
        std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);

    std::vector<double> detrended(n), raw(n);
    for (std::size_t k = 0; k < n; ++k) {
        detrended[k] = (samples[k] - mean) * w[k];
        raw[k] = samples[k] * w[k];
    }

    const auto spec = dft_onesided(detrended);
    double dc = 0.0;
    for (double v : raw) dc += v;
    const double dc_power = dc * dc;

    std::size_t peak = 1;
    double peak_power = 0.0;
    for (std::size_t m = 1; m < spec.size(); ++m) {
        const double p = std::norm(spec[m]);
        if (p > peak_power) {
            peak_power = p;
            peak = m;
        }
    }

    SpectralPeak result;
    result.power = peak_power;
    result.dc_power = dc_power;
    result.significant = peak_power >= 1e-6 * dc_power && dc_power > 0.0;
    if (!result.significant) {
        result.bin = 0.0;
        return result;
    }

    // Parabolic interpolation on magnitudes around the peak.
    double delta = 0.0;
    if (peak + 1 < spec.size() && peak >= 1) {
        const double ml = std::abs(spec[peak - 1]);
        const double mc = std::abs(spec[peak]);
        const double mr = std::abs(spec[peak + 1]);
        const double denom = ml - 2.0 * mc + mr;
        if (std::abs(denom) > 1e-300) {
            delta = 0.5 * (ml - mr) / denom;
            if (delta > 0.5) delta = 0.5;
            if (delta < -0.5) delta = -0.5;
        }
    }
    result.bin = static_cast<double>(peak) + delta;
    return result;
}

}  // namespace cbw
