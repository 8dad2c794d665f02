// SPDX-License-Identifier: Apache-2.0
//
// baselines.hpp - STFT peak-picking comparison estimator. Uses the same
// windows, padding and search band as the NLHS estimator.

#pragma once

#include <cmath>
#include <complex>

#include "nlhs/estimator.hpp"
#include "nlhs/spectral.hpp"

namespace nlhs {

struct Band {
    double f_min = 0.8;
    double f_max = 1.7;
};

/// Frequency of the largest |D(f)|^2 bin inside [band.f_min, band.f_max].
inline double spectral_peak(const Spectrum& D, Band band) {
    require(band.f_min < band.f_max, "empty search band");
    const auto lo = static_cast<std::size_t>(std::ceil(band.f_min / D.df - 1e-9));
    const auto hi = std::min(static_cast<std::size_t>(std::floor(band.f_max / D.df + 1e-9)), D.coeffs.size() - 1);
    require(lo <= hi, "search band outside spectrum");
    std::size_t best = lo;
    double best_power = std::norm(D.coeffs[lo]);
    for (std::size_t k = lo + 1; k <= hi; ++k) {
        const double pw = std::norm(D.coeffs[k]);
        if (pw > best_power) {
            best_power = pw;
            best = k;
        }
    }
    return D.freq(best);
}

/// Per-window STFT peak in the band, no gating or order selection; Hampel
/// filtered like the NLHS track.
inline IntervalTrack stft_estimate(const RealSeries& x, const EstimatorParams& p, Band band = {}) {
    const auto layout = window_layout(x, p);
    IntervalTrack raw;
    for (std::size_t start : layout.starts) {
        const auto spectrum = windowed_spectrum(slice(x, start, layout.length), p.pad_factor);
        raw.entries.push_back({window_center(x, start, layout.length), 1.0 / spectral_peak(spectrum, band)});
    }
    return hampel_filter(raw, p.hampel_half_window, p.hampel_nsigma);
}

}  // namespace nlhs
