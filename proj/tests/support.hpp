// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers for the test suites.

#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "nlhs/nlhs.hpp"

namespace testing_support {

inline nlhs::RealSeries sampled(double fs, std::size_t n, auto&& f) {
    nlhs::RealSeries x;
    x.t0 = 1.0 / fs;
    x.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        x.samples[i] = f(static_cast<double>(i) / fs);
    }
    return x;
}

inline nlhs::RealSeries tone(double f_hz, double fs, std::size_t n, double amp = 1.0, double phase = 0.0) {
    return sampled(fs, n, [&](double t) { return amp * std::cos(2.0 * std::numbers::pi * f_hz * t + phase); });
}

/// Periodic signal with `harmonics` decaying components of fundamental f0.
inline nlhs::RealSeries harmonic_signal(double f0, int harmonics, double decay, double fs, std::size_t n) {
    return sampled(fs, n, [&](double t) {
        double v = 0.0;
        for (int k = 1; k <= harmonics; ++k) {
            v += std::pow(decay, k - 1) * std::cos(2.0 * std::numbers::pi * k * f0 * t + 0.3 * k);
        }
        return v;
    });
}

inline double relative_error(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Direct evaluation of |sum_m D[k1 + m] conj(D[k0 + m])| * df.
inline double direct_autocorrelation(const nlhs::Spectrum& D, double f0, double delta_f, double F) {
    const long h = static_cast<long>(std::floor(F / 2.0 / D.df + 1e-9));
    const long k0 = std::lround(f0 / D.df);
    const long k1 = std::lround((f0 + delta_f) / D.df);
    std::complex<long double> acc = 0.0L;
    for (long m = -h; m <= h; ++m) {
        const auto a = std::complex<long double>(D.coeffs[static_cast<std::size_t>(k1 + m)]);
        const auto b = std::complex<long double>(D.coeffs[static_cast<std::size_t>(k0 + m)]);
        acc += a * std::conj(b);
    }
    return static_cast<double>(std::abs(acc)) * D.df;
}

inline nlhs::Spectrum random_spectrum(std::mt19937_64& rng, std::size_t bins, double df) {
    std::normal_distribution<double> g(0.0, 1.0);
    nlhs::Spectrum D;
    D.df = df;
    D.f_max = df * static_cast<double>(bins - 1);
    D.coeffs.resize(bins);
    for (auto& c : D.coeffs) {
        c = {g(rng), g(rng)};
    }
    return D;
}

inline nlhs::IntervalTrack make_track(const std::vector<std::optional<double>>& values, double t_start = 7.5) {
    nlhs::IntervalTrack t;
    for (std::size_t i = 0; i < values.size(); ++i) {
        t.entries.push_back({t_start + static_cast<double>(i), values[i]});
    }
    return t;
}

}  // namespace testing_support
