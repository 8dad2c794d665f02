// SPDX-License-Identifier: Apache-2.0
//
// preprocess.hpp - Gaussian smoothing and the 7-tap least-squares smoothed
// second-derivative filter used to accentuate higher heartbeat harmonics.

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "nlhs/series.hpp"

namespace nlhs {

namespace detail {

// Mirror index into [0, n) without repeating the edge sample
// (... c b | a b c d | c b ...).
inline std::size_t reflect_index(long i, std::size_t n) {
    if (n == 1) {
        return 0;
    }
    const long period = 2 * (static_cast<long>(n) - 1);
    long k = i % period;
    if (k < 0) {
        k += period;
    }
    if (k >= static_cast<long>(n)) {
        k = period - k;
    }
    return static_cast<std::size_t>(k);
}

template <typename T, std::size_t Taps>
std::vector<T> convolve_reflect(const std::vector<T>& x, const std::array<double, Taps>& taps) {
    static_assert(Taps % 2 == 1);
    constexpr long half = static_cast<long>(Taps / 2);
    const std::size_t n = x.size();
    std::vector<T> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        T acc{};
        for (long k = -half; k <= half; ++k) {
            acc += taps[static_cast<std::size_t>(k + half)] * x[reflect_index(static_cast<long>(i) + k, n)];
        }
        y[i] = acc;
    }
    return y;
}

}  // namespace detail

/// Sampled Gaussian kernel with standard deviation sigma_s, truncated at
/// +-4 sigma and normalised to unit sum.
inline std::vector<double> gaussian_kernel(double sigma_s, double t0) {
    require(sigma_s > 0.0, "smoothing width must be positive");
    require(t0 > 0.0, "sampling interval must be positive");
    const auto half = static_cast<long>(std::ceil(4.0 * sigma_s / t0));
    std::vector<double> w(static_cast<std::size_t>(2 * half + 1));
    for (long k = -half; k <= half; ++k) {
        const double t = static_cast<double>(k) * t0;
        w[static_cast<std::size_t>(k + half)] = std::exp(-t * t / (2.0 * sigma_s * sigma_s));
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) {
        v /= total;
    }
    return w;
}

/// Standard deviation of a Gaussian with the given full width at half maximum.
inline double fwhm_to_sigma(double fwhm) { return fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2)); }

/// Convolution with a unit-area Gaussian (sigma = width_s), reflect-padded,
/// length preserving.
inline RealSeries gaussian_smooth(const RealSeries& x, double width_s = 0.1) {
    require(width_s > 0.0, "smoothing width must be positive");
    require(!x.empty(), "empty input");
    const auto kernel = gaussian_kernel(width_s, x.t0);
    const long half = static_cast<long>(kernel.size() / 2);
    const std::size_t n = x.size();
    RealSeries y{std::vector<double>(n), x.t0, x.start_time};
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (long k = -half; k <= half; ++k) {
            acc += kernel[static_cast<std::size_t>(k + half)] *
                   x.samples[detail::reflect_index(static_cast<long>(i) + k, n)];
        }
        y.samples[i] = acc;
    }
    return y;
}

/// Stencil weights for offsets -3..3, before division by 16 t0^2.
inline constexpr std::array<double, 7> second_derivative_stencil{1.0, 2.0, -1.0, -4.0, -1.0, 2.0, 1.0};

/// Closed-form frequency response of the 7-tap second-derivative filter.
inline double second_derivative_response(double f_hz, double t0) {
    const double w = 2.0 * std::numbers::pi * f_hz * t0;
    return (2.0 * std::cos(3.0 * w) + 4.0 * std::cos(2.0 * w) - 2.0 * std::cos(w) - 4.0) / (16.0 * t0 * t0);
}

namespace detail {
inline std::array<double, 7> scaled_stencil(double t0) {
    std::array<double, 7> taps{};
    const double scale = 1.0 / (16.0 * t0 * t0);
    for (std::size_t i = 0; i < taps.size(); ++i) {
        taps[i] = second_derivative_stencil[i] * scale;
    }
    return taps;
}
}  // namespace detail

/// Least-squares smoothed second derivative
///   d'' ~ {(d3 + d-3) + 2(d2 + d-2) - (d1 + d-1) - 4 d0} / (16 t0^2),
/// with the three edge samples on each side taken from a reflect-padded input.
inline RealSeries second_derivative(const RealSeries& x) {
    if (x.size() < 7) {
        throw Error("series too short for 7-tap stencil");
    }
    require(x.t0 > 0.0, "sampling interval must be positive");
    return RealSeries{detail::convolve_reflect(x.samples, detail::scaled_stencil(x.t0)), x.t0, x.start_time};
}

/// |d^2/dt^2 s(t)| with the stencil applied per component, mean removed.
inline RealSeries complex_deriv_magnitude(const ComplexSeries& s) {
    if (s.size() < 7) {
        throw Error("series too short for 7-tap stencil");
    }
    require(s.t0 > 0.0, "sampling interval must be positive");
    const auto d2 = detail::convolve_reflect(s.samples, detail::scaled_stencil(s.t0));
    RealSeries out{std::vector<double>(d2.size()), s.t0, s.start_time};
    for (std::size_t i = 0; i < d2.size(); ++i) {
        out.samples[i] = std::abs(d2[i]);
    }
    const double mean = std::accumulate(out.samples.begin(), out.samples.end(), 0.0) /
                        static_cast<double>(out.samples.size());
    for (double& v : out.samples) {
        v -= mean;
    }
    return out;
}

}  // namespace nlhs
