// SPDX-License-Identifier: Apache-2.0
//
// spectral.hpp - windowed spectra, local spectral autocorrelation and the
// nonlinear harmonic spectrum (NLHS).
//
// For a spectrum D(f) the local autocorrelation is
//
//   c(f0, df) = | sum_{|f'| <= F/2} D(f0 + df + f') conj(D(f0 + f')) * bin_width |
//
// and the NLHS sums it incoherently over harmonic orders:
//
//   C(f) = sum_{n=1..N} c(n f, f).
//
// When f matches a periodic signal's fundamental, the band around each
// harmonic n f lines up with the band around (n + 1) f and the product is
// large; otherwise the peaks are misaligned and c stays small.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "nlhs/fft.hpp"
#include "nlhs/series.hpp"

namespace nlhs {

/// One-sided complex spectrum on a uniform grid k * df, k = 0..coeffs.size()-1.
struct Spectrum {
    std::vector<cdouble> coeffs;
    double df = 0.0;     ///< bin spacing [Hz]
    double f_max = 0.0;  ///< Nyquist [Hz]

    std::size_t bin_of(double f) const { return static_cast<std::size_t>(std::llround(f / df)); }
    double freq(std::size_t k) const { return static_cast<double>(k) * df; }
};

/// Non-negative values over a strictly increasing candidate grid.
struct PseudoSpectrum {
    std::vector<double> values;
    std::vector<double> freqs;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
};

struct NlhsParams {
    double F = 0.5;              ///< correlation band [Hz]
    double f_min = 0.8;          ///< lower search bound [Hz]
    double f_max_search = 1.7;   ///< upper search bound [Hz]
    int N = 15;                  ///< maximum harmonic order
    double df_target = 0.001;    ///< candidate grid step [Hz]

    void validate() const {
        require(F > 0.0, "F must be positive");
        require(f_min > 0.0 && f_min < f_max_search, "need 0 < f_min < f_max_search");
        require(N >= 1, "harmonic order N must be >= 1");
        require(df_target > 0.0, "df_target must be positive");
    }

    /// Candidate grid f_min, f_min + df_target, ..., f_max_search.
    std::vector<double> grid() const {
        const auto count = static_cast<std::size_t>(std::llround((f_max_search - f_min) / df_target)) + 1;
        std::vector<double> f(count);
        for (std::size_t i = 0; i < count; ++i) {
            f[i] = f_min + static_cast<double>(i) * df_target;
        }
        return f;
    }
};

/// Symmetric Hann window of length n.
inline std::vector<double> hann_window(std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (n < 2) {
        return w;
    }
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return w;
}

/// Hann-windowed, zero-padded one-sided spectrum of `x`. The padded length
/// is the next power of two >= pad_factor * x.size(); coefficients carry the
/// t0 factor so they approximate the continuous Fourier transform.
inline Spectrum windowed_spectrum(const RealSeries& x, int pad_factor = 64) {
    require(x.size() >= 2, "series too short for a spectrum");
    require(pad_factor >= 1, "pad_factor must be >= 1");
    require(x.t0 > 0.0, "sampling interval must be positive");
    const auto window = hann_window(x.size());
    std::vector<double> tapered(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        tapered[i] = x.samples[i] * window[i];
    }
    const std::size_t n_pad = fft::next_pow2(static_cast<std::size_t>(pad_factor) * x.size());
    Spectrum s;
    s.coeffs = fft::rfft(tapered, n_pad);
    for (auto& c : s.coeffs) {
        c *= x.t0;
    }
    s.df = x.fs() / static_cast<double>(n_pad);
    s.f_max = x.fs() / 2.0;
    return s;
}

namespace detail {

inline std::size_t half_band_bins(double F, double df) {
    return static_cast<std::size_t>(std::floor(F / 2.0 / df + 1e-9));
}

// |sum_{m=-h..h} D[shifted + m] conj(D[base + m])|; bounds checked by caller.
inline double band_correlation(const cdouble* D, std::size_t base, std::size_t shifted, std::size_t h) {
    const double* a = reinterpret_cast<const double*>(D + shifted - h);
    const double* b = reinterpret_cast<const double*>(D + base - h);
    const std::size_t count = 2 * h + 1;
    double re0 = 0.0, im0 = 0.0, re1 = 0.0, im1 = 0.0;
    std::size_t m = 0;
    for (; m + 1 < count; m += 2) {
        const double ar0 = a[2 * m], ai0 = a[2 * m + 1], br0 = b[2 * m], bi0 = b[2 * m + 1];
        const double ar1 = a[2 * m + 2], ai1 = a[2 * m + 3], br1 = b[2 * m + 2], bi1 = b[2 * m + 3];
        re0 += ar0 * br0 + ai0 * bi0;
        im0 += ai0 * br0 - ar0 * bi0;
        re1 += ar1 * br1 + ai1 * bi1;
        im1 += ai1 * br1 - ar1 * bi1;
    }
    for (; m < count; ++m) {
        const double ar = a[2 * m], ai = a[2 * m + 1], br = b[2 * m], bi = b[2 * m + 1];
        re0 += ar * br + ai * bi;
        im0 += ai * br - ar * bi;
    }
    return std::hypot(re0 + re1, im0 + im1);
}

inline void check_band(const Spectrum& D, long base, long shifted, long h) {
    const long last = static_cast<long>(D.coeffs.size()) - 1;
    if (base - h < 0 || shifted - h < 0 || base + h > last || shifted + h > last) {
        throw Error("band out of range");
    }
}

}  // namespace detail

/// c(f0, delta_f) over a band of width F; f0 and f0 + delta_f are rounded
/// to the nearest bin.
inline double local_autocorrelation(const Spectrum& D, double f0, double delta_f, double F) {
    require(F > 0.0, "F must be positive");
    require(D.df > 0.0 && !D.coeffs.empty(), "empty spectrum");
    const long h = static_cast<long>(detail::half_band_bins(F, D.df));
    const long base = std::lround(f0 / D.df);
    const long shifted = std::lround((f0 + delta_f) / D.df);
    detail::check_band(D, base, shifted, h);
    return detail::band_correlation(D.coeffs.data(), static_cast<std::size_t>(base),
                                    static_cast<std::size_t>(shifted), static_cast<std::size_t>(h)) *
           D.df;
}

/// Per-order terms c(n f, f) for n = 1..max_order on the candidate grid:
/// terms[n - 1][i] belongs to grid frequency i.
inline std::vector<std::vector<double>> nlhs_terms(const Spectrum& D, const NlhsParams& p, int max_order) {
    p.validate();
    require(max_order >= 1, "harmonic order N must be >= 1");
    require(D.df > 0.0 && !D.coeffs.empty(), "empty spectrum");
    const auto grid = p.grid();
    const long h = static_cast<long>(detail::half_band_bins(p.F, D.df));

    // The band checks are monotone in f and n, so testing the extremes covers
    // the whole grid.
    for (double f : {grid.front(), grid.back()}) {
        for (int n : {1, max_order}) {
            detail::check_band(D, std::lround(n * f / D.df), std::lround((n + 1) * f / D.df), h);
        }
    }

    std::vector<std::vector<double>> terms(static_cast<std::size_t>(max_order), std::vector<double>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double f = grid[i];
        for (int n = 1; n <= max_order; ++n) {
            const auto base = static_cast<std::size_t>(std::lround(n * f / D.df));
            const auto shifted = static_cast<std::size_t>(std::lround((n * f + f) / D.df));
            terms[static_cast<std::size_t>(n - 1)][i] =
                detail::band_correlation(D.coeffs.data(), base, shifted, static_cast<std::size_t>(h)) * D.df;
        }
    }
    return terms;
}

/// NLHS for every order 1..max_order from one pass over the spectrum;
/// element N - 1 is the pseudo-spectrum with maximum order N.
inline std::vector<PseudoSpectrum> nlhs_all_orders(const Spectrum& D, const NlhsParams& p, int max_order) {
    const auto terms = nlhs_terms(D, p, max_order);
    const auto grid = p.grid();
    std::vector<PseudoSpectrum> out(static_cast<std::size_t>(max_order));
    std::vector<double> running(grid.size(), 0.0);
    for (std::size_t n = 0; n < terms.size(); ++n) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            running[i] += terms[n][i];
        }
        out[n].values = running;
        out[n].freqs = grid;
    }
    return out;
}

/// C_NLHS(f) = sum_{n=1..N} c(n f, f) on the candidate grid.
inline PseudoSpectrum nlhs(const Spectrum& D, const NlhsParams& p) {
    auto all = nlhs_all_orders(D, p, p.N);
    return std::move(all.back());
}

/// Grid frequency of the maximum; the lowest frequency wins ties.
inline double peak_frequency(const PseudoSpectrum& ps) {
    require(!ps.empty() && ps.values.size() == ps.freqs.size(), "empty pseudo-spectrum");
    std::size_t best = 0;
    for (std::size_t i = 1; i < ps.values.size(); ++i) {
        if (ps.values[i] > ps.values[best]) {
            best = i;
        }
    }
    return ps.freqs[best];
}

}  // namespace nlhs
