// SPDX-License-Identifier: Apache-2.0
//
// estimator.hpp - sliding-window NLHS interval tracks, harmonic-order
// selection by minimum track variance, N1/N2 consistency gating and
// Hampel outlier removal.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "nlhs/preprocess.hpp"
#include "nlhs/series.hpp"
#include "nlhs/spectral.hpp"

namespace nlhs {

/// Timestamped heartbeat-interval estimates; an empty interval is MISSING.
struct IntervalTrack {
    struct Entry {
        double time = 0.0;                 ///< window centre [s]
        std::optional<double> interval;    ///< [s]
    };
    std::vector<Entry> entries;

    std::size_t size() const { return entries.size(); }
    std::size_t present() const {
        return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(),
                                                      [](const Entry& e) { return e.interval.has_value(); }));
    }
};

struct EstimatorParams {
    double window_s = 15.0;
    double hop_s = 1.0;
    int n_min = 6;
    int n_max = 15;
    double t_theta = 0.010;        ///< N1/N2 agreement threshold [s]
    int hampel_half_window = 5;    ///< [entries]
    double hampel_nsigma = 3.0;
    double smooth_width_s = 0.1;   ///< Gaussian smoothing width (FWHM) [s]
    int pad_factor = 64;

    void validate() const {
        require(window_s > hop_s && hop_s > 0.0, "need window_s > hop_s > 0");
        require(n_min >= 1 && n_min <= n_max, "need 1 <= n_min <= n_max");
        require(t_theta > 0.0, "t_theta must be positive");
        require(hampel_half_window >= 0, "hampel_half_window must be >= 0");
        require(hampel_nsigma > 0.0, "hampel_nsigma must be positive");
        require(smooth_width_s > 0.0, "smooth_width_s must be positive");
        require(pad_factor >= 1, "pad_factor must be >= 1");
    }
};

/// Sample layout of the sliding analysis windows over a record.
struct WindowLayout {
    std::size_t length = 0;
    std::size_t hop = 0;
    std::vector<std::size_t> starts;
};

inline WindowLayout window_layout(const RealSeries& x, const EstimatorParams& p) {
    p.validate();
    require(x.t0 > 0.0, "sampling interval must be positive");
    WindowLayout w;
    w.length = static_cast<std::size_t>(std::llround(p.window_s / x.t0));
    w.hop = static_cast<std::size_t>(std::llround(p.hop_s / x.t0));
    require(w.length >= 2 && w.hop >= 1, "window or hop shorter than one sample");
    if (x.size() < w.length) {
        throw Error("record shorter than one window");
    }
    for (std::size_t s = 0; s + w.length <= x.size(); s += w.hop) {
        w.starts.push_back(s);
    }
    return w;
}

inline RealSeries slice(const RealSeries& x, std::size_t start, std::size_t length) {
    RealSeries out;
    out.t0 = x.t0;
    out.start_time = x.time(start);
    out.samples.assign(x.samples.begin() + static_cast<std::ptrdiff_t>(start),
                       x.samples.begin() + static_cast<std::ptrdiff_t>(start + length));
    return out;
}

inline double window_center(const RealSeries& x, std::size_t start, std::size_t length) {
    return x.time(start) + 0.5 * static_cast<double>(length) * x.t0;
}

/// Interval tracks for every order in [n_lo, n_hi], sharing one spectrum and
/// one NLHS pass per window. Element k belongs to order n_lo + k.
inline std::vector<IntervalTrack> order_tracks(const RealSeries& x, int n_lo, int n_hi, const EstimatorParams& p,
                                               const NlhsParams& q) {
    require(n_lo >= 1 && n_lo <= n_hi, "invalid harmonic order range");
    const auto layout = window_layout(x, p);
    std::vector<IntervalTrack> tracks(static_cast<std::size_t>(n_hi - n_lo + 1));
    for (std::size_t start : layout.starts) {
        const auto spectrum = windowed_spectrum(slice(x, start, layout.length), p.pad_factor);
        const auto all = nlhs_all_orders(spectrum, q, n_hi);
        const double t = window_center(x, start, layout.length);
        for (int n = n_lo; n <= n_hi; ++n) {
            const double f = peak_frequency(all[static_cast<std::size_t>(n - 1)]);
            tracks[static_cast<std::size_t>(n - n_lo)].entries.push_back({t, 1.0 / f});
        }
    }
    return tracks;
}

/// Sliding-window NLHS estimate with fixed maximum order N.
inline IntervalTrack track_for_order(const RealSeries& x, int N, const EstimatorParams& p, const NlhsParams& q) {
    return std::move(order_tracks(x, N, N, p, q).front());
}

/// Population variance of the present intervals.
inline double track_variance(const IntervalTrack& track) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& e : track.entries) {
        if (e.interval) {
            sum += *e.interval;
            ++n;
        }
    }
    require(n >= 2, "variance undefined");
    const double mean = sum / static_cast<double>(n);
    double acc = 0.0;
    for (const auto& e : track.entries) {
        if (e.interval) {
            acc += (*e.interval - mean) * (*e.interval - mean);
        }
    }
    return acc / static_cast<double>(n);
}

struct OrderSelection {
    int n1 = 0;
    int n2 = 0;
    std::vector<double> variances;  ///< variances[k] belongs to order n_min + k
};

/// Picks the two orders with the smallest variance; smaller N wins ties.
inline OrderSelection rank_orders(std::vector<double> variances, int n_min) {
    require(variances.size() >= 2, "need at least two candidate orders");
    std::size_t first = 0;
    for (std::size_t k = 1; k < variances.size(); ++k) {
        if (variances[k] < variances[first]) {
            first = k;
        }
    }
    std::size_t second = first == 0 ? 1 : 0;
    for (std::size_t k = 0; k < variances.size(); ++k) {
        if (k != first && variances[k] < variances[second]) {
            second = k;
        }
    }
    return {n_min + static_cast<int>(first), n_min + static_cast<int>(second), std::move(variances)};
}

inline OrderSelection select_orders(const std::vector<IntervalTrack>& tracks, int n_min) {
    std::vector<double> v;
    v.reserve(tracks.size());
    for (const auto& t : tracks) {
        v.push_back(track_variance(t));
    }
    return rank_orders(std::move(v), n_min);
}

/// Orders N1, N2 in [n_min, n_max] minimising the variance of the interval
/// track over the record.
inline OrderSelection select_orders(const RealSeries& x, const EstimatorParams& p, const NlhsParams& q) {
    require(p.n_min < p.n_max, "need at least two candidate orders");
    const auto tracks = order_tracks(x, p.n_min, p.n_max, p, q);
    require(tracks.front().size() >= 2, "variance undefined");
    return select_orders(tracks, p.n_min);
}

/// Keeps track1's interval where both tracks agree within t_theta
/// (inclusive), MISSING elsewhere.
inline IntervalTrack gate(const IntervalTrack& track1, const IntervalTrack& track2, double t_theta) {
    require(track1.size() == track2.size(), "timestamp mismatch");
    // Absorbs representation error so a difference of exactly t_theta is kept.
    const double tol = t_theta + 1e-12;
    IntervalTrack out;
    out.entries.reserve(track1.size());
    for (std::size_t i = 0; i < track1.size(); ++i) {
        const auto& a = track1.entries[i];
        const auto& b = track2.entries[i];
        if (std::abs(a.time - b.time) > 1e-9) {
            throw Error("timestamp mismatch");
        }
        IntervalTrack::Entry e{a.time, std::nullopt};
        if (a.interval && b.interval && std::abs(*a.interval - *b.interval) <= tol) {
            e.interval = a.interval;
        }
        out.entries.push_back(e);
    }
    return out;
}

namespace detail {

inline double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (n % 2 == 1) {
        return *mid;
    }
    const double upper = *mid;
    const double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

// One Hampel sweep against the input track; returns true if anything was removed.
inline bool hampel_pass(IntervalTrack& track, int half_window, double nsigma) {
    constexpr double mad_scale = 1.4826;
    const auto n = static_cast<long>(track.size());
    std::vector<bool> drop(track.size(), false);
    std::vector<double> window;
    std::vector<double> deviations;
    for (long i = 0; i < n; ++i) {
        const auto& value = track.entries[static_cast<std::size_t>(i)].interval;
        if (!value) {
            continue;
        }
        window.clear();
        for (long j = std::max(0L, i - half_window); j <= std::min(n - 1, i + half_window); ++j) {
            if (const auto& v = track.entries[static_cast<std::size_t>(j)].interval) {
                window.push_back(*v);
            }
        }
        const double med = median_of(window);
        deviations.clear();
        for (double v : window) {
            deviations.push_back(std::abs(v - med));
        }
        const double mad = median_of(deviations);
        const double dev = std::abs(*value - med);
        drop[static_cast<std::size_t>(i)] = mad == 0.0 ? dev != 0.0 : dev > nsigma * mad_scale * mad;
    }
    bool changed = false;
    for (std::size_t i = 0; i < drop.size(); ++i) {
        if (drop[i]) {
            track.entries[i].interval.reset();
            changed = true;
        }
    }
    return changed;
}

}  // namespace detail

/// Sliding median/MAD outlier removal over +-half_window entries. Outliers
/// become MISSING; surviving values are never changed. Sweeps repeat until
/// nothing more is removed, so the output is a fixed point of the filter.
inline IntervalTrack hampel_filter(const IntervalTrack& track, int half_window, double nsigma) {
    require(half_window >= 0, "hampel_half_window must be >= 0");
    IntervalTrack out = track;
    while (detail::hampel_pass(out, half_window, nsigma)) {
    }
    return out;
}

/// Everything produced by one NLHS estimation run.
struct NlhsEstimate {
    IntervalTrack track;        ///< final gated and Hampel-filtered track
    IntervalTrack track_n1;
    IntervalTrack track_n2;
    OrderSelection orders;
};

/// Order selection, gating and Hampel filtering on an already enhanced
/// (smoothed and differentiated) series.
inline NlhsEstimate estimate_enhanced(const RealSeries& y, const EstimatorParams& p, const NlhsParams& q) {
    p.validate();
    require(p.n_min < p.n_max, "need at least two candidate orders");
    auto tracks = order_tracks(y, p.n_min, p.n_max, p, q);
    require(tracks.front().size() >= 2, "variance undefined");
    NlhsEstimate r;
    r.orders = select_orders(tracks, p.n_min);
    r.track_n1 = std::move(tracks[static_cast<std::size_t>(r.orders.n1 - p.n_min)]);
    r.track_n2 = std::move(tracks[static_cast<std::size_t>(r.orders.n2 - p.n_min)]);
    r.track = hampel_filter(gate(r.track_n1, r.track_n2, p.t_theta), p.hampel_half_window, p.hampel_nsigma);
    return r;
}

/// Smoothed second derivative of the displacement.
inline RealSeries enhance_displacement(const RealSeries& d, const EstimatorParams& p) {
    return second_derivative(gaussian_smooth(d, fwhm_to_sigma(p.smooth_width_s)));
}

/// Smoothed |d^2/dt^2 s(t)| of the complex radar signal.
inline RealSeries enhance_complex(const ComplexSeries& s, const EstimatorParams& p) {
    return gaussian_smooth(complex_deriv_magnitude(s), fwhm_to_sigma(p.smooth_width_s));
}

/// Full NLHS pipeline from displacement d(t).
inline IntervalTrack estimate(const RealSeries& d, const EstimatorParams& p, const NlhsParams& q) {
    return estimate_enhanced(enhance_displacement(d, p), p, q).track;
}

/// Full NLHS pipeline from the complex target signal, using |s''(t)| as input.
inline IntervalTrack estimate(const ComplexSeries& s, const EstimatorParams& p, const NlhsParams& q) {
    return estimate_enhanced(enhance_complex(s, p), p, q).track;
}

}  // namespace nlhs
