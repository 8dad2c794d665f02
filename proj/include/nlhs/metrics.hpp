// SPDX-License-Identifier: Apache-2.0
//
// metrics.hpp - segment-level RMSE, correlation coefficient and time
// coverage rate of an interval track against ground truth.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "nlhs/estimator.hpp"
#include "nlhs/series.hpp"

namespace nlhs {

/// Reference heartbeat timing: either beat instants (ECG R-peak style) or a
/// sampled interval function.
struct GroundTruth {
    std::vector<double> beat_times;      ///< [s], strictly increasing
    std::vector<double> interval_times;  ///< [s], used when beat_times is empty
    std::vector<double> intervals;       ///< [s]

    static GroundTruth from_beats(std::vector<double> beats) {
        GroundTruth gt;
        gt.beat_times = std::move(beats);
        return gt;
    }
    static GroundTruth from_intervals(std::vector<double> times, std::vector<double> values) {
        GroundTruth gt;
        gt.interval_times = std::move(times);
        gt.intervals = std::move(values);
        return gt;
    }

    bool has_beats() const { return !beat_times.empty(); }

    void validate() const {
        const auto& t = has_beats() ? beat_times : interval_times;
        require(t.size() >= 2, "ground truth needs at least 2 beats");
        for (std::size_t i = 1; i < t.size(); ++i) {
            require(t[i] > t[i - 1], "ground truth times must be strictly increasing");
        }
        if (has_beats()) {
            for (std::size_t i = 1; i < t.size(); ++i) {
                const double gap = t[i] - t[i - 1];
                require(gap >= 0.3 && gap <= 2.0, "beat interval outside [0.3, 2.0] s");
            }
        } else {
            require(intervals.size() == interval_times.size(), "interval column length mismatch");
            for (double v : intervals) {
                require(v >= 0.3 && v <= 2.0, "interval outside [0.3, 2.0] s");
            }
        }
    }

    /// Last time covered by the reference [s].
    double end_time() const { return has_beats() ? beat_times.back() : interval_times.back(); }
};

namespace detail {

inline double lerp_at(const std::vector<double>& t, const std::vector<double>& v, double x) {
    if (x <= t.front()) {
        return v.front();
    }
    if (x >= t.back()) {
        return v.back();
    }
    const auto hi = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), x) - t.begin());
    const std::size_t lo = hi - 1;
    const double w = (x - t[lo]) / (t[hi] - t[lo]);
    return v[lo] + w * (v[hi] - v[lo]);
}

}  // namespace detail

/// True interval at each segment centre. For beat times, the interbeat
/// intervals are placed at the midpoints of their beat pairs and linearly
/// interpolated; centres outside the covered span are uncomparable (empty).
inline std::vector<std::optional<double>> resample_truth(const GroundTruth& gt,
                                                         const std::vector<double>& segment_centers) {
    gt.validate();
    std::vector<double> t;
    std::vector<double> v;
    double span_lo = 0.0;
    double span_hi = 0.0;
    if (gt.has_beats()) {
        for (std::size_t i = 0; i + 1 < gt.beat_times.size(); ++i) {
            t.push_back(0.5 * (gt.beat_times[i] + gt.beat_times[i + 1]));
            v.push_back(gt.beat_times[i + 1] - gt.beat_times[i]);
        }
        span_lo = gt.beat_times.front();
        span_hi = gt.beat_times.back();
    } else {
        t = gt.interval_times;
        v = gt.intervals;
        span_lo = t.front();
        span_hi = t.back();
    }
    std::vector<std::optional<double>> out;
    out.reserve(segment_centers.size());
    for (double c : segment_centers) {
        if (c < span_lo || c > span_hi) {
            out.emplace_back();
        } else {
            out.emplace_back(detail::lerp_at(t, v, c));
        }
    }
    return out;
}

/// Centres of `count` consecutive segments of `segment_s` seconds from `start`.
inline std::vector<double> segment_centers(std::size_t count, double segment_s = 1.0, double start = 0.0) {
    std::vector<double> c(count);
    for (std::size_t i = 0; i < count; ++i) {
        c[i] = start + (static_cast<double>(i) + 0.5) * segment_s;
    }
    return c;
}

/// Per-segment estimates: each segment takes the first track entry whose
/// time falls inside it; segments without one are MISSING.
inline std::vector<std::optional<double>> align_to_segments(const IntervalTrack& track, std::size_t count,
                                                            double segment_s = 1.0, double start = 0.0) {
    require(segment_s > 0.0, "segment length must be positive");
    std::vector<std::optional<double>> out(count);
    std::vector<bool> taken(count, false);
    for (const auto& e : track.entries) {
        const double pos = (e.time - start) / segment_s;
        if (pos < 0.0) {
            continue;
        }
        const auto idx = static_cast<std::size_t>(std::floor(pos));
        if (idx < count && !taken[idx]) {
            taken[idx] = true;
            out[idx] = e.interval;
        }
    }
    return out;
}

struct MetricsReport {
    std::optional<double> rmse_ms;  ///< undefined without valid segments
    std::optional<double> cc;       ///< undefined with < 2 valid segments or zero variance
    double tcr_pct = 0.0;
    std::size_t n_segments = 0;
    std::size_t n_valid = 0;
};

/// RMSE and Pearson CC over segments where both estimate and truth exist;
/// TCR = 100 m / M with success meaning |error| < t_theta_tcr (strict) and
/// M counting every segment.
inline MetricsReport score(const std::vector<std::optional<double>>& estimates,
                           const std::vector<std::optional<double>>& truth, double t_theta_tcr = 0.030) {
    require(estimates.size() == truth.size(), "track not aligned to segments");
    require(t_theta_tcr > 0.0, "TCR threshold must be positive");
    MetricsReport r;
    r.n_segments = truth.size();
    std::vector<double> est;
    std::vector<double> ref;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!estimates[i] || !truth[i]) {
            continue;
        }
        est.push_back(*estimates[i]);
        ref.push_back(*truth[i]);
        if (std::abs(*estimates[i] - *truth[i]) < t_theta_tcr) {
            ++hits;
        }
    }
    r.n_valid = est.size();
    r.tcr_pct = r.n_segments == 0 ? 0.0 : 100.0 * static_cast<double>(hits) / static_cast<double>(r.n_segments);
    if (est.empty()) {
        return r;
    }
    const double n = static_cast<double>(est.size());
    double sq = 0.0;
    double mean_e = 0.0;
    double mean_r = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        sq += (est[i] - ref[i]) * (est[i] - ref[i]);
        mean_e += est[i];
        mean_r += ref[i];
    }
    r.rmse_ms = 1000.0 * std::sqrt(sq / n);
    mean_e /= n;
    mean_r /= n;
    double cov = 0.0;
    double var_e = 0.0;
    double var_r = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        cov += (est[i] - mean_e) * (ref[i] - mean_r);
        var_e += (est[i] - mean_e) * (est[i] - mean_e);
        var_r += (ref[i] - mean_r) * (ref[i] - mean_r);
    }
    if (est.size() >= 2 && var_e > 0.0 && var_r > 0.0) {
        r.cc = std::clamp(cov / std::sqrt(var_e * var_r), -1.0, 1.0);
    }
    return r;
}

}  // namespace nlhs
