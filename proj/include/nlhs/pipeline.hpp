// SPDX-License-Identifier: Apache-2.0
//
// pipeline.hpp - the four estimation modes and per-record evaluation.
//
//   prop1   NLHS on the smoothed second derivative of d(t)
//   prop2   NLHS on the smoothed |s''(t)| of the complex target signal
//   conv1a  STFT peak on the smoothed second derivative of d(t)
//   conv2a  STFT peak on the smoothed |s''(t)|

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlhs/baselines.hpp"
#include "nlhs/estimator.hpp"
#include "nlhs/metrics.hpp"
#include "nlhs/signal_model.hpp"

namespace nlhs {

enum class Mode { prop1, prop2, conv1a, conv2a };

inline const std::vector<Mode>& all_modes() {
    static const std::vector<Mode> modes{Mode::prop1, Mode::prop2, Mode::conv1a, Mode::conv2a};
    return modes;
}

inline std::string to_string(Mode m) {
    switch (m) {
        case Mode::prop1: return "prop1";
        case Mode::prop2: return "prop2";
        case Mode::conv1a: return "conv1a";
        case Mode::conv2a: return "conv2a";
    }
    return "?";
}

inline Mode parse_mode(std::string_view s) {
    for (Mode m : all_modes()) {
        if (s == to_string(m)) {
            return m;
        }
    }
    throw Error("unknown mode '" + std::string(s) + "' (expected prop1, prop2, conv1a or conv2a)");
}

/// Modes that need the complex target signal rather than d(t) alone.
inline bool needs_complex(Mode m) { return m == Mode::prop2 || m == Mode::conv2a; }

struct Params {
    NlhsParams nlhs;
    EstimatorParams estimator;
    RadarConfig radar;
};

/// Signals available for one record. `iq` may be absent when only a
/// displacement series was supplied.
struct RecordSignals {
    RealSeries displacement;
    std::optional<ComplexSeries> iq;
};

/// Clutter suppression, target selection and displacement extraction.
inline RecordSignals signals_from_matrix(const RangeBinMatrix& m, const RadarConfig& radar) {
    RecordSignals r;
    r.iq = extract_target(m);
    r.displacement = phase_displacement(*r.iq, radar);
    return r;
}

/// Input series fed to the estimator for a mode.
inline RealSeries enhanced_input(const RecordSignals& sig, Mode mode, const EstimatorParams& p) {
    if (needs_complex(mode)) {
        require(sig.iq.has_value(), "mode " + to_string(mode) + " needs complex radar input");
        return enhance_complex(*sig.iq, p);
    }
    return enhance_displacement(sig.displacement, p);
}

inline IntervalTrack run_mode(const RecordSignals& sig, Mode mode, const Params& params) {
    const auto input = enhanced_input(sig, mode, params.estimator);
    switch (mode) {
        case Mode::prop1:
        case Mode::prop2:
            return estimate_enhanced(input, params.estimator, params.nlhs).track;
        case Mode::conv1a:
        case Mode::conv2a:
            return stft_estimate(input, params.estimator, {params.nlhs.f_min, params.nlhs.f_max_search});
    }
    throw Error("unknown mode");
}

/// Number of 1 s scoring segments for a record of the given duration.
inline std::size_t segment_count(double duration_s, double segment_s = 1.0) {
    return static_cast<std::size_t>(std::floor(duration_s / segment_s + 1e-9));
}

/// Scores a track on 1 s segments covering [start, start + duration).
inline MetricsReport evaluate_track(const IntervalTrack& track, const GroundTruth& truth, double duration_s,
                                    double start = 0.0) {
    const std::size_t m = segment_count(duration_s);
    const auto centers = segment_centers(m, 1.0, start);
    return score(align_to_segments(track, m, 1.0, start), resample_truth(truth, centers));
}

}  // namespace nlhs
