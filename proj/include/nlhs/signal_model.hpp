// SPDX-License-Identifier: Apache-2.0
//
// signal_model.hpp - static clutter removal, target bin selection and
// phase-to-displacement conversion for per-range-bin radar data.

#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "nlhs/series.hpp"

namespace nlhs {

/// Subtracts the slow-time mean from every range bin.
inline RangeBinMatrix clutter_suppress(const RangeBinMatrix& m) {
    require(!m.empty(), "empty input");
    RangeBinMatrix out = m;
    const double inv_n = 1.0 / static_cast<double>(m.n_times());
    for (std::size_t b = 0; b < m.n_bins(); ++b) {
        cdouble mean{};
        for (std::size_t t = 0; t < m.n_times(); ++t) {
            mean += m(t, b);
        }
        mean *= inv_n;
        for (std::size_t t = 0; t < m.n_times(); ++t) {
            out(t, b) -= mean;
        }
    }
    return out;
}

/// Time-averaged power per range bin.
inline std::vector<double> mean_power(const RangeBinMatrix& m) {
    require(!m.empty(), "empty input");
    std::vector<double> power(m.n_bins(), 0.0);
    for (std::size_t t = 0; t < m.n_times(); ++t) {
        for (std::size_t b = 0; b < m.n_bins(); ++b) {
            power[b] += std::norm(m(t, b));
        }
    }
    for (double& p : power) {
        p /= static_cast<double>(m.n_times());
    }
    return power;
}

/// Index of the bin with the largest time-averaged power; the smallest
/// index wins ties.
inline std::size_t locate_target(const RangeBinMatrix& m) {
    const auto power = mean_power(m);
    std::size_t best = 0;
    for (std::size_t b = 1; b < power.size(); ++b) {
        if (power[b] > power[best]) {
            best = b;
        }
    }
    if (!(power[best] > 0.0)) {
        throw Error("no target power");
    }
    return best;
}

/// Unwrapped phase of a complex series. Consecutive steps are folded into
/// (-pi, pi]; a step of exactly pi stays +pi.
inline std::vector<double> unwrap_phase(const ComplexSeries& s) {
    s.validate();
    constexpr double pi = std::numbers::pi;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> out(s.size());
    double offset = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.samples[i] == cdouble{}) {
            throw Error("undefined phase at index " + std::to_string(i));
        }
        const double p = std::arg(s.samples[i]);
        if (i > 0) {
            double step = p + offset - prev;
            while (step > pi) {
                offset -= two_pi;
                step -= two_pi;
            }
            while (step <= -pi) {
                offset += two_pi;
                step += two_pi;
            }
        }
        out[i] = p + offset;
        prev = out[i];
    }
    return out;
}

/// Displacement d(t) = (lambda / 4 pi) * unwrap(arg s(t)).
inline RealSeries phase_displacement(const ComplexSeries& s, const RadarConfig& cfg) {
    cfg.validate();
    auto phase = unwrap_phase(s);
    const double scale = cfg.wavelength / (4.0 * std::numbers::pi);
    for (double& v : phase) {
        v *= scale;
    }
    return RealSeries{std::move(phase), s.t0, s.start_time};
}

/// Clutter suppression, target localisation and extraction of the target
/// bin's complex slow-time signal.
inline ComplexSeries extract_target(const RangeBinMatrix& raw) {
    const auto suppressed = clutter_suppress(raw);
    return suppressed.column(locate_target(suppressed));
}

}  // namespace nlhs
