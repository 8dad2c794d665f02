// SPDX-License-Identifier: Apache-2.0
//
// synth.hpp - synthetic radar vital-sign records with exact ground truth.
//
// d(t) = sum_k r_k cos(2 pi k f_r t + psi_k)       respiration
//      + sum_k h_k cos(k phi(t) + theta_k)          heartbeat, phi = 2 pi int f_h
//      + white noise
//
// with r_k = resp_amp * resp_decay^(k-1) and h_k = heart_amp * heart_decay^(k-1).
// Beats are the instants where phi(t) crosses a multiple of 2 pi.

#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "nlhs/metrics.hpp"
#include "nlhs/series.hpp"

namespace nlhs {

/// Knot of the piecewise-linear heart-rate function.
struct RateKnot {
    double t = 0.0;  ///< [s]
    double f = 1.0;  ///< [Hz]
};

struct SynthConfig {
    double duration_s = 60.0;
    double fs = 100.0;
    double resp_freq = 0.25;
    double resp_amp = 2e-3;
    int resp_harmonics = 3;
    double resp_decay = 0.3;
    std::vector<RateKnot> heart_rate{{0.0, 1.0}};  ///< held constant outside the knots
    double heart_amp = 1e-4;
    int heart_harmonics = 15;
    double heart_decay = 0.8;
    double noise_sigma = 0.0;
    double wavelength = speed_of_light / 62e9;
    bool random_phases = true;
    double clutter_amp = 0.05;
    double clutter_noise = 1e-3;
    std::uint64_t seed = 1;

    void validate() const {
        auto check = [](bool ok, const char* field) {
            if (!ok) {
                throw Error(std::string("invalid synth config field: ") + field);
            }
        };
        check(duration_s > 0.0, "duration_s");
        check(fs > 0.0, "fs");
        check(resp_freq > 0.0 && resp_freq < fs / 2.0, "resp_freq");
        check(resp_amp >= 0.0, "resp_amp");
        check(resp_harmonics >= 0, "resp_harmonics");
        check(resp_decay >= 0.0, "resp_decay");
        check(!heart_rate.empty(), "heart_rate");
        for (std::size_t i = 0; i < heart_rate.size(); ++i) {
            check(heart_rate[i].f >= 0.8 && heart_rate[i].f <= 1.7, "heart_rate");
            check(i == 0 || heart_rate[i].t > heart_rate[i - 1].t, "heart_rate");
        }
        check(heart_amp >= 0.0, "heart_amp");
        check(heart_harmonics >= 1, "heart_harmonics");
        check(heart_decay >= 0.0, "heart_decay");
        check(noise_sigma >= 0.0, "noise_sigma");
        check(wavelength > 0.0, "wavelength");
        check(clutter_amp >= 0.0, "clutter_amp");
        check(clutter_noise >= 0.0, "clutter_noise");
    }

    /// Instantaneous heart rate [Hz].
    double heart_freq(double t) const {
        const auto& k = heart_rate;
        if (t <= k.front().t) {
            return k.front().f;
        }
        if (t >= k.back().t) {
            return k.back().f;
        }
        std::size_t i = 1;
        while (k[i].t < t) {
            ++i;
        }
        const double w = (t - k[i - 1].t) / (k[i].t - k[i - 1].t);
        return k[i - 1].f + w * (k[i].f - k[i - 1].f);
    }

    /// Heartbeat cycles completed by time t, int_0^t f_h (exact for the
    /// piecewise-linear rate).
    double heart_cycles(double t) const {
        auto integral = [this](double a, double b) {
            // trapezoid is exact on linear pieces
            return 0.5 * (heart_freq(a) + heart_freq(b)) * (b - a);
        };
        std::vector<double> cuts{0.0};
        for (const auto& k : heart_rate) {
            if (k.t > 0.0 && k.t < t) {
                cuts.push_back(k.t);
            }
        }
        cuts.push_back(t);
        double total = 0.0;
        for (std::size_t i = 1; i < cuts.size(); ++i) {
            total += integral(cuts[i - 1], cuts[i]);
        }
        return total;
    }
};

struct SynthRecord {
    RangeBinMatrix matrix;
    RealSeries displacement;        ///< displacement encoded in the target bin [m]
    GroundTruth truth;              ///< beat instants
    std::vector<double> instantaneous_interval;  ///< 1 / f_h(t) at each sample [s]
    std::size_t target_bin = 1;
};

/// Beat instants in [0, duration]: solutions of heart_cycles(t) = m.
inline std::vector<double> beat_times(const SynthConfig& cfg) {
    const double total = cfg.heart_cycles(cfg.duration_s);
    std::vector<double> beats;
    for (long m = 0; static_cast<double>(m) <= total; ++m) {
        double lo = 0.0;
        double hi = cfg.duration_s;
        for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (cfg.heart_cycles(mid) < static_cast<double>(m)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        beats.push_back(m == 0 ? 0.0 : hi);
    }
    return beats;
}

namespace detail {

struct SynthComponents {
    std::vector<double> respiration;
    std::vector<double> heartbeat;
};

inline SynthComponents synth_components(const SynthConfig& cfg, std::mt19937_64& rng) {
    const auto n = static_cast<std::size_t>(std::llround(cfg.duration_s * cfg.fs));
    const double two_pi = 2.0 * std::numbers::pi;
    std::uniform_real_distribution<double> phase(0.0, two_pi);
    std::vector<double> resp_phase(static_cast<std::size_t>(cfg.resp_harmonics));
    for (auto& p : resp_phase) {
        p = cfg.random_phases ? phase(rng) : 0.0;
    }
    std::vector<double> heart_phase(static_cast<std::size_t>(cfg.heart_harmonics), 0.0);
    for (std::size_t k = 1; k < heart_phase.size(); ++k) {
        heart_phase[k] = cfg.random_phases ? phase(rng) : 0.0;
    }

    SynthComponents c{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / cfg.fs;
        double amp = cfg.resp_amp;
        for (int k = 1; k <= cfg.resp_harmonics; ++k) {
            c.respiration[i] += amp * std::cos(two_pi * k * cfg.resp_freq * t + resp_phase[static_cast<std::size_t>(k - 1)]);
            amp *= cfg.resp_decay;
        }
        const double phi = two_pi * cfg.heart_cycles(t);
        amp = cfg.heart_amp;
        for (int k = 1; k <= cfg.heart_harmonics; ++k) {
            c.heartbeat[i] += amp * std::cos(k * phi + heart_phase[static_cast<std::size_t>(k - 1)]);
            amp *= cfg.heart_decay;
        }
    }
    return c;
}

inline double mean_square(const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) {
        acc += v * v;
    }
    return x.empty() ? 0.0 : acc / static_cast<double>(x.size());
}

}  // namespace detail

/// Which noiseless component an SNR is measured against.
enum class SnrReference { displacement, heartbeat };

/// Noise sigma giving the requested SNR against the noiseless displacement
/// (respiration + heartbeat) or the heartbeat component alone.
inline double noise_sigma_for_snr(const SynthConfig& cfg, double snr_db,
                                  SnrReference ref = SnrReference::heartbeat) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    const auto c = detail::synth_components(cfg, rng);
    std::vector<double> d(c.respiration.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = c.heartbeat[i] + (ref == SnrReference::displacement ? c.respiration[i] : 0.0);
    }
    return std::sqrt(detail::mean_square(d) / std::pow(10.0, snr_db / 10.0));
}

/// Builds a 3-bin record: bin 1 carries exp(j 4 pi d(t) / lambda), bins 0 and
/// 2 carry weak static clutter plus noise.
inline SynthRecord generate(const SynthConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    const auto c = detail::synth_components(cfg, rng);
    const std::size_t n = c.respiration.size();
    require(n >= 2, "synthetic record too short");
    const double t0 = 1.0 / cfg.fs;

    SynthRecord rec;
    rec.displacement = RealSeries{std::vector<double>(n), t0, 0.0};
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double noise = cfg.noise_sigma > 0.0 ? cfg.noise_sigma * gauss(rng) : 0.0;
        rec.displacement.samples[i] = c.respiration[i] + c.heartbeat[i] + noise;
    }

    rec.matrix = RangeBinMatrix(n, 3, t0, 0.0, 0.0);
    const double k_phase = 4.0 * std::numbers::pi / cfg.wavelength;
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const cdouble static0 = std::polar(cfg.clutter_amp, angle(rng));
    const cdouble static2 = std::polar(cfg.clutter_amp, angle(rng));
    for (std::size_t i = 0; i < n; ++i) {
        rec.matrix(i, 1) = std::polar(1.0, k_phase * rec.displacement.samples[i]);
        rec.matrix(i, 0) = static0 + cfg.clutter_noise * cdouble{gauss(rng), gauss(rng)};
        rec.matrix(i, 2) = static2 + cfg.clutter_noise * cdouble{gauss(rng), gauss(rng)};
    }

    rec.truth = GroundTruth::from_beats(beat_times(cfg));
    rec.instantaneous_interval.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rec.instantaneous_interval[i] = 1.0 / cfg.heart_freq(static_cast<double>(i) * t0);
    }
    return rec;
}

/// Randomised 60 s records for desk-scale evaluation; record i uses seed
/// base_seed + i.
inline std::vector<SynthConfig> default_corpus(std::size_t count = 20, std::uint64_t base_seed = 2024,
                                               double snr_db = 10.0,
                                               SnrReference ref = SnrReference::heartbeat) {
    std::vector<SynthConfig> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::mt19937_64 rng(base_seed + i);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };

        SynthConfig cfg;
        cfg.seed = base_seed + 1000 + i;
        cfg.resp_freq = uniform(0.2, 0.33);
        cfg.resp_amp = uniform(1.0e-3, 3.0e-3);
        cfg.resp_harmonics = 4;
        cfg.resp_decay = uniform(0.2, 0.4);
        cfg.heart_amp = uniform(1.0e-4, 3.0e-4);
        cfg.heart_harmonics = 15;
        cfg.heart_decay = uniform(0.75, 0.9);
        const double base = uniform(0.95, 1.45);
        cfg.heart_rate.clear();
        for (double t = 0.0; t <= cfg.duration_s + 1e-9; t += 15.0) {
            cfg.heart_rate.push_back({t, base + uniform(-0.05, 0.05)});
        }
        cfg.noise_sigma = noise_sigma_for_snr(cfg, snr_db, ref);
        out.push_back(cfg);
    }
    return out;
}

}  // namespace nlhs
