// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace nlhs;

namespace {

RangeBinMatrix column_matrix(const std::vector<cdouble>& col) {
    RangeBinMatrix m(col.size(), 1, 0.01);
    m.set_column(0, col);
    return m;
}

}  // namespace

TEST(ClutterSuppress, ConstantColumnBecomesZero) {
    const auto out = clutter_suppress(column_matrix(std::vector<cdouble>(20, {0.7, -0.2})));
    for (std::size_t t = 0; t < out.n_times(); ++t) {
        EXPECT_NEAR(std::abs(out(t, 0)), 0.0, 1e-15);
    }
}

TEST(ClutterSuppress, ZeroMeanColumnUnchanged) {
    const auto out = clutter_suppress(column_matrix({{1, 0}, {-1, 0}}));
    EXPECT_EQ(out(0, 0), cdouble(1, 0));
    EXPECT_EQ(out(1, 0), cdouble(-1, 0));
}

TEST(ClutterSuppress, HandComputedMean) {
    const auto out = clutter_suppress(column_matrix({{2, 2}, {4, 0}}));
    EXPECT_NEAR(std::abs(out(0, 0) - cdouble(-1, 1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out(1, 0) - cdouble(1, -1)), 0.0, 1e-15);
}

TEST(ClutterSuppress, IdempotentAndZeroMeanPerBin) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    RangeBinMatrix m(200, 4, 0.01);
    for (std::size_t t = 0; t < 200; ++t) {
        for (std::size_t b = 0; b < 4; ++b) {
            m(t, b) = {g(rng) + 3.0, g(rng) - 1.0};
        }
    }
    const auto once = clutter_suppress(m);
    const auto twice = clutter_suppress(once);
    for (std::size_t b = 0; b < 4; ++b) {
        cdouble mean{};
        for (std::size_t t = 0; t < 200; ++t) {
            EXPECT_NEAR(std::abs(once(t, b) - twice(t, b)), 0.0, 1e-12 * (1.0 + std::abs(once(t, b))));
            mean += once(t, b);
        }
        EXPECT_NEAR(std::abs(mean) / 200.0, 0.0, 1e-13);
    }
}

TEST(ClutterSuppress, EmptyInputThrows) {
    EXPECT_THROW(clutter_suppress(RangeBinMatrix{}), Error);
}

TEST(LocateTarget, Argmax) {
    RangeBinMatrix m(10, 2, 0.01);
    for (std::size_t t = 0; t < 10; ++t) {
        m(t, 0) = std::sqrt(0.1);
        m(t, 1) = std::sqrt(0.9);
    }
    EXPECT_EQ(locate_target(m), 1u);
}

TEST(LocateTarget, TieGoesToSmallestIndex) {
    RangeBinMatrix m(10, 2, 0.01);
    for (std::size_t t = 0; t < 10; ++t) {
        m(t, 0) = std::sqrt(0.5);
        m(t, 1) = cdouble(0.0, std::sqrt(0.5));
    }
    EXPECT_EQ(locate_target(m), 0u);
}

TEST(LocateTarget, MatchesBruteForcePowerAverage) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        RangeBinMatrix m(64, 3, 0.01);
        for (std::size_t t = 0; t < 64; ++t) {
            for (std::size_t b = 0; b < 3; ++b) {
                m(t, b) = {g(rng) * (1.0 + static_cast<double>(b) * 0.1), g(rng)};
            }
        }
        std::size_t best = 0;
        double best_p = -1.0;
        for (std::size_t b = 0; b < 3; ++b) {
            double p = 0.0;
            for (std::size_t t = 0; t < 64; ++t) {
                p += m(t, b).real() * m(t, b).real() + m(t, b).imag() * m(t, b).imag();
            }
            p /= 64.0;
            if (p > best_p) {
                best_p = p;
                best = b;
            }
        }
        EXPECT_EQ(locate_target(m), best);
    }
}

TEST(LocateTarget, AllZeroThrows) {
    EXPECT_THROW(locate_target(RangeBinMatrix(5, 2, 0.01)), Error);
}

TEST(PhaseDisplacement, SinusoidRoundtripWithUnwrapping) {
    const double lambda = 5e-3;
    RadarConfig cfg{lambda, 100.0};
    ComplexSeries s;
    std::vector<double> d(1000);
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = 1e-3 * std::sin(2.0 * std::numbers::pi * 0.2 * static_cast<double>(i) / 100.0);
        s.samples.push_back(std::polar(1.0, 4.0 * std::numbers::pi * d[i] / lambda));
    }
    const auto out = phase_displacement(s, cfg);
    const double offset = out.samples[0] - d[0];
    double worst = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        worst = std::max(worst, std::abs(out.samples[i] - offset - d[i]));
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(PhaseDisplacement, ConstantSignalIsZero) {
    ComplexSeries s;
    s.samples.assign(50, {1.0, 0.0});
    for (double v : phase_displacement(s, RadarConfig{}).samples) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(PhaseDisplacement, RampAcrossPiIsContinuous) {
    const RadarConfig cfg;
    ComplexSeries s;
    for (int i = 0; i < 200; ++i) {
        s.samples.push_back(std::polar(1.0, 0.9 * i));
    }
    const auto d = phase_displacement(s, cfg);
    const double limit = cfg.wavelength / (4.0 * std::numbers::pi) * std::numbers::pi;
    for (std::size_t i = 1; i < d.size(); ++i) {
        EXPECT_LE(std::abs(d.samples[i] - d.samples[i - 1]), limit);
    }
}

TEST(PhaseDisplacement, StepOfExactlyPiIsPositive) {
    ComplexSeries s;
    s.samples = {{1.0, 0.0}, {-1.0, 0.0}};
    const auto phase = unwrap_phase(s);
    EXPECT_DOUBLE_EQ(phase[1] - phase[0], std::numbers::pi);
}

TEST(PhaseDisplacement, ZeroSampleThrows) {
    ComplexSeries s;
    s.samples = {{1.0, 0.0}, {0.0, 0.0}};
    EXPECT_THROW(unwrap_phase(s), Error);
}

TEST(PhaseDisplacement, UnwrappedStepsAreFolded) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    ComplexSeries s;
    double phase = 0.0;
    for (int i = 0; i < 500; ++i) {
        phase += u(rng);
        s.samples.push_back(std::polar(1.0, phase));
    }
    const auto p = unwrap_phase(s);
    for (std::size_t i = 1; i < p.size(); ++i) {
        const double step = p[i] - p[i - 1];
        EXPECT_GT(step, -std::numbers::pi);
        EXPECT_LE(step, std::numbers::pi + 1e-12);
    }
}

TEST(ExtractTarget, PicksStrongestBinAfterClutterRemoval) {
    RangeBinMatrix m(100, 3, 0.01);
    for (std::size_t t = 0; t < 100; ++t) {
        m(t, 0) = 10.0;  // strong static clutter only
        m(t, 1) = std::polar(1.0, 0.1 * static_cast<double>(t));
        m(t, 2) = 0.01 * static_cast<double>(t % 2);
    }
    const auto s = extract_target(m);
    ASSERT_EQ(s.size(), 100u);
    cdouble mean{};
    for (auto v : s.samples) {
        mean += v;
    }
    EXPECT_NEAR(std::abs(mean) / 100.0, 0.0, 1e-12);
    cdouble col_mean{};
    for (std::size_t t = 0; t < 100; ++t) {
        col_mean += m(t, 1);
    }
    col_mean /= 100.0;
    for (std::size_t t = 0; t < 100; ++t) {
        EXPECT_NEAR(std::abs(s.samples[t] - (m(t, 1) - col_mean)), 0.0, 1e-12);
    }
}
