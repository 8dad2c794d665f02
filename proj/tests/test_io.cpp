// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>

#include <unistd.h>

#include "support.hpp"

using namespace nlhs;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("nlhs_io_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path operator/(const std::string& name) const { return path / name; }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

}  // namespace

TEST(Io, MatrixRoundtripIsExact) {
    TempDir dir;
    SynthConfig c;
    c.duration_s = 2.0;
    const auto rec = generate(c);
    io::write_range_bin_matrix(dir / "m.csv", rec.matrix);
    const auto back = io::read_range_bin_matrix(dir / "m.csv");
    ASSERT_EQ(back.n_times(), rec.matrix.n_times());
    ASSERT_EQ(back.n_bins(), 3u);
    EXPECT_DOUBLE_EQ(back.t0(), rec.matrix.t0());
    for (std::size_t t = 0; t < back.n_times(); ++t) {
        for (std::size_t b = 0; b < 3; ++b) {
            EXPECT_EQ(back(t, b), rec.matrix(t, b));
        }
    }
}

TEST(Io, SeriesAndTrackRoundtrip) {
    TempDir dir;
    RealSeries s{{0.1, -0.2, 0.30000000000000004}, 0.01, 0.0};
    io::write_real_series(dir / "s.csv", s);
    const auto s2 = io::read_real_series(dir / "s.csv");
    EXPECT_EQ(s2.samples, s.samples);
    EXPECT_DOUBLE_EQ(s2.t0, 0.01);

    IntervalTrack t;
    t.entries = {{7.5, 1.0}, {8.5, std::nullopt}, {9.5, 0.8333333333333334}};
    io::write_track(dir / "t.csv", t);
    const auto t2 = io::read_track(dir / "t.csv");
    ASSERT_EQ(t2.size(), 3u);
    EXPECT_EQ(t2.entries[0].interval, 1.0);
    EXPECT_FALSE(t2.entries[1].interval);
    EXPECT_EQ(t2.entries[2].interval, 0.8333333333333334);
}

TEST(Io, GroundTruthFormats) {
    TempDir dir;
    write_file(dir / "beats.csv", "beat_time_sec\n0\n1\n2\n3\n");
    const auto a = io::read_ground_truth(dir / "beats.csv");
    EXPECT_EQ(a.beat_times.size(), 4u);
    write_file(dir / "ivals.csv", "t_sec,interval_sec\n0,1.0\n1,1.1\n");
    const auto b = io::read_ground_truth(dir / "ivals.csv");
    EXPECT_EQ(b.intervals.size(), 2u);
    write_file(dir / "bad.csv", "time\n0\n1\n");
    EXPECT_THROW(io::read_ground_truth(dir / "bad.csv"), Error);
    write_file(dir / "nan.csv", "beat_time_sec\n0\nabc\n");
    EXPECT_THROW(io::read_ground_truth(dir / "nan.csv"), Error);
}

TEST(Io, MalformedInputsRejected) {
    TempDir dir;
    EXPECT_THROW(io::read_csv(dir / "missing.csv"), Error);
    write_file(dir / "empty.csv", "");
    EXPECT_THROW(io::read_record_signals(dir / "empty.csv", RadarConfig{}), Error);
    write_file(dir / "ragged.csv", "t,bin0_re,bin0_im\n0,1,0\n0.01,1\n");
    EXPECT_THROW(io::read_range_bin_matrix(dir / "ragged.csv"), Error);
    write_file(dir / "uneven.csv", "t,value\n0,1\n0.01,2\n0.05,3\n");
    EXPECT_THROW(io::read_real_series(dir / "uneven.csv"), Error);
}

TEST(Io, ParamsJsonRoundtripAndUnknownKeys) {
    Params p;
    p.nlhs.N = 9;
    p.estimator.t_theta = 0.02;
    const auto back = io::params_from_json(io::to_json(p));
    EXPECT_EQ(back.nlhs.N, 9);
    EXPECT_EQ(back.estimator.t_theta, 0.02);
    EXPECT_THROW(io::params_from_json(io::json::parse(R"({"nlhs": {"NN": 3}})")), Error);
    EXPECT_THROW(io::params_from_json(io::json::parse(R"({"nlhs": {"N": "x"}})")), Error);
    EXPECT_THROW(io::params_from_json(io::json::parse(R"({"nlhs": {"N": 0}})")), Error);
}

TEST(Io, SynthJsonRoundtrip) {
    SynthConfig c;
    c.heart_rate = {{0.0, 1.1}, {30.0, 1.3}};
    c.seed = 12345;
    const auto back = io::synth_from_json(io::to_json(c));
    ASSERT_EQ(back.heart_rate.size(), 2u);
    EXPECT_EQ(back.heart_rate[1].f, 1.3);
    EXPECT_EQ(back.seed, 12345u);
    const auto scalar = io::synth_from_json(io::json::parse(R"({"heart_rate": 1.2})"));
    EXPECT_EQ(scalar.heart_rate.size(), 1u);
    EXPECT_EQ(scalar.heart_rate[0].f, 1.2);
    EXPECT_THROW(io::synth_from_json(io::json::parse(R"({"heart_rate": 3.0})")), Error);
}

TEST(Io, DisplacementInputHasNoComplexSignal) {
    TempDir dir;
    SynthConfig c;
    c.duration_s = 20.0;
    const auto rec = generate(c);
    io::write_synth_record(dir.path, rec);
    const auto from_disp = io::read_record_signals(dir / "displacement.csv", RadarConfig{});
    EXPECT_FALSE(from_disp.iq);
    EXPECT_THROW(run_mode(from_disp, Mode::prop2, Params{}), Error);
    const auto from_matrix = io::read_record_signals(dir / "matrix.csv", RadarConfig{});
    EXPECT_TRUE(from_matrix.iq);
}
