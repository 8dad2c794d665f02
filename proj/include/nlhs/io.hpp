// SPDX-License-Identifier: Apache-2.0
//
// io.hpp - CSV file formats and JSON parameter files.
//
//   range-bin matrix   t,bin0_re,bin0_im,bin1_re,bin1_im,...
//   real series        t,value
//   interval track     t_sec,interval_sec        (empty interval = MISSING)
//   ground truth       beat_time_sec             or  t_sec,interval_sec
//   pseudo-spectrum    f_hz,value
//
// Sampling intervals are inferred from the t column, which must be uniform
// to within 1e-9 s.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlhs/pipeline.hpp"
#include "nlhs/synth.hpp"

namespace nlhs::io {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

inline std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline double to_double(const std::string& s, const std::string& where) {
    const std::string t = trim(s);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
        throw Error("invalid number '" + t + "' in " + where);
    }
    return v;
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_time(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9f", t);
    return buf;
}

// Uniform sampling interval of a time column.
inline double sampling_interval(const std::vector<double>& t, const std::string& where) {
    require(t.size() >= 2, where + ": need at least two samples to infer the sampling interval");
    const double t0 = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    require(t0 > 0.0, where + ": time column must be increasing");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (std::abs(t[i] - (t.front() + static_cast<double>(i) * t0)) > 1e-9) {
            throw Error(where + ": non-uniform sampling at row " + std::to_string(i + 1));
        }
    }
    return t0;
}

}  // namespace detail

inline CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (detail::trim(line).empty()) {
            continue;
        }
        auto fields = detail::split(line);
        for (auto& f : fields) {
            f = detail::trim(f);
        }
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    require(have_header, path.string() + ": empty file");
    return table;
}

/// Writes via a temporary file and rename, so readers never see a partial file.
inline void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write " + path.string());
        }
        out << content;
        if (!out) {
            throw Error("write failed for " + path.string());
        }
    }
    fs::rename(tmp, path);
}

// --- range-bin matrix -------------------------------------------------------

inline bool is_matrix_header(const std::vector<std::string>& h) {
    return h.size() >= 3 && h[0] == "t" && h[1] == "bin0_re" && h[2] == "bin0_im";
}

inline RangeBinMatrix matrix_from_table(const CsvTable& table, const std::string& where) {
    const auto& h = table.header;
    require(is_matrix_header(h) && (h.size() - 1) % 2 == 0, where + ": expected header t,bin0_re,bin0_im,...");
    const std::size_t n_bins = (h.size() - 1) / 2;
    for (std::size_t b = 0; b < n_bins; ++b) {
        require(h[1 + 2 * b] == "bin" + std::to_string(b) + "_re" && h[2 + 2 * b] == "bin" + std::to_string(b) + "_im",
                where + ": unexpected column name " + h[1 + 2 * b]);
    }
    require(!table.rows.empty(), where + ": empty input");
    std::vector<double> t;
    t.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        require(table.rows[r].size() == h.size(), where + ": ragged row " + std::to_string(r + 2));
        t.push_back(detail::to_double(table.rows[r][0], where));
    }
    const double t0 = detail::sampling_interval(t, where);
    RangeBinMatrix m(table.rows.size(), n_bins, t0, 0.0, t.front());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t b = 0; b < n_bins; ++b) {
            m(r, b) = {detail::to_double(table.rows[r][1 + 2 * b], where),
                       detail::to_double(table.rows[r][2 + 2 * b], where)};
        }
    }
    return m;
}

inline RangeBinMatrix read_range_bin_matrix(const fs::path& path) {
    return matrix_from_table(read_csv(path), path.string());
}

inline void write_range_bin_matrix(const fs::path& path, const RangeBinMatrix& m) {
    std::string out = "t";
    for (std::size_t b = 0; b < m.n_bins(); ++b) {
        out += ",bin" + std::to_string(b) + "_re,bin" + std::to_string(b) + "_im";
    }
    out += '\n';
    for (std::size_t i = 0; i < m.n_times(); ++i) {
        out += detail::fmt_time(m.start_time() + static_cast<double>(i) * m.t0());
        for (std::size_t b = 0; b < m.n_bins(); ++b) {
            out += ',' + detail::fmt(m(i, b).real()) + ',' + detail::fmt(m(i, b).imag());
        }
        out += '\n';
    }
    write_atomic(path, out);
}

// --- real series ------------------------------------------------------------

inline RealSeries series_from_table(const CsvTable& table, const std::string& where) {
    require(table.header.size() == 2 && table.header[0] == "t" && table.header[1] == "value",
            where + ": expected header t,value");
    require(!table.rows.empty(), where + ": empty input");
    std::vector<double> t;
    RealSeries s;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        require(table.rows[r].size() == 2, where + ": ragged row " + std::to_string(r + 2));
        t.push_back(detail::to_double(table.rows[r][0], where));
        s.samples.push_back(detail::to_double(table.rows[r][1], where));
    }
    s.t0 = detail::sampling_interval(t, where);
    s.start_time = t.front();
    return s;
}

inline RealSeries read_real_series(const fs::path& path) { return series_from_table(read_csv(path), path.string()); }

inline void write_real_series(const fs::path& path, const RealSeries& s) {
    std::string out = "t,value\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += detail::fmt_time(s.time(i)) + ',' + detail::fmt(s.samples[i]) + '\n';
    }
    write_atomic(path, out);
}

/// Record signals from either a range-bin matrix CSV or a t,value
/// displacement CSV (the latter carries no complex signal).
inline RecordSignals read_record_signals(const fs::path& path, const RadarConfig& radar) {
    const auto table = read_csv(path);
    if (is_matrix_header(table.header)) {
        return signals_from_matrix(matrix_from_table(table, path.string()), radar);
    }
    RecordSignals r;
    r.displacement = series_from_table(table, path.string());
    return r;
}

// --- interval track ---------------------------------------------------------

inline std::string track_csv(const IntervalTrack& track) {
    std::string out = "t_sec,interval_sec\n";
    for (const auto& e : track.entries) {
        out += detail::fmt(e.time) + ',' + (e.interval ? detail::fmt(*e.interval) : std::string{}) + '\n';
    }
    return out;
}

inline void write_track(const fs::path& path, const IntervalTrack& track) { write_atomic(path, track_csv(track)); }

inline IntervalTrack read_track(const fs::path& path) {
    const auto table = read_csv(path);
    const std::string where = path.string();
    require(table.header.size() == 2 && table.header[0] == "t_sec" && table.header[1] == "interval_sec",
            where + ": expected header t_sec,interval_sec");
    IntervalTrack track;
    for (const auto& row : table.rows) {
        require(row.size() == 1 || row.size() == 2, where + ": ragged row");
        IntervalTrack::Entry e{detail::to_double(row[0], where), std::nullopt};
        if (row.size() == 2 && !row[1].empty()) {
            e.interval = detail::to_double(row[1], where);
        }
        require(track.entries.empty() || e.time > track.entries.back().time, where + ": times must increase");
        track.entries.push_back(e);
    }
    return track;
}

// --- ground truth -----------------------------------------------------------

inline GroundTruth read_ground_truth(const fs::path& path) {
    const auto table = read_csv(path);
    const std::string where = path.string();
    GroundTruth gt;
    if (table.header.size() == 1 && table.header[0] == "beat_time_sec") {
        for (const auto& row : table.rows) {
            require(row.size() == 1, where + ": ragged row");
            gt.beat_times.push_back(detail::to_double(row[0], where));
        }
    } else if (table.header.size() == 2 && table.header[0] == "t_sec" && table.header[1] == "interval_sec") {
        for (const auto& row : table.rows) {
            require(row.size() == 2, where + ": ragged row");
            gt.interval_times.push_back(detail::to_double(row[0], where));
            gt.intervals.push_back(detail::to_double(row[1], where));
        }
    } else {
        throw Error(where + ": expected header beat_time_sec or t_sec,interval_sec");
    }
    gt.validate();
    return gt;
}

inline void write_beat_times(const fs::path& path, const std::vector<double>& beats) {
    std::string out = "beat_time_sec\n";
    for (double b : beats) {
        out += detail::fmt(b) + '\n';
    }
    write_atomic(path, out);
}

inline void write_interval_function(const fs::path& path, const RealSeries& grid_times,
                                    const std::vector<double>& intervals) {
    std::string out = "t_sec,interval_sec\n";
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        out += detail::fmt_time(grid_times.time(i)) + ',' + detail::fmt(intervals[i]) + '\n';
    }
    write_atomic(path, out);
}

inline std::string pseudo_spectrum_csv(const PseudoSpectrum& ps) {
    std::string out = "f_hz,value\n";
    for (std::size_t i = 0; i < ps.size(); ++i) {
        out += detail::fmt(ps.freqs[i]) + ',' + detail::fmt(ps.values[i]) + '\n';
    }
    return out;
}

// --- JSON -------------------------------------------------------------------

namespace detail {

// Reads `key` into `dst` when present; unknown keys are rejected.
class Reader {
public:
    Reader(const json& j, std::string section) : j_(j), section_(std::move(section)) {
        require(j.is_object(), "config section '" + section_ + "' must be an object");
    }

    template <typename T>
    Reader& get(const char* key, T& dst) {
        seen_.emplace_back(key);
        if (j_.contains(key)) {
            try {
                dst = j_.at(key).get<T>();
            } catch (const json::exception&) {
                throw Error("config field " + section_ + "." + key + " has the wrong type");
            }
        }
        return *this;
    }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
                throw Error("unknown config field " + section_ + "." + key);
            }
        }
    }

private:
    const json& j_;
    std::string section_;
    std::vector<std::string> seen_;
};

}  // namespace detail

inline json to_json(const Params& p) {
    return json{
        {"nlhs",
         {{"F", p.nlhs.F},
          {"f_min", p.nlhs.f_min},
          {"f_max_search", p.nlhs.f_max_search},
          {"N", p.nlhs.N},
          {"df_target", p.nlhs.df_target}}},
        {"estimator",
         {{"window_s", p.estimator.window_s},
          {"hop_s", p.estimator.hop_s},
          {"n_min", p.estimator.n_min},
          {"n_max", p.estimator.n_max},
          {"t_theta", p.estimator.t_theta},
          {"hampel_half_window", p.estimator.hampel_half_window},
          {"hampel_nsigma", p.estimator.hampel_nsigma},
          {"smooth_width_s", p.estimator.smooth_width_s},
          {"pad_factor", p.estimator.pad_factor}}},
        {"radar", {{"wavelength", p.radar.wavelength}, {"fs", p.radar.fs}}},
    };
}

/// Estimation parameters from the "nlhs", "estimator" and "radar" sections;
/// missing fields keep their defaults. Other top-level sections are ignored.
inline Params params_from_json(const json& j) {
    require(j.is_object(), "params must be a JSON object");
    Params p;
    if (j.contains("nlhs")) {
        detail::Reader(j["nlhs"], "nlhs")
            .get("F", p.nlhs.F)
            .get("f_min", p.nlhs.f_min)
            .get("f_max_search", p.nlhs.f_max_search)
            .get("N", p.nlhs.N)
            .get("df_target", p.nlhs.df_target)
            .finish();
    }
    if (j.contains("estimator")) {
        detail::Reader(j["estimator"], "estimator")
            .get("window_s", p.estimator.window_s)
            .get("hop_s", p.estimator.hop_s)
            .get("n_min", p.estimator.n_min)
            .get("n_max", p.estimator.n_max)
            .get("t_theta", p.estimator.t_theta)
            .get("hampel_half_window", p.estimator.hampel_half_window)
            .get("hampel_nsigma", p.estimator.hampel_nsigma)
            .get("smooth_width_s", p.estimator.smooth_width_s)
            .get("pad_factor", p.estimator.pad_factor)
            .finish();
    }
    if (j.contains("radar")) {
        detail::Reader(j["radar"], "radar").get("wavelength", p.radar.wavelength).get("fs", p.radar.fs).finish();
    }
    p.nlhs.validate();
    p.estimator.validate();
    p.radar.validate();
    return p;
}

inline json to_json(const SynthConfig& c) {
    json knots = json::array();
    for (const auto& k : c.heart_rate) {
        knots.push_back({{"t", k.t}, {"f", k.f}});
    }
    return json{{"duration_s", c.duration_s},
                {"fs", c.fs},
                {"resp_freq", c.resp_freq},
                {"resp_amp", c.resp_amp},
                {"resp_harmonics", c.resp_harmonics},
                {"resp_decay", c.resp_decay},
                {"heart_rate", knots},
                {"heart_amp", c.heart_amp},
                {"heart_harmonics", c.heart_harmonics},
                {"heart_decay", c.heart_decay},
                {"noise_sigma", c.noise_sigma},
                {"wavelength", c.wavelength},
                {"random_phases", c.random_phases},
                {"clutter_amp", c.clutter_amp},
                {"clutter_noise", c.clutter_noise},
                {"seed", c.seed}};
}

inline SynthConfig synth_from_json(const json& j) {
    SynthConfig c;
    json knots;
    detail::Reader r(j, "synth");
    r.get("duration_s", c.duration_s)
        .get("fs", c.fs)
        .get("resp_freq", c.resp_freq)
        .get("resp_amp", c.resp_amp)
        .get("resp_harmonics", c.resp_harmonics)
        .get("resp_decay", c.resp_decay)
        .get("heart_rate", knots)
        .get("heart_amp", c.heart_amp)
        .get("heart_harmonics", c.heart_harmonics)
        .get("heart_decay", c.heart_decay)
        .get("noise_sigma", c.noise_sigma)
        .get("wavelength", c.wavelength)
        .get("random_phases", c.random_phases)
        .get("clutter_amp", c.clutter_amp)
        .get("clutter_noise", c.clutter_noise)
        .get("seed", c.seed)
        .finish();
    if (knots.is_number()) {
        c.heart_rate = {{0.0, knots.get<double>()}};
    } else if (knots.is_array()) {
        c.heart_rate.clear();
        for (const auto& k : knots) {
            require(k.is_object() && k.contains("t") && k.contains("f"),
                    "synth.heart_rate entries must be {\"t\": ..., \"f\": ...}");
            c.heart_rate.push_back({k["t"].get<double>(), k["f"].get<double>()});
        }
    } else {
        require(knots.is_null(), "synth.heart_rate must be a number or a list of knots");
    }
    c.validate();
    return c;
}

/// Settings for a randomised synthetic corpus.
struct CorpusSpec {
    std::size_t records = 20;
    std::uint64_t seed = 2024;
    double snr_db = 10.0;
    SnrReference snr_reference = SnrReference::heartbeat;
};

inline CorpusSpec corpus_spec_from_json(const json& j) {
    CorpusSpec s;
    std::string ref = "heartbeat";
    detail::Reader(j, "corpus")
        .get("records", s.records)
        .get("seed", s.seed)
        .get("snr_db", s.snr_db)
        .get("snr_reference", ref)
        .finish();
    if (ref == "heartbeat") {
        s.snr_reference = SnrReference::heartbeat;
    } else if (ref == "displacement") {
        s.snr_reference = SnrReference::displacement;
    } else {
        throw Error("corpus.snr_reference must be 'heartbeat' or 'displacement'");
    }
    require(s.records >= 1, "corpus.records must be >= 1");
    return s;
}

inline json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

inline json to_json(const MetricsReport& r) {
    json j;
    j["rmse_ms"] = r.rmse_ms ? json(*r.rmse_ms) : json(nullptr);
    j["cc"] = r.cc ? json(*r.cc) : json(nullptr);
    j["tcr_pct"] = r.tcr_pct;
    j["n_segments"] = r.n_segments;
    j["n_valid"] = r.n_valid;
    return j;
}

/// Writes matrix.csv, displacement.csv, truth.csv and interval.csv for one
/// synthetic record into `dir`.
inline void write_synth_record(const fs::path& dir, const SynthRecord& rec) {
    fs::create_directories(dir);
    write_range_bin_matrix(dir / "matrix.csv", rec.matrix);
    write_real_series(dir / "displacement.csv", rec.displacement);
    write_beat_times(dir / "truth.csv", rec.truth.beat_times);
    write_interval_function(dir / "interval.csv", rec.displacement, rec.instantaneous_interval);
}

}  // namespace nlhs::io
