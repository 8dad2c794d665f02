// SPDX-License-Identifier: Apache-2.0
//
// corpus.hpp - runs several estimation modes over a directory of records and
// aggregates RMSE / CC / TCR per mode.
//
// A corpus directory holds one sub-directory per record, each with
// matrix.csv (range-bin matrix) and truth.csv (ground truth). A directory
// that itself contains matrix.csv is treated as a single-record corpus.

#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "nlhs/io.hpp"
#include "nlhs/pipeline.hpp"

namespace nlhs {

struct RecordResult {
    std::string name;
    double duration_s = 0.0;
    std::map<Mode, std::optional<MetricsReport>> metrics;  ///< empty when estimation failed
    std::map<Mode, std::string> errors;
};

struct AggregateMetrics {
    std::optional<double> rmse_ms;  ///< mean over records with a defined RMSE
    std::optional<double> cc;       ///< mean over records with a defined CC
    double tcr_pct = 0.0;           ///< mean over scored records
    std::size_t n_records = 0;      ///< records scored for this mode
};

struct CorpusReport {
    std::vector<Mode> modes;
    std::vector<RecordResult> records;
    std::map<Mode, AggregateMetrics> aggregate;
    std::vector<std::string> skipped;

    /// True when no record produced a track in any requested mode.
    bool all_failed() const {
        for (const auto& r : records) {
            for (const auto& [mode, m] : r.metrics) {
                if (m) {
                    return false;
                }
            }
        }
        return true;
    }
};

inline std::string display_name(Mode m) {
    switch (m) {
        case Mode::prop1: return "Prop1";
        case Mode::prop2: return "Prop2";
        case Mode::conv1a: return "Conv1A";
        case Mode::conv2a: return "Conv2A";
    }
    return "?";
}

/// Record directories of a corpus, sorted by name.
inline std::vector<std::filesystem::path> corpus_records(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw Error("corpus directory not found: " + dir.string());
    }
    if (fs::exists(dir / "matrix.csv")) {
        return {dir};
    }
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory() && fs::exists(entry.path() / "matrix.csv")) {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline RecordResult evaluate_record(const std::filesystem::path& dir, const std::vector<Mode>& modes,
                                    const Params& params) {
    RecordResult result;
    result.name = dir.filename().string();
    const auto matrix = io::read_range_bin_matrix(dir / "matrix.csv");
    const auto truth = io::read_ground_truth(dir / "truth.csv");
    result.duration_s = static_cast<double>(matrix.n_times()) * matrix.t0();
    const auto signals = signals_from_matrix(matrix, params.radar);
    for (Mode m : modes) {
        try {
            const auto track = run_mode(signals, m, params);
            result.metrics[m] = evaluate_track(track, truth, result.duration_s, matrix.start_time());
        } catch (const Error& e) {
            result.metrics[m] = std::nullopt;
            result.errors[m] = e.what();
        }
    }
    return result;
}

inline AggregateMetrics aggregate(const std::vector<RecordResult>& records, Mode m) {
    AggregateMetrics a;
    double rmse = 0.0;
    double cc = 0.0;
    std::size_t n_rmse = 0;
    std::size_t n_cc = 0;
    for (const auto& r : records) {
        const auto it = r.metrics.find(m);
        if (it == r.metrics.end() || !it->second) {
            continue;
        }
        const auto& rep = *it->second;
        ++a.n_records;
        a.tcr_pct += rep.tcr_pct;
        if (rep.rmse_ms) {
            rmse += *rep.rmse_ms;
            ++n_rmse;
        }
        if (rep.cc) {
            cc += *rep.cc;
            ++n_cc;
        }
    }
    if (a.n_records > 0) {
        a.tcr_pct /= static_cast<double>(a.n_records);
    }
    if (n_rmse > 0) {
        a.rmse_ms = rmse / static_cast<double>(n_rmse);
    }
    if (n_cc > 0) {
        a.cc = cc / static_cast<double>(n_cc);
    }
    return a;
}

/// Runs every mode on every record. Records are processed concurrently;
/// results keep corpus order, so the report does not depend on scheduling.
inline CorpusReport run_corpus(const std::filesystem::path& dir, const std::vector<Mode>& modes, const Params& params,
                               std::ostream& warnings = std::cerr) {
    require(!modes.empty(), "no modes requested");
    const auto dirs = corpus_records(dir);
    if (dirs.empty()) {
        throw Error("empty corpus: no record directories with matrix.csv under " + dir.string());
    }

    CorpusReport report;
    report.modes = modes;
    std::vector<std::optional<RecordResult>> results(dirs.size());
    std::vector<std::string> failures(dirs.size());
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t begin = 0; begin < dirs.size(); begin += workers) {
        const std::size_t end = std::min(dirs.size(), begin + workers);
        std::vector<std::future<void>> batch;
        for (std::size_t i = begin; i < end; ++i) {
            batch.push_back(std::async(std::launch::async, [&, i] {
                if (!std::filesystem::exists(dirs[i] / "truth.csv")) {
                    failures[i] = "missing truth.csv";
                    return;
                }
                try {
                    results[i] = evaluate_record(dirs[i], modes, params);
                } catch (const Error& e) {
                    failures[i] = e.what();
                }
            }));
        }
        for (auto& f : batch) {
            f.get();
        }
    }
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        if (results[i]) {
            report.records.push_back(std::move(*results[i]));
        } else {
            warnings << "warning: skipping record " << dirs[i].filename().string() << ": " << failures[i] << '\n';
            report.skipped.push_back(dirs[i].filename().string());
        }
    }
    if (report.records.empty()) {
        throw Error("empty corpus: no record with ground truth under " + dir.string());
    }
    for (Mode m : modes) {
        report.aggregate[m] = aggregate(report.records, m);
    }
    return report;
}

inline io::json to_json(const CorpusReport& report) {
    using io::json;
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json j;
    j["modes"] = json::array();
    for (Mode m : report.modes) {
        j["modes"].push_back(to_string(m));
    }
    j["aggregate"] = json::object();
    for (Mode m : report.modes) {
        const auto& a = report.aggregate.at(m);
        j["aggregate"][to_string(m)] = {
            {"rmse_ms", opt(a.rmse_ms)}, {"cc", opt(a.cc)}, {"tcr_pct", a.tcr_pct}, {"n_records", a.n_records}};
    }
    j["records"] = json::array();
    for (const auto& r : report.records) {
        json rec{{"name", r.name}, {"duration_s", r.duration_s}, {"metrics", json::object()}};
        for (Mode m : report.modes) {
            const auto& rep = r.metrics.at(m);
            rec["metrics"][to_string(m)] = rep ? io::to_json(*rep) : json(nullptr);
            if (auto e = r.errors.find(m); e != r.errors.end()) {
                rec["errors"][to_string(m)] = e->second;
            }
        }
        j["records"].push_back(std::move(rec));
    }
    j["skipped"] = report.skipped;
    return j;
}

/// Comparison table with RMSE (ms) / CC / TCR (%) columns.
inline std::string format_table(const CorpusReport& report) {
    auto cell = [](const std::optional<double>& v, const char* f) {
        char buf[32];
        if (!v) {
            return std::string("n/a");
        }
        std::snprintf(buf, sizeof buf, f, *v);
        return std::string(buf);
    };
    std::string out;
    char line[128];
    std::snprintf(line, sizeof line, "%-8s | %10s | %6s | %8s\n", "Method", "RMSE (ms)", "CC", "TCR (%)");
    out += line;
    out += "---------+------------+--------+---------\n";
    for (Mode m : report.modes) {
        const auto& a = report.aggregate.at(m);
        std::snprintf(line, sizeof line, "%-8s | %10s | %6s | %8s\n", display_name(m).c_str(),
                      cell(a.rmse_ms, "%.2f").c_str(), cell(a.cc, "%.2f").c_str(),
                      cell(a.n_records ? std::optional<double>(a.tcr_pct) : std::nullopt, "%.2f").c_str());
        out += line;
    }
    std::snprintf(line, sizeof line, "(%zu records", report.records.size());
    out += line;
    if (!report.skipped.empty()) {
        std::snprintf(line, sizeof line, ", %zu skipped", report.skipped.size());
        out += line;
    }
    out += ")\n";
    return out;
}

}  // namespace nlhs
