// SPDX-License-Identifier: Apache-2.0
//
// nlhs - command-line front end.
//
//   nlhs simulate       --config cfg.json --out dir [--seed N]
//   nlhs estimate       --input data.csv --mode prop1 [--params p.json] [--out track.csv]
//   nlhs evaluate       --input track.csv --truth truth.csv [--duration s] [--out report.json]
//   nlhs spectrum-dump  --input data.csv --mode prop1 [--start s] [--params p.json] [--out spec.csv]
//   nlhs corpus         --input dir [--mode prop1,conv1a,...] [--params p.json] --out dir
//
// Exit codes: 0 success, 1 bad input, 2 estimation failure on all records.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlhs/nlhs.hpp"

namespace fs = std::filesystem;
using nlhs::io::json;

namespace {

constexpr int kBadInput = 1;
constexpr int kEstimationFailed = 2;

// Estimation errors map to exit code 2, everything else to 1.
struct EstimationFailure : nlhs::Error {
    using nlhs::Error::Error;
};

nlhs::Params load_params(const std::string& path) {
    if (path.empty()) {
        return {};
    }
    return nlhs::io::params_from_json(nlhs::io::read_json(path));
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        nlhs::io::write_atomic(out_path, content);
    }
}

std::vector<nlhs::Mode> parse_modes(const std::string& list) {
    if (list.empty()) {
        return nlhs::all_modes();
    }
    std::vector<nlhs::Mode> modes;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            modes.push_back(nlhs::parse_mode(item));
        }
    }
    nlhs::require(!modes.empty(), "no modes given");
    return modes;
}

int cmd_simulate(const std::string& config_path, const std::string& out, std::optional<std::uint64_t> seed) {
    json cfg = config_path.empty() ? json::object() : nlhs::io::read_json(config_path);
    nlhs::require(cfg.is_object(), "config must be a JSON object");
    nlhs::require(!(cfg.contains("synth") && cfg.contains("corpus")), "config may hold 'synth' or 'corpus', not both");

    if (cfg.contains("corpus")) {
        auto spec = nlhs::io::corpus_spec_from_json(cfg["corpus"]);
        if (seed) {
            spec.seed = *seed;
        }
        const auto configs = nlhs::default_corpus(spec.records, spec.seed, spec.snr_db, spec.snr_reference);
        for (std::size_t i = 0; i < configs.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "rec_%03zu", i);
            const fs::path dir = fs::path(out) / name;
            nlhs::io::write_synth_record(dir, nlhs::generate(configs[i]));
            nlhs::io::write_atomic(dir / "config.json", nlhs::io::to_json(configs[i]).dump(2) + "\n");
        }
        std::cerr << "wrote " << configs.size() << " records to " << out << '\n';
        return 0;
    }

    auto synth = nlhs::io::synth_from_json(cfg.value("synth", json::object()));
    if (seed) {
        synth.seed = *seed;
    }
    nlhs::io::write_synth_record(out, nlhs::generate(synth));
    nlhs::io::write_atomic(fs::path(out) / "config.json", nlhs::io::to_json(synth).dump(2) + "\n");
    std::cerr << "wrote record to " << out << '\n';
    return 0;
}

int cmd_estimate(const std::string& input, const std::string& mode_name, const std::string& params_path,
                 const std::string& out) {
    const auto params = load_params(params_path);
    const auto mode = nlhs::parse_mode(mode_name);
    const auto signals = nlhs::io::read_record_signals(input, params.radar);
    nlhs::IntervalTrack track;
    try {
        track = nlhs::run_mode(signals, mode, params);
    } catch (const nlhs::Error& e) {
        throw EstimationFailure(e.what());
    }
    emit(out, nlhs::io::track_csv(track));
    return 0;
}

int cmd_evaluate(const std::string& input, const std::string& truth_path, std::optional<double> duration,
                 const std::string& out) {
    const auto track = nlhs::io::read_track(input);
    const auto truth = nlhs::io::read_ground_truth(truth_path);
    const double span = duration ? *duration : std::ceil(truth.end_time() - 1e-9);
    nlhs::require(span > 0.0, "duration must be positive");
    const auto report = nlhs::evaluate_track(track, truth, span);
    const auto j = nlhs::io::to_json(report);
    auto cell = [](const json& v) { return v.is_null() ? std::string("n/a") : nlhs::io::detail::fmt(v.get<double>()); };
    std::cerr << "RMSE (ms) " << cell(j["rmse_ms"]) << "  CC " << cell(j["cc"]) << "  TCR (%) " << report.tcr_pct
              << "  segments " << report.n_segments << "  valid " << report.n_valid << '\n';
    emit(out, j.dump(2) + "\n");
    return 0;
}

int cmd_spectrum_dump(const std::string& input, const std::string& mode_name, const std::string& params_path,
                      double start_s, const std::string& out) {
    const auto params = load_params(params_path);
    const auto mode = nlhs::parse_mode(mode_name);
    const auto signals = nlhs::io::read_record_signals(input, params.radar);
    const auto y = nlhs::enhanced_input(signals, mode, params.estimator);
    const auto layout = nlhs::window_layout(y, params.estimator);
    const auto first = static_cast<long>(std::llround((start_s - y.start_time) / y.t0));
    nlhs::require(first >= 0 && static_cast<std::size_t>(first) + layout.length <= y.size(),
                  "window start outside the record");
    const auto spectrum =
        nlhs::windowed_spectrum(nlhs::slice(y, static_cast<std::size_t>(first), layout.length), params.estimator.pad_factor);

    nlhs::PseudoSpectrum ps;
    if (mode == nlhs::Mode::prop1 || mode == nlhs::Mode::prop2) {
        ps = nlhs::nlhs(spectrum, params.nlhs);
    } else {
        // power spectrum over the search band
        for (std::size_t k = 0; k < spectrum.coeffs.size(); ++k) {
            const double f = spectrum.freq(k);
            if (f >= params.nlhs.f_min && f <= params.nlhs.f_max_search) {
                ps.freqs.push_back(f);
                ps.values.push_back(std::norm(spectrum.coeffs[k]));
            }
        }
    }
    emit(out, nlhs::io::pseudo_spectrum_csv(ps));
    return 0;
}

int cmd_corpus(const std::string& input, const std::string& mode_list, const std::string& params_path,
               const std::string& out) {
    const auto params = load_params(params_path);
    const auto modes = parse_modes(mode_list);
    const auto report = nlhs::run_corpus(input, modes, params);
    const auto table = nlhs::format_table(report);
    nlhs::io::write_atomic(fs::path(out) / "report.json", nlhs::to_json(report).dump(2) + "\n");
    nlhs::io::write_atomic(fs::path(out) / "report.txt", table);
    std::cout << table;
    return report.all_failed() ? kEstimationFailed : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radar heartbeat-interval estimation with the nonlinear harmonic spectrum"};
    app.require_subcommand(1);

    std::string input, out, mode, params, truth, config, modes;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration;
    double start_s = 0.0;

    auto* sim = app.add_subcommand("simulate", "Generate synthetic radar records with ground truth");
    sim->add_option("--config", config, "JSON with a 'synth' (one record) or 'corpus' (randomised set) section");
    sim->add_option("--out", out, "Output directory")->required();
    sim->add_option("--seed", seed, "Override the random seed");

    auto* est = app.add_subcommand("estimate", "Estimate the heartbeat-interval track of one record");
    est->add_option("--input", input, "Range-bin matrix CSV or t,value displacement CSV")->required();
    est->add_option("--mode", mode, "prop1 | prop2 | conv1a | conv2a")->required();
    est->add_option("--params", params, "Parameter JSON");
    est->add_option("--out", out, "Track CSV (stdout if omitted)");

    auto* ev = app.add_subcommand("evaluate", "Score a track against ground truth");
    ev->add_option("--input", input, "Track CSV (t_sec,interval_sec)")->required();
    ev->add_option("--truth", truth, "Ground-truth CSV")->required();
    ev->add_option("--duration", duration, "Record duration in seconds (default: ceil of last truth time)");
    ev->add_option("--out", out, "Report JSON (stdout if omitted)");

    auto* dump = app.add_subcommand("spectrum-dump", "Write the NLHS (or STFT power) of one analysis window");
    dump->add_option("--input", input, "Range-bin matrix CSV or t,value displacement CSV")->required();
    dump->add_option("--mode", mode, "prop1 | prop2 | conv1a | conv2a")->default_val("prop1");
    dump->add_option("--params", params, "Parameter JSON");
    dump->add_option("--start", start_s, "Window start time in seconds")->default_val(0.0);
    dump->add_option("--out", out, "Spectrum CSV (stdout if omitted)");

    auto* corp = app.add_subcommand("corpus", "Run modes over a corpus and write a comparison table");
    corp->add_option("--input", input, "Corpus directory")->required();
    corp->add_option("--mode", modes, "Comma-separated modes (default: all)");
    corp->add_option("--params", params, "Parameter JSON");
    corp->add_option("--out", out, "Output directory for report.json and report.txt")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadInput;
    }

    try {
        if (sim->parsed()) {
            return cmd_simulate(config, out, seed);
        }
        if (est->parsed()) {
            return cmd_estimate(input, mode, params, out);
        }
        if (ev->parsed()) {
            return cmd_evaluate(input, truth, duration, out);
        }
        if (dump->parsed()) {
            return cmd_spectrum_dump(input, mode, params, start_s, out);
        }
        if (corp->parsed()) {
            return cmd_corpus(input, modes, params, out);
        }
    } catch (const EstimationFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kEstimationFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    }
    return kBadInput;
}
