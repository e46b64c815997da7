// Command-line front end: codebook export/verify, threshold calibration,
// Monte Carlo scenario runs, figure CSV generation, and a quantum-circuit
// truth-table dump.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsap/experiment.hpp"
#include "qsap/io.hpp"
#include "qsap/quantum.hpp"

namespace {

using nlohmann::json;

qsap::ExperimentConfig load_config(const std::string& config_path) {
    if (config_path.empty()) return {};
    return qsap::ExperimentConfig::from_json(qsap::io::load_json(config_path));
}

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::string out;

    void attach(CLI::App* app) {
        app->add_option("--config", config, "JSON config file");
        app->add_option("--seed", seed, "master RNG seed");
        app->add_option("--trials", trials, "Monte Carlo trial count");
        app->add_option("--out", out, "output path");
    }

    qsap::ExperimentConfig resolve() const {
        qsap::ExperimentConfig cfg = load_config(config);
        if (seed) cfg.seed = *seed;
        if (trials) cfg.trials = *trials;
        return cfg;
    }
};

int run_codebook(const CommonFlags& flags, bool verify) {
    const qsap::ExperimentConfig cfg = flags.resolve();
    const qsap::Codebook book =
        qsap::Codebook::construct({cfg.q, cfg.k, cfg.order, cfg.clusters});
    if (verify) {
        const qsap::StackedCodebook stacked = qsap::StackedCodebook::build(book);
        for (const auto& blk : stacked.blocks) {
            if (blk.arity > cfg.order) continue;
            for (std::size_t i = 0; i < blk.columns.size(); ++i) {
                auto gen = book.decompose(blk.columns[i], cfg.order);
                if (!gen || *gen != blk.generators[i])
                    throw std::runtime_error(
                        "verification failed: ambiguous boolean sum");
            }
        }
        std::cout << json{{"verified", true},
                          {"codewords", book.size()},
                          {"max_order", cfg.order}}
                         .dump()
                  << "\n";
    }
    if (!flags.out.empty()) qsap::io::write_codebook(flags.out, book);
    if (flags.out.empty() && !verify)
        qsap::io::write_codebook("/dev/stdout", book);
    return 0;
}

int run_calibrate(const CommonFlags& flags, double target) {
    const qsap::ExperimentConfig cfg = flags.resolve();
    std::mt19937_64 rng(cfg.seed);
    const std::size_t trials = std::max<std::size_t>(cfg.calibration_trials,
                                                     flags.trials.value_or(0));
    const double t = qsap::calibrate_threshold(rng, cfg.order + 2,
                                               cfg.n_antennas, trials, target);
    const json j = {{"threshold", t},
                    {"n_antennas", cfg.n_antennas},
                    {"n_symbols", cfg.order + 2},
                    {"trials", trials},
                    {"target_false_alarm", target},
                    {"mp_ratio_bound",
                     qsap::mp_ratio_bound(cfg.order + 2, cfg.n_antennas)}};
    if (flags.out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(flags.out);
        f << j.dump(2) << "\n";
        if (!f) throw std::runtime_error("cannot write " + flags.out);
    }
    return 0;
}

int run_simulate(const CommonFlags& flags) {
    const qsap::ExperimentConfig cfg = flags.resolve();
    const qsap::ScenarioSummary s = qsap::run_scenario(cfg);
    const json summary = {{"trials", s.trials},
                          {"threshold", s.threshold},
                          {"amd_accuracy", s.amd_accuracy},
                          {"uad_rate", s.uad_rate},
                          {"pilot_rate", s.pilot_rate},
                          {"mean_sinr", s.mean_sinr}};
    if (flags.out.empty()) {
        std::cout << summary.dump(2) << "\n";
        return 0;
    }
    std::ofstream f(flags.out);
    f << summary.dump(2) << "\n";
    if (!f) throw std::runtime_error("cannot write " + flags.out);
    // per-trial records next to the summary
    qsap::io::CsvWriter csv(
        flags.out + ".trials.csv", {"config " + cfg.to_json().dump()},
        {"seed", "truth", "verdict", "amd_correct", "uad_exact", "pilots_ok",
         "sinr", "t_feature_us", "t_decode_us"});
    for (const auto& r : s.records)
        csv.row({std::to_string(r.seed), qsap::to_string(r.truth),
                 qsap::to_string(r.verdict), std::to_string(r.amd_correct),
                 std::to_string(r.uad_exact), std::to_string(r.pilots_ok),
                 std::to_string(r.sinr), std::to_string(r.t_feature_us),
                 std::to_string(r.t_decode_us)});
    return 0;
}

int run_figure(const CommonFlags& flags, const std::string& name) {
    const qsap::ExperimentConfig cfg = flags.resolve();
    const std::string out = flags.out.empty() ? name + ".csv" : flags.out;
    if (name == "fig6") qsap::figure_false_alarm(cfg, out);
    else if (name == "fig7") qsap::figure_code_rate(cfg, out);
    else if (name == "fig8") qsap::figure_overheads(cfg, out);
    else if (name == "fig9") qsap::figure_error_vs_estimation(cfg, out);
    else if (name == "fig10") qsap::figure_error_vs_latency(cfg, out);
    else throw std::runtime_error("unknown figure name: " + name);
    return 0;
}

int run_truth_table(const CommonFlags& flags) {
    json rows = json::array();
    for (const auto& r : qsap::quantum::parity_truth_table())
        rows.push_back({{"f0", r.f0},
                        {"f1", r.f1},
                        {"measured", r.measured},
                        {"expected", r.expected}});
    if (flags.out.empty()) {
        std::cout << rows.dump(2) << "\n";
    } else {
        std::ofstream f(flags.out);
        f << rows.dump(2) << "\n";
        if (!f) throw std::runtime_error("cannot write " + flags.out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grant-free access simulator"};
    app.require_subcommand(1);

    CommonFlags cb_flags, cal_flags, sim_flags, fig_flags, qt_flags;
    bool verify = false;
    double target = 0.0;
    std::string figure_name;

    auto* cb = app.add_subcommand("codebook", "construct / export / verify");
    cb_flags.attach(cb);
    cb->add_flag("--verify", verify, "exhaustively check boolean-sum decoding");

    auto* cal = app.add_subcommand("calibrate", "signal-count threshold");
    cal_flags.attach(cal);
    cal->add_option("--target", target, "false-alarm target (default 0)");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo scenario run");
    sim_flags.attach(sim);

    auto* fig = app.add_subcommand("figure", "figure data as CSV");
    fig_flags.attach(fig);
    fig->add_option("name", figure_name, "fig6|fig7|fig8|fig9|fig10")
        ->required();

    auto* qt = app.add_subcommand("quantum-truth-table",
                                  "one-query parity circuit table");
    qt_flags.attach(qt);

    CLI11_PARSE(app, argc, argv);
    try {
        if (cb->parsed()) return run_codebook(cb_flags, verify);
        if (cal->parsed()) return run_calibrate(cal_flags, target);
        if (sim->parsed()) return run_simulate(sim_flags);
        if (fig->parsed()) return run_figure(fig_flags, figure_name);
        if (qt->parsed()) return run_truth_table(qt_flags);
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 1;
}
