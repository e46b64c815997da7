#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsap/qln.hpp"
#include "qsap/reliability.hpp"

namespace qsap {

enum class AttackMode { silence, wideband, partial_band, mixture };

AttackMode attack_mode_from_string(const std::string& s);
const char* to_string(AttackMode m);

struct ExperimentConfig {
    // codebook
    unsigned q = 3, k = 2, order = 3, clusters = 3;
    // physical layer
    unsigned n_antennas = 128, n_taps = 6, n_fft = 4096, band_start = 100;
    unsigned n_data_subcarriers = 4;
    double noise_power = 1.0;
    double user_power = 10.0;      ///< pilot SNR 10 dB at unit noise
    double attacker_power = 100.0;
    // timing budget and reliability
    double delta_f_hz = 60e3;
    double t_symbol_us = 17.84;
    double t_extra_us = 300.0;
    double t_con_us = 1000.0;
    double payload_bits = 256.0;
    double snr0 = 0.1;             ///< per-antenna average data SNR
    double error_fraction = 0.0;   ///< channel-estimation error weight
    // run control
    AttackMode attack = AttackMode::mixture;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::size_t calibration_trials = 10000;
    unsigned n_workers = 0;        ///< 0 = hardware concurrency
    bool use_quantum = true;

    void validate() const;  ///< throws on any out-of-domain field
    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// Counter-indexed per-trial seed derivation (splitmix64 over master ^ i),
/// making results independent of worker scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter);

struct TrialRecord {
    std::uint64_t seed = 0;
    AttackLabel truth = AttackLabel::silence;
    AttackLabel verdict = AttackLabel::silence;
    bool amd_correct = false;
    bool uad_exact = false;
    bool pilots_ok = false;
    double sinr = 0.0;
    double t_feature_us = 0.0;
    double t_decode_us = 0.0;
};

struct ScenarioSummary {
    std::size_t trials = 0;
    double threshold = 0.0;  ///< calibrated signal-count threshold
    double amd_accuracy = 0.0;
    double uad_rate = 0.0;
    double pilot_rate = 0.0;
    double mean_sinr = 0.0;
    std::vector<TrialRecord> records;
};

ScenarioSummary run_scenario(const ExperimentConfig& cfg);

// CSV figure generators; each writes '#'-prefixed resolved-config comments,
// a header row, then the sweep data.
void figure_false_alarm(const ExperimentConfig& cfg,
                        const std::filesystem::path& out);
void figure_code_rate(const ExperimentConfig& cfg,
                      const std::filesystem::path& out);
void figure_overheads(const ExperimentConfig& cfg,
                      const std::filesystem::path& out);
void figure_error_vs_estimation(const ExperimentConfig& cfg,
                                const std::filesystem::path& out);
void figure_error_vs_latency(const ExperimentConfig& cfg,
                             const std::filesystem::path& out);

}  // namespace qsap
