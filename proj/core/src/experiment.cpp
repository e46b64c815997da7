#include "qsap/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qsap/io.hpp"

namespace qsap {

AttackMode attack_mode_from_string(const std::string& s) {
    if (s == "silence") return AttackMode::silence;
    if (s == "wideband") return AttackMode::wideband;
    if (s == "partial_band") return AttackMode::partial_band;
    if (s == "mixture") return AttackMode::mixture;
    throw std::invalid_argument("experiment: unknown attack mode " + s);
}

const char* to_string(AttackMode m) {
    switch (m) {
        case AttackMode::silence: return "silence";
        case AttackMode::wideband: return "wideband";
        case AttackMode::partial_band: return "partial_band";
        case AttackMode::mixture: return "mixture";
    }
    return "unknown";
}

void ExperimentConfig::validate() const {
    CodeParams{q, k, order, clusters}.validate();
    if (n_antennas == 0 || n_taps == 0 || n_fft == 0)
        throw std::invalid_argument("experiment: zero-sized phy dimension");
    if (n_antennas <= order + 2)
        throw std::invalid_argument("experiment: need more antennas than symbols");
    if (noise_power <= 0 || user_power <= 0 || attacker_power <= 0)
        throw std::invalid_argument("experiment: powers must be positive");
    if (delta_f_hz <= 0 || t_symbol_us <= 0 || t_extra_us < 0 || t_con_us <= 0)
        throw std::invalid_argument("experiment: bad timing field");
    if (snr0 <= 0) throw std::invalid_argument("experiment: snr0 must be positive");
    if (error_fraction < 0 || error_fraction >= 1)
        throw std::invalid_argument("experiment: error fraction in [0,1)");
    if (calibration_trials < 10000)
        throw std::invalid_argument("experiment: calibration needs >= 10^4 trials");
    const unsigned band = CodeParams{q, k, order, clusters}.binary_length();
    if (band_start + band + n_data_subcarriers > n_fft)
        throw std::invalid_argument("experiment: band exceeds the DFT grid");
}

namespace {

template <typename T>
void get_to_if(const nlohmann::json& j, const char* key, T& field) {
    if (auto it = j.find(key); it != j.end()) it->get_to(field);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    get_to_if(j, "q", c.q);
    get_to_if(j, "k", c.k);
    get_to_if(j, "order", c.order);
    get_to_if(j, "clusters", c.clusters);
    get_to_if(j, "n_antennas", c.n_antennas);
    get_to_if(j, "n_taps", c.n_taps);
    get_to_if(j, "n_fft", c.n_fft);
    get_to_if(j, "band_start", c.band_start);
    get_to_if(j, "n_data_subcarriers", c.n_data_subcarriers);
    get_to_if(j, "noise_power", c.noise_power);
    get_to_if(j, "user_power", c.user_power);
    get_to_if(j, "attacker_power", c.attacker_power);
    get_to_if(j, "delta_f_hz", c.delta_f_hz);
    get_to_if(j, "t_symbol_us", c.t_symbol_us);
    get_to_if(j, "t_extra_us", c.t_extra_us);
    get_to_if(j, "t_con_us", c.t_con_us);
    get_to_if(j, "payload_bits", c.payload_bits);
    get_to_if(j, "snr0", c.snr0);
    get_to_if(j, "error_fraction", c.error_fraction);
    if (auto it = j.find("attack"); it != j.end())
        c.attack = attack_mode_from_string(it->get<std::string>());
    get_to_if(j, "trials", c.trials);
    get_to_if(j, "seed", c.seed);
    get_to_if(j, "calibration_trials", c.calibration_trials);
    get_to_if(j, "n_workers", c.n_workers);
    get_to_if(j, "use_quantum", c.use_quantum);
    c.validate();
    return c;
}

nlohmann::json ExperimentConfig::to_json() const {
    return {{"q", q},
            {"k", k},
            {"order", order},
            {"clusters", clusters},
            {"n_antennas", n_antennas},
            {"n_taps", n_taps},
            {"n_fft", n_fft},
            {"band_start", band_start},
            {"n_data_subcarriers", n_data_subcarriers},
            {"noise_power", noise_power},
            {"user_power", user_power},
            {"attacker_power", attacker_power},
            {"delta_f_hz", delta_f_hz},
            {"t_symbol_us", t_symbol_us},
            {"t_extra_us", t_extra_us},
            {"t_con_us", t_con_us},
            {"payload_bits", payload_bits},
            {"snr0", snr0},
            {"error_fraction", error_fraction},
            {"attack", to_string(attack)},
            {"trials", trials},
            {"seed", seed},
            {"calibration_trials", calibration_trials},
            {"n_workers", n_workers},
            {"use_quantum", use_quantum}};
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

namespace {

AttackLabel truth_label(AttackMode m, std::size_t trial) {
    switch (m) {
        case AttackMode::silence: return AttackLabel::silence;
        case AttackMode::wideband: return AttackLabel::wideband;
        case AttackMode::partial_band: return AttackLabel::partial_band;
        case AttackMode::mixture: break;
    }
    switch (trial % 3) {
        case 0: return AttackLabel::silence;
        case 1: return AttackLabel::wideband;
        default: return AttackLabel::partial_band;
    }
}

struct TrialContext {
    const ExperimentConfig* cfg;
    const Codebook* book;
    const MembershipOracle* oracle;
    double threshold;
};

TrialRecord run_trial(const TrialContext& ctx, std::size_t trial) {
    const ExperimentConfig& cfg = *ctx.cfg;
    const Codebook& book = *ctx.book;
    const unsigned K = cfg.order;
    const unsigned m = K + 2;
    const std::size_t band = book.params().binary_length();

    TrialRecord rec;
    rec.seed = derive_seed(cfg.seed, trial);
    std::mt19937_64 rng(rec.seed);

    // pick K distinct clusters, then one codeword in each
    std::vector<std::size_t> cluster_ids(cfg.clusters);
    for (std::size_t g = 0; g < cfg.clusters; ++g) cluster_ids[g] = g;
    std::shuffle(cluster_ids.begin(), cluster_ids.end(), rng);
    cluster_ids.resize(K);
    std::sort(cluster_ids.begin(), cluster_ids.end());

    std::vector<UserTx> users;
    std::vector<std::size_t> truth_indices;
    for (unsigned u = 0; u < K; ++u) {
        const auto [lo, hi] = book.cluster_range(cluster_ids[u]);
        std::uniform_int_distribution<std::size_t> pick(lo, hi - 1);
        const std::size_t idx = pick(rng);
        truth_indices.push_back(idx);
        users.push_back(
            {book.column(idx), idx, u, book.phase_of(idx)});
    }

    rec.truth = truth_label(cfg.attack, trial);
    AttackerTx attacker;
    if (rec.truth == AttackLabel::wideband) {
        attacker.sap = BitVec(band);
        for (std::size_t i = 0; i < band; ++i) attacker.sap.set(i);
    } else if (rec.truth == AttackLabel::partial_band) {
        // arbitrary nonzero, non-all-ones vector, codebook-independent
        std::bernoulli_distribution bit(0.5);
        do {
            attacker.sap = BitVec(band);
            for (std::size_t i = 0; i < band; ++i)
                if (bit(rng)) attacker.sap.set(i);
        } while (!attacker.sap.any() || attacker.sap.count() == band);
    }

    PhyParams phy{cfg.n_antennas, cfg.n_taps,    cfg.n_fft,
                  cfg.band_start, cfg.user_power, cfg.attacker_power,
                  cfg.noise_power};
    SynthesisTrace trace;
    const Observation obs = synthesize(rng, phy, m, users, attacker, &trace);

    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const FeatureVector f =
        extract_features(obs, ctx.threshold, cfg.noise_power);
    const auto t1 = clock::now();
    const AmdVerdict verdict = detect_attack_mode(f, *ctx.oracle, K);
    const DigitAttribution at =
        attribute_digits(verdict, f, *ctx.oracle, K, cfg.use_quantum);
    const AccessReport report =
        detect_and_recover(verdict, at, f, *ctx.oracle, K);
    const auto t2 = clock::now();

    rec.verdict = verdict.label;
    rec.amd_correct = verdict.label == rec.truth;
    if (report.status == AccessReport::Status::success) {
        auto got = report.codeword_indices;
        std::sort(got.begin(), got.end());
        rec.uad_exact = got == truth_indices;
        if (rec.uad_exact) {
            rec.pilots_ok = true;
            for (std::size_t i = 0; i < got.size(); ++i)
                if (std::abs(book.phase_of(got[i]) - book.phase_of(truth_indices[i])) >
                    1e-12)
                    rec.pilots_ok = false;
        }
    }

    // empirical matched-filter SINR on the first data subcarrier, using the
    // trial's own channel draws; co-subcarrier interferers are the K-1 peers
    const unsigned data_sc = cfg.band_start + static_cast<unsigned>(band);
    std::vector<Eigen::VectorXcd> g;
    for (const auto& taps : trace.user_taps)
        g.push_back(tap_response(taps, data_sc, cfg.n_fft));
    double sinr_sum = 0.0;
    for (unsigned u = 0; u < K; ++u) {
        const double sig = cfg.snr0 * std::norm(g[u].dot(g[u]));
        double denom = cfg.noise_power * g[u].squaredNorm();
        for (unsigned p = 0; p < K; ++p)
            if (p != u) denom += cfg.snr0 * std::norm(g[u].dot(g[p]));
        sinr_sum += sig / denom;
    }
    rec.sinr = sinr_sum / K;

    const auto us = [](auto d) {
        return std::chrono::duration<double, std::micro>(d).count();
    };
    rec.t_feature_us = us(t1 - t0);
    rec.t_decode_us = us(t2 - t1);
    return rec;
}

}  // namespace

ScenarioSummary run_scenario(const ExperimentConfig& cfg) {
    cfg.validate();
    const Codebook book = Codebook::construct({cfg.q, cfg.k, cfg.order, cfg.clusters});
    StackedCodebook stacked;
    const StackedCodebook* stacked_ptr = nullptr;
    try {
        stacked = StackedCodebook::build(book);
        stacked_ptr = &stacked;
    } catch (const std::length_error&) {
        // fall back to search-based membership for large codebooks
    }
    const MembershipOracle oracle(book, stacked_ptr);

    std::mt19937_64 cal_rng(derive_seed(cfg.seed, 0xCA11B8A7Eull));
    const double threshold = calibrate_threshold(
        cal_rng, cfg.order + 2, cfg.n_antennas, cfg.calibration_trials);

    ScenarioSummary s;
    s.threshold = threshold;
    s.trials = cfg.trials;
    s.records.resize(cfg.trials);
    if (cfg.trials > 0) {
        const TrialContext ctx{&cfg, &book, &oracle, threshold};
        unsigned workers = cfg.n_workers;
        if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
        workers = static_cast<unsigned>(
            std::min<std::size_t>(workers, cfg.trials));
        std::atomic<std::size_t> next{0};
        auto body = [&] {
            for (std::size_t t = next.fetch_add(1); t < cfg.trials;
                 t = next.fetch_add(1))
                s.records[t] = run_trial(ctx, t);
        };
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
        body();
        for (auto& th : pool) th.join();
    }

    for (const auto& r : s.records) {
        s.amd_accuracy += r.amd_correct;
        s.uad_rate += r.uad_exact;
        s.pilot_rate += r.pilots_ok;
        s.mean_sinr += r.sinr;
    }
    if (!s.records.empty()) {
        const double n = static_cast<double>(s.records.size());
        s.amd_accuracy /= n;
        s.uad_rate /= n;
        s.pilot_rate /= n;
        s.mean_sinr /= n;
    }
    return s;
}

namespace {

std::vector<std::string> config_comments(const ExperimentConfig& cfg) {
    return {std::string("config ") + cfg.to_json().dump()};
}

}  // namespace

void figure_false_alarm(const ExperimentConfig& cfg,
                        const std::filesystem::path& out) {
    io::CsvWriter csv(out, config_comments(cfg),
                      {"threshold", "false_alarm", "n_users"});
    const std::vector<unsigned> user_counts{4, 8, 12};
    for (unsigned K : user_counts) {
        const unsigned m = K + 2;
        std::mt19937_64 rng(derive_seed(cfg.seed, 0xF16'0006ull + K));
        std::vector<double> ratios;
        ratios.reserve(cfg.trials);
        // noise-only max/min eigenvalue ratios, reused across the sweep
        for (std::size_t t = 0; t < std::max<std::size_t>(cfg.trials, 1000); ++t) {
            std::normal_distribution<double> n(0.0, std::sqrt(0.5));
            Eigen::MatrixXcd y(cfg.n_antennas, m);
            for (unsigned c = 0; c < m; ++c)
                for (unsigned r = 0; r < cfg.n_antennas; ++r)
                    y(r, c) = std::complex<double>(n(rng), n(rng));
            const Eigen::MatrixXcd gram = y.adjoint() * y;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
                gram, Eigen::EigenvaluesOnly);
            ratios.push_back(es.eigenvalues()(m - 1) / es.eigenvalues()(0));
        }
        std::sort(ratios.begin(), ratios.end());
        const double lo = mp_ratio_bound(m, cfg.n_antennas) * 0.6;
        const double hi = ratios.back() * 1.1;
        for (int i = 0; i <= 40; ++i) {
            const double g = lo + (hi - lo) * i / 40.0;
            const auto above = ratios.end() -
                               std::upper_bound(ratios.begin(), ratios.end(), g);
            csv.row({g, static_cast<double>(above) / ratios.size(),
                     static_cast<double>(K)});
        }
    }
}

void figure_code_rate(const ExperimentConfig& cfg,
                      const std::filesystem::path& out) {
    io::CsvWriter csv(out, config_comments(cfg),
                      {"n_subcarriers", "code_rate", "k", "n_users"});
    struct Curve {
        unsigned k, K;
    };
    const std::vector<Curve> curves{{2, 4}, {2, 8}, {3, 4}};
    for (const auto c : curves) {
        const unsigned q_min = std::max(2u, c.K * (c.k - 1));
        for (unsigned q = q_min; q <= q_min + 40; ++q) {
            const double n_e = q * (1.0 + c.K * (c.k - 1));
            csv.row({n_e, code_rate(q, c.k, c.K), static_cast<double>(c.k),
                     static_cast<double>(c.K)});
        }
    }
}

void figure_overheads(const ExperimentConfig& cfg,
                      const std::filesystem::path& out) {
    io::CsvWriter csv(out, config_comments(cfg),
                      {"n_users", "k", "m_data", "latency_us", "n_subcarriers"});
    const double t_s_us = 8.93, t_extra_us = 100.0;
    for (unsigned k : {2u, 3u}) {
        for (unsigned m_d : {12u, 20u}) {
            for (unsigned K = 4; K <= 12; ++K) {
                const double t_us = (K + 2 + m_d) * t_s_us + t_extra_us;
                csv.row({static_cast<double>(K), static_cast<double>(k),
                         static_cast<double>(m_d), t_us,
                         static_cast<double>(min_binary_length(k, K))});
            }
        }
    }
}

namespace {

struct ReliabilityPoint {
    double p_d, p_e, sinr, t_us;
};

ReliabilityPoint reliability_point(const ExperimentConfig& cfg, unsigned K,
                                   unsigned m_d, double lambda) {
    const unsigned k_c = K - 1;
    LinkBudget lb;
    lb.snr0 = cfg.snr0;
    lb.n_antennas = cfg.n_antennas;
    lb.n_interferers = k_c;
    lb.n_data_subcarriers = cfg.n_data_subcarriers;
    lb.m_data = m_d;
    lb.symbol_duration_s = cfg.t_symbol_us * 1e-6;
    lb.subcarrier_spacing_hz = cfg.delta_f_hz;
    lb.payload_bits = cfg.payload_bits;
    const double sinr =
        lambda > 0.0
            ? sinr_asymptotic_error(cfg.snr0, cfg.n_antennas, k_c, lambda)
            : sinr_asymptotic_perfect(cfg.snr0, cfg.n_antennas, k_c);
    const double p_d = decoding_error_at_sinr(lb, sinr);
    FrameTiming ft{lb.symbol_duration_s, cfg.t_extra_us * 1e-6,
                   cfg.t_con_us * 1e-6, K + 2};
    return {p_d, failure_probability(p_d), sinr,
            frame_latency_s(ft, m_d) * 1e6};
}

}  // namespace

void figure_error_vs_estimation(const ExperimentConfig& cfg,
                                const std::filesystem::path& out) {
    io::CsvWriter csv(out, config_comments(cfg),
                      {"sweep_variable", "P_d", "P_e", "gamma_asy", "T_us",
                       "n_users"});
    for (unsigned K : {12u, 16u}) {
        FrameTiming ft{cfg.t_symbol_us * 1e-6, cfg.t_extra_us * 1e-6,
                       cfg.t_con_us * 1e-6, K + 2};
        const unsigned m_d = data_symbol_budget(ft);
        for (int i = 1; i <= 45; ++i) {
            const double lambda = 0.02 * i;
            const auto p = reliability_point(cfg, K, m_d, lambda);
            csv.row({lambda, p.p_d, p.p_e, p.sinr, p.t_us,
                     static_cast<double>(K)});
        }
    }
}

void figure_error_vs_latency(const ExperimentConfig& cfg,
                             const std::filesystem::path& out) {
    io::CsvWriter csv(out, config_comments(cfg),
                      {"sweep_variable", "P_d", "P_e", "gamma_asy", "T_us",
                       "n_users"});
    for (unsigned K : {12u, 32u}) {
        FrameTiming ft{cfg.t_symbol_us * 1e-6, cfg.t_extra_us * 1e-6,
                       cfg.t_con_us * 1e-6, K + 2};
        const unsigned m_max = data_symbol_budget(ft);
        for (unsigned m_d = 1; m_d <= m_max; ++m_d) {
            const auto p =
                reliability_point(cfg, K, m_d, cfg.error_fraction);
            csv.row({static_cast<double>(m_d), p.p_d, p.p_e, p.sinr, p.t_us,
                     static_cast<double>(K)});
        }
    }
}

}  // namespace qsap
