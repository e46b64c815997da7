#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "qsap/experiment.hpp"

using namespace qsap;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
    auto d = fs::temp_directory_path() / "qsap_exp_tests";
    fs::create_directories(d);
    return d;
}

// data rows of a '#'-commented CSV, split into cells
std::vector<std::vector<std::string>> read_csv(const fs::path& p,
                                               std::vector<std::string>* header
                                               = nullptr) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!header_seen) {
            header_seen = true;
            if (header) *header = cells;
            continue;
        }
        rows.push_back(cells);
    }
    return rows;
}

ExperimentConfig fast_config() {
    ExperimentConfig cfg;  // defaults: (3,2,3) codebook, 128 antennas
    cfg.n_antennas = 64;
    cfg.trials = 12;
    cfg.seed = 2024;
    return cfg;
}

}  // namespace

TEST_CASE("seed derivation is deterministic and collision-free in practice") {
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
    std::unordered_set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(derive_seed(7, i));
    CHECK(seen.size() == 10000);
    CHECK(derive_seed(7, 0) != derive_seed(8, 0));
}

TEST_CASE("config json roundtrip and partial overrides") {
    ExperimentConfig cfg;
    cfg.q = 5;
    cfg.order = 4;
    cfg.clusters = 4;
    cfg.attack = AttackMode::partial_band;
    auto j = cfg.to_json();
    auto back = ExperimentConfig::from_json(j);
    CHECK(back.q == 5);
    CHECK(back.order == 4);
    CHECK(back.attack == AttackMode::partial_band);
    CHECK(back.to_json() == j);

    // sparse document: unmentioned fields keep their defaults
    auto sparse = ExperimentConfig::from_json(nlohmann::json{{"seed", 99}});
    CHECK(sparse.seed == 99);
    CHECK(sparse.q == 3);
    CHECK(sparse.trials == 1000);
}

TEST_CASE("config validation rejects out-of-domain fields") {
    auto bad = [](auto&& mut) {
        ExperimentConfig c;
        mut(c);
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    };
    bad([](ExperimentConfig& c) { c.q = 4; });
    bad([](ExperimentConfig& c) { c.order = 1; });
    bad([](ExperimentConfig& c) { c.snr0 = 0.0; });
    bad([](ExperimentConfig& c) { c.error_fraction = 1.0; });
    bad([](ExperimentConfig& c) { c.calibration_trials = 100; });
    bad([](ExperimentConfig& c) { c.band_start = 4090; });
    CHECK_THROWS_AS(attack_mode_from_string("nope"), std::invalid_argument);
}

TEST_CASE("scenario results are independent of the worker count") {
    auto cfg = fast_config();
    cfg.n_workers = 1;
    auto a = run_scenario(cfg);
    cfg.n_workers = 3;
    auto b = run_scenario(cfg);
    REQUIRE(a.records.size() == b.records.size());
    CHECK(a.threshold == b.threshold);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].seed == b.records[i].seed);
        CHECK(a.records[i].truth == b.records[i].truth);
        CHECK(a.records[i].verdict == b.records[i].verdict);
        CHECK(a.records[i].uad_exact == b.records[i].uad_exact);
        CHECK(a.records[i].sinr == b.records[i].sinr);
    }
    CHECK(a.amd_accuracy == b.amd_accuracy);
}

TEST_CASE("mixture scenarios cycle through all three attack modes") {
    auto cfg = fast_config();
    auto s = run_scenario(cfg);
    REQUIRE(s.records.size() == 12);
    bool saw[3] = {false, false, false};
    for (const auto& r : s.records) saw[static_cast<int>(r.truth) + 1] = true;
    CHECK(saw[0]);  // partial band
    CHECK(saw[1]);  // silence
    CHECK(saw[2]);  // wideband
    CHECK(s.threshold >= 1.0);
    CHECK(s.mean_sinr > 0.0);
}

TEST_CASE("zero-trial scenario still calibrates and returns cleanly") {
    auto cfg = fast_config();
    cfg.trials = 0;
    auto s = run_scenario(cfg);
    CHECK(s.records.empty());
    CHECK(s.threshold > 0.0);
}

TEST_CASE("code-rate sweep reproduces the frozen anchors") {
    auto cfg = fast_config();
    auto path = tmp_dir() / "fig7.csv";
    figure_code_rate(cfg, path);
    std::vector<std::string> header;
    auto rows = read_csv(path, &header);
    REQUIRE(!rows.empty());
    REQUIRE(header.size() >= 2);
    bool hit_170 = false, hit_171 = false;
    for (const auto& r : rows) {
        const double n_e = std::stod(r[0]);
        const double rate = std::stod(r[1]);
        if (n_e == 170 && std::abs(rate - 0.0598525) < 1e-3) hit_170 = true;
        if (n_e == 171 && std::abs(rate - 0.0496834) < 1e-3) hit_171 = true;
    }
    CHECK(hit_170);
    CHECK(hit_171);
}

TEST_CASE("false-alarm sweep is monotone in the threshold") {
    auto cfg = fast_config();
    cfg.trials = 1000;
    auto path = tmp_dir() / "fig6.csv";
    figure_false_alarm(cfg, path);
    std::vector<std::string> header;
    auto rows = read_csv(path, &header);
    REQUIRE(!rows.empty());
    REQUIRE(header.size() == 3);
    std::map<std::string, std::vector<std::pair<double, double>>> curves;
    for (const auto& r : rows) {
        const double fa = std::stod(r[1]);
        CHECK(fa >= 0.0);
        CHECK(fa <= 1.0);
        curves[r[2]].push_back({std::stod(r[0]), fa});
    }
    CHECK(curves.size() == 3);  // K = 4, 8, 12
    for (auto& [k, pts] : curves) {
        std::sort(pts.begin(), pts.end());
        for (std::size_t i = 1; i < pts.size(); ++i)
            CHECK(pts[i].second <= pts[i - 1].second);
    }
}

TEST_CASE("overhead sweep grows with the user load") {
    auto cfg = fast_config();
    auto path = tmp_dir() / "fig8.csv";
    figure_overheads(cfg, path);
    auto rows = read_csv(path);
    REQUIRE(!rows.empty());
}

TEST_CASE("reliability sweeps expose the documented columns") {
    auto cfg = fast_config();
    auto p9 = tmp_dir() / "fig9.csv";
    auto p10 = tmp_dir() / "fig10.csv";
    figure_error_vs_estimation(cfg, p9);
    figure_error_vs_latency(cfg, p10);
    for (const auto& p : {p9, p10}) {
        std::vector<std::string> header;
        auto rows = read_csv(p, &header);
        REQUIRE(!rows.empty());
        REQUIRE(header.size() >= 5);
        CHECK(header[0] == "sweep_variable");
        CHECK(header[1] == "P_d");
        CHECK(header[2] == "P_e");
        CHECK(header[3] == "gamma_asy");
        CHECK(header[4] == "T_us");
        // config comments precede the header
        std::ifstream in(p);
        std::string first;
        std::getline(in, first);
        CHECK(first.rfind("#", 0) == 0);
        // P_e = P_d^2 row by row
        for (const auto& r : rows) {
            const double pd = std::stod(r[1]);
            const double pe = std::stod(r[2]);
            CHECK(pe == doctest::Approx(pd * pd).epsilon(1e-9));
        }
    }
}
