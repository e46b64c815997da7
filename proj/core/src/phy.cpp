#include "qsap/phy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsap {

namespace {

using cd = std::complex<double>;

Eigen::MatrixXcd gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows,
                                 Eigen::Index cols, double variance) {
    std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = cd(n(rng), n(rng));
    return m;
}

}  // namespace

Eigen::MatrixXcd draw_taps(std::mt19937_64& rng, const PhyParams& p) {
    return gaussian_matrix(rng, p.n_antennas, p.n_taps, 1.0 / p.n_taps);
}

Eigen::VectorXcd tap_response(const Eigen::MatrixXcd& taps, unsigned subcarrier,
                              unsigned n_fft) {
    const auto n_taps = taps.cols();
    Eigen::VectorXcd twiddle(n_taps);
    for (Eigen::Index l = 0; l < n_taps; ++l) {
        const double ang = -2.0 * std::numbers::pi *
                           static_cast<double>(subcarrier) * l / n_fft;
        twiddle(l) = cd(std::cos(ang), std::sin(ang));
    }
    return taps * twiddle;
}

Observation synthesize(std::mt19937_64& rng, const PhyParams& p,
                       unsigned n_symbols, const std::vector<UserTx>& users,
                       const AttackerTx& attacker, SynthesisTrace* trace) {
    std::size_t band = 0;
    for (const auto& u : users) band = std::max(band, u.sap.size());
    band = std::max(band, attacker.sap.size());
    if (band == 0) throw std::invalid_argument("phy: no transmitters");
    for (const auto& u : users)
        if (u.sap.size() != band)
            throw std::invalid_argument("phy: activation pattern length mismatch");

    std::vector<Eigen::MatrixXcd> user_taps;
    user_taps.reserve(users.size());
    for (std::size_t u = 0; u < users.size(); ++u)
        user_taps.push_back(draw_taps(rng, p));
    Eigen::MatrixXcd attacker_taps;
    const bool has_attacker = attacker.sap.size() > 0 && attacker.sap.any();
    if (has_attacker) attacker_taps = draw_taps(rng, p);
    if (trace) {
        trace->user_taps = user_taps;
        trace->attacker_taps = attacker_taps;
    }

    std::uniform_real_distribution<double> uphase(0.0, 2.0 * std::numbers::pi);
    Observation obs;
    obs.n_symbols = n_symbols;
    obs.y.reserve(band);
    const double sqrt_ul = std::sqrt(p.user_power);
    const double sqrt_at = std::sqrt(p.attacker_power);
    for (std::size_t i = 0; i < band; ++i) {
        const unsigned sc = p.band_start + static_cast<unsigned>(i);
        Eigen::MatrixXcd y =
            gaussian_matrix(rng, p.n_antennas, n_symbols, p.noise_power);
        for (std::size_t u = 0; u < users.size(); ++u) {
            if (!users[u].sap.test(i)) continue;
            const Eigen::VectorXcd h = tap_response(user_taps[u], sc, p.n_fft);
            for (unsigned k = 0; k < n_symbols; ++k) {
                const double ang = users[u].phase +
                                   2.0 * std::numbers::pi * users[u].tone * k /
                                       static_cast<double>(n_symbols);
                y.col(k) += h * (sqrt_ul * cd(std::cos(ang), std::sin(ang)));
            }
        }
        if (has_attacker && attacker.sap.test(i)) {
            const Eigen::VectorXcd h = tap_response(attacker_taps, sc, p.n_fft);
            for (unsigned k = 0; k < n_symbols; ++k) {
                const double ang = uphase(rng);
                y.col(k) += h * (sqrt_at * cd(std::cos(ang), std::sin(ang)));
            }
        }
        obs.y.push_back(std::move(y));
    }
    return obs;
}

double mp_ratio_bound(unsigned n_symbols, unsigned n_antennas) {
    const double r = std::sqrt(static_cast<double>(n_symbols) / n_antennas);
    if (r >= 1.0)
        throw std::invalid_argument("phy: need more antennas than symbols");
    const double e = (1.0 + r) / (1.0 - r);
    return e * e;
}

namespace {

Eigen::VectorXd gram_eigenvalues(const Eigen::MatrixXcd& block,
                                 double noise_power) {
    const Eigen::MatrixXcd gram =
        (block.adjoint() * block) / noise_power;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram,
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues();  // ascending
}

}  // namespace

double calibrate_threshold(std::mt19937_64& rng, unsigned n_symbols,
                           unsigned n_antennas, std::size_t trials,
                           double target_false_alarm) {
    if (trials < 10000)
        throw std::invalid_argument("phy: calibration needs >= 10^4 trials");
    if (target_false_alarm < 0.0 || target_false_alarm >= 1.0)
        throw std::invalid_argument("phy: bad false-alarm target");
    std::vector<double> ratios;
    ratios.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        const Eigen::MatrixXcd noise =
            gaussian_matrix(rng, n_antennas, n_symbols, 1.0);
        const Eigen::VectorXd e = gram_eigenvalues(noise, 1.0);
        ratios.push_back(e(e.size() - 1) / e(0));
    }
    std::sort(ratios.begin(), ratios.end());
    // a draw false-alarms iff its max ratio strictly exceeds the threshold;
    // pick the smallest order statistic leaving <= target*trials above it
    const auto allowed =
        static_cast<std::size_t>(target_false_alarm * trials);
    const double t = ratios[trials - 1 - allowed];
    return std::max(t, mp_ratio_bound(n_symbols, n_antennas));
}

unsigned count_signals(const Eigen::MatrixXcd& block, double threshold,
                       double noise_power) {
    const Eigen::VectorXd e = gram_eigenvalues(block, noise_power);
    const Eigen::Index m = e.size();
    for (Eigen::Index k = 1; k < m; ++k) {
        if (e(k) / e(0) > threshold)
            return static_cast<unsigned>(m - k);  // e(k..m-1) are signals
    }
    return 0;
}

std::vector<unsigned> signal_counts(const Observation& obs, double threshold,
                                    double noise_power) {
    std::vector<unsigned> counts;
    counts.reserve(obs.y.size());
    for (const auto& block : obs.y)
        counts.push_back(count_signals(block, threshold, noise_power));
    return counts;
}

Eigen::MatrixXd interference_features(const Observation& obs) {
    const std::size_t b = obs.y.size();
    const unsigned m = obs.n_symbols;
    // normalize each per-symbol antenna vector once
    std::vector<Eigen::MatrixXcd> unit(b);
    for (std::size_t i = 0; i < b; ++i) {
        unit[i] = obs.y[i];
        for (unsigned k = 0; k < m; ++k) {
            const double n = unit[i].col(k).norm();
            if (n > 0) unit[i].col(k) /= n;
        }
    }
    Eigen::MatrixXd feat = Eigen::MatrixXd::Zero(b, b);
    for (std::size_t i = 0; i < b; ++i) {
        feat(i, i) = 1.0;
        for (std::size_t j = i + 1; j < b; ++j) {
            double acc = 0.0;
            for (unsigned k = 0; k < m; ++k)
                acc += std::abs(unit[i].col(k).dot(unit[j].col(k)));
            feat(i, j) = feat(j, i) = acc / m;
        }
    }
    return feat;
}

std::vector<Eigen::MatrixXcd> ls_estimate_taps(const Observation& obs,
                                               const std::vector<unsigned>& tones,
                                               double pilot_power,
                                               unsigned band_start,
                                               unsigned n_fft, unsigned n_taps) {
    const std::size_t n_sc = obs.y.size();
    const unsigned m = obs.n_symbols;
    const std::size_t n_users = tones.size();
    if (n_users == 0 || n_users > m)
        throw std::invalid_argument("phy: pilot matrix rank deficient");
    for (std::size_t a = 0; a < n_users; ++a)
        for (std::size_t b = a + 1; b < n_users; ++b)
            if (tones[a] % m == tones[b] % m)
                throw std::invalid_argument("phy: pilot matrix rank deficient");
    if (n_sc < n_taps)
        throw std::invalid_argument("phy: too few subcarriers for tap count");
    const Eigen::Index n_ant = obs.y[0].rows();

    // band DFT map: response(sc) = F * taps
    Eigen::MatrixXcd f(n_sc, n_taps);
    for (std::size_t i = 0; i < n_sc; ++i)
        for (unsigned l = 0; l < n_taps; ++l) {
            const double ang = -2.0 * std::numbers::pi *
                               static_cast<double>(band_start + i) * l / n_fft;
            f(i, l) = cd(std::cos(ang), std::sin(ang));
        }
    const auto qr = f.colPivHouseholderQr();

    std::vector<Eigen::MatrixXcd> est;
    est.reserve(n_users);
    const double scale = 1.0 / (m * std::sqrt(pilot_power));
    for (std::size_t u = 0; u < n_users; ++u) {
        // de-spread the user's tone, then fit the tap model per antenna
        Eigen::VectorXcd x(m);
        for (unsigned k = 0; k < m; ++k) {
            const double ang =
                2.0 * std::numbers::pi * tones[u] * k / static_cast<double>(m);
            x(k) = cd(std::cos(ang), std::sin(ang));
        }
        Eigen::MatrixXcd g_hat(n_sc, n_ant);  // subcarrier x antenna
        for (std::size_t i = 0; i < n_sc; ++i)
            g_hat.row(i) = (obs.y[i] * x.conjugate()).transpose() * scale;
        est.push_back(Eigen::MatrixXcd(qr.solve(g_hat).transpose()));
    }
    return est;
}

Eigen::VectorXcd apply_estimation_error(std::mt19937_64& rng,
                                        const Eigen::VectorXcd& g,
                                        double lambda) {
    if (lambda < 0.0 || lambda >= 1.0)
        throw std::invalid_argument("phy: error fraction must be in [0,1)");
    if (lambda == 0.0) return g;
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    Eigen::VectorXcd noise(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i) noise(i) = cd(n(rng), n(rng));
    return std::sqrt(1.0 - lambda) * g - std::sqrt(lambda) * noise;
}

SinrEstimate matched_filter_sinr(std::mt19937_64& rng, unsigned n_antennas,
                                 unsigned n_interferers, double snr0,
                                 double error_fraction, std::size_t trials) {
    if (trials == 0) throw std::invalid_argument("phy: trials must be positive");
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    auto draw = [&] {
        Eigen::VectorXcd g(n_antennas);
        for (unsigned i = 0; i < n_antennas; ++i) g(i) = cd(n(rng), n(rng));
        return g;
    };
    const double nt = n_antennas;
    cd beta_mean = 0.0;
    double beta_pow = 0.0, cross = 0.0, noise = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const Eigen::VectorXcd g = draw();
        const Eigen::VectorXcd g_hat =
            error_fraction > 0.0 ? apply_estimation_error(rng, g, error_fraction)
                                 : g;
        const cd beta = g_hat.dot(g) / nt;  // per-trial filter gain on the user
        beta_mean += beta;
        beta_pow += std::norm(beta);
        for (unsigned p = 0; p < n_interferers; ++p)
            cross += std::norm(g_hat.dot(draw())) / (nt * nt);
        noise += g_hat.squaredNorm() / (nt * nt);
    }
    const double inv = 1.0 / trials;
    beta_mean *= inv;
    beta_pow *= inv;
    cross *= inv * snr0;
    noise *= inv;
    SinrEstimate out;
    out.signal = beta_pow * snr0;
    out.self_interference = (beta_pow - std::norm(beta_mean)) * snr0;
    out.cross_interference = cross;
    out.noise = noise;
    out.sinr = out.signal / (cross + noise);
    return out;
}

Eigen::MatrixXi threshold_features(const Eigen::MatrixXd& features,
                                   double zeta) {
    const Eigen::Index b = features.rows();
    Eigen::MatrixXi d = Eigen::MatrixXi::Zero(b, b);
    for (Eigen::Index i = 0; i < b; ++i)
        for (Eigen::Index j = 0; j < b; ++j)
            if (i != j && features(i, j) > zeta) d(i, j) = 1;
    return d;
}

}  // namespace qsap
