#include "qsap/reliability.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qsap {

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double channel_capacity(double snr) { return std::log2(1.0 + snr); }

double channel_dispersion(double snr) {
    const double a = 1.0 + snr;
    return 1.0 - 1.0 / (a * a);
}

double sinr_asymptotic_perfect(double snr0, unsigned n_antennas,
                               unsigned n_interferers) {
    return n_antennas * snr0 / (snr0 * n_interferers + 1.0);
}

double sinr_asymptotic_error(double snr0, unsigned n_antennas,
                             unsigned n_interferers, double error_fraction) {
    if (error_fraction < 0.0 || error_fraction >= 1.0)
        throw std::invalid_argument("reliability: error fraction must be in [0,1)");
    return n_antennas * snr0 * (1.0 - error_fraction) /
           (snr0 * n_interferers + error_fraction * snr0 + 1.0);
}

double coding_rate(const LinkBudget& lb) {
    if (lb.m_data == 0)
        throw std::invalid_argument("reliability: m_data must be positive");
    return lb.payload_bits / (lb.m_data * lb.symbol_duration_s *
                              lb.n_data_subcarriers * lb.subcarrier_spacing_hz);
}

double decoding_error_at_sinr(const LinkBudget& lb, double sinr) {
    const double r = coding_rate(lb);
    const double v = channel_dispersion(sinr);
    if (v <= 0.0) return channel_capacity(sinr) >= r ? 0.0 : 1.0;
    const double uses = static_cast<double>(lb.n_data_subcarriers) * lb.m_data;
    return q_function((channel_capacity(sinr) - r) / std::sqrt(v / uses));
}

double interference_sinr_pdf(double x, double snr0, unsigned n_antennas,
                             unsigned n_interferers) {
    if (snr0 <= 0.0 || n_antennas == 0)
        throw std::invalid_argument("reliability: snr0 and n_antennas must be positive");
    if (x < 0.0) return 0.0;
    const double nt = n_antennas;
    const double kc = n_interferers;
    if (x == 0.0 && n_antennas > 1) return 0.0;
    const double log_prefix = (n_antennas > 1 ? (nt - 1.0) * std::log(x) : 0.0) -
                              x / snr0 - std::lgamma(nt) - nt * std::log(snr0);
    if (n_interferers == 0)  // no interference: plain Gamma(nt, snr0) density
        return std::exp(log_prefix);
    // log-sum-exp over the binomial expansion of (snr0*t + 1)^nt
    const double log_snr0 = std::log(snr0);
    const double log1px = std::log1p(x);
    double max_term = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(n_antennas + 1);
    for (unsigned i = 0; i <= n_antennas; ++i) {
        terms[i] = std::lgamma(nt + 1.0) - std::lgamma(i + 1.0) -
                   std::lgamma(nt - i + 1.0) + i * log_snr0 +
                   std::lgamma(kc + i) - std::lgamma(kc) -
                   (kc + i) * log1px;
        max_term = std::max(max_term, terms[i]);
    }
    double s = 0.0;
    for (double t : terms) s += std::exp(t - max_term);
    return std::exp(log_prefix + max_term + std::log(s));
}

double sample_interference_sinr(std::mt19937_64& rng, double snr0,
                                unsigned n_antennas, unsigned n_interferers) {
    std::gamma_distribution<double> sig(n_antennas, 1.0);
    const double s = sig(rng);
    double t = 0.0;
    if (n_interferers > 0) {
        std::gamma_distribution<double> intf(n_interferers, 1.0);
        t = intf(rng);
    }
    return snr0 * s / (snr0 * t + 1.0);
}

double decoding_error_integral(const LinkBudget& lb) {
    boost::math::quadrature::exp_sinh<double> integrator;
    auto f = [&](double x) {
        return decoding_error_at_sinr(lb, x) *
               interference_sinr_pdf(x, lb.snr0, lb.n_antennas, lb.n_interferers);
    };
    return integrator.integrate(f, 1e-8);
}

unsigned data_symbol_budget(const FrameTiming& t) {
    const double left = t.t_con_s - t.m_access * t.symbol_duration_s - t.t_extra_s;
    if (left <= 0.0) return 0;
    return static_cast<unsigned>(std::floor(left / t.symbol_duration_s));
}

double frame_latency_s(const FrameTiming& t, unsigned m_data) {
    return (t.m_access + m_data) * t.symbol_duration_s + t.t_extra_s;
}

}  // namespace qsap
