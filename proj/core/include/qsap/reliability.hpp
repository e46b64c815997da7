#pragma once

#include <cstdint>
#include <random>

namespace qsap {

double q_function(double x);
double channel_capacity(double snr);       // log2(1 + x), bits/channel use
double channel_dispersion(double snr);     // 1 - (1 + x)^-2

/// Asymptotic (large antenna count) post-combining SINR with perfect CSI.
double sinr_asymptotic_perfect(double snr0, unsigned n_antennas,
                               unsigned n_interferers);

/// Same with imperfect CSI; error_fraction in (0, 1) is the share of the
/// channel power lost to the estimation error.
double sinr_asymptotic_error(double snr0, unsigned n_antennas,
                             unsigned n_interferers, double error_fraction);

struct LinkBudget {
    double snr0 = 0.1;               ///< per-antenna average SNR, linear
    unsigned n_antennas = 128;       ///< receive antennas
    unsigned n_interferers = 0;      ///< co-subcarrier interferers K_c
    unsigned n_data_subcarriers = 4; ///< N_D
    unsigned m_data = 0;             ///< data OFDM symbols m_D
    double symbol_duration_s = 17.84e-6;
    double subcarrier_spacing_hz = 60e3;
    double payload_bits = 256.0;     ///< short-packet payload R
};

/// Normalized coding rate r = R / (m_D * T_s * N_D * df), bits/s/Hz.
double coding_rate(const LinkBudget& lb);

/// Normal-approximation decoding error probability at a fixed SINR.
double decoding_error_at_sinr(const LinkBudget& lb, double sinr);

/// One-retransmission failure probability.
inline double failure_probability(double p_d) { return p_d * p_d; }

/// Density of the post-matched-filter SINR x = snr0*S / (snr0*T + 1) with
/// S ~ Gamma(n_antennas, 1) signal power and T ~ Gamma(n_interferers, 1)
/// aggregate interference power. Normalized: integrates to 1 over [0, inf).
double interference_sinr_pdf(double x, double snr0, unsigned n_antennas,
                             unsigned n_interferers);

/// Draws one SINR sample from the same model (Monte Carlo cross-check).
double sample_interference_sinr(std::mt19937_64& rng, double snr0,
                                unsigned n_antennas, unsigned n_interferers);

/// Fading-averaged decoding error: integral of decoding_error_at_sinr
/// against interference_sinr_pdf, adaptive quadrature, abs tol 1e-8.
double decoding_error_integral(const LinkBudget& lb);

struct FrameTiming {
    double symbol_duration_s = 17.84e-6;
    double t_extra_s = 300e-6;   ///< scheduling + processing overhead
    double t_con_s = 1e-3;       ///< latency budget
    unsigned m_access = 0;       ///< access/estimation symbols m_E = K + 2
};

/// Largest m_D fitting the latency budget; 0 when the budget is blown.
unsigned data_symbol_budget(const FrameTiming& t);

/// End-to-end frame latency for a given m_D, in seconds.
double frame_latency_s(const FrameTiming& t, unsigned m_data);

}  // namespace qsap
