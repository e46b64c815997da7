#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "qsap/bitvec.hpp"

namespace qsap {

struct PhyParams {
    unsigned n_antennas = 128;
    unsigned n_taps = 6;          ///< multipath taps, each CN(0, 1/L)
    unsigned n_fft = 4096;        ///< DFT grid the access band lives on
    unsigned band_start = 100;    ///< first subcarrier index of the band
    double user_power = 1.0;      ///< per-subcarrier pilot power rho_L
    double attacker_power = 10.0; ///< per-subcarrier jamming power rho_A
    double noise_power = 1.0;     ///< per-antenna noise variance
};

/// One transmitting user: subcarrier activation pattern, the codebook
/// column behind it, and the DFT tone index making the M-symbol sequence
/// orthogonal across users.
struct UserTx {
    BitVec sap;
    std::size_t codeword_index = 0;
    unsigned tone = 0;
    double phase = 0.0;  ///< pilot phase, common to all active subcarriers
};

struct AttackerTx {
    BitVec sap;  ///< working word support; empty size means no attacker
};

/// Received per-subcarrier blocks: y[i] is n_antennas x n_symbols for the
/// i-th subcarrier of the access band.
struct Observation {
    std::vector<Eigen::MatrixXcd> y;
    unsigned n_symbols = 0;
};

/// Frequency response of one L-tap source on a given absolute subcarrier,
/// one entry per antenna. taps is n_antennas x n_taps.
Eigen::VectorXcd tap_response(const Eigen::MatrixXcd& taps, unsigned subcarrier,
                              unsigned n_fft);

Eigen::MatrixXcd draw_taps(std::mt19937_64& rng, const PhyParams& p);

/// Channel draws behind one synthesized burst, for downstream SINR checks.
struct SynthesisTrace {
    std::vector<Eigen::MatrixXcd> user_taps;
    Eigen::MatrixXcd attacker_taps;  ///< empty when no attacker transmits
};

/// Synthesizes the access-band observation for one attempt. Users transmit
/// sqrt(rho_L) e^{j 2 pi tone k / M} on every active subcarrier; the
/// attacker transmits sqrt(rho_A) with an independent uniform phase per
/// subcarrier and symbol. AWGN everywhere.
Observation synthesize(std::mt19937_64& rng, const PhyParams& p,
                       unsigned n_symbols, const std::vector<UserTx>& users,
                       const AttackerTx& attacker,
                       SynthesisTrace* trace = nullptr);

/// Largest-to-smallest eigenvalue ratio of a noise-only sample Gram matrix
/// predicted by the Marchenko-Pastur support edges.
double mp_ratio_bound(unsigned n_symbols, unsigned n_antennas);

/// Smallest threshold whose empirical false-alarm rate (any eigenvalue
/// ratio of a noise-only block exceeding it) is <= target_false_alarm over
/// `trials` draws. Requires trials >= 10^4; result is clamped from below
/// to the Marchenko-Pastur ratio bound.
double calibrate_threshold(std::mt19937_64& rng, unsigned n_symbols,
                           unsigned n_antennas, std::size_t trials,
                           double target_false_alarm = 0.0);

/// Number of coherent signals in one per-subcarrier block: ratios of the
/// ascending Gram eigenvalues against the smallest, tested at `threshold`.
unsigned count_signals(const Eigen::MatrixXcd& block, double threshold,
                       double noise_power);

std::vector<unsigned> signal_counts(const Observation& obs, double threshold,
                                    double noise_power);

/// Mean over symbols of |<y_i[k], y_j[k]>| between unit-normalized antenna
/// vectors, for every subcarrier pair. Symmetric, unit diagonal.
Eigen::MatrixXd interference_features(const Observation& obs);

/// Thresholded feature matrix: d[i][j] = 1 iff feature > zeta, diagonal
/// forced to 0 (a subcarrier is not its own interferer).
Eigen::MatrixXi threshold_features(const Eigen::MatrixXd& features,
                                   double zeta = 0.5);

/// Least-squares tap estimation from a channel-estimation burst where every
/// user occupies the whole band with its orthogonal tone sequence. Returns
/// one n_antennas x n_taps estimate per user. Exact at zero noise with no
/// attacker present. Throws when the tone set is not orthogonal (rank
/// deficient pilot matrix).
std::vector<Eigen::MatrixXcd> ls_estimate_taps(const Observation& obs,
                                               const std::vector<unsigned>& tones,
                                               double pilot_power,
                                               unsigned band_start,
                                               unsigned n_fft, unsigned n_taps);

/// Synthetic channel-estimation error: sqrt(1-lambda) g - sqrt(lambda) g~
/// with g~ an independent draw of matching variance. lambda = 0 is perfect.
Eigen::VectorXcd apply_estimation_error(std::mt19937_64& rng,
                                        const Eigen::VectorXcd& g,
                                        double lambda);

/// Decomposed matched-filter SINR over Monte Carlo channel draws: coherent
/// beamforming gain vs estimation self-noise, inter-user interference, and
/// thermal noise. error_fraction = 0 uses perfect CSI.
struct SinrEstimate {
    double sinr = 0.0;
    double signal = 0.0;
    double self_interference = 0.0;
    double cross_interference = 0.0;
    double noise = 0.0;
};

SinrEstimate matched_filter_sinr(std::mt19937_64& rng, unsigned n_antennas,
                                 unsigned n_interferers, double snr0,
                                 double error_fraction, std::size_t trials);

}  // namespace qsap
