#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qsap/bitvec.hpp"
#include "qsap/codebook.hpp"
#include "qsap/phy.hpp"

namespace qsap {

/// Per-burst features: signal counts, occupancy word, thresholded
/// cross-subcarrier correlation matrix.
struct FeatureVector {
    std::vector<unsigned> counts;  ///< per-subcarrier signal counts
    BitVec occupancy;              ///< 1 iff count >= 1
    Eigen::MatrixXi d;             ///< binary correlation digits, zero diagonal
};

FeatureVector extract_features(const Observation& obs, double count_threshold,
                               double noise_power, double zeta = 0.5);

/// Membership tests against the boolean-sum blocks, answered from the
/// explicit stacked matrix when one is supplied, otherwise by exact search.
class MembershipOracle {
public:
    explicit MembershipOracle(const Codebook& book,
                              const StackedCodebook* stacked = nullptr)
        : book_(&book), stacked_(stacked) {}

    bool contains(const BitVec& v, unsigned arity) const;
    const Codebook& book() const { return *book_; }

private:
    const Codebook* book_;
    const StackedCodebook* stacked_;
};

enum class AttackLabel { wideband = 1, silence = 0, partial_band = -1 };

const char* to_string(AttackLabel a);

struct AmdVerdict {
    AttackLabel label = AttackLabel::silence;
    BitVec working_word;  ///< legitimate occupancy under WB/SC, else raw occupancy
};

/// Attack-mode detection: wideband jamming iff every off-diagonal digit in
/// the occupied rows of d is 1; silence iff the occupancy word is a boolean
/// sum of exactly n_users columns and the count total matches; partial-band
/// otherwise.
AmdVerdict detect_attack_mode(const FeatureVector& f,
                              const MembershipOracle& oracle, unsigned n_users);

struct DigitAttribution {
    std::vector<int> flags;               ///< 1 iff digit attributed to the attacker
    std::vector<std::size_t> singletons;  ///< subcarriers with count exactly 1
    std::vector<std::size_t> confirmed;   ///< flagged subset of the singletons
    std::size_t oracle_queries = 0;       ///< total oracle-unitary applications
};

/// The two-point digit function for subcarrier j: g(0) probes whether the
/// working word is an (n_users+1)-fold sum; g(1) probes the word with digit
/// j zeroed against the n_users-fold block.
struct DigitFunction {
    int g0 = 0;
    int g1 = 0;
    int operator()(int x) const { return x ? g1 : g0; }
};

DigitFunction build_digit_function(std::size_t j, const BitVec& working_word,
                                   const MembershipOracle& oracle,
                                   unsigned n_users);

/// Parity read-out: digit belongs to the attacker iff g(0) == g(1). With
/// use_quantum the parity comes from the one-query circuit; the classical
/// path evaluates both points directly. Both agree by construction.
bool attribute_digit(const DigitFunction& g, bool use_quantum,
                     std::size_t* oracle_queries = nullptr);

DigitAttribution attribute_digits(const AmdVerdict& verdict,
                                  const FeatureVector& f,
                                  const MembershipOracle& oracle,
                                  unsigned n_users, bool use_quantum = true);

struct AccessReport {
    AttackLabel label = AttackLabel::silence;
    std::vector<std::size_t> user_ids;          ///< cluster indices, sorted
    std::vector<std::size_t> codeword_indices;  ///< matching order
    std::vector<double> phases;                 ///< retrieved pilot phases
    enum class Status { success, decode_failure } status = Status::decode_failure;
};

/// User-activity detection and pilot retrieval. Wideband: decrement every
/// count and decode the residual occupancy. Silence: decode the occupancy
/// directly. Partial-band: zero the attacker-flagged digits; if that fails,
/// eliminate the attacker support read off the correlation row of a
/// confirmed attacker-only subcarrier. Any unresolved case reports
/// decode_failure rather than a wrong set.
AccessReport detect_and_recover(const AmdVerdict& verdict,
                                const DigitAttribution& attribution,
                                const FeatureVector& f,
                                const MembershipOracle& oracle,
                                unsigned n_users);

/// Full pipeline over one burst.
struct DecoderConfig {
    unsigned n_users = 0;
    double count_threshold = 0.0;
    double noise_power = 1.0;
    double zeta = 0.5;
    bool use_quantum = true;
};

AccessReport decode_burst(const Observation& obs, const MembershipOracle& oracle,
                          const DecoderConfig& cfg);

}  // namespace qsap
