#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "qsap/bitvec.hpp"

namespace qsap {

/// Parameters of a Kautz-Singleton style nonrandom superimposed code built
/// from a Reed-Solomon outer code over GF(q), q prime. The inner code
/// one-hot encodes each field symbol into q bits, so every codeword has
/// exactly one 1 per consecutive q-bit block.
struct CodeParams {
    unsigned q = 0;       ///< field size (prime)
    unsigned k = 0;       ///< outer message length (symbols)
    unsigned order = 0;   ///< K, max number of superposable codewords
    unsigned clusters = 1;///< G, number of per-user codeword clusters

    unsigned inner_length() const { return 1 + order * (k - 1); }   // n
    unsigned binary_length() const { return q * inner_length(); }   // B
    std::size_t cardinality() const {                               // C = q^k
        std::size_t c = 1;
        for (unsigned i = 0; i < k; ++i) c *= q;
        return c;
    }

    /// Throws std::invalid_argument when the construction preconditions
    /// fail (q not prime, q < n-1, order < 2, ...).
    void validate() const;
};

bool is_prime(unsigned long n);

/// Rate log2(C)/B of the code. Pure arithmetic: evaluable for non-prime q
/// (used by the rate/overhead sweeps), only q >= K(k-1), K >= 2 required.
double code_rate(unsigned q, unsigned k, unsigned order);

/// Smallest achievable binary length at given (k, K) over admissible q,
/// i.e. K(k-1)[1 + K(k-1)].
unsigned long min_binary_length(unsigned k, unsigned order);

/// Boolean sum (bitwise OR) of a non-empty set of equal-length codewords.
BitVec superpose(std::span<const BitVec> words);

class Codebook {
public:
    static Codebook construct(const CodeParams& params);

    const CodeParams& params() const { return params_; }
    std::size_t size() const { return columns_.size(); }
    const BitVec& column(std::size_t j) const { return columns_[j]; }
    const std::vector<BitVec>& columns() const { return columns_; }

    // ---- cluster allocation: consecutive ranges of size floor(C/G);
    //      the C mod G leftover codewords are unassigned.
    std::size_t cluster_size() const { return size() / params_.clusters; }
    /// Cluster owning column j, or npos for unassigned leftovers.
    std::size_t cluster_of(std::size_t j) const;
    std::pair<std::size_t, std::size_t> cluster_range(std::size_t g) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    // ---- phase map: column j <-> pilot phase 2*pi*j/C (bijection).
    double phase_of(std::size_t j) const;
    std::size_t index_of_phase(double phase) const;

    /// Decompose an observed boolean sum into its generating column set via
    /// the containment test. Returns the exact generating indices when the
    /// observation is the OR of at most max_order columns; nullopt signals
    /// decode failure (foreign bits or too many constituents).
    std::optional<std::vector<std::size_t>> decompose(const BitVec& observed,
                                                      std::size_t max_order) const;

    /// Exact membership in B_k: is v the OR of exactly `arity` distinct
    /// columns? Branch-and-bound over the contained columns.
    bool is_boolean_sum_of(const BitVec& v, std::size_t arity) const;

private:
    CodeParams params_;
    std::vector<BitVec> columns_;
};

/// Explicit stacked matrix S = [B  B_2 ... B_{K+1}], block k holding all
/// boolean sums of exactly k distinct columns in lexicographic
/// generating-set order. Desk-scale only; construction enforces a column cap.
struct StackedCodebook {
    struct Block {
        unsigned arity = 0;
        std::vector<BitVec> columns;
        std::vector<std::vector<std::size_t>> generators;
        std::unordered_set<BitVec, BitVecHash> index;

        bool contains(const BitVec& v) const { return index.count(v) > 0; }
    };

    std::vector<Block> blocks;  // arity 1 .. K+1

    static StackedCodebook build(const Codebook& book,
                                 std::size_t max_columns = 2'000'000);

    const Block& block(unsigned arity) const { return blocks.at(arity - 1); }
};

}  // namespace qsap
