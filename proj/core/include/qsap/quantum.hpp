#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace qsap::quantum {

using cd = std::complex<double>;

/// Two-qubit pure state; amplitude index is (control << 1) | target.
struct TwoQubitState {
    std::array<cd, 4> amp{};

    static TwoQubitState zero() {
        TwoQubitState s;
        s.amp[0] = 1.0;
        return s;
    }
    double norm() const;
};

using Gate1 = std::array<std::array<cd, 2>, 2>;  // row-major 2x2 unitary

extern const Gate1 kHadamard;
/// Target preparation gate: maps |0> to (|0> - |1>)/sqrt(2).
extern const Gate1 kPrep;
/// Target decoding gate: maps (|0> - |1>)/sqrt(2) back to |0>.
extern const Gate1 kUnprep;

enum class Qubit { control = 0, target = 1 };

void apply(TwoQubitState& s, const Gate1& g, Qubit q);

/// Oracle unitary |x>|y> -> |x>|y ^ f(x)> for a boolean f on one bit.
void apply_oracle(TwoQubitState& s, bool f0, bool f1);

/// Projective measurement of one qubit that the circuit guarantees to be
/// deterministic; throws std::runtime_error when the outcome probability
/// is farther than 1e-12 from 0 or 1 (state-integrity guard).
int measure_deterministic(const TwoQubitState& s, Qubit q);

/// One-query Deutsch-style evaluation of f(0) ^ f(1). The oracle callback
/// is sampled to build the oracle unitary, which is applied exactly once.
struct ParityResult {
    int parity = 0;              ///< f(0) ^ f(1)
    std::size_t oracle_uses = 0; ///< oracle unitary applications (always 1)
    TwoQubitState final_state;   ///< post-measurement check state
};

ParityResult parity_circuit(const std::function<int(int)>& f);

struct TruthTableRow {
    int f0 = 0, f1 = 0;
    int measured = 0;   ///< circuit output
    int expected = 0;   ///< f0 ^ f1
};

/// Runs the circuit for all four boolean functions on one bit.
std::vector<TruthTableRow> parity_truth_table();

}  // namespace qsap::quantum
