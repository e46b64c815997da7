#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qsap/quantum.hpp"

using namespace qsap::quantum;

TEST_CASE("parity circuit evaluates f(0) xor f(1) for all four functions") {
    auto rows = parity_truth_table();
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(r.measured == r.expected);
        CHECK(r.expected == (r.f0 ^ r.f1));
    }
}

TEST_CASE("circuit uses the oracle exactly once and restores the target") {
    for (int f0 = 0; f0 < 2; ++f0)
        for (int f1 = 0; f1 < 2; ++f1) {
            auto res = parity_circuit([=](int x) { return x ? f1 : f0; });
            CHECK(res.oracle_uses == 1);
            CHECK(res.parity == (f0 ^ f1));
            // target back in |0>: amplitudes with target bit set vanish
            CHECK(std::abs(res.final_state.amp[1]) < 1e-12);
            CHECK(std::abs(res.final_state.amp[3]) < 1e-12);
            CHECK(res.final_state.norm() == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("preparation and decoding gates invert each other") {
    TwoQubitState s = TwoQubitState::zero();
    apply(s, kPrep, Qubit::target);
    CHECK(s.amp[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(s.amp[1].real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
    apply(s, kUnprep, Qubit::target);
    CHECK(std::abs(s.amp[0] - 1.0) < 1e-12);
    CHECK(std::abs(s.amp[1]) < 1e-12);
    CHECK(s.norm() == doctest::Approx(1.0));
}

TEST_CASE("oracle acts as |x>|y> -> |x>|y xor f(x)>") {
    TwoQubitState s{};
    s.amp[2] = 1.0;  // |control=1, target=0>
    apply_oracle(s, /*f0=*/false, /*f1=*/true);
    CHECK(std::abs(s.amp[3] - 1.0) < 1e-12);
    CHECK(std::abs(s.amp[2]) < 1e-12);
}

TEST_CASE("deterministic measurement guards against superposed outcomes") {
    TwoQubitState s = TwoQubitState::zero();
    CHECK(measure_deterministic(s, Qubit::control) == 0);
    apply(s, kHadamard, Qubit::control);
    CHECK_THROWS_AS(measure_deterministic(s, Qubit::control), std::runtime_error);
}
