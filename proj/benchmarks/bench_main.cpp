#include <benchmark/benchmark.h>

#include <random>

#include "qsap/codebook.hpp"
#include "qsap/phy.hpp"
#include "qsap/qln.hpp"
#include "qsap/quantum.hpp"
#include "qsap/reliability.hpp"

namespace {

using namespace qsap;

void bm_codebook_construct(benchmark::State& state) {
    const CodeParams p{static_cast<unsigned>(state.range(0)), 2, 3, 4};
    for (auto _ : state)
        benchmark::DoNotOptimize(Codebook::construct(p));
}
BENCHMARK(bm_codebook_construct)->Arg(7)->Arg(23)->Arg(97);

void bm_decompose(benchmark::State& state) {
    const Codebook book = Codebook::construct({7, 2, 3, 7});
    std::vector<BitVec> words{book.column(3), book.column(17), book.column(40)};
    const BitVec sum = superpose(words);
    for (auto _ : state)
        benchmark::DoNotOptimize(book.decompose(sum, 3));
}
BENCHMARK(bm_decompose);

void bm_membership_search(benchmark::State& state) {
    const Codebook book = Codebook::construct({7, 2, 3, 7});
    std::vector<BitVec> words{book.column(3), book.column(17), book.column(40),
                              book.column(44)};
    const BitVec sum = superpose(words);
    for (auto _ : state)
        benchmark::DoNotOptimize(book.is_boolean_sum_of(sum, 4));
}
BENCHMARK(bm_membership_search);

void bm_count_signals(benchmark::State& state) {
    std::mt19937_64 rng(7);
    const PhyParams p;
    const Codebook book = Codebook::construct({3, 2, 3, 3});
    std::vector<UserTx> users;
    for (unsigned u = 0; u < 3; ++u)
        users.push_back({book.column(3 * u), 3 * u, u, 0.0});
    const Observation obs = synthesize(rng, p, 5, users, {});
    for (auto _ : state)
        benchmark::DoNotOptimize(count_signals(obs.y[0], 4.0, 1.0));
}
BENCHMARK(bm_count_signals);

void bm_parity_circuit(benchmark::State& state) {
    for (auto _ : state) {
        auto r = quantum::parity_circuit([](int x) { return x; });
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(bm_parity_circuit);

void bm_decoding_error_integral(benchmark::State& state) {
    LinkBudget lb;
    lb.snr0 = 0.1;
    lb.n_antennas = 64;
    lb.n_interferers = 3;
    lb.m_data = 20;
    for (auto _ : state)
        benchmark::DoNotOptimize(decoding_error_integral(lb));
}
BENCHMARK(bm_decoding_error_integral);

}  // namespace

BENCHMARK_MAIN();
