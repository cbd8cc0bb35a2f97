#include <benchmark/benchmark.h>

#include <random>

#include "twistloop/pipeline.hpp"

using namespace twistloop;

namespace {

// Dense n×n matrix of Laurent polynomials with exponents in [-2, 2].
LaurentMatrix random_matrix(int n) {
    std::mt19937 rng(static_cast<unsigned>(n));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LaurentMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int e = -2; e <= 2; ++e) m(i, j).add_term(e, cplx(u(rng), u(rng)));
    return m;
}

std::vector<std::string> words(int count) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> len(3, 12), bit(0, 1);
    std::vector<std::string> out;
    while (static_cast<int>(out.size()) < count) {
        std::string w;
        for (int k = len(rng); k > 0; --k) w += bit(rng) ? 'R' : 'L';
        try {
            parse_word(w);
            out.push_back(w);
        } catch (const std::exception&) {
        }
    }
    return out;
}

void BM_poly_det_serial(benchmark::State& st) {
    const LaurentMatrix m = random_matrix(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(poly_det_serial(m));
}

void BM_poly_det_parallel(benchmark::State& st) {
    const LaurentMatrix m = random_matrix(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(poly_det(m));
}

void BM_verify_batch_serial(benchmark::State& st) {
    const auto w = words(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(verify_batch_serial(w));
}

void BM_verify_batch_parallel(benchmark::State& st) {
    const auto w = words(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(verify_batch(w));
}

void BM_solve_geometric(benchmark::State& st) {
    const RLWord w = parse_word("RRLRLLRRLLRL");
    for (auto _ : st) benchmark::DoNotOptimize(solve_geometric(w));
}

}  // namespace

BENCHMARK(BM_poly_det_serial)->Arg(16)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_poly_det_parallel)->Arg(16)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_verify_batch_serial)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_verify_batch_parallel)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_solve_geometric)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
