#include <benchmark/benchmark.h>

#include <cstdint>

#include "icclink/combiner.hpp"

namespace {

using namespace icc;

void BM_ComputeCombiner(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t k = 16;
    RngStream rng(2, n);
    ChannelMatrix channel(n, k);
    const CVector coeffs = sample_complex_gaussian(rng, n * k, Complex(0, 0), 1.0);
    std::copy(coeffs.begin(), coeffs.end(), channel.begin());
    RVector mse(k, 0.2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_combiner(channel, 0.01, 0.1, mse));
    }
    state.SetComplexityN(static_cast<std::int64_t>(n));
}

void BM_HermitianSolve(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    RngStream rng(3, n);
    CMatrix a(n, n);
    const CVector g = sample_complex_gaussian(rng, n * n, Complex(0, 0), 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            Complex acc = i == j ? Complex(static_cast<double>(n), 0.0) : Complex(0.0, 0.0);
            for (std::size_t t = 0; t < n; ++t) acc += g[i * n + t] * std::conj(g[j * n + t]);
            a(i, j) = acc;
        }
    const CVector b = sample_complex_gaussian(rng, n, Complex(0, 0), 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hermitian_solve(a, b));
    }
    state.SetComplexityN(static_cast<std::int64_t>(n));
}

BENCHMARK(BM_ComputeCombiner)
    ->Arg(50)
    ->Arg(100)
    ->Arg(200)
    ->Arg(400)
    ->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oNCubed);
BENCHMARK(BM_HermitianSolve)
    ->Arg(50)
    ->Arg(100)
    ->Arg(200)
    ->Arg(400)
    ->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oNCubed);

}  // namespace

BENCHMARK_MAIN();
