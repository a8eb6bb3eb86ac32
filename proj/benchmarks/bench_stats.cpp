#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "reprank/stats.hpp"

namespace {

std::vector<double> random_scores(std::size_t n, std::uint64_t seed, int grid) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> d(1, grid);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng) / static_cast<double>(grid);
    return v;
}

void BM_KendallTau(benchmark::State& state) {
    std::size_t n = static_cast<std::size_t>(state.range(0));
    auto x = random_scores(n, 1, 1000);
    auto y = random_scores(n, 2, 1000);
    for (auto _ : state) {
        double tau = reprank::kendall_tau_scores(x, y);
        benchmark::DoNotOptimize(tau);
    }
    state.SetComplexityN(static_cast<std::int64_t>(n));
}
BENCHMARK(BM_KendallTau)->RangeMultiplier(4)->Range(256, 65536)->Complexity();

void BM_MannWhitneyAsymptotic(benchmark::State& state) {
    std::size_t n = static_cast<std::size_t>(state.range(0));
    auto a = random_scores(n, 3, 50);
    auto b = random_scores(n, 4, 50);
    for (auto _ : state) {
        auto res = reprank::mann_whitney_u(a, b, reprank::MwMethod::asymptotic);
        benchmark::DoNotOptimize(res.p_value);
    }
}
BENCHMARK(BM_MannWhitneyAsymptotic)->Arg(100)->Arg(2000)->Arg(6000);

void BM_MannWhitneyExact(benchmark::State& state) {
    std::size_t n = static_cast<std::size_t>(state.range(0));
    std::vector<double> a, b;
    for (std::size_t k = 0; k < n; ++k) {
        a.push_back(static_cast<double>(3 * k + 1));
        b.push_back(static_cast<double>(3 * k + 2));
    }
    for (auto _ : state) {
        auto res = reprank::mann_whitney_u(a, b, reprank::MwMethod::exact);
        benchmark::DoNotOptimize(res.p_value);
    }
}
BENCHMARK(BM_MannWhitneyExact)->Arg(5)->Arg(10)->Arg(20);

} // namespace

BENCHMARK_MAIN();
