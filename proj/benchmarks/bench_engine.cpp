#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "reprank/reputation.hpp"

namespace {

reprank::RatingsMatrix synthetic_matrix(std::size_t n_users, std::size_t n_items,
                                        std::size_t ratings_per_user) {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> raw(1, 5);
    std::uniform_int_distribution<std::size_t> item(1, n_items);
    std::vector<reprank::RatingEntry> entries;
    entries.reserve(n_users * ratings_per_user);
    std::vector<bool> seen(n_items + 1);
    for (std::size_t u = 1; u <= n_users; ++u) {
        std::fill(seen.begin(), seen.end(), false);
        for (std::size_t k = 0; k < ratings_per_user; ++k) {
            std::size_t i = item(rng);
            if (seen[i]) continue;
            seen[i] = true;
            entries.push_back({static_cast<reprank::UserId>(u), static_cast<reprank::ItemId>(i),
                               raw(rng) / 5.0});
        }
    }
    return reprank::RatingsMatrix(static_cast<reprank::UserId>(n_users),
                                  static_cast<reprank::ItemId>(n_items), std::move(entries), 0.8);
}

void BM_EngineStep(benchmark::State& state) {
    auto matrix = synthetic_matrix(static_cast<std::size_t>(state.range(0)), 500, 40);
    std::vector<double> c(matrix.n_users(), 1.0);
    reprank::EngineConfig cfg;
    for (auto _ : state) {
        auto [ranking, c_next] = reprank::step_normalized(matrix, c, cfg);
        benchmark::DoNotOptimize(c_next.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(matrix.n_ratings()));
}
BENCHMARK(BM_EngineStep)->Arg(500)->Arg(2000)->Arg(6000);

void BM_RunToConvergence(benchmark::State& state) {
    auto matrix = synthetic_matrix(static_cast<std::size_t>(state.range(0)), 500, 40);
    reprank::EngineConfig cfg;
    for (auto _ : state) {
        reprank::RunResult res = reprank::run(matrix, cfg);
        benchmark::DoNotOptimize(res.reputation.values.data());
    }
}
BENCHMARK(BM_RunToConvergence)->Arg(500)->Arg(2000);

} // namespace

BENCHMARK_MAIN();
