#include <benchmark/benchmark.h>

#include "rrcover/analysis.hpp"
#include "rrcover/cover_tree.hpp"
#include "rrcover/rotor.hpp"
#include "rrcover/srw.hpp"

using namespace rrcover;

namespace {

BaseGraph embedding_c() { return BaseGraph({{2}, {1, 1, 2}}); }
BaseGraph fibonacci() { return BaseGraph({{2}, {2, 1}}); }

void BM_BuildCover(benchmark::State& state) {
    const auto g = embedding_c();
    const int height = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto tree = CoverTree::build_cover(g, 2, height);
        benchmark::DoNotOptimize(tree.node_count());
    }
}
BENCHMARK(BM_BuildCover)->Arg(8)->Arg(12)->Arg(16);

void BM_SampleConfig(benchmark::State& state) {
    const auto g = embedding_c();
    const auto tree = CoverTree::build_cover(g, 2, static_cast<int>(state.range(0)));
    const auto dists = RotorDistributionFamily::uniform(g);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto config = sample_config(tree, dists, ++seed);
        benchmark::DoNotOptimize(config.size());
    }
    state.SetItemsProcessed(state.iterations() * tree.internal_count());
}
BENCHMARK(BM_SampleConfig)->Arg(12)->Arg(14);

void BM_RunTransfinite(benchmark::State& state) {
    const auto g = embedding_c();
    const auto tree = CoverTree::build_cover(g, 2, 14);
    const auto dists = RotorDistributionFamily::uniform(g);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto config = sample_config(tree, dists, ++seed);
        const auto report = run_transfinite(tree, config, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(report.ratio);
    }
}
BENCHMARK(BM_RunTransfinite)->Arg(100)->Arg(1000);

void BM_Classify(benchmark::State& state) {
    const auto g = embedding_c();
    const auto dists = RotorDistributionFamily::uniform(g);
    for (auto _ : state) {
        const auto result = classify(g, dists);
        benchmark::DoNotOptimize(result.spectral_radius);
    }
}
BENCHMARK(BM_Classify);

void BM_EscapeProbabilities(benchmark::State& state) {
    const auto g = fibonacci();
    for (auto _ : state) {
        const auto e = escape_probabilities(g, 1e-12);
        benchmark::DoNotOptimize(e[0]);
    }
}
BENCHMARK(BM_EscapeProbabilities);

void BM_LevelCounts(benchmark::State& state) {
    const auto g = fibonacci();
    for (auto _ : state) {
        const auto w = level_counts(g, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(w[0][0].is_zero());
    }
}
BENCHMARK(BM_LevelCounts)->Arg(10)->Arg(100);

void BM_MbpSurvival(benchmark::State& state) {
    const auto g = embedding_c();
    const auto dists = RotorDistributionFamily::uniform(g);
    for (auto _ : state) {
        const auto est = mbp_survival_estimate(g, dists, 30, state.range(0), 1);
        benchmark::DoNotOptimize(est.survival[0]);
    }
}
BENCHMARK(BM_MbpSurvival)->Arg(100)->Arg(1000);

void BM_SrwEscape(benchmark::State& state) {
    const auto g = embedding_c();
    const auto tree = CoverTree::build_cover(g, 2, 12);
    for (auto _ : state) {
        const auto est = srw_escape_estimate(tree, state.range(0), 5);
        benchmark::DoNotOptimize(est.up_fraction);
    }
}
BENCHMARK(BM_SrwEscape)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
