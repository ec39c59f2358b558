#include <benchmark/benchmark.h>

#include "wavemap/self_similar.hpp"
#include "wavemap/static_solutions.hpp"

using namespace wavemap;

static void BM_SolveAb(benchmark::State& state) {
    SelfSimilarOptions o;
    o.z_max = 2.0;
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        SelfSimilarProfile p = solve_ab(n, o);
        benchmark::DoNotOptimize(p.b);
    }
}
BENCHMARK(BM_SolveAb)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_LambdaDeterminant(benchmark::State& state) {
    SelfSimilarOptions o;
    o.z_max = 2.0;
    SelfSimilarProfile p = solve_ab(1, o);
    double lam = -6.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lambda_match_determinant(p, lam));
        lam = (lam < -5.0) ? lam + 1e-3 : -6.0;  // avoid caching effects
    }
}
BENCHMARK(BM_LambdaDeterminant)->Unit(benchmark::kMillisecond);

static void BM_SolveStatic(benchmark::State& state) {
    for (auto _ : state) {
        StaticProfile p = solve_static(1.0, 1000.0);
        benchmark::DoNotOptimize(p.residual_norm);
    }
}
BENCHMARK(BM_SolveStatic)->Unit(benchmark::kMillisecond);
