#include <benchmark/benchmark.h>

#include "wavemap/evolver.hpp"
#include "wavemap/initial_data.hpp"

using namespace wavemap;

static void BM_RhsEval(benchmark::State& state) {
    RadialGrid g = make_uniform_grid(50.0, 50.0 / static_cast<double>(state.range(0)));
    ModelParams m;
    FieldState s = gaussian(0.3, 5.0, 1.0, g);
    std::vector<double> dc(g.size()), dp(g.size());
    for (auto _ : state) {
        rhs_eval(s, g, m, dc, dp);
        benchmark::DoNotOptimize(dp.data());
    }
    state.SetItemsProcessed(state.iterations() * g.size());
}
BENCHMARK(BM_RhsEval)->Arg(1000)->Arg(4000)->Arg(16000);

static void BM_CrankNicolsonStep(benchmark::State& state) {
    RadialGrid g = make_uniform_grid(50.0, 50.0 / static_cast<double>(state.range(0)));
    ModelParams m;
    NumericsParams np;
    FieldState s = gaussian(0.3, 5.0, 1.0, g);
    apply_boundaries(s, g, m);
    const double dt = np.cfl * g.min_spacing();
    for (auto _ : state) {
        FieldState next = step(s, dt, g, m, np);
        benchmark::DoNotOptimize(next.chi.data());
    }
    state.SetItemsProcessed(state.iterations() * g.size());
}
BENCHMARK(BM_CrankNicolsonStep)->Arg(1000)->Arg(4000);

static void BM_EnergyDiagnostics(benchmark::State& state) {
    RadialGrid g = make_uniform_grid(50.0, 0.0125);
    ModelParams m;
    FieldState s = gaussian(0.3, 5.0, 1.0, g);
    for (auto _ : state) {
        EnergyDiagnostics d = diagnostics(s, g, m, 12.5);
        benchmark::DoNotOptimize(d.total_energy);
    }
}
BENCHMARK(BM_EnergyDiagnostics);

BENCHMARK_MAIN();
