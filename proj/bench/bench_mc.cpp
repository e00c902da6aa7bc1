// Serial reference against the OpenMP block scheduler on the same kernels.
#include <benchmark/benchmark.h>

#include "tensorval/mcharness.hpp"
#include "tensorval/spherical.hpp"

using namespace tensorval;

namespace {

McConfig config(const benchmark::State& state, long samples) {
    McConfig cfg;
    cfg.samples = samples;
    cfg.parallel = state.range(0) != 0;
    return cfg;
}

void BM_Crofton(benchmark::State& state) {
    Polytope c = cube(3, 1.0, true);
    for (auto _ : state) benchmark::DoNotOptimize(mc_crofton(c, 1, 2, 1, config(state, 50000)));
    state.SetItemsProcessed(state.iterations() * 50000);
}

void BM_Intersectional(benchmark::State& state) {
    Polytope c = cube(3, 1.0, true);
    for (auto _ : state) benchmark::DoNotOptimize(mc_intersectional(c, c, 1, 2, 2, config(state, 2000)));
    state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_Radon(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(mc_radon_check(4, 2, 2, config(state, 200000)));
    state.SetItemsProcessed(state.iterations() * 200000);
}

}  // namespace

BENCHMARK(BM_Crofton)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Intersectional)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Radon)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
