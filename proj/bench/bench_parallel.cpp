// Serial reference kernels against their OpenMP counterparts.
//   ./tcentroid_bench --benchmark_filter=Omega
// TRUNC_CENTROID_THREADS caps the thread count of the parallel runs.

#include <benchmark/benchmark.h>

#include "tcentroid/sampler.hpp"
#include "tcentroid/verification.hpp"

namespace {

using namespace tcentroid;
namespace ver = tcentroid::verification;

Execution execution(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state) {
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_OmegaGrid(benchmark::State& state) {
    const auto spec = ver::omega_grid_spec();
    for (auto _ : state) {
        benchmark::DoNotOptimize(ver::verify_omega_positive(spec, execution(state)));
    }
    label(state);
}

void BM_BoundsGrid(benchmark::State& state) {
    const auto spec = ver::bounds_grid_spec();
    for (auto _ : state) {
        benchmark::DoNotOptimize(ver::verify_bounds(spec, execution(state)));
    }
    label(state);
}

void BM_TheoremSweep(benchmark::State& state) {
    const auto spec = ver::theorem_random_spec(10000, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ver::verify_monotonicity(spec, execution(state)));
    }
    label(state);
}

void BM_OracleEquivalence(benchmark::State& state) {
    auto spec = ver::derivative_grid_spec();
    spec.n_random = 500;
    spec.seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ver::verify_oracle_equivalence(spec, execution(state)));
    }
    label(state);
}

void BM_SampleRejection(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sampler::sample_exterior({1.0, 2.0}, {-1.0, 4.0}, 2.0, 1'000'000, 7, execution(state)));
    }
    label(state);
    state.SetItemsProcessed(state.iterations() * 1'000'000);
}

void BM_SampleTailMixture(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sampler::sample_exterior({0.0, 1.0}, {-6.0, 6.0}, 0.0, 200'000, 7, execution(state)));
    }
    label(state);
    state.SetItemsProcessed(state.iterations() * 200'000);
}

}  // namespace

BENCHMARK(BM_OmegaGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoundsGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TheoremSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleEquivalence)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleRejection)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleTailMixture)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
