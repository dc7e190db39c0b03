#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "selfnorm/distribution.hpp"
#include "selfnorm/functionals.hpp"
#include "selfnorm/ou_process.hpp"
#include "selfnorm/rng.hpp"
#include "selfnorm/stats.hpp"
#include "selfnorm/walk.hpp"

using namespace selfnorm;

namespace {

std::vector<double> gaussian_sample(std::size_t count, std::uint64_t stream) {
    RngStream rng(99, stream);
    std::vector<double> xs(count);
    for (auto& x : xs) x = rng.normal();
    return xs;
}

}  // namespace

static void bm_draw(benchmark::State& state, DistributionSpec spec) {
    RngStream rng(42, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sample(spec, rng));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK_CAPTURE(bm_draw, normal, DistributionSpec{DistKind::Normal});
BENCHMARK_CAPTURE(bm_draw, pareto2, DistributionSpec{DistKind::ParetoSym2});
BENCHMARK_CAPTURE(bm_draw, stable_1_5, DistributionSpec{DistKind::StableSym, 1.5});

static void bm_build_walk(benchmark::State& state) {
    const DistributionSpec spec{DistKind::Normal};
    const auto n = static_cast<std::uint64_t>(state.range(0));
    std::uint64_t stream = 0;
    for (auto _ : state) {
        RngStream rng(42, stream++);
        benchmark::DoNotOptimize(build_walk(spec, n, 1.0, rng));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(index_for_time(n, 1.0) - n));
}
BENCHMARK(bm_build_walk)->Arg(100)->Arg(1000)->Arg(10000);

static void bm_sample_ou(benchmark::State& state) {
    const auto grid = uniform_grid(0.0, 1.0, 0.005);
    std::uint64_t stream = 0;
    for (auto _ : state) {
        RngStream rng(42, stream++);
        benchmark::DoNotOptimize(sample_ou(grid, rng));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(bm_sample_ou);

static void bm_path_integral(benchmark::State& state) {
    RngStream rng(42, 7);
    const auto path = sample_ou(uniform_grid(0.0, 1.0, 0.005), rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(path_integral(path, 0.0, 1.0, Transform::Square));
}
BENCHMARK(bm_path_integral);

static void bm_path_extremum(benchmark::State& state) {
    RngStream rng(42, 8);
    const auto path = sample_ou(uniform_grid(0.0, 1.0, 0.005), rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(path_extremum(path, 0.0, 1.0, ExtremumMode::Max));
}
BENCHMARK(bm_path_extremum);

static void bm_ks_two_sample(benchmark::State& state) {
    const auto count = static_cast<std::size_t>(state.range(0));
    const auto a = gaussian_sample(count, 1);
    const auto b = gaussian_sample(count, 2);
    for (auto _ : state) benchmark::DoNotOptimize(ks_two_sample(a, b));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(2 * count));
}
BENCHMARK(bm_ks_two_sample)->Arg(4000)->Arg(40000);
