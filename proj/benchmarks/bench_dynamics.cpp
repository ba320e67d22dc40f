#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "irds/dynamics.hpp"
#include "irds/homogeneous.hpp"
#include "irds/impulse.hpp"

namespace {

irds::NormalizedParams bench_params() {
    irds::NormalizedParams p;
    p.lambda = 0.83;
    p.gamma = 2.2;
    p.tau = 1.8;
    p.eta = 0.7;
    p.alpha = 0.6;
    p.p = 2.7;
    p.a_min = 0.05;
    p.a_max = 0.6;
    p.d_u = 0.01;
    p.d_v = 0.02;
    return p;
}

irds::SystemState bump(const irds::Grid1D& grid) {
    auto s = irds::SystemState::constant(irds::Frame::cooperative, grid, {0, 0});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.x(i) - 0.5 * (grid.x_min() + grid.x_max());
        s.first[i] = 0.5 * (1.0 - std::tanh(x));
        s.second[i] = 0.2 + 0.5 * std::exp(-x * x);
    }
    return s;
}

void BM_DiffusionStep(benchmark::State& state, irds::DiffusionScheme scheme) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const irds::Diffuser diff(n, 0.05, 0.05, 0.05, scheme);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i < n / 2 ? 1.0 : 0.0;
    for (auto _ : state) {
        diff.apply(v);
        benchmark::DoNotOptimize(v.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_DiffusionStep, crank_nicolson, irds::DiffusionScheme::crank_nicolson_neumann)
    ->Arg(1000)
    ->Arg(10000);
BENCHMARK_CAPTURE(BM_DiffusionStep, gaussian, irds::DiffusionScheme::gaussian_convolution_periodic)
    ->Arg(1000)
    ->Arg(10000);

void BM_TimeTauMap(benchmark::State& state) {
    const auto p = bench_params();
    const irds::Grid1D grid(0.0, 40.0, static_cast<std::size_t>(state.range(0)));
    const irds::TimeTauMap map(grid, irds::Frame::cooperative, p, {p.tau / 200});
    const auto start = bump(grid);
    for (auto _ : state) {
        auto s = start;
        map.apply(s);
        benchmark::DoNotOptimize(s.first.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TimeTauMap)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_SeasonMap(benchmark::State& state) {
    const auto p = bench_params();
    irds::Pair x{0.4, 0.5};
    for (auto _ : state) {
        x = irds::season_map(irds::Frame::cooperative, x, p);
        benchmark::DoNotOptimize(x);
    }
}
BENCHMARK(BM_SeasonMap);

}  // namespace

BENCHMARK_MAIN();
