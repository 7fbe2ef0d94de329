#include <benchmark/benchmark.h>

#include "lazy_newton/evaluator.hpp"
#include "lazy_newton/field_map.hpp"

namespace {

using namespace lazy_newton;

void BM_SupportedSource(benchmark::State& state) {
    const Source s{1.0, Trajectory{StaticPath{}}};
    const AmbientField field = UniformField{{0, 0, -9.81}};
    KernelParams p;
    p.quadrature = GaussLegendreScheme{static_cast<int>(state.range(0))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(s, field, {0.3, 0.2, 1.0}, 0.0, p));
    }
}
BENCHMARK(BM_SupportedSource)->Arg(16)->Arg(32)->Arg(64);

void BM_KeplerFrame(benchmark::State& state) {
    const double central = 1e10;
    const Source s{1.0, Trajectory{CircularOrbitPath{{}, 10.0, 0.0258, 0.0, {0, 0, 1}}}};
    const AmbientField field = PointMassField{{}, central};
    KernelParams p;
    p.tau_g = 1e-3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(s, field, {10.5, 0.3, 0.0}, 0.0, p));
    }
}
BENCHMARK(BM_KeplerFrame);

void BM_AdaptiveSimpsonOrbit(benchmark::State& state) {
    const Source s{1.0, Trajectory{CircularOrbitPath{{}, 1.0, 10.0, 0.0, {0, 0, 1}}}};
    KernelParams p;
    p.quadrature = AdaptiveSimpsonScheme{1e-12};
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(s, ZeroField{}, {0.1, 0.2, 0.0}, 0.0, p));
    }
}
BENCHMARK(BM_AdaptiveSimpsonOrbit);

void BM_FieldMap(benchmark::State& state) {
    SceneConfig c;
    c.ambient = UniformField{{0, 0, -9.81}};
    c.sources.push_back({1.0, Trajectory{StaticPath{{0, 0, 0.3}}}});
    c.sources.push_back({1.0, Trajectory{CircularOrbitPath{{}, 0.2, 10.0, 0.0, {0, 0, 1}}}});
    const GridSpec grid{{-1, -1, -0.25}, {{{1, 0, 0}, 2.0, 21}, {{0, 1, 0}, 2.0, 21}}, {0.0, 1e-3}};
    const auto threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(field_map(c, grid, threads));
    }
}
BENCHMARK(BM_FieldMap)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
