#include <benchmark/benchmark.h>

#include "socdw/dynamics.hpp"
#include "socdw/fourmode.hpp"
#include "socdw/grid.hpp"
#include "socdw/stationary.hpp"

using namespace socdw;

namespace {

TrapParams default_trap(double gamma = 0.8, double f = 0.0774, double omega = 0.64) {
  TrapParams t;
  t.gamma = gamma;
  t.f = f;
  t.omega_mod = omega;
  return t;
}

const StationarySet& cached_set() {
  static StationarySet set = [] {
    GridSpec spec;
    spec.n_points = 512;
    return stationary_set(build_grid(spec), default_trap());
  }();
  return set;
}

}  // namespace

static void BM_SplitStep(benchmark::State& state) {
  GridSpec spec;
  spec.n_points = static_cast<int>(state.range(0));
  const Grid grid = build_grid(spec);
  const TrapParams trap = default_trap();
  PropagationConfig cfg;
  Propagator prop(grid, trap, cfg);
  SpinorField psi = resample(cached_set().states[0].field, cached_set().grid, grid);
  double t = 0.0;
  for (auto _ : state) {
    prop.step(psi, t);
    t += cfg.dt;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SplitStep)->Arg(512)->Arg(1024)->Arg(2048);

static void BM_Eigensolve(benchmark::State& state) {
  GridSpec spec;
  spec.n_points = static_cast<int>(state.range(0));
  const Grid grid = build_grid(spec);
  const TrapParams trap = default_trap();
  for (auto _ : state) benchmark::DoNotOptimize(bound_energies(grid, trap, 4));
}
BENCHMARK(BM_Eigensolve)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_Monodromy(benchmark::State& state) {
  const FourModeCoefficients co =
      four_mode_coefficients(cached_set(), double_well(cached_set().grid, default_trap()));
  const FourModeSystem sys = assemble(co, 0.143, 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(monodromy(sys));
}
BENCHMARK(BM_Monodromy)->Unit(benchmark::kMillisecond);

static void BM_FourModeRun(benchmark::State& state) {
  const FourModeCoefficients co =
      four_mode_coefficients(cached_set(), double_well(cached_set().grid, default_trap()));
  const FourModeSystem sys = assemble(co, 0.143, 0.8);
  Eigen::Vector4cd c0;
  c0 << 1, 0, 0, 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_modes(c0, sys, static_cast<double>(state.range(0))));
}
BENCHMARK(BM_FourModeRun)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
