#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "zk/calculus.hpp"
#include "zk/dynamics.hpp"
#include "zk/spectral.hpp"

namespace {

zk::dynamics::SimConfig config_for(int n) {
  zk::dynamics::SimConfig c;
  c.nx = c.ny = n;
  c.initial.amplitude = 0.3;
  return c;
}

void BM_Step(benchmark::State& state) {
  const auto c = config_for(static_cast<int>(state.range(0)));
  zk::dynamics::Stepper stepper(c);
  auto u = zk::dynamics::make_initial(c);
  for (auto _ : state) {
    u = stepper.advance(u);
    benchmark::DoNotOptimize(u.values().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(u.values().size()));
}
BENCHMARK(BM_Step)->Arg(63)->Arg(127)->Arg(255)->Unit(benchmark::kMicrosecond);

void BM_SolverSetup(benchmark::State& state) {
  const auto c = config_for(static_cast<int>(state.range(0)));
  const zk::dynamics::LinearPart op(c.grid(), 1, 0.0);
  for (auto _ : state) {
    zk::dynamics::ImplicitSolver solver(op, 5e-4);
    benchmark::DoNotOptimize(&solver);
  }
}
BENCHMARK(BM_SolverSetup)->Arg(63)->Arg(255)->Unit(benchmark::kMicrosecond);

void BM_ApplyLinearPart(benchmark::State& state) {
  const auto c = config_for(static_cast<int>(state.range(0)));
  const zk::dynamics::LinearPart op(c.grid(), 1, 1e-3);
  const auto u = zk::dynamics::make_initial(c);
  for (auto _ : state) {
    auto r = op.apply(u);
    benchmark::DoNotOptimize(r.values().data());
  }
}
BENCHMARK(BM_ApplyLinearPart)->Arg(63)->Arg(255)->Unit(benchmark::kMicrosecond);

void BM_Norms(benchmark::State& state) {
  const auto c = config_for(127);
  const auto u = zk::dynamics::make_initial(c);
  for (auto _ : state) benchmark::DoNotOptimize(zk::calculus::norms(u, true));
}
BENCHMARK(BM_Norms)->Unit(benchmark::kMicrosecond);

void BM_CubicRoots(benchmark::State& state) {
  double xi = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(zk::spectral::cubic_roots(xi, 0.05));
    xi = xi < 0.9 ? xi + 1e-6 : 0.1;
  }
}
BENCHMARK(BM_CubicRoots);

}  // namespace
BENCHMARK_MAIN();
