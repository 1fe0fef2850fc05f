#include <benchmark/benchmark.h>

#include "waveuio/scenarios.hpp"
#include "waveuio/wavesim.hpp"

namespace {

using namespace waveuio;

SimulationSetup setup(Index nx, double t_final) {
  GridConfig g;
  g.nx = nx;
  g.dt = 1.0 / static_cast<double>(nx);
  g.t_final = t_final;
  g.snapshot_stride = 0;
  const Scenario sc = builtin_scenario("paper-dsin", g);
  SimulationSetup s;
  s.system = reference_system();
  s.observer = reference_observer();
  s.initial = sc.initial;
  s.control = sc.control;
  s.disturbance = sc.disturbance;
  s.grid = sc.grid;
  s.certificate = sc.certificate;
  return s;
}

void BM_CoupledRhs(benchmark::State& state) {
  const auto s = setup(state.range(0), 1.0);
  const SimState y0 = initial_state(s);
  const OdeRhs rhs = coupled_rhs(s.system, s.observer, s.control, s.disturbance, y0.points());
  for (auto _ : state) benchmark::DoNotOptimize(rhs(0.5, y0.data()));
}
BENCHMARK(BM_CoupledRhs)->Arg(50)->Arg(100)->Arg(200)->Arg(400);

void BM_Rk4Step(benchmark::State& state) {
  const auto s = setup(state.range(0), 1.0);
  const SimState y0 = initial_state(s);
  const OdeRhs rhs = coupled_rhs(s.system, s.observer, s.control, s.disturbance, y0.points());
  for (auto _ : state) benchmark::DoNotOptimize(rk4_step(y0.data(), 0.0, s.grid.dt, rhs));
}
BENCHMARK(BM_Rk4Step)->Arg(100)->Arg(200);

void BM_SimulateReferenceRun(benchmark::State& state) {
  const auto s = setup(100, 20.0);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(s));
}
BENCHMARK(BM_SimulateReferenceRun)->Unit(benchmark::kMillisecond);

}  // namespace
