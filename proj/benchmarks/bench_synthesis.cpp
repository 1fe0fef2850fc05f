#include <benchmark/benchmark.h>

#include "waveuio/scenarios.hpp"
#include "waveuio/synthesis.hpp"

namespace {

using namespace waveuio;

void BM_SolveScalarM(benchmark::State& state) {
  const SystemSpec sys = reference_system();
  for (auto _ : state) benchmark::DoNotOptimize(solve_scalar_m(sys, 0.95));
}
BENCHMARK(BM_SolveScalarM);

void BM_VerifyEquations(benchmark::State& state) {
  const SystemSpec sys = reference_system();
  const ObserverSpec obs = reference_observer();
  for (auto _ : state) benchmark::DoNotOptimize(verify_equations(sys, obs));
}
BENCHMARK(BM_VerifyEquations);

}  // namespace
