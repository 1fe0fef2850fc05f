#include <benchmark/benchmark.h>

#include "waveuio/certificates.hpp"
#include "waveuio/scenarios.hpp"

namespace {

using namespace waveuio;

void BM_CheckHinfCertificate(benchmark::State& state) {
  const SystemSpec sys = reference_system();
  const ObserverSpec obs = reference_observer();
  const Certificate cert = reference_certificate();
  for (auto _ : state) benchmark::DoNotOptimize(check_theorem2(sys, obs, cert));
}
BENCHMARK(BM_CheckHinfCertificate);

// Full grid scan; the argument is the number of points per axis.
void BM_SearchCertificate(benchmark::State& state) {
  const SystemSpec sys = reference_system();
  const ObserverSpec obs = reference_observer();
  const auto points = static_cast<std::size_t>(state.range(0));
  SearchSpec spec;
  spec.p = {0.5, 5.0, points};
  spec.g = {0.1, 0.99, points};
  spec.delta = {0.01, 0.9, points};
  spec.mu = SearchAxis{0.1, 1.0, points};
  for (auto _ : state) benchmark::DoNotOptimize(search_certificate(sys, obs, spec));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(points * points * points * points));
}
BENCHMARK(BM_SearchCertificate)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
