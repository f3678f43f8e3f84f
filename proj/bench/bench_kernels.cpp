#include <benchmark/benchmark.h>

#include "hcs/circuit.hpp"
#include "hcs/parallel.hpp"
#include "hcs/weight_exact.hpp"

namespace {

hcs::Exec exec_of(const benchmark::State& state) {
  return state.range(1) ? hcs::Exec::Parallel : hcs::Exec::Serial;
}

void BM_MeasurementLayer(benchmark::State& state) {
  hcs::RegionWeightVector w(static_cast<std::size_t>(state.range(0)));
  const auto exec = exec_of(state);
  for (auto _ : state) {
    w.apply_measurement(0.3, exec);
    w.normalize();
    benchmark::DoNotOptimize(w.masses().data());
  }
}

void BM_UnitaryLayer(benchmark::State& state) {
  hcs::RegionWeightVector w(static_cast<std::size_t>(state.range(0)));
  w.apply_measurement(0.3);
  const auto exec = exec_of(state);
  int parity = 0;
  for (auto _ : state) {
    w.apply_unitary(parity, exec);
    parity ^= 1;
    benchmark::DoNotOptimize(w.masses().data());
  }
}

void BM_SimulateShots(benchmark::State& state) {
  const auto spec = hcs::InitialStateSpec::named("ghz");
  const auto exec = exec_of(state);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto recs = hcs::simulate_shots(spec, static_cast<std::size_t>(state.range(0)), {3, true}, 0.5, ++seed, 2000, exec);
    benchmark::DoNotOptimize(recs.data());
  }
  state.SetItemsProcessed(state.iterations() * 2000);
}

}  // namespace

// Second argument: 0 serial, 1 OpenMP.
BENCHMARK(BM_MeasurementLayer)->ArgsProduct({{16, 18, 20}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UnitaryLayer)->ArgsProduct({{16, 18, 20}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateShots)->ArgsProduct({{12, 32}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
