// serial reference vs OpenMP kernels; run with HILLTAILS_THREADS unset to use all cores
#include <benchmark/benchmark.h>

#include "hilltails/sampling.hpp"

using namespace hilltails::sampling;

namespace {

EnsembleConfig ensemble(std::size_t count) {
  EnsembleConfig cfg;
  cfg.n = 1024;
  cfg.count = count;
  cfg.seed = 1;
  return cfg;
}

void BM_ensemble_serial(benchmark::State& st) {
  auto cfg = ensemble(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(ground_state_ensemble_serial(cfg));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_ensemble_parallel(benchmark::State& st) {
  auto cfg = ensemble(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(ground_state_ensemble(cfg));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

const std::vector<double> mus{-1.0, 0.0, 1.0, 2.0};

void BM_path_serial(benchmark::State& st) {
  auto count = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(path_integral_density_serial(mus, count, 1024, 2));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_path_parallel(benchmark::State& st) {
  auto count = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(path_integral_density_multi(mus, count, 1024, 2));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

} // namespace

BENCHMARK(BM_ensemble_serial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ensemble_parallel)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_path_serial)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_path_parallel)->Arg(5000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
