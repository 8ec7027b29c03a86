#include <benchmark/benchmark.h>

#include "smbp/density.hpp"
#include "smbp/experiments.hpp"
#include "smbp/fpca.hpp"
#include "smbp/linalg.hpp"
#include "smbp/processes.hpp"

using namespace smbp;

static void BM_Jacobi(benchmark::State& state) {
  const std::size_t p = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const FunctionalSample s = sample_wiener(500, Grid::equispaced(0.0, 1.0, p), 50, rng);
  const Matrix cov = empirical_covariance(s);
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_eigen(cov));
}
BENCHMARK(BM_Jacobi)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_Fpca(benchmark::State& state) {
  Rng rng(2);
  const FunctionalSample s =
      sample_wiener(static_cast<std::size_t>(state.range(0)), Grid::equispaced(0.0, 1.0, 100), 50, rng);
  for (auto _ : state) benchmark::DoNotOptimize(fpca(s));
}
BENCHMARK(BM_Fpca)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_KdeEvaluate(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const std::size_t d = static_cast<std::size_t>(state.range(1));
  Rng rng(3);
  ScoreMatrix sc(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) sc(i, j) = rng.normal();
  }
  const DensityEstimator est(sc, 0.3, KernelSpec(KernelFamily::Gaussian, d));
  std::vector<double> point(d, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(est.evaluate(point));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * n));
}
BENCHMARK(BM_KdeEvaluate)->Args({200, 1})->Args({2000, 1})->Args({2000, 3})->Args({2000, 6});

static void BM_Replication(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.seed = 4;
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::size_t rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_replication(cfg, n, rep++));
}
BENCHMARK(BM_Replication)->Arg(50)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
