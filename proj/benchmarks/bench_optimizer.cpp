#include <benchmark/benchmark.h>

#include "budgetmax/harness.hpp"
#include "budgetmax/optimizer.hpp"

using namespace budgetmax;

namespace {

const PreparedExperiment& shared_instance() {
  static const PreparedExperiment prepared = [] {
    ExperimentConfig config;
    config.products = 8;
    config.candidates = 64;
    config.power = 9;
    config.samples = 256;
    config.horizon = 5.0;
    config.user_capacity = 2;
    config.product_capacity = 8;
    config.seed = 99;
    return prepare_experiment(config);
  }();
  return prepared;
}

}  // namespace

static void BM_UniformCostGreedy(benchmark::State& state) {
  const auto& prepared = shared_instance();
  const double delta = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) {
    auto report = uniform_cost_greedy(*prepared.objective, *prepared.system, delta);
    benchmark::DoNotOptimize(report.value);
  }
}
BENCHMARK(BM_UniformCostGreedy)->Arg(1)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_LazyGreedy(benchmark::State& state) {
  const auto& prepared = shared_instance();
  for (auto _ : state) {
    auto report = lazy_greedy(*prepared.objective, *prepared.system);
    benchmark::DoNotOptimize(report.value);
  }
}
BENCHMARK(BM_LazyGreedy)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
