#include <benchmark/benchmark.h>

#include "budgetmax/coverage.hpp"
#include "budgetmax/netgen.hpp"

using namespace budgetmax;

namespace {

struct IndexFixture {
  DiffusionNetwork net;
  SampleBank bank;
  std::vector<std::int32_t> candidates;

  explicit IndexFixture(std::int32_t power, std::int32_t samples)
      : net(make_kronecker_network(kronecker_spec(KroneckerType::kCorePeriphery, power), 0, 7)),
        bank(SampleBank::build(net, samples, 11)) {
    Engine rng = make_engine(3);
    candidates = sample_without_replacement(net.node_count(), 64, rng);
  }
};

}  // namespace

static void BM_CoverageIndexBuild(benchmark::State& state) {
  IndexFixture fx(static_cast<std::int32_t>(state.range(0)), 256);
  for (auto _ : state) {
    auto index = CoverageIndex::build(fx.bank, fx.net, fx.candidates, 5.0);
    benchmark::DoNotOptimize(index);
  }
}
BENCHMARK(BM_CoverageIndexBuild)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_MarginalGain(benchmark::State& state) {
  IndexFixture fx(10, static_cast<std::int32_t>(state.range(0)));
  const auto index = CoverageIndex::build(fx.bank, fx.net, fx.candidates, 5.0);
  CoverageState cov(index);
  cov.commit(0);
  cov.commit(1);
  std::int32_t slot = 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cov.marginal_covered(slot));
    slot = 2 + (slot + 1) % 62;
  }
}
BENCHMARK(BM_MarginalGain)->Arg(256)->Arg(2048);
