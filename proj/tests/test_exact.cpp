#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "budgetmax/exact.hpp"
#include "budgetmax/optimizer.hpp"

using namespace budgetmax;

TEST_CASE("deterministic influence counts nodes within the horizon") {
  const auto det = [](double d) { return TransmissionFunction::deterministic(d); };
  const DiffusionNetwork net(3, 0, {{0, 1, det(1)}, {1, 2, det(1)}});
  const std::int32_t a[] = {0};
  const std::int32_t b[] = {1};
  CHECK(exact_influence_deterministic(net, a, 2.0) == 3.0);
  CHECK(exact_influence_deterministic(net, a, 1.5) == 2.0);
  CHECK(exact_influence_deterministic(net, b, 2.0) == 2.0);

  const DiffusionNetwork mixed(2, 0, {{0, 1, TransmissionFunction::exponential(1.0)}});
  CHECK_THROWS_AS(exact_influence_deterministic(mixed, a, 1.0), std::invalid_argument);
}

TEST_CASE("exponential path closed forms") {
  SUBCASE("single edge at rate 1, horizon 1") {
    const double rates[] = {1.0};
    CHECK(exact_influence_exponential_path(rates, 1.0) ==
          doctest::Approx(2.0 - std::exp(-1.0)).epsilon(1e-12));
  }
  SUBCASE("two equal edges use the Erlang form") {
    // 1 + (1 - e^-1) + (1 - e^-1 (1 + 1))
    const double rates[] = {1.0, 1.0};
    const double expected = 1.0 + (1.0 - std::exp(-1.0)) + (1.0 - 2.0 * std::exp(-1.0));
    CHECK(exact_influence_exponential_path(rates, 1.0) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("zero horizon leaves only the source") {
    const double rates[] = {1.0, 2.0};
    CHECK(exact_influence_exponential_path(rates, 0.0) == 1.0);
  }
  SUBCASE("mixed repeated rates are rejected") {
    const double rates[] = {1.0, 1.0, 2.0};
    CHECK_THROWS_AS(exact_influence_exponential_path(rates, 1.0), std::invalid_argument);
  }
}

TEST_CASE("hypoexponential cdf agrees with a Monte-Carlo quadrature oracle") {
  const std::vector<std::vector<double>> cases = {{1.0, 2.0}, {0.5, 1.5, 3.0}};
  Engine gen = make_engine(4141);
  for (const auto& rates : cases) {
    for (double t : {0.5, 1.0, 2.0}) {
      const int n = 400'000;
      int hits = 0;
      for (int i = 0; i < n; ++i) {
        double sum = 0;
        for (double r : rates) sum += -std::log1p(-uniform_unit(gen)) / r;
        hits += sum <= t ? 1 : 0;
      }
      const double mc = static_cast<double>(hits) / n;
      const double sd = std::sqrt(mc * (1.0 - mc) / n) + 1e-9;
      CHECK(std::abs(hypoexponential_cdf(rates, t) - mc) < 5.0 * sd);
    }
  }
}

TEST_CASE("erlang cdf is the equal-rate limit of the hypoexponential") {
  const std::vector<double> nearly_equal = {1.0, 1.0 + 1e-6, 1.0 + 2e-6};
  CHECK(hypoexponential_cdf(nearly_equal, 1.5) == doctest::Approx(erlang_cdf(3, 1.0, 1.5)).epsilon(1e-4));
}

TEST_CASE("monte-carlo estimates converge to the path oracle") {
  const DiffusionNetwork net(3, 0,
                             {{0, 1, TransmissionFunction::exponential(1.0)},
                              {1, 2, TransmissionFunction::exponential(1.0)}});
  const double rates[] = {1.0, 1.0};
  const double exact = exact_influence_exponential_path(rates, 1.0);
  const std::vector<std::int32_t> candidates = {0};
  int close = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto bank = SampleBank::build(net, 2048, derive_seed(900, seed));
    const auto index = CoverageIndex::build(bank, net, candidates, 1.0);
    const std::int32_t r[] = {0};
    const double estimate = index.influence_of_slots(std::span<const std::int32_t>(r, 1));
    // |estimate - exact| <= 3 sqrt(Vhat / r) with the empirical variance
    double mean = 0, m2 = 0;
    for (std::int32_t s = 0; s < 2048; ++s) {
      const double v = static_cast<double>(index.reach_set(s, 0).size());
      const double delta = v - mean;
      mean += delta / static_cast<double>(s + 1);
      m2 += delta * (v - mean);
    }
    const double var = m2 / 2047.0;
    if (std::abs(estimate - exact) <= 3.0 * std::sqrt(var / 2048.0)) ++close;
    CHECK(std::abs(estimate - exact) < 0.1);
  }
  CHECK(close >= 19);  // 3-sigma misses are rare
}

TEST_CASE("brute force optimum on a modular instance is the top-capacity sum") {
  // disjoint chains of sizes 5,4,3,2 with product cap 2: OPT = 9
  std::vector<Edge> edges;
  std::int32_t base = 0;
  std::vector<std::int32_t> roots;
  for (std::int32_t len : {5, 4, 3, 2}) {
    roots.push_back(base);
    for (std::int32_t v = 1; v < len; ++v)
      edges.push_back({base + v - 1, base + v, TransmissionFunction::deterministic(1.0)});
    base += len;
  }
  const DiffusionNetwork net(base, 0, std::move(edges));
  const auto bank = SampleBank::build(net, 2, 1);
  const auto index = CoverageIndex::build(bank, net, roots, 100.0);
  Objective objective({&index});
  const GroundLayout layout{1, 4};
  std::vector<std::shared_ptr<const Matroid>> matroids;
  matroids.push_back(std::make_shared<PartitionMatroid>(
      PartitionMatroid::per_product(1, 4, {2})));
  const ConstraintSystem system(layout, std::move(matroids));
  const auto result = brute_force_optimum(objective, system);
  CHECK(result.value == 9.0);
}

TEST_CASE("brute force value is invariant to enumeration order") {
  ExactInstanceSpec spec;
  spec.products = 2;
  spec.users = 4;
  spec.node_count = 8;
  spec.samples = 32;
  spec.seed = 7;
  spec.user_cap = 2;
  spec.product_cap = 2;
  const auto inst = make_exact_instance(spec);
  const auto forward = brute_force_optimum(*inst.objective, *inst.system);
  auto order = inst.system->ground_elements();
  std::reverse(order.begin(), order.end());
  const auto backward = brute_force_optimum(*inst.objective, *inst.system, order);
  CHECK(forward.value == backward.value);
}

TEST_CASE("optimum dominates every heuristic") {
  ExactInstanceSpec spec;
  spec.products = 2;
  spec.users = 4;
  spec.node_count = 9;
  spec.samples = 48;
  spec.seed = 13;
  spec.user_cap = 1;
  spec.product_cap = 2;
  const auto inst = make_exact_instance(spec);
  const auto brute = brute_force_optimum(*inst.objective, *inst.system);
  const auto nets = inst.network_ptrs();
  CHECK(brute.value >= uniform_cost_greedy(*inst.objective, *inst.system, 0.05).value);
  CHECK(brute.value >= lazy_greedy(*inst.objective, *inst.system).value);
  CHECK(brute.value >= greedy_degree(nets, *inst.objective, *inst.system).value);
  CHECK(brute.value >= random_allocation(*inst.objective, *inst.system, 4).value);
}

TEST_CASE("instance builder enforces the enumeration bound") {
  ExactInstanceSpec spec;
  spec.products = 5;
  spec.users = 5;
  CHECK_THROWS_AS(make_exact_instance(spec), std::invalid_argument);
}
