#include "doctest.h"

#include "budgetmax/objective.hpp"

using namespace budgetmax;

namespace {

// Per-product deterministic chains from candidate 0; product i's chain
// from node 0 covers `reach` nodes within the horizon.
DiffusionNetwork chain_net(std::int32_t product, std::int32_t reach, std::int32_t nodes) {
  std::vector<Edge> edges;
  for (std::int32_t v = 1; v < reach; ++v)
    edges.push_back({v - 1, v, TransmissionFunction::deterministic(1.0)});
  return DiffusionNetwork(nodes, product, std::move(edges));
}

struct TwoProductFixture {
  DiffusionNetwork net0 = chain_net(0, 2, 6);  // candidate 0 reaches 2 nodes
  DiffusionNetwork net1 = chain_net(1, 3, 6);  // candidate 0 reaches 3 nodes
  SampleBank bank0 = SampleBank::build(net0, 4, 1);
  SampleBank bank1 = SampleBank::build(net1, 4, 2);
  std::vector<std::int32_t> candidates = {0, 1, 2, 3};
  CoverageIndex index0 = CoverageIndex::build(bank0, net0, candidates, 10.0);
  CoverageIndex index1 = CoverageIndex::build(bank1, net1, candidates, 10.0);
};

}  // namespace

TEST_CASE("weighted overall influence") {
  TwoProductFixture fx;
  const std::vector<GroundElement> assignment = {{0, 0}, {1, 0}};

  SUBCASE("unit weights add the per-product coverages") {
    Objective objective({&fx.index0, &fx.index1});
    auto state = objective.make_state();
    CHECK(state.value() == 0.0);  // empty selection
    for (GroundElement z : assignment) state.commit(z);
    CHECK(state.value() == 5.0);
    CHECK(objective.value_of(assignment) == 5.0);
  }
  SUBCASE("weights scale linearly") {
    Objective objective({&fx.index0, &fx.index1}, {2.0, 1.0});
    CHECK(objective.value_of(assignment) == 7.0);
  }
  SUBCASE("weights must be positive and one per product") {
    CHECK_THROWS_AS(Objective({&fx.index0, &fx.index1}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Objective({&fx.index0, &fx.index1}, {1.0, 0.0}), std::invalid_argument);
  }
}

TEST_CASE("gain semantics") {
  TwoProductFixture fx;
  Objective objective({&fx.index0, &fx.index1});
  auto state = objective.make_state();

  CHECK(state.gain({0, 0}) == 2.0);  // empty state, deterministic chain
  state.commit({0, 0});
  // candidate 1 for product 0 reaches only node 1, already covered
  CHECK(state.gain({0, 1}) == 0.0);
  // selecting an element twice gains nothing by convention
  CHECK(state.gain({0, 0}) == 0.0);
  CHECK(state.evaluations() == 3);
}

TEST_CASE("cross-product independence of gains") {
  TwoProductFixture fx;
  Objective objective({&fx.index0, &fx.index1});

  Engine gen = make_engine(55);
  for (int trial = 0; trial < 50; ++trial) {
    auto state = objective.make_state();
    // arbitrary selections for product 0 only
    for (std::int32_t u = 0; u < 4; ++u)
      if (uniform_unit(gen) < 0.5) state.commit({0, u});
    const auto j = static_cast<std::int32_t>(uniform_below(gen, 4));
    auto fresh = objective.make_state();
    CHECK(state.gain({1, j}) == fresh.gain({1, j}));
  }
}

TEST_CASE("gain equals the difference of two full evaluations") {
  TwoProductFixture fx;
  Objective objective({&fx.index0, &fx.index1}, {1.5, 1.0});
  Engine gen = make_engine(66);
  for (int trial = 0; trial < 60; ++trial) {
    auto state = objective.make_state();
    std::vector<GroundElement> base;
    for (std::int32_t i = 0; i < 2; ++i)
      for (std::int32_t u = 0; u < 4; ++u)
        if (uniform_unit(gen) < 0.35) {
          state.commit({i, u});
          base.push_back({i, u});
        }
    const GroundElement z{static_cast<std::int32_t>(uniform_below(gen, 2)),
                          static_cast<std::int32_t>(uniform_below(gen, 4))};
    if (state.contains(z)) continue;
    std::vector<GroundElement> with = base;
    with.push_back(z);
    CHECK(state.gain(z) == objective.value_of(with) - objective.value_of(base));
  }
}

TEST_CASE("mismatched candidate lists are rejected") {
  TwoProductFixture fx;
  std::vector<std::int32_t> other_candidates = {0, 1};
  const auto index_other =
      CoverageIndex::build(fx.bank1, fx.net1, other_candidates, 10.0);
  CHECK_THROWS_AS(Objective({&fx.index0, &index_other}), std::invalid_argument);
}
