#include "budgetmax/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "budgetmax/rng.hpp"

namespace budgetmax {

namespace {

constexpr double kRateCoincidence = 1e-9;

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

double exact_influence_deterministic(const DiffusionNetwork& net,
                                     std::span<const std::int32_t> sources, double horizon) {
  std::vector<double> delays;
  delays.reserve(static_cast<std::size_t>(net.edge_count()));
  for (const Edge& e : net.edges()) {
    require(e.delay.family() == DelayFamily::kDeterministic,
            "deterministic oracle requires deterministic edges");
    delays.push_back(e.delay.delay());
  }
  std::vector<double> times;
  earliest_arrival(net, delays, sources, horizon, times);
  std::int64_t infected = 0;
  for (double t : times) infected += t <= horizon ? 1 : 0;
  return static_cast<double>(infected);
}

double erlang_cdf(std::int32_t stages, double rate, double t) {
  require(stages >= 1, "erlang needs at least one stage");
  require(rate > 0, "erlang rate must be positive");
  if (t <= 0) return 0.0;
  // 1 - e^{-rt} * sum_{n<stages} (rt)^n / n!
  double term = 1.0;
  double sum = 1.0;
  for (std::int32_t n = 1; n < stages; ++n) {
    term *= rate * t / static_cast<double>(n);
    sum += term;
  }
  return 1.0 - std::exp(-rate * t) * sum;
}

double hypoexponential_cdf(std::span<const double> rates, double t) {
  require(!rates.empty(), "at least one rate required");
  for (double r : rates) require(r > 0, "rates must be positive");
  if (t <= 0) return 0.0;
  if (rates.size() == 1) return 1.0 - std::exp(-rates[0] * t);
  double cdf = 1.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    double weight = 1.0;
    for (std::size_t j = 0; j < rates.size(); ++j) {
      if (j == i) continue;
      const double diff = rates[j] - rates[i];
      require(std::abs(diff) > kRateCoincidence, "rates must be pairwise distinct");
      weight *= rates[j] / diff;
    }
    cdf -= weight * std::exp(-rates[i] * t);
  }
  return cdf;
}

double exact_influence_exponential_path(std::span<const double> rates, double horizon) {
  require(horizon >= 0, "horizon must be >= 0");
  for (double r : rates) require(r > 0, "rates must be positive");
  if (rates.empty() || horizon == 0) return 1.0;

  bool all_equal = true;
  bool all_distinct = true;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    for (std::size_t j = i + 1; j < rates.size(); ++j) {
      const double diff = std::abs(rates[i] - rates[j]);
      if (diff > kRateCoincidence) all_equal = false;
      if (diff <= kRateCoincidence) all_distinct = false;
    }
  }
  require(all_equal || all_distinct,
          "path rates must be either all coincident or pairwise distinct");

  double influence = 1.0;
  for (std::size_t m = 1; m <= rates.size(); ++m) {
    if (all_equal)
      influence += erlang_cdf(static_cast<std::int32_t>(m), rates[0], horizon);
    else
      influence += hypoexponential_cdf(rates.subspan(0, m), horizon);
  }
  return influence;
}

namespace {

struct BruteForceSearch {
  const Objective& objective;
  const ConstraintSystem& system;
  std::vector<ElementId> elems;
  std::vector<double> suffix_single_sum;
  BruteForceResult result;

  void run() {
    // Upper bound by submodularity: gain(z | S) <= gain(z | empty).
    auto empty = objective.make_state();
    std::vector<double> singles(elems.size(), 0.0);
    for (std::size_t i = 0; i < elems.size(); ++i)
      singles[i] = empty.gain(objective.layout().element_of(elems[i]));
    suffix_single_sum.assign(elems.size() + 1, 0.0);
    for (std::size_t i = elems.size(); i-- > 0;)
      suffix_single_sum[i] = suffix_single_sum[i + 1] + singles[i];

    result.value = 0;
    auto cstate = system.make_state();
    auto ostate = objective.make_state();
    descend(0, cstate, ostate, 0.0);
  }

  void descend(std::size_t idx, const ConstraintSystem::State& cstate,
               const Objective::State& ostate, double value) {
    ++result.nodes_visited;
    if (value > result.value || result.nodes_visited == 1) {
      result.value = value;
      result.solution = ostate.selected();
    }
    if (value + suffix_single_sum[idx] <= result.value) return;
    for (std::size_t i = idx; i < elems.size(); ++i) {
      if (value + suffix_single_sum[i] <= result.value) return;
      if (!system.peek_feasible(cstate, elems[i])) continue;
      ConstraintSystem::State next_c = cstate;
      system.add(next_c, elems[i]);
      Objective::State next_o = ostate;
      const GroundElement e = objective.layout().element_of(elems[i]);
      const double g = next_o.gain(e);
      next_o.commit(e);
      descend(i + 1, next_c, next_o, value + g);
    }
  }
};

}  // namespace

BruteForceResult brute_force_optimum(const Objective& objective, const ConstraintSystem& system,
                                     std::span<const ElementId> order) {
  if (order.size() > 24)
    throw std::invalid_argument("brute force is bounded to 24 ground elements");
  for (ElementId z : order)
    if (!system.in_ground(z)) throw std::invalid_argument("order contains dropped elements");
  BruteForceSearch search{objective, system, {order.begin(), order.end()}, {}, {}};
  search.run();
  return std::move(search.result);
}

BruteForceResult brute_force_optimum(const Objective& objective, const ConstraintSystem& system) {
  const std::vector<ElementId> elems = system.ground_elements();
  return brute_force_optimum(objective, system, elems);
}

std::vector<const DiffusionNetwork*> ExactInstance::network_ptrs() const {
  std::vector<const DiffusionNetwork*> out;
  out.reserve(networks.size());
  for (const auto& net : networks) out.push_back(&net);
  return out;
}

ExactInstance make_exact_instance(const ExactInstanceSpec& spec) {
  require(spec.products >= 1 && spec.users >= 1, "instance needs products and users");
  require(spec.node_count >= spec.users, "node count must cover the candidate range");
  require(spec.products * spec.users <= 24, "instance exceeds the enumeration bound");
  ExactInstance instance;
  instance.networks.reserve(static_cast<std::size_t>(spec.products));
  for (std::int32_t i = 0; i < spec.products; ++i) {
    Engine rng = make_engine(derive_seed(spec.seed, 100 + static_cast<std::uint64_t>(i)));
    std::vector<Edge> edges;
    for (std::int32_t u = 0; u < spec.node_count; ++u) {
      for (std::int32_t v = 0; v < spec.node_count; ++v) {
        if (u == v) continue;
        if (uniform_unit(rng) < spec.edge_probability)
          edges.push_back({u, v, TransmissionFunction::exponential(uniform_range(rng, 0.5, 2.0))});
      }
    }
    instance.networks.emplace_back(spec.node_count, i, std::move(edges));
  }

  std::vector<std::int32_t> candidates(static_cast<std::size_t>(spec.users));
  std::iota(candidates.begin(), candidates.end(), 0);
  for (std::int32_t i = 0; i < spec.products; ++i) {
    instance.banks.push_back(SampleBank::build(instance.networks[static_cast<std::size_t>(i)],
                                               spec.samples,
                                               derive_seed(spec.seed, 200 + static_cast<std::uint64_t>(i))));
    instance.indices.push_back(CoverageIndex::build(instance.banks.back(),
                                                    instance.networks[static_cast<std::size_t>(i)],
                                                    candidates, spec.horizon));
  }

  std::vector<const CoverageIndex*> index_ptrs;
  for (const auto& index : instance.indices) index_ptrs.push_back(&index);
  instance.objective = std::make_unique<Objective>(std::move(index_ptrs));

  const GroundLayout layout{spec.products, spec.users};
  std::vector<std::shared_ptr<const Matroid>> matroids;
  matroids.push_back(std::make_shared<PartitionMatroid>(PartitionMatroid::per_user(
      spec.products, spec.users,
      std::vector<std::int32_t>(static_cast<std::size_t>(spec.users), spec.user_cap))));
  std::optional<GroupKnapsack> knapsack;
  if (spec.budget_mode) {
    Engine rng = make_engine(derive_seed(spec.seed, 300));
    instance.raw_costs.assign(static_cast<std::size_t>(spec.products), {});
    for (auto& row : instance.raw_costs) {
      row.resize(static_cast<std::size_t>(spec.users));
      for (double& c : row) c = uniform_range(rng, spec.cost_min, spec.cost_max);
    }
    instance.budgets.assign(static_cast<std::size_t>(spec.products), 1.0);
    knapsack = normalize_costs(instance.raw_costs, instance.budgets);
  } else {
    matroids.push_back(std::make_shared<PartitionMatroid>(PartitionMatroid::per_product(
        spec.products, spec.users,
        std::vector<std::int32_t>(static_cast<std::size_t>(spec.products), spec.product_cap))));
  }
  instance.system =
      std::make_unique<ConstraintSystem>(layout, std::move(matroids), std::move(knapsack));
  return instance;
}

}  // namespace budgetmax
