#include "budgetmax/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "budgetmax/parallel.hpp"
#include "budgetmax/rng.hpp"

namespace budgetmax {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<double> singleton_values(const Objective& objective, Objective::State& empty_state,
                                     const std::vector<ElementId>& elems) {
  std::vector<double> singles(static_cast<std::size_t>(objective.layout().size()), 0.0);
  for (ElementId z : elems)
    singles[static_cast<std::size_t>(z)] = empty_state.gain(objective.layout().element_of(z));
  return singles;
}

/// Feasibility-checked adds over a fixed candidate order; shared by the
/// degree and random baselines.
RunReport scan_in_order(const Objective& objective, const ConstraintSystem& system,
                        std::span<const ElementId> order, std::string name) {
  const auto start = Clock::now();
  RunReport report;
  report.algorithm = std::move(name);
  auto ostate = objective.make_state();
  auto cstate = system.make_state();
  for (ElementId z : order) {
    if (!system.can_add(cstate, z).feasible()) continue;
    system.add(cstate, z);
    const GroundElement e = objective.layout().element_of(z);
    const double g = ostate.gain(e);
    ostate.commit(e);
    report.selections.push_back({e, g, 0.0, 0.0, 0});
    report.solution.push_back(e);
  }
  report.value = ostate.value();
  report.active_knapsacks = system.active_knapsack_count(cstate);
  report.evaluations = ostate.evaluations();
  report.wall_ms = elapsed_ms(start);
  return report;
}

}  // namespace

namespace {

RunReport run_fixed_density(const Objective& objective, const ConstraintSystem& system,
                            const GreedyConfig& config,
                            const std::vector<double>* precomputed_singles,
                            std::uint64_t* extra_evals) {
  if (!(config.delta > 0)) throw std::invalid_argument("delta must be > 0");
  if (!(config.rho >= 0)) throw std::invalid_argument("rho must be >= 0");
  const auto start = Clock::now();
  const GroundLayout layout = objective.layout();
  const std::vector<ElementId> elems = system.ground_elements();

  RunReport report;
  report.algorithm = "greedy_fixed_density";
  report.delta = config.delta;
  report.rho = config.rho;

  auto ostate = objective.make_state();
  auto cstate = system.make_state();

  std::vector<double> singles_storage;
  const std::vector<double>* singles = precomputed_singles;
  if (singles == nullptr) {
    singles_storage = singleton_values(objective, ostate, elems);
    singles = &singles_storage;
  }

  // d over all of Z; d_rho over the density-qualified elements only.
  double d = 0;
  double d_rho = -1;
  for (ElementId z : elems) {
    const double v = (*singles)[static_cast<std::size_t>(z)];
    d = std::max(d, v);
    if (v >= system.cost(z) * config.rho) d_rho = std::max(d_rho, v);
  }
  if (d_rho < 0) {  // no element qualifies for d_rho
    report.value = 0;
    report.evaluations = ostate.evaluations();
    report.wall_ms = elapsed_ms(start);
    return report;
  }

  const double n = static_cast<double>(elems.size());
  const double floor_w = config.delta * d / std::max(n, 1.0);
  report.thresholds.push_back(d_rho);
  while (report.thresholds.back() > floor_w)
    report.thresholds.push_back(report.thresholds.back() / (1.0 + config.delta));
  report.thresholds.push_back(0.0);

  report.selected_per_threshold.assign(report.thresholds.size(), 0);
  for (std::size_t t = 0; t < report.thresholds.size(); ++t) {
    const double w = report.thresholds[t];
    for (ElementId z : elems) {
      if (cstate.selected(z)) continue;
      if (!system.can_add(cstate, z).feasible()) continue;
      const GroundElement e = layout.element_of(z);
      const double g = ostate.gain(e);
      const double density_floor = system.cost(z) * config.rho;
      if (g >= density_floor && g >= w) {
        system.add(cstate, z);
        ostate.commit(e);
        report.solution.push_back(e);
        report.selections.push_back({e, g, w, density_floor, static_cast<std::int32_t>(t)});
        ++report.selected_per_threshold[t];
      }
    }
  }

  report.value = ostate.value();
  report.active_knapsacks = system.active_knapsack_count(cstate);
  report.evaluations = ostate.evaluations();
  if (extra_evals != nullptr) *extra_evals = ostate.evaluations();
  report.wall_ms = elapsed_ms(start);
  return report;
}

}  // namespace

RunReport greedy_fixed_density(const Objective& objective, const ConstraintSystem& system,
                               const GreedyConfig& config,
                               const std::vector<double>* singleton_values) {
  return run_fixed_density(objective, system, config, singleton_values, nullptr);
}

DensityEnumerationResult density_enumeration(const Objective& objective,
                                             const ConstraintSystem& system, double delta,
                                             int workers) {
  if (!(delta > 0)) throw std::invalid_argument("delta must be > 0");
  if (!system.has_knapsack())
    throw std::invalid_argument("density enumeration requires knapsack constraints");
  const auto start = Clock::now();
  const std::vector<ElementId> elems = system.ground_elements();

  DensityEnumerationResult result;

  auto base_state = objective.make_state();
  const std::vector<double> singles = singleton_values(objective, base_state, elems);
  result.total_evaluations = base_state.evaluations();

  double d = 0;
  for (ElementId z : elems) d = std::max(d, singles[static_cast<std::size_t>(z)]);

  const double p = static_cast<double>(system.matroid_count());
  const double k = static_cast<double>(system.knapsack_group_count());
  const double denom = p + 2.0 * k + 1.0;
  const double endpoint = 2.0 * static_cast<double>(elems.size()) * d / denom;

  if (d > 0) {
    // Geometric grid truncated at the endpoint (within rounding slack).
    double rho = 2.0 * d / denom;
    while (rho <= endpoint * (1.0 + 1e-12)) {
      result.rho_grid.push_back(rho);
      rho *= (1.0 + delta);
    }
  } else {
    result.rho_grid.push_back(0.0);  // degenerate objective, single trivial run
  }

  result.per_rho.resize(result.rho_grid.size());
  std::vector<std::uint64_t> run_evals(result.rho_grid.size(), 0);
  parallel_for(result.rho_grid.size(), workers, [&](std::size_t t) {
    GreedyConfig config{delta, result.rho_grid[t]};
    result.per_rho[t] = run_fixed_density(objective, system, config, &singles, &run_evals[t]);
  });
  for (std::uint64_t e : run_evals) result.total_evaluations += e;

  std::size_t best = 0;
  for (std::size_t t = 1; t < result.per_rho.size(); ++t)
    if (result.per_rho[t].value > result.per_rho[best].value) best = t;
  result.best = result.per_rho[best];
  result.best.algorithm = "density_enumeration";
  result.best.evaluations = result.total_evaluations;
  result.best.wall_ms = elapsed_ms(start);
  return result;
}

RunReport uniform_cost_greedy(const Objective& objective, const ConstraintSystem& system,
                              double delta) {
  RunReport report = greedy_fixed_density(objective, system, {delta, 0.0});
  report.algorithm = "uniform_cost_greedy";
  return report;
}

RunReport lazy_greedy(const Objective& objective, const ConstraintSystem& system) {
  const auto start = Clock::now();
  const GroundLayout layout = objective.layout();
  RunReport report;
  report.algorithm = "lazy_greedy";

  auto ostate = objective.make_state();
  auto cstate = system.make_state();

  struct Entry {
    double gain;
    ElementId id;
    std::int32_t round;  // selection count when the gain was computed
  };
  // Max-heap on gain; equal gains surface the lower element id first.
  auto cmp = [](const Entry& a, const Entry& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.id > b.id;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> queue(cmp);
  for (ElementId z : system.ground_elements())
    queue.push({ostate.gain(layout.element_of(z)), z, 0});

  std::int32_t round = 0;
  while (!queue.empty()) {
    Entry top = queue.top();
    queue.pop();
    // Infeasible now means infeasible forever: selections only grow.
    if (!system.can_add(cstate, top.id).feasible()) continue;
    if (top.round != round) {
      top.gain = ostate.gain(layout.element_of(top.id));
      top.round = round;
      queue.push(top);
      continue;
    }
    if (!(top.gain > 0)) break;  // stale gains are upper bounds, so all remaining gains are <= 0
    const GroundElement e = layout.element_of(top.id);
    system.add(cstate, top.id);
    ostate.commit(e);
    report.solution.push_back(e);
    report.selections.push_back({e, top.gain, 0.0, 0.0, round});
    ++round;
  }

  report.value = ostate.value();
  report.active_knapsacks = system.active_knapsack_count(cstate);
  report.evaluations = ostate.evaluations();
  report.wall_ms = elapsed_ms(start);
  return report;
}

namespace {

std::vector<ElementId> degree_order(std::span<const DiffusionNetwork* const> networks,
                                    const Objective& objective, const ConstraintSystem& system,
                                    std::span<const ElementId> elems) {
  const GroundLayout layout = objective.layout();
  if (static_cast<std::int32_t>(networks.size()) != layout.products)
    throw std::invalid_argument("one network per product required");
  std::vector<std::pair<double, ElementId>> keyed;
  keyed.reserve(elems.size());
  for (ElementId z : elems) {
    const GroundElement e = layout.element_of(z);
    const std::int32_t node = objective.index(e.product).candidate_id(e.user);
    const double degree = networks[static_cast<std::size_t>(e.product)]->out_degree(node);
    const double key = system.has_knapsack() ? degree / system.cost(z) : degree;
    keyed.emplace_back(key, z);
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<ElementId> order;
  order.reserve(keyed.size());
  for (const auto& [key, z] : keyed) order.push_back(z);
  return order;
}

}  // namespace

RunReport greedy_degree(std::span<const DiffusionNetwork* const> networks,
                        const Objective& objective, const ConstraintSystem& system) {
  const std::vector<ElementId> elems = system.ground_elements();
  const std::vector<ElementId> order = degree_order(networks, objective, system, elems);
  return scan_in_order(objective, system, order, "greedy_degree");
}

RunReport greedy_degree_local(std::span<const DiffusionNetwork* const> networks,
                              const Objective& objective, const ConstraintSystem& system,
                              const std::vector<std::vector<std::int32_t>>& user_groups) {
  const GroundLayout layout = objective.layout();
  // Per-group cost-effectiveness order, then a round-robin over groups.
  std::vector<std::vector<ElementId>> per_group;
  per_group.reserve(user_groups.size());
  for (const auto& users : user_groups) {
    std::vector<ElementId> members;
    for (std::int32_t user : users) {
      if (user < 0 || user >= layout.users) throw std::invalid_argument("user slot out of range");
      for (std::int32_t i = 0; i < layout.products; ++i) {
        const ElementId z = layout.id_of({i, user});
        if (system.in_ground(z)) members.push_back(z);
      }
    }
    per_group.push_back(degree_order(networks, objective, system, members));
  }
  std::vector<ElementId> order;
  std::vector<std::size_t> cursor(per_group.size(), 0);
  bool any = true;
  while (any) {
    any = false;
    for (std::size_t g = 0; g < per_group.size(); ++g) {
      if (cursor[g] < per_group[g].size()) {
        order.push_back(per_group[g][cursor[g]++]);
        any = true;
      }
    }
  }
  return scan_in_order(objective, system, order, "greedy_degree_local");
}

RunReport random_allocation(const Objective& objective, const ConstraintSystem& system,
                            std::uint64_t seed) {
  std::vector<ElementId> order = system.ground_elements();
  Engine rng = make_engine(seed);
  shuffle_in_place(order, rng);
  return scan_in_order(objective, system, order, "random_allocation");
}

std::vector<std::int32_t> blocking_partition_sizes(const ConstraintSystem& system,
                                                   std::span<const GroundElement> greedy_order,
                                                   std::span<const GroundElement> optimal) {
  const GroundLayout layout = system.layout();
  std::vector<std::int32_t> sizes(greedy_order.size(), 0);
  std::vector<ElementId> remaining;
  for (GroundElement o : optimal) {
    const ElementId z = layout.id_of(o);
    if (std::find(greedy_order.begin(), greedy_order.end(), o) == greedy_order.end())
      remaining.push_back(z);
  }
  auto state = system.make_state();
  std::vector<std::uint8_t> blocked(remaining.size(), 0);
  for (std::size_t t = 0; t < greedy_order.size(); ++t) {
    system.add(state, layout.id_of(greedy_order[t]));
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (blocked[i]) continue;
      if (!system.peek_feasible(state, remaining[i])) {
        blocked[i] = 1;
        ++sizes[t];
      }
    }
  }
  return sizes;
}

}  // namespace budgetmax
