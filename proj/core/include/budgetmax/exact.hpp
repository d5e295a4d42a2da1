#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "budgetmax/constraints.hpp"
#include "budgetmax/coverage.hpp"
#include "budgetmax/diffusion.hpp"
#include "budgetmax/objective.hpp"

namespace budgetmax {

/// Influence under degenerate delays: the count of nodes whose earliest
/// arrival from the sources is within the horizon. Requires every edge to
/// be deterministic.
double exact_influence_deterministic(const DiffusionNetwork& net,
                                     std::span<const std::int32_t> sources, double horizon);

/// P(Erlang(stages, rate) <= t).
double erlang_cdf(std::int32_t stages, double rate, double t);

/// CDF of a sum of independent exponentials with pairwise-distinct rates,
/// by partial fractions.
double hypoexponential_cdf(std::span<const double> rates, double t);

/// Influence of the head of a directed exponential path within `horizon`:
/// 1 + sum over prefixes m of P(S_m <= horizon). Uses the Erlang form when
/// all rates coincide within 1e-9 and partial fractions when they are
/// pairwise distinct; mixed repeated rates are rejected.
double exact_influence_exponential_path(std::span<const double> rates, double horizon);

struct BruteForceResult {
  double value = 0;
  std::vector<GroundElement> solution;
  std::uint64_t nodes_visited = 0;  // feasible sets reached before pruning
};

/// Exhaustive optimum over all feasible sets, evaluating the same
/// estimator the greedy uses so bounds compare like with like. Bounded to
/// 24 in-ground elements; prunes by heredity and by the singleton-sum
/// upper bound (gains never exceed singleton values).
BruteForceResult brute_force_optimum(const Objective& objective, const ConstraintSystem& system);
/// Enumeration-order override, for order-invariance checks.
BruteForceResult brute_force_optimum(const Objective& objective, const ConstraintSystem& system,
                                     std::span<const ElementId> order);

/// Self-contained small instance: networks, frozen samples, indices,
/// objective and constraints, sized for exhaustive verification.
struct ExactInstance {
  std::vector<DiffusionNetwork> networks;
  std::vector<SampleBank> banks;
  std::vector<CoverageIndex> indices;
  std::vector<std::vector<double>> raw_costs;  // empty in uniform mode
  std::vector<double> budgets;                 // empty in uniform mode
  std::unique_ptr<Objective> objective;
  std::unique_ptr<ConstraintSystem> system;

  std::vector<const DiffusionNetwork*> network_ptrs() const;
};

struct ExactInstanceSpec {
  std::int32_t products = 2;
  std::int32_t users = 4;        // candidate count; candidates are nodes [0, users)
  std::int32_t node_count = 8;   // >= users
  double edge_probability = 0.35;
  double horizon = 2.0;
  std::int32_t samples = 128;
  std::uint64_t seed = 1;
  bool budget_mode = false;
  std::int32_t user_cap = 1;     // u_j
  std::int32_t product_cap = 2;  // b_i, uniform mode
  double cost_min = 0.25;        // raw costs, budget mode (budgets fixed at 1)
  double cost_max = 1.0;
};

/// Random Erdos-Renyi exponential-delay instance, deterministic in the
/// seed. Enforces the 24-element enumeration bound.
ExactInstance make_exact_instance(const ExactInstanceSpec& spec);

}  // namespace budgetmax
