#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "budgetmax/constraints.hpp"
#include "budgetmax/diffusion.hpp"
#include "budgetmax/objective.hpp"

namespace budgetmax {

struct GreedyConfig {
  double delta = 0.1;  // threshold decay, > 0
  double rho = 0.0;    // density floor, >= 0
};

struct SelectionRecord {
  GroundElement element;
  double gain = 0;             // marginal gain at selection time
  double threshold = 0;        // w_t in force when selected
  double density_floor = 0;    // c(z) * rho
  std::int32_t threshold_index = 0;
};

struct RunReport {
  std::string algorithm;
  double delta = 0;
  double rho = 0;
  std::vector<GroundElement> solution;  // selection order
  double value = 0;
  std::vector<double> thresholds;           // w_0 .. w_{L+1}
  std::vector<std::int32_t> selected_per_threshold;
  std::vector<SelectionRecord> selections;
  std::int32_t active_knapsacks = 0;  // k_a
  std::uint64_t evaluations = 0;
  double wall_ms = 0;
  std::vector<std::int32_t> blocking_sizes;  // optional C_t trace, filled post hoc
};

/// Adaptive threshold greedy for a fixed density floor. Thresholds decay
/// geometrically from the best qualifying singleton value down to
/// delta*d/N and finish at exactly zero; each threshold makes one
/// deterministic ascending-id pass, adding any unselected feasible element
/// whose current marginal gain clears both the density floor and the
/// threshold. Gains are evaluated against the growing solution within the
/// pass. Optional precomputed singleton values (indexed by element id)
/// avoid re-evaluating them across density runs.
RunReport greedy_fixed_density(const Objective& objective, const ConstraintSystem& system,
                               const GreedyConfig& config,
                               const std::vector<double>* singleton_values = nullptr);

struct DensityEnumerationResult {
  RunReport best;  // argmax over the grid; evaluations = total across runs
  std::vector<double> rho_grid;
  std::vector<RunReport> per_rho;
  std::uint64_t total_evaluations = 0;
};

/// Density threshold enumeration: runs the fixed-density greedy for every
/// rho on the geometric grid {2d/(P+2k+1) * (1+delta)^t} truncated at
/// 2|Z|d/(P+2k+1), and keeps the best run. Requires a knapsack. Grid runs
/// may execute in parallel; results do not depend on worker count.
DensityEnumerationResult density_enumeration(const Objective& objective,
                                             const ConstraintSystem& system, double delta,
                                             int workers = 1);

/// Uniform-cost entry point: fixed-density greedy with rho = 0.
RunReport uniform_cost_greedy(const Objective& objective, const ConstraintSystem& system,
                              double delta);

/// Classic greedy with a stale-gain priority queue (CELF). Selects the
/// feasible element of maximum marginal gain each round until no feasible
/// element has positive gain. Ties break toward the lower element id.
RunReport lazy_greedy(const Objective& objective, const ConstraintSystem& system);

/// Degree heuristic: all (product, user) pairs sorted by the candidate's
/// out-degree in that product's network (by degree-cost ratio when the
/// system carries a knapsack), then feasibility-checked adds in order.
RunReport greedy_degree(std::span<const DiffusionNetwork* const> networks,
                        const Objective& objective, const ConstraintSystem& system);

/// Group-local variant: per-group degree-cost-ratio ordering with
/// round-robin over the groups. `user_groups` lists candidate slots.
RunReport greedy_degree_local(std::span<const DiffusionNetwork* const> networks,
                              const Objective& objective, const ConstraintSystem& system,
                              const std::vector<std::vector<std::int32_t>>& user_groups);

/// Uniformly random permutation of the ground set, feasibility-checked adds.
RunReport random_allocation(const Objective& objective, const ConstraintSystem& system,
                            std::uint64_t seed);

/// Blocking partition of an optimal solution against a greedy selection
/// order: C_t holds the elements of optimal \ greedy that are feasible
/// together with the first t-1 selections but not with the first t.
/// Returns |C_1| .. |C_|G||.
std::vector<std::int32_t> blocking_partition_sizes(const ConstraintSystem& system,
                                                   std::span<const GroundElement> greedy_order,
                                                   std::span<const GroundElement> optimal);

}  // namespace budgetmax
