#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "budgetmax/objective.hpp"

namespace budgetmax {

/// Slack applied to the unit budget test c(S) + c(z) <= 1, so that cost
/// sums that should hit the budget exactly are not blocked by rounding.
/// Every feasibility path (greedy, enumeration, slow checker) uses it.
inline constexpr double kBudgetSlack = 1e-9;

/// Capacity-counting matroid over element ids [0, ground_size). Each
/// element belongs to one or more capacity groups; a set is independent
/// when no group exceeds its capacity. Covers partition and laminar
/// matroids, which is all this system needs.
class Matroid {
 public:
  virtual ~Matroid() = default;
  virtual ElementId ground_size() const = 0;
  virtual std::int32_t group_count() const = 0;
  virtual std::int32_t capacity(std::int32_t group) const = 0;
  virtual std::span<const std::int32_t> groups_of(ElementId z) const = 0;

  /// Slow full-set independence test for property checks; elements must be
  /// distinct.
  bool is_independent(std::span<const ElementId> set) const;
};

class PartitionMatroid final : public Matroid {
 public:
  /// block_of[z] assigns every element to exactly one block.
  PartitionMatroid(std::vector<std::int32_t> block_of, std::vector<std::int32_t> capacities);

  /// User matroid M1: blocks are columns L x {j}, capacity u_j each.
  static PartitionMatroid per_user(std::int32_t products, std::int32_t users,
                                   std::vector<std::int32_t> user_caps);
  /// Product matroid M2: blocks are rows {i} x V_S, capacity b_i each.
  static PartitionMatroid per_product(std::int32_t products, std::int32_t users,
                                      std::vector<std::int32_t> product_caps);

  ElementId ground_size() const override;
  std::int32_t group_count() const override;
  std::int32_t capacity(std::int32_t group) const override;
  std::span<const std::int32_t> groups_of(ElementId z) const override;

 private:
  std::vector<std::int32_t> block_of_;
  std::vector<std::int32_t> capacities_;
};

class LaminarMatroid final : public Matroid {
 public:
  struct Group {
    std::vector<ElementId> members;
    std::int32_t capacity = 0;
  };

  /// Rejects families where two groups properly intersect.
  LaminarMatroid(ElementId ground_size, std::vector<Group> groups);

  /// Lifts user-level groups to ground-set groups L x group.
  static LaminarMatroid over_user_groups(
      std::int32_t products, std::int32_t users,
      const std::vector<std::pair<std::vector<std::int32_t>, std::int32_t>>& user_groups);

  ElementId ground_size() const override;
  std::int32_t group_count() const override;
  std::int32_t capacity(std::int32_t group) const override;
  std::span<const std::int32_t> groups_of(ElementId z) const override;

 private:
  ElementId ground_size_;
  std::vector<Group> groups_;
  std::vector<std::int32_t> membership_;  // flattened per-element group lists
  std::vector<std::int32_t> member_offsets_;
};

/// Normalized per-product knapsack: one unit budget per product row, costs
/// in (0,1]. Elements whose normalized cost exceeds 1 are dropped from the
/// ground set.
class GroupKnapsack {
 public:
  GroupKnapsack(GroundLayout layout, std::vector<double> normalized_costs,
                std::vector<std::uint8_t> in_ground);

  GroundLayout layout() const { return layout_; }
  double cost(ElementId z) const { return costs_[static_cast<std::size_t>(z)]; }
  bool in_ground(ElementId z) const { return in_ground_[static_cast<std::size_t>(z)] != 0; }
  std::int32_t product_of(ElementId z) const { return z / layout_.users; }
  /// Products that still own at least one in-ground element.
  std::int32_t nonempty_group_count() const;

 private:
  GroundLayout layout_;
  std::vector<double> costs_;
  std::vector<std::uint8_t> in_ground_;
};

/// Divides raw costs by per-product budgets and drops elements whose
/// normalized cost exceeds the unit budget. Rejects non-positive inputs.
GroupKnapsack normalize_costs(const std::vector<std::vector<double>>& raw_costs,
                              std::span<const double> budgets);

/// Uniform-cost reduction: a product with uniform per-user cost c and
/// budget B supports at most floor(B / c) users.
std::int32_t uniform_capacity(double uniform_cost, double budget);

enum class Blocked { kNone, kMatroid, kKnapsack };

struct CanAdd {
  Blocked blocked = Blocked::kNone;
  std::int32_t index = -1;  // matroid index or product id
  bool feasible() const { return blocked == Blocked::kNone; }
};

/// Intersection of P >= 1 matroids plus an optional group knapsack, with
/// incremental per-state counters. All algorithms grow sets monotonically,
/// so the incremental oracle is can_add/add; a slow full-set checker backs
/// the tests.
class ConstraintSystem {
 public:
  ConstraintSystem(GroundLayout layout, std::vector<std::shared_ptr<const Matroid>> matroids,
                   std::optional<GroupKnapsack> knapsack = std::nullopt);

  GroundLayout layout() const { return layout_; }
  ElementId ground_size() const { return layout_.size(); }
  std::int32_t matroid_count() const { return static_cast<std::int32_t>(matroids_.size()); }
  const Matroid& matroid(std::int32_t i) const { return *matroids_[static_cast<std::size_t>(i)]; }
  bool has_knapsack() const { return knapsack_.has_value(); }
  const GroupKnapsack& knapsack() const;
  /// k in the analysis: number of knapsack groups with at least one
  /// in-ground element; 0 without a knapsack.
  std::int32_t knapsack_group_count() const;

  bool in_ground(ElementId z) const;
  double cost(ElementId z) const;  // 1.0 without a knapsack
  std::vector<ElementId> ground_elements() const;

  class State {
   public:
    bool selected(ElementId z) const { return selected_[static_cast<std::size_t>(z)] != 0; }
    std::int32_t selected_count() const { return selected_count_; }
    double spend(std::int32_t product) const;
    bool knapsack_active(std::int32_t product) const;

   private:
    friend class ConstraintSystem;
    std::vector<std::vector<std::int32_t>> matroid_counts_;
    std::vector<double> spend_;
    std::vector<std::uint8_t> selected_;
    std::vector<std::uint8_t> active_;
    std::int32_t selected_count_ = 0;
  };

  State make_state() const;

  /// Feasibility of adding z. Matroids are checked first; when they pass
  /// and the budget blocks, the product is recorded active on the state
  /// (k_a accounting). Precondition: z in ground, not selected.
  CanAdd can_add(State& state, ElementId z) const;
  /// Feasibility test without the active-flag side effect.
  bool peek_feasible(const State& state, ElementId z) const;
  void add(State& state, ElementId z) const;
  std::int32_t active_knapsack_count(const State& state) const;

  /// Slow full-set check: every matroid independent and every product
  /// within budget. Elements must be distinct.
  bool is_feasible_set(std::span<const ElementId> set) const;

  /// Visits every feasible subset of the in-ground elements exactly once
  /// (the empty set included), in depth-first lexicographic order. Rejects
  /// ground sets larger than 24 in-ground elements.
  void for_each_feasible(const std::function<void(std::span<const ElementId>)>& visit) const;

 private:
  CanAdd can_add_impl(const State& state, ElementId z) const;
  GroundLayout layout_;
  std::vector<std::shared_ptr<const Matroid>> matroids_;
  std::optional<GroupKnapsack> knapsack_;
};

}  // namespace budgetmax
