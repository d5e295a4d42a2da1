#pragma once

#include <atomic>
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "budgetmax/coverage.hpp"

namespace budgetmax {

/// One entry (product, user) of the assignment matrix. `user` is the slot
/// of the candidate in the shared candidate list, not the raw node id.
struct GroundElement {
  std::int32_t product = 0;
  std::int32_t user = 0;
  friend constexpr bool operator==(GroundElement, GroundElement) = default;
  friend constexpr auto operator<=>(GroundElement, GroundElement) = default;
};

using ElementId = std::int32_t;

/// Product-major layout of the ground set L x V_S. Element ids follow
/// ascending (product, user) order, which is also the deterministic pass
/// order of the optimizer.
struct GroundLayout {
  std::int32_t products = 0;
  std::int32_t users = 0;

  std::int32_t size() const { return products * users; }
  ElementId id_of(GroundElement z) const { return z.product * users + z.user; }
  GroundElement element_of(ElementId id) const { return {id / users, id % users}; }
};

/// Overall influence estimate f(S) = sum_i a_i * coverage_i(R_i) over one
/// coverage index per product, all sharing the same candidate list.
class Objective {
 public:
  /// Weights default to 1 when empty.
  Objective(std::vector<const CoverageIndex*> indices, std::vector<double> weights = {});

  std::int32_t product_count() const { return static_cast<std::int32_t>(indices_.size()); }
  std::int32_t user_count() const;
  GroundLayout layout() const { return {product_count(), user_count()}; }
  double weight(std::int32_t product) const;
  const CoverageIndex& index(std::int32_t product) const;

  /// From-scratch evaluation of an arbitrary selection; used by tests and
  /// report validation, never by the greedy inner loop.
  double value_of(std::span<const GroundElement> selection) const;

  class State {
   public:
    double value() const;
    /// Exact marginal gain of z against the current selection. Counts one
    /// objective evaluation; returns 0 when z is already selected.
    double gain(GroundElement z) const;
    /// Unweighted covered-node count behind gain(), for zero-tolerance tests.
    std::int64_t gain_count(GroundElement z) const;
    void commit(GroundElement z);

    bool contains(GroundElement z) const;
    const std::vector<GroundElement>& selected() const { return order_; }
    const CoverageState& product_state(std::int32_t product) const;

    std::uint64_t evaluations() const { return evals_.load(std::memory_order_relaxed); }

    State(const State& other);
    State& operator=(const State& other);
    State(State&&) noexcept = default;
    State& operator=(State&&) noexcept = default;

   private:
    friend class Objective;
    explicit State(const Objective& owner);
    const Objective* owner_;
    std::vector<CoverageState> per_product_;
    std::vector<std::uint8_t> member_;
    std::vector<GroundElement> order_;
    mutable std::atomic<std::uint64_t> evals_{0};
  };

  State make_state() const { return State(*this); }

 private:
  void check_element(GroundElement z) const;
  std::vector<const CoverageIndex*> indices_;
  std::vector<double> weights_;
};

}  // namespace budgetmax
