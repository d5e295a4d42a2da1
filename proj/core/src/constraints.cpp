#include "budgetmax/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace budgetmax {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

constexpr std::int32_t kEnumerationBound = 24;

}  // namespace

bool Matroid::is_independent(std::span<const ElementId> set) const {
  std::vector<std::int32_t> counts(static_cast<std::size_t>(group_count()), 0);
  for (ElementId z : set) {
    if (z < 0 || z >= ground_size()) throw std::out_of_range("element id out of range");
    for (std::int32_t g : groups_of(z))
      if (++counts[static_cast<std::size_t>(g)] > capacity(g)) return false;
  }
  return true;
}

PartitionMatroid::PartitionMatroid(std::vector<std::int32_t> block_of,
                                   std::vector<std::int32_t> capacities)
    : block_of_(std::move(block_of)), capacities_(std::move(capacities)) {
  for (std::int32_t b : block_of_)
    require(b >= 0 && b < static_cast<std::int32_t>(capacities_.size()),
            "block id out of range");
  for (std::int32_t cap : capacities_) require(cap >= 0, "capacities must be >= 0");
}

PartitionMatroid PartitionMatroid::per_user(std::int32_t products, std::int32_t users,
                                            std::vector<std::int32_t> user_caps) {
  require(static_cast<std::int32_t>(user_caps.size()) == users, "one capacity per user required");
  GroundLayout layout{products, users};
  std::vector<std::int32_t> block_of(static_cast<std::size_t>(layout.size()));
  for (ElementId z = 0; z < layout.size(); ++z)
    block_of[static_cast<std::size_t>(z)] = layout.element_of(z).user;
  return PartitionMatroid(std::move(block_of), std::move(user_caps));
}

PartitionMatroid PartitionMatroid::per_product(std::int32_t products, std::int32_t users,
                                               std::vector<std::int32_t> product_caps) {
  require(static_cast<std::int32_t>(product_caps.size()) == products,
          "one capacity per product required");
  GroundLayout layout{products, users};
  std::vector<std::int32_t> block_of(static_cast<std::size_t>(layout.size()));
  for (ElementId z = 0; z < layout.size(); ++z)
    block_of[static_cast<std::size_t>(z)] = layout.element_of(z).product;
  return PartitionMatroid(std::move(block_of), std::move(product_caps));
}

ElementId PartitionMatroid::ground_size() const {
  return static_cast<ElementId>(block_of_.size());
}

std::int32_t PartitionMatroid::group_count() const {
  return static_cast<std::int32_t>(capacities_.size());
}

std::int32_t PartitionMatroid::capacity(std::int32_t group) const {
  return capacities_[static_cast<std::size_t>(group)];
}

std::span<const std::int32_t> PartitionMatroid::groups_of(ElementId z) const {
  return {&block_of_[static_cast<std::size_t>(z)], 1};
}

LaminarMatroid::LaminarMatroid(ElementId ground_size, std::vector<Group> groups)
    : ground_size_(ground_size), groups_(std::move(groups)) {
  require(ground_size_ >= 0, "ground size must be >= 0");
  for (auto& g : groups_) {
    require(g.capacity >= 0, "capacities must be >= 0");
    std::sort(g.members.begin(), g.members.end());
    require(std::adjacent_find(g.members.begin(), g.members.end()) == g.members.end(),
            "duplicate member inside a group");
    for (ElementId z : g.members)
      require(z >= 0 && z < ground_size_, "group member out of range");
  }
  // Laminar condition: any two groups are nested or disjoint.
  for (std::size_t a = 0; a < groups_.size(); ++a) {
    for (std::size_t b = a + 1; b < groups_.size(); ++b) {
      const auto& ga = groups_[a].members;
      const auto& gb = groups_[b].members;
      std::vector<ElementId> common;
      std::set_intersection(ga.begin(), ga.end(), gb.begin(), gb.end(),
                            std::back_inserter(common));
      const bool nested = common.size() == ga.size() || common.size() == gb.size();
      require(common.empty() || nested, "group family is not laminar");
    }
  }
  std::vector<std::vector<std::int32_t>> per_element(static_cast<std::size_t>(ground_size_));
  for (std::size_t g = 0; g < groups_.size(); ++g)
    for (ElementId z : groups_[g].members)
      per_element[static_cast<std::size_t>(z)].push_back(static_cast<std::int32_t>(g));
  member_offsets_.assign(static_cast<std::size_t>(ground_size_) + 1, 0);
  for (ElementId z = 0; z < ground_size_; ++z)
    member_offsets_[static_cast<std::size_t>(z) + 1] =
        member_offsets_[static_cast<std::size_t>(z)] +
        static_cast<std::int32_t>(per_element[static_cast<std::size_t>(z)].size());
  membership_.reserve(static_cast<std::size_t>(member_offsets_.back()));
  for (ElementId z = 0; z < ground_size_; ++z)
    for (std::int32_t g : per_element[static_cast<std::size_t>(z)]) membership_.push_back(g);
}

LaminarMatroid LaminarMatroid::over_user_groups(
    std::int32_t products, std::int32_t users,
    const std::vector<std::pair<std::vector<std::int32_t>, std::int32_t>>& user_groups) {
  GroundLayout layout{products, users};
  std::vector<Group> groups;
  groups.reserve(user_groups.size());
  for (const auto& [members, cap] : user_groups) {
    Group g;
    g.capacity = cap;
    for (std::int32_t user : members) {
      require(user >= 0 && user < users, "user out of range");
      for (std::int32_t i = 0; i < products; ++i) g.members.push_back(layout.id_of({i, user}));
    }
    groups.push_back(std::move(g));
  }
  return LaminarMatroid(layout.size(), std::move(groups));
}

ElementId LaminarMatroid::ground_size() const { return ground_size_; }

std::int32_t LaminarMatroid::group_count() const {
  return static_cast<std::int32_t>(groups_.size());
}

std::int32_t LaminarMatroid::capacity(std::int32_t group) const {
  return groups_[static_cast<std::size_t>(group)].capacity;
}

std::span<const std::int32_t> LaminarMatroid::groups_of(ElementId z) const {
  const auto lo = static_cast<std::size_t>(member_offsets_[static_cast<std::size_t>(z)]);
  const auto hi = static_cast<std::size_t>(member_offsets_[static_cast<std::size_t>(z) + 1]);
  return {membership_.data() + lo, hi - lo};
}

GroupKnapsack::GroupKnapsack(GroundLayout layout, std::vector<double> normalized_costs,
                             std::vector<std::uint8_t> in_ground)
    : layout_(layout), costs_(std::move(normalized_costs)), in_ground_(std::move(in_ground)) {
  require(costs_.size() == static_cast<std::size_t>(layout_.size()), "one cost per element");
  require(in_ground_.size() == costs_.size(), "one in-ground flag per element");
  for (ElementId z = 0; z < layout_.size(); ++z)
    if (in_ground_[static_cast<std::size_t>(z)] != 0)
      require(costs_[static_cast<std::size_t>(z)] > 0 &&
                  costs_[static_cast<std::size_t>(z)] <= 1.0,
              "normalized costs must lie in (0, 1]");
}

std::int32_t GroupKnapsack::nonempty_group_count() const {
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(layout_.products), 0);
  for (ElementId z = 0; z < layout_.size(); ++z)
    if (in_ground(z)) seen[static_cast<std::size_t>(product_of(z))] = 1;
  std::int32_t count = 0;
  for (std::uint8_t s : seen) count += s;
  return count;
}

GroupKnapsack normalize_costs(const std::vector<std::vector<double>>& raw_costs,
                              std::span<const double> budgets) {
  require(!raw_costs.empty(), "raw cost matrix must be non-empty");
  require(raw_costs.size() == budgets.size(), "one budget per product required");
  const auto users = static_cast<std::int32_t>(raw_costs.front().size());
  GroundLayout layout{static_cast<std::int32_t>(raw_costs.size()), users};
  std::vector<double> costs(static_cast<std::size_t>(layout.size()), 0.0);
  std::vector<std::uint8_t> in_ground(static_cast<std::size_t>(layout.size()), 0);
  for (std::int32_t i = 0; i < layout.products; ++i) {
    require(static_cast<std::int32_t>(raw_costs[static_cast<std::size_t>(i)].size()) == users,
            "ragged cost matrix");
    const double budget = budgets[static_cast<std::size_t>(i)];
    require(budget > 0, "budgets must be positive");
    for (std::int32_t j = 0; j < users; ++j) {
      const double raw = raw_costs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      require(raw > 0, "raw costs must be positive");
      const double c = raw / budget;
      const ElementId z = layout.id_of({i, j});
      costs[static_cast<std::size_t>(z)] = c;
      in_ground[static_cast<std::size_t>(z)] = c <= 1.0 ? 1 : 0;
    }
  }
  return GroupKnapsack(layout, std::move(costs), std::move(in_ground));
}

std::int32_t uniform_capacity(double uniform_cost, double budget) {
  require(uniform_cost > 0, "uniform cost must be positive");
  require(budget > 0, "budget must be positive");
  return static_cast<std::int32_t>(std::floor(budget / uniform_cost));
}

ConstraintSystem::ConstraintSystem(GroundLayout layout,
                                   std::vector<std::shared_ptr<const Matroid>> matroids,
                                   std::optional<GroupKnapsack> knapsack)
    : layout_(layout), matroids_(std::move(matroids)), knapsack_(std::move(knapsack)) {
  require(layout_.products >= 0 && layout_.users >= 0, "bad ground layout");
  require(!matroids_.empty(), "at least one matroid required");
  for (const auto& m : matroids_) {
    require(m != nullptr, "null matroid");
    require(m->ground_size() == layout_.size(), "matroid ground size mismatch");
  }
  if (knapsack_)
    require(knapsack_->layout().products == layout_.products &&
                knapsack_->layout().users == layout_.users,
            "knapsack layout mismatch");
}

const GroupKnapsack& ConstraintSystem::knapsack() const {
  if (!knapsack_) throw std::logic_error("constraint system has no knapsack");
  return *knapsack_;
}

std::int32_t ConstraintSystem::knapsack_group_count() const {
  return knapsack_ ? knapsack_->nonempty_group_count() : 0;
}

bool ConstraintSystem::in_ground(ElementId z) const {
  if (z < 0 || z >= layout_.size()) throw std::out_of_range("element id out of range");
  return knapsack_ ? knapsack_->in_ground(z) : true;
}

double ConstraintSystem::cost(ElementId z) const {
  if (z < 0 || z >= layout_.size()) throw std::out_of_range("element id out of range");
  return knapsack_ ? knapsack_->cost(z) : 1.0;
}

std::vector<ElementId> ConstraintSystem::ground_elements() const {
  std::vector<ElementId> out;
  out.reserve(static_cast<std::size_t>(layout_.size()));
  for (ElementId z = 0; z < layout_.size(); ++z)
    if (in_ground(z)) out.push_back(z);
  return out;
}

ConstraintSystem::State ConstraintSystem::make_state() const {
  State state;
  state.matroid_counts_.reserve(matroids_.size());
  for (const auto& m : matroids_)
    state.matroid_counts_.emplace_back(static_cast<std::size_t>(m->group_count()), 0);
  state.spend_.assign(static_cast<std::size_t>(layout_.products), 0.0);
  state.selected_.assign(static_cast<std::size_t>(layout_.size()), 0);
  state.active_.assign(static_cast<std::size_t>(layout_.products), 0);
  return state;
}

double ConstraintSystem::State::spend(std::int32_t product) const {
  return spend_[static_cast<std::size_t>(product)];
}

bool ConstraintSystem::State::knapsack_active(std::int32_t product) const {
  return active_[static_cast<std::size_t>(product)] != 0;
}

CanAdd ConstraintSystem::can_add_impl(const State& state, ElementId z) const {
  for (std::size_t m = 0; m < matroids_.size(); ++m) {
    const Matroid& matroid = *matroids_[m];
    for (std::int32_t g : matroid.groups_of(z)) {
      if (state.matroid_counts_[m][static_cast<std::size_t>(g)] + 1 > matroid.capacity(g))
        return {Blocked::kMatroid, static_cast<std::int32_t>(m)};
    }
  }
  if (knapsack_) {
    const std::int32_t product = knapsack_->product_of(z);
    if (state.spend_[static_cast<std::size_t>(product)] + knapsack_->cost(z) >
        1.0 + kBudgetSlack)
      return {Blocked::kKnapsack, product};
  }
  return {};
}

CanAdd ConstraintSystem::can_add(State& state, ElementId z) const {
  if (!in_ground(z)) throw std::invalid_argument("element is not in the ground set");
  if (state.selected(z)) throw std::invalid_argument("element already selected");
  const CanAdd result = can_add_impl(state, z);
  if (result.blocked == Blocked::kKnapsack)
    state.active_[static_cast<std::size_t>(result.index)] = 1;
  return result;
}

bool ConstraintSystem::peek_feasible(const State& state, ElementId z) const {
  if (!in_ground(z) || state.selected(z)) return false;
  return can_add_impl(state, z).feasible();
}

void ConstraintSystem::add(State& state, ElementId z) const {
  if (!can_add_impl(state, z).feasible() || state.selected(z))
    throw std::logic_error("add() requires a feasible, unselected element");
  for (std::size_t m = 0; m < matroids_.size(); ++m)
    for (std::int32_t g : matroids_[m]->groups_of(z))
      ++state.matroid_counts_[m][static_cast<std::size_t>(g)];
  if (knapsack_) state.spend_[static_cast<std::size_t>(knapsack_->product_of(z))] += knapsack_->cost(z);
  state.selected_[static_cast<std::size_t>(z)] = 1;
  ++state.selected_count_;
}

std::int32_t ConstraintSystem::active_knapsack_count(const State& state) const {
  std::int32_t count = 0;
  for (std::uint8_t a : state.active_) count += a;
  return count;
}

bool ConstraintSystem::is_feasible_set(std::span<const ElementId> set) const {
  for (ElementId z : set)
    if (!in_ground(z)) return false;
  for (const auto& m : matroids_)
    if (!m->is_independent(set)) return false;
  if (knapsack_) {
    std::vector<double> spend(static_cast<std::size_t>(layout_.products), 0.0);
    for (ElementId z : set) {
      auto& s = spend[static_cast<std::size_t>(knapsack_->product_of(z))];
      s += knapsack_->cost(z);
      if (s > 1.0 + kBudgetSlack) return false;
    }
  }
  return true;
}

void ConstraintSystem::for_each_feasible(
    const std::function<void(std::span<const ElementId>)>& visit) const {
  const std::vector<ElementId> elems = ground_elements();
  if (static_cast<std::int32_t>(elems.size()) > kEnumerationBound)
    throw std::invalid_argument("feasible-set enumeration is bounded to 24 ground elements");
  std::vector<ElementId> current;
  // Heredity makes prefix pruning sound: an infeasible extension stays
  // infeasible for every superset.
  auto rec = [&](auto&& self, std::size_t idx, const State& state) -> void {
    visit(current);
    for (std::size_t i = idx; i < elems.size(); ++i) {
      if (!peek_feasible(state, elems[i])) continue;
      State next = state;
      add(next, elems[i]);
      current.push_back(elems[i]);
      self(self, i + 1, next);
      current.pop_back();
    }
  };
  rec(rec, 0, make_state());
}

}  // namespace budgetmax
