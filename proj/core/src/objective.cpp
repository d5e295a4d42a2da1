#include "budgetmax/objective.hpp"

#include <stdexcept>

namespace budgetmax {

Objective::Objective(std::vector<const CoverageIndex*> indices, std::vector<double> weights)
    : indices_(std::move(indices)), weights_(std::move(weights)) {
  if (indices_.empty()) throw std::invalid_argument("objective needs at least one product index");
  for (const CoverageIndex* index : indices_) {
    if (index == nullptr) throw std::invalid_argument("null coverage index");
    if (index->candidate_count() != indices_.front()->candidate_count())
      throw std::invalid_argument("all products must share one candidate list");
    for (std::int32_t slot = 0; slot < index->candidate_count(); ++slot)
      if (index->candidate_id(slot) != indices_.front()->candidate_id(slot))
        throw std::invalid_argument("all products must share one candidate list");
  }
  if (weights_.empty()) weights_.assign(indices_.size(), 1.0);
  if (weights_.size() != indices_.size())
    throw std::invalid_argument("one weight per product required");
  for (double w : weights_)
    if (!(w > 0)) throw std::invalid_argument("weights must be positive");
}

std::int32_t Objective::user_count() const { return indices_.front()->candidate_count(); }

double Objective::weight(std::int32_t product) const {
  if (product < 0 || product >= product_count()) throw std::out_of_range("product out of range");
  return weights_[static_cast<std::size_t>(product)];
}

const CoverageIndex& Objective::index(std::int32_t product) const {
  if (product < 0 || product >= product_count()) throw std::out_of_range("product out of range");
  return *indices_[static_cast<std::size_t>(product)];
}

void Objective::check_element(GroundElement z) const {
  if (z.product < 0 || z.product >= product_count() || z.user < 0 || z.user >= user_count())
    throw std::out_of_range("ground element out of range");
}

double Objective::value_of(std::span<const GroundElement> selection) const {
  std::vector<std::vector<std::int32_t>> per_product(static_cast<std::size_t>(product_count()));
  for (GroundElement z : selection) {
    check_element(z);
    per_product[static_cast<std::size_t>(z.product)].push_back(z.user);
  }
  double total = 0;
  for (std::int32_t i = 0; i < product_count(); ++i)
    total += weights_[static_cast<std::size_t>(i)] *
             indices_[static_cast<std::size_t>(i)]->influence_of_slots(
                 per_product[static_cast<std::size_t>(i)]);
  return total;
}

Objective::State::State(const Objective& owner)
    : owner_(&owner), member_(static_cast<std::size_t>(owner.layout().size()), 0) {
  per_product_.reserve(static_cast<std::size_t>(owner.product_count()));
  for (std::int32_t i = 0; i < owner.product_count(); ++i)
    per_product_.emplace_back(owner.index(i));
}

Objective::State::State(const State& other)
    : owner_(other.owner_),
      per_product_(other.per_product_),
      member_(other.member_),
      order_(other.order_),
      evals_(other.evals_.load(std::memory_order_relaxed)) {}

Objective::State& Objective::State::operator=(const State& other) {
  if (this == &other) return *this;
  owner_ = other.owner_;
  per_product_ = other.per_product_;
  member_ = other.member_;
  order_ = other.order_;
  evals_.store(other.evals_.load(std::memory_order_relaxed), std::memory_order_relaxed);
  return *this;
}

double Objective::State::value() const {
  double total = 0;
  for (std::int32_t i = 0; i < owner_->product_count(); ++i)
    total += owner_->weight(i) * per_product_[static_cast<std::size_t>(i)].value();
  return total;
}

bool Objective::State::contains(GroundElement z) const {
  owner_->check_element(z);
  return member_[static_cast<std::size_t>(owner_->layout().id_of(z))] != 0;
}

std::int64_t Objective::State::gain_count(GroundElement z) const {
  owner_->check_element(z);
  evals_.fetch_add(1, std::memory_order_relaxed);
  if (contains(z)) return 0;
  return per_product_[static_cast<std::size_t>(z.product)].marginal_covered(z.user);
}

double Objective::State::gain(GroundElement z) const {
  const std::int64_t count = gain_count(z);
  const auto& cov = per_product_[static_cast<std::size_t>(z.product)];
  return owner_->weight(z.product) * static_cast<double>(count) /
         static_cast<double>(cov.index().sample_count());
}

void Objective::State::commit(GroundElement z) {
  owner_->check_element(z);
  auto& flag = member_[static_cast<std::size_t>(owner_->layout().id_of(z))];
  if (flag) return;
  per_product_[static_cast<std::size_t>(z.product)].commit(z.user);
  flag = 1;
  order_.push_back(z);
}

const CoverageState& Objective::State::product_state(std::int32_t product) const {
  if (product < 0 || product >= owner_->product_count())
    throw std::out_of_range("product out of range");
  return per_product_[static_cast<std::size_t>(product)];
}

}  // namespace budgetmax
