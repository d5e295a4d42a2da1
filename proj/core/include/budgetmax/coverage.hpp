#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include "budgetmax/diffusion.hpp"

namespace budgetmax {

/// Frozen per-sample edge delays for one product network. Rebuilding with
/// the same (network, sample count, seed) reproduces identical delays.
class SampleBank {
 public:
  static SampleBank build(const DiffusionNetwork& net, std::int32_t sample_count,
                          std::uint64_t seed);

  std::int32_t sample_count() const { return sample_count_; }
  std::int32_t edge_count() const { return edge_count_; }
  std::int32_t product_id() const { return product_id_; }
  std::uint64_t seed() const { return seed_; }
  std::span<const double> delays(std::int32_t sample) const;

 private:
  SampleBank() = default;
  std::int32_t sample_count_ = 0;
  std::int32_t edge_count_ = 0;
  std::int32_t product_id_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> delays_;  // sample-major, stride edge_count_
};

/// Precomputed reach-within-horizon sets for every (sample, candidate)
/// pair. Immutable after construction; turns the Monte-Carlo influence
/// estimate into an exact coverage function, so monotonicity and
/// submodularity of the estimator hold with zero tolerance.
class CoverageIndex {
 public:
  static CoverageIndex build(const SampleBank& bank, const DiffusionNetwork& net,
                             std::span<const std::int32_t> candidates, double horizon,
                             int workers = 1);

  std::int32_t sample_count() const { return sample_count_; }
  std::int32_t candidate_count() const { return static_cast<std::int32_t>(candidates_.size()); }
  std::int32_t node_count() const { return node_count_; }
  std::int32_t product_id() const { return product_id_; }
  double horizon() const { return horizon_; }
  std::uint64_t bank_seed() const { return bank_seed_; }
  std::uint64_t network_hash() const { return network_hash_; }

  std::span<const std::int32_t> candidates() const { return candidates_; }
  std::int32_t candidate_id(std::int32_t slot) const;
  /// Slot of a candidate node id, or -1 when the node is not indexed.
  std::int32_t slot_of(std::int32_t candidate_node) const;

  std::span<const std::int32_t> reach_set(std::int32_t sample, std::int32_t slot) const;

  /// (1/r) sum over samples of |union of reach sets|, from scratch.
  double influence_of_slots(std::span<const std::int32_t> slots) const;
  /// Same, keyed by candidate node ids; unknown ids are rejected.
  double influence_of_ids(std::span<const std::int32_t> candidate_nodes) const;
  /// Integer covered-node total behind influence_of_slots.
  std::int64_t covered_total_of_slots(std::span<const std::int32_t> slots) const;

  // Binary cache: little-endian, magic header + version byte, keyed by
  // (network hash, bank seed, sample count, horizon).
  void save(std::ostream& os) const;
  void save_file(const std::filesystem::path& path) const;
  static CoverageIndex load(std::istream& is);
  static CoverageIndex load_file(const std::filesystem::path& path);
  bool matches(const DiffusionNetwork& net, std::uint64_t seed, std::int32_t sample_count,
               double horizon) const;

 private:
  CoverageIndex() = default;
  std::size_t cell(std::int32_t sample, std::int32_t slot) const;

  std::int32_t sample_count_ = 0;
  std::int32_t node_count_ = 0;
  std::int32_t product_id_ = 0;
  double horizon_ = 0;
  std::uint64_t bank_seed_ = 0;
  std::uint64_t network_hash_ = 0;
  std::vector<std::int32_t> candidates_;
  std::unordered_map<std::int32_t, std::int32_t> slot_of_;
  std::vector<std::uint64_t> offsets_;  // size r*C + 1
  std::vector<std::int32_t> reach_nodes_;
};

/// Incremental coverage evaluation for a growing source set. Keeps
/// per-sample covered-node flags plus running covered counts; marginal
/// gains agree bit-exactly with full re-evaluation because both sides
/// count the same integers.
class CoverageState {
 public:
  explicit CoverageState(const CoverageIndex& index);

  const CoverageIndex& index() const { return *index_; }
  const std::vector<std::int32_t>& sources() const { return sources_; }
  bool contains(std::int32_t slot) const;

  std::int64_t covered_total() const { return covered_total_; }
  std::int32_t covered_in_sample(std::int32_t sample) const;
  /// covered_total / sample_count; 0 for the empty source set.
  double value() const;

  /// Nodes newly covered by adding `slot`, summed over samples. Read-only.
  std::int64_t marginal_covered(std::int32_t slot) const;
  double marginal_gain(std::int32_t slot) const;

  /// Adds `slot`; duplicate additions are no-ops.
  void commit(std::int32_t slot);

 private:
  bool covered(std::int32_t sample, std::int32_t node) const;

  const CoverageIndex* index_;
  std::vector<std::uint64_t> covered_bits_;  // sample-major bitset
  std::vector<std::int32_t> per_sample_;
  std::vector<std::uint8_t> member_;
  std::vector<std::int32_t> sources_;
  std::int64_t covered_total_ = 0;
};

}  // namespace budgetmax
