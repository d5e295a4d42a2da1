#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "budgetmax/rng.hpp"

namespace budgetmax {

inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

enum class DelayFamily { kExponential, kWeibull, kDeterministic };

/// Per-edge transmission-time distribution. Exponential and Weibull sample
/// via the inverse CDF of one uniform draw, so a seeded engine reproduces
/// delays exactly; Deterministic consumes no randomness.
class TransmissionFunction {
 public:
  static TransmissionFunction exponential(double rate);
  static TransmissionFunction weibull(double shape, double scale);
  static TransmissionFunction deterministic(double delay);

  DelayFamily family() const { return family_; }
  double rate() const;   // exponential only
  double shape() const;  // weibull only
  double scale() const;  // weibull only
  double delay() const;  // deterministic only

  /// One independent non-negative draw.
  double sample(Engine& rng) const;

  bool operator==(const TransmissionFunction&) const = default;

 private:
  TransmissionFunction(DelayFamily family, double a, double b)
      : family_(family), a_(a), b_(b) {}
  DelayFamily family_;
  double a_;
  double b_;
};

double sample_delay(const TransmissionFunction& tf, Engine& rng);

struct Edge {
  std::int32_t src;
  std::int32_t dst;
  TransmissionFunction delay;
};

/// Directed continuous-time cascade network for one product. Construction
/// rejects out-of-range ids, self-loops and duplicate directed edges.
class DiffusionNetwork {
 public:
  DiffusionNetwork(std::int32_t node_count, std::int32_t product_id, std::vector<Edge> edges);

  std::int32_t node_count() const { return node_count_; }
  std::int32_t product_id() const { return product_id_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::int32_t edge_count() const { return static_cast<std::int32_t>(edges_.size()); }

  /// Indices into edges() of the out-edges of u.
  std::span<const std::int32_t> out_edges(std::int32_t u) const;
  std::int32_t out_degree(std::int32_t u) const;

  /// Hash over node count, product id and the edge structure with its
  /// parameters; used to key on-disk coverage caches.
  std::uint64_t structure_hash() const;

 private:
  std::int32_t node_count_;
  std::int32_t product_id_;
  std::vector<Edge> edges_;
  std::vector<std::int32_t> out_offsets_;   // CSR over sources
  std::vector<std::int32_t> out_edge_ids_;
};

/// Per-node infection times of one sampled cascade; kInfiniteTime marks
/// nodes not reached within the horizon.
struct CascadeOutcome {
  std::vector<double> infection_time;
};

/// Multi-source earliest arrival over fixed per-edge delays, truncated at
/// `horizon`: labels greater than the horizon are never expanded and are
/// reported as kInfiniteTime.
void earliest_arrival(const DiffusionNetwork& net, std::span<const double> edge_delays,
                      std::span<const std::int32_t> sources, double horizon,
                      std::vector<double>& out_times);

/// Draws one delay per edge and reports earliest-arrival infection times.
/// Empty source set yields all-infinite times.
CascadeOutcome sample_cascade(const DiffusionNetwork& net, std::span<const std::int32_t> sources,
                              double horizon, Engine& rng);

/// Truncated single-source reachability with reusable scratch, for tight
/// loops over many (delay vector, source) pairs on one network.
class ReachComputer {
 public:
  explicit ReachComputer(const DiffusionNetwork& net);

  /// Appends to `out` the sorted ids of nodes whose earliest arrival from
  /// `source` is <= horizon (always includes the source when horizon >= 0).
  void reach_within(std::span<const double> edge_delays, std::int32_t source, double horizon,
                    std::vector<std::int32_t>& out);

 private:
  const DiffusionNetwork* net_;
  std::vector<double> time_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<std::pair<double, std::int32_t>> heap_;
};

// Plain-text edge-list format:
//   nodes <N> product <P>
//   <src> <dst> exp <rate>
//   <src> <dst> weibull <shape> <scale>
//   <src> <dst> det <delay>
void save_network(const DiffusionNetwork& net, std::ostream& os);
void save_network_file(const DiffusionNetwork& net, const std::filesystem::path& path);
DiffusionNetwork load_network(std::istream& is);
DiffusionNetwork load_network_file(const std::filesystem::path& path);

}  // namespace budgetmax
