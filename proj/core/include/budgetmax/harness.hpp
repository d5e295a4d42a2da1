#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "budgetmax/netgen.hpp"
#include "budgetmax/optimizer.hpp"

namespace budgetmax {

/// Configuration problems detected before any computation; the CLI maps
/// this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CascadeEvent {
  std::int32_t node = 0;
  double time = 0;
};

/// One recorded cascade: ordered first-mention events of one product.
struct CascadeRecord {
  std::int32_t product = 0;
  std::vector<CascadeEvent> events;  // strictly increasing timestamps
};

// Cascade file: one cascade per line,
//   <product_id>; <node>:<timestamp>,<node>:<timestamp>,...
std::vector<CascadeRecord> parse_cascades(std::istream& is);
std::vector<CascadeRecord> load_cascades(const std::filesystem::path& path);

/// Held-out value of an allocation of (product, node id) pairs: for each
/// pair, the average number of strictly-later events over the cascades of
/// that product containing the node; pairs appearing in no cascade
/// contribute 0. The sum over pairs is returned.
double heldout_evaluate(std::span<const std::pair<std::int32_t, std::int32_t>> allocation,
                        std::span<const CascadeRecord> cascades);

enum class SweepAxis { kProducts, kProductBudget, kUserConstraint, kTimeWindow, kDelta, kGroupLimit };

SweepAxis parse_axis(const std::string& name);
std::string axis_name(SweepAxis axis);

struct ExperimentConfig {
  // instance
  std::int32_t products = 8;
  std::int32_t candidates = 64;
  std::int32_t power = 10;
  std::vector<std::string> network_types;  // cycled; empty = all three
  std::vector<double> horizons;            // broadcast from `horizon` when empty
  double horizon = 5.0;
  std::int32_t samples = 2048;
  std::vector<double> weights;  // empty = all ones
  // constraints
  std::int32_t user_capacity = 2;
  std::vector<std::int32_t> user_capacities;  // per-user override, one per candidate
  bool budget_mode = false;
  std::int32_t product_capacity = 8;                // uniform-cost mode
  std::vector<std::int32_t> product_capacities;     // per-product override
  std::vector<double> budgets;                      // budget mode; empty = generated from seed
  std::vector<std::vector<double>> raw_costs;       // budget mode; empty = degree-based
  double cost_exponent = 3.0;
  std::int32_t group_count = 0;  // >0 adds the laminar group matroid over equal blocks
  std::int32_t group_limit = 16;
  // explicit laminar family over candidate slots (may nest); overrides group_count
  std::vector<std::vector<std::int32_t>> group_members;
  std::vector<std::int32_t> group_limits;
  // optimizer
  double delta = 0.01;
  std::vector<std::string> algorithms = {"budgetmax"};
  std::uint64_t seed = 1;
  std::int32_t workers = 1;
  // sweep
  std::vector<double> axis_values;  // empty = per-axis defaults
  // io
  std::string assets_dir;     // load instead of generating
  std::string cascades_path;  // enables the held-out column

  static ExperimentConfig from_file(const std::filesystem::path& path);
  static ExperimentConfig from_json_text(const std::string& text);
  /// Full round-trip echo with every defaulted value filled in.
  std::string to_json_text() const;
  void validate() const;
};

/// Instance materialized from a config: networks, sample banks, coverage
/// indices, objective and constraint system.
struct PreparedExperiment {
  GeneratedAssets assets;
  std::vector<SampleBank> banks;
  std::vector<CoverageIndex> indices;
  std::unique_ptr<Objective> objective;
  std::unique_ptr<ConstraintSystem> system;
  std::vector<const DiffusionNetwork*> networks;
  std::vector<std::vector<std::int32_t>> user_groups;  // candidate slots per group

  std::vector<std::pair<std::int32_t, std::int32_t>> allocation_nodes(
      std::span<const GroundElement> solution) const;
};

PreparedExperiment prepare_experiment(const ExperimentConfig& config);

struct RunRow {
  std::string algorithm;
  std::string axis;        // empty outside sweeps
  double axis_value = 0;
  std::uint64_t seed = 0;
  RunReport report;
  std::optional<double> heldout;
  std::optional<double> relative_to_lazy;  // delta sweeps only
};

struct ExperimentResult {
  std::vector<RunRow> rows;
  std::string resolved_config_json;
};

/// Runs every configured algorithm on one prepared instance.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// One run_experiment per axis value; rows keep axis order. Points run
/// concurrently up to config.workers, results are order-independent.
ExperimentResult sweep(const ExperimentConfig& config, SweepAxis axis);

std::vector<double> default_axis_values(SweepAxis axis);

/// CSV with wall-clock as the final column so determinism checks can strip it.
void write_rows_csv(const ExperimentResult& result, std::ostream& os);
void write_rows_csv_file(const ExperimentResult& result, const std::filesystem::path& path);
/// Full RunReport as JSON, config echo included.
std::string report_json(const RunRow& row, const ExperimentConfig& config,
                        const PreparedExperiment& prepared);

}  // namespace budgetmax
