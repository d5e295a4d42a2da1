// Command-line front end: generate assets, run one optimization, sweep an
// axis, compare greedy against brute force on small instances, and score
// allocations against held-out cascades.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "budgetmax/exact.hpp"
#include "budgetmax/harness.hpp"
#include "budgetmax/optimizer.hpp"

namespace fs = std::filesystem;
using namespace budgetmax;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
};

ExperimentConfig load_config(const CommonOptions& options) {
  if (options.config_path.empty()) throw ConfigError("--config is required");
  ExperimentConfig config = ExperimentConfig::from_file(options.config_path);
  if (options.seed_set) config.seed = options.seed;
  if (options.workers > 0) config.workers = options.workers;
  config.validate();
  return config;
}

void ensure_dir(const fs::path& dir) { fs::create_directories(dir); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
  if (text.empty() || text.back() != '\n') os << '\n';
}

int cmd_generate(const CommonOptions& options) {
  const ExperimentConfig config = load_config(options);
  AssetSpec spec;
  spec.products = config.products;
  spec.candidates = config.candidates;
  spec.power = config.power;
  spec.types = config.network_types;
  spec.cost_exponent = config.cost_exponent;
  spec.group_count = config.group_count;
  spec.seed = config.seed;
  const auto assets = generate_assets(spec);
  ensure_dir(options.out_dir);
  write_assets(assets, options.out_dir);
  std::int64_t edges = 0;
  for (const auto& net : assets.networks) edges += net.edge_count();
  std::printf("wrote %zu networks (%lld edges total) and manifest.json to %s\n",
              assets.networks.size(), static_cast<long long>(edges), options.out_dir.c_str());
  return kExitOk;
}

int cmd_optimize(const CommonOptions& options, const std::string& algo_override) {
  ExperimentConfig config = load_config(options);
  if (!algo_override.empty()) config.algorithms = {algo_override};
  config.validate();
  ensure_dir(options.out_dir);

  const PreparedExperiment prepared = prepare_experiment(config);
  const auto result = run_experiment(config);
  write_rows_csv_file(result, fs::path(options.out_dir) / "results.csv");
  write_text(fs::path(options.out_dir) / "config_resolved.json", result.resolved_config_json);
  for (const auto& row : result.rows) {
    const std::string name = "run_" + row.algorithm + ".json";
    write_text(fs::path(options.out_dir) / name, report_json(row, config, prepared));
    std::printf("%-14s value %.6f  selected %zu  k_a %d  evals %llu  %.1f ms\n",
                row.algorithm.c_str(), row.report.value, row.report.solution.size(),
                row.report.active_knapsacks,
                static_cast<unsigned long long>(row.report.evaluations), row.report.wall_ms);
  }
  return kExitOk;
}

int cmd_sweep(const CommonOptions& options, const std::string& axis_name_str) {
  const ExperimentConfig config = load_config(options);
  const SweepAxis axis = parse_axis(axis_name_str);
  ensure_dir(options.out_dir);
  const auto result = sweep(config, axis);
  const fs::path csv = fs::path(options.out_dir) / ("sweep_" + axis_name_str + ".csv");
  write_rows_csv_file(result, csv);
  write_text(fs::path(options.out_dir) / "config_resolved.json", result.resolved_config_json);
  std::printf("wrote %zu rows to %s\n", result.rows.size(), csv.string().c_str());
  return kExitOk;
}

int cmd_brute_check(const CommonOptions& options, int instances, bool budget_mode) {
  // Greedy vs exhaustive optimum on random small instances; reports the
  // realized approximation ratios next to the proven floors.
  ensure_dir(options.out_dir);
  const double delta = budget_mode ? 0.1 : 0.01;
  json rows = json::array();
  double worst = 1e300;
  for (int i = 0; i < instances; ++i) {
    ExactInstanceSpec spec;
    spec.products = 2 + (i % 2);
    spec.users = budget_mode ? 5 : 4 + 2 * ((i / 2) % 2);
    spec.node_count = spec.users + 4;
    spec.samples = 64;
    spec.seed = options.seed_set ? derive_seed(options.seed, static_cast<std::uint64_t>(i))
                                 : derive_seed(4321, static_cast<std::uint64_t>(i));
    spec.budget_mode = budget_mode;
    spec.user_cap = 1 + (i % 2);
    spec.product_cap = 2;
    const auto inst = make_exact_instance(spec);
    const auto brute = brute_force_optimum(*inst.objective, *inst.system);

    RunReport report;
    double floor = 0;
    if (budget_mode) {
      const auto result = density_enumeration(*inst.objective, *inst.system, delta);
      report = result.best;
      floor = std::max(report.active_knapsacks, 1) /
              ((2.0 * inst.objective->product_count() + 2.0) * (1.0 + 3.0 * delta));
    } else {
      report = uniform_cost_greedy(*inst.objective, *inst.system, delta);
      floor = (1.0 - 2.0 * delta) / 3.0;
    }
    const double ratio = brute.value > 0 ? report.value / brute.value : 1.0;
    worst = std::min(worst, ratio);
    rows.push_back({{"instance", i},
                    {"greedy_value", report.value},
                    {"opt_value", brute.value},
                    {"ratio", ratio},
                    {"k_a", report.active_knapsacks},
                    {"proven_floor", floor}});
    std::printf("instance %2d: greedy %.4f  opt %.4f  ratio %.4f  floor %.4f\n", i, report.value,
                brute.value, ratio, floor);
  }
  write_text(fs::path(options.out_dir) / "brute_check.json", rows.dump(2));
  std::printf("worst realized ratio %.4f over %d instances (mode: %s)\n", worst, instances,
              budget_mode ? "budget" : "uniform");
  return kExitOk;
}

int cmd_evaluate(const std::string& allocation_path, const std::string& cascades_path) {
  std::ifstream is(allocation_path);
  if (!is) throw ConfigError("cannot open allocation file: " + allocation_path);
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("allocation file is not valid JSON: ") + e.what());
  }
  if (!doc.contains("allocation")) throw ConfigError("allocation file lacks an 'allocation' array");
  std::vector<std::pair<std::int32_t, std::int32_t>> allocation;
  for (const auto& pair : doc.at("allocation"))
    allocation.emplace_back(pair.at(0).get<std::int32_t>(), pair.at(1).get<std::int32_t>());
  const auto cascades = load_cascades(cascades_path);
  std::printf("held-out value: %.6f over %zu pairs and %zu cascades\n",
              heldout_evaluate(allocation, cascades), allocation.size(), cascades.size());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"budgeted multi-product influence maximization toolkit"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string algo_override;
  std::string axis;
  std::string allocation_path;
  std::string cascades_path;
  int instances = 20;
  bool budget_mode = false;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* config_opt = cmd->add_option("--config", common.config_path, "experiment config JSON");
    if (needs_config) config_opt->required();
    cmd->add_option("--out", common.out_dir, "output directory");
    cmd->add_option("--seed", common.seed, "seed override")->each([&](const std::string&) {
      common.seed_set = true;
    });
    cmd->add_option("--workers", common.workers, "worker thread budget");
  };

  auto* generate = app.add_subcommand("generate", "emit networks, costs, budgets and manifest");
  add_common(generate, true);

  auto* optimize = app.add_subcommand("optimize", "run the configured algorithms once");
  add_common(optimize, true);
  optimize->add_option("--algo", algo_override,
                       "single algorithm override: budgetmax|lazy|degree|degree-local|random");

  auto* sweep_cmd = app.add_subcommand("sweep", "run one experiment per axis value");
  add_common(sweep_cmd, true);
  sweep_cmd
      ->add_option("--axis", axis,
                   "products|product_budget|user_constraint|time_window|delta|group_limit")
      ->required();

  auto* brute = app.add_subcommand("brute-check",
                                   "compare greedy against brute force on small instances");
  add_common(brute, false);
  brute->add_option("--instances", instances, "number of random instances");
  brute->add_flag("--budget-mode", budget_mode, "use group-knapsack instances");

  auto* evaluate = app.add_subcommand("evaluate", "score an allocation on held-out cascades");
  evaluate->add_option("--allocation", allocation_path, "run report JSON with an allocation array")
      ->required();
  evaluate->add_option("--cascades", cascades_path, "cascade file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (generate->parsed()) return cmd_generate(common);
    if (optimize->parsed()) return cmd_optimize(common, algo_override);
    if (sweep_cmd->parsed()) return cmd_sweep(common, axis);
    if (brute->parsed()) return cmd_brute_check(common, instances, budget_mode);
    if (evaluate->parsed()) return cmd_evaluate(allocation_path, cascades_path);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitConfig;
}
