#include "budgetmax/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "budgetmax/parallel.hpp"

namespace budgetmax {

namespace {

using nlohmann::json;

[[noreturn]] void cascade_fail(std::size_t line_no, const std::string& why) {
  std::ostringstream msg;
  msg << "cascade parse error at line " << line_no << ": " << why;
  throw ConfigError(msg.str());
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

const std::set<std::string>& known_algorithms() {
  static const std::set<std::string> names = {"budgetmax", "lazy", "degree", "degree-local",
                                              "random"};
  return names;
}

}  // namespace

std::vector<CascadeRecord> parse_cascades(std::istream& is) {
  std::vector<CascadeRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto sep = text.find(';');
    if (sep == std::string::npos) cascade_fail(line_no, "missing ';' after the product id");
    CascadeRecord record;
    const auto parse_int = [&](const std::string& token) {
      std::size_t used = 0;
      int value = 0;
      try {
        value = std::stoi(token, &used);
      } catch (const std::exception&) {
        cascade_fail(line_no, "bad integer '" + token + "'");
      }
      if (used != token.size()) cascade_fail(line_no, "bad integer '" + token + "'");
      return value;
    };
    const auto parse_time = [&](const std::string& token) {
      std::size_t used = 0;
      double value = 0;
      try {
        value = std::stod(token, &used);
      } catch (const std::exception&) {
        cascade_fail(line_no, "bad timestamp '" + token + "'");
      }
      if (used != token.size() || !std::isfinite(value))
        cascade_fail(line_no, "bad timestamp '" + token + "'");
      return value;
    };
    record.product = parse_int(trim(text.substr(0, sep)));
    if (record.product < 0) cascade_fail(line_no, "product id must be >= 0");
    std::istringstream events(text.substr(sep + 1));
    std::string item;
    while (std::getline(events, item, ',')) {
      const std::string entry = trim(item);
      const auto colon = entry.find(':');
      if (colon == std::string::npos) cascade_fail(line_no, "expected '<node>:<timestamp>'");
      CascadeEvent event;
      event.node = parse_int(trim(entry.substr(0, colon)));
      event.time = parse_time(trim(entry.substr(colon + 1)));
      if (event.node < 0) cascade_fail(line_no, "node id must be >= 0");
      if (!record.events.empty() && !(event.time > record.events.back().time))
        cascade_fail(line_no, "timestamps must be strictly increasing");
      record.events.push_back(event);
    }
    if (record.events.empty()) cascade_fail(line_no, "cascade has no events");
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<CascadeRecord> load_cascades(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open cascade file: " + path.string());
  return parse_cascades(is);
}

double heldout_evaluate(std::span<const std::pair<std::int32_t, std::int32_t>> allocation,
                        std::span<const CascadeRecord> cascades) {
  std::map<std::int32_t, std::vector<const CascadeRecord*>> by_product;
  for (const CascadeRecord& record : cascades) by_product[record.product].push_back(&record);
  double total = 0;
  for (const auto& [product, node] : allocation) {
    const auto it = by_product.find(product);
    if (it == by_product.end()) continue;
    double sum = 0;
    std::int64_t containing = 0;
    for (const CascadeRecord* record : it->second) {
      for (std::size_t pos = 0; pos < record->events.size(); ++pos) {
        if (record->events[pos].node == node) {
          sum += static_cast<double>(record->events.size() - pos - 1);
          ++containing;
          break;
        }
      }
    }
    if (containing > 0) total += sum / static_cast<double>(containing);
  }
  return total;
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "products") return SweepAxis::kProducts;
  if (name == "product_budget") return SweepAxis::kProductBudget;
  if (name == "user_constraint") return SweepAxis::kUserConstraint;
  if (name == "time_window") return SweepAxis::kTimeWindow;
  if (name == "delta") return SweepAxis::kDelta;
  if (name == "group_limit") return SweepAxis::kGroupLimit;
  throw ConfigError("unknown sweep axis: " + name);
}

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kProducts: return "products";
    case SweepAxis::kProductBudget: return "product_budget";
    case SweepAxis::kUserConstraint: return "user_constraint";
    case SweepAxis::kTimeWindow: return "time_window";
    case SweepAxis::kDelta: return "delta";
    case SweepAxis::kGroupLimit: return "group_limit";
  }
  return "unknown";
}

std::vector<double> default_axis_values(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kProducts: return {2, 4, 8};
    case SweepAxis::kProductBudget: return {1, 2, 4, 8};
    case SweepAxis::kUserConstraint: return {1, 2, 4};
    case SweepAxis::kTimeWindow: return {1, 2, 5, 10};
    case SweepAxis::kDelta: return {0.01, 0.1, 0.5, 1.0};
    case SweepAxis::kGroupLimit: return {4, 8, 16};
  }
  return {};
}

namespace {

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["products"] = c.products;
  j["candidates"] = c.candidates;
  j["power"] = c.power;
  j["network_types"] = c.network_types;
  j["horizon"] = c.horizon;
  j["horizons"] = c.horizons;
  j["samples"] = c.samples;
  j["weights"] = c.weights;
  j["user_capacity"] = c.user_capacity;
  j["user_capacities"] = c.user_capacities;
  j["budget_mode"] = c.budget_mode;
  j["product_capacity"] = c.product_capacity;
  j["product_capacities"] = c.product_capacities;
  j["budgets"] = c.budgets;
  j["raw_costs"] = c.raw_costs;
  j["cost_exponent"] = c.cost_exponent;
  j["group_count"] = c.group_count;
  j["group_limit"] = c.group_limit;
  j["group_members"] = c.group_members;
  j["group_limits"] = c.group_limits;
  j["delta"] = c.delta;
  j["algorithms"] = c.algorithms;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["axis_values"] = c.axis_values;
  j["assets_dir"] = c.assets_dir;
  j["cascades_path"] = c.cascades_path;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  static const std::set<std::string> known_keys = {
      "products",      "candidates",  "power",      "network_types", "horizon",
      "horizons",      "samples",     "weights",    "user_capacity", "user_capacities",
      "budget_mode",   "product_capacity", "product_capacities", "budgets", "raw_costs",
      "cost_exponent", "group_count", "group_limit", "group_members", "group_limits",
      "delta",         "algorithms",  "seed",       "workers",       "axis_values",
      "assets_dir",    "cascades_path"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known_keys.count(key)) throw ConfigError("unknown config key: " + key);
  ExperimentConfig c;
  try {
    c.products = j.value("products", c.products);
    c.candidates = j.value("candidates", c.candidates);
    c.power = j.value("power", c.power);
    c.network_types = j.value("network_types", c.network_types);
    c.horizon = j.value("horizon", c.horizon);
    c.horizons = j.value("horizons", c.horizons);
    c.samples = j.value("samples", c.samples);
    c.weights = j.value("weights", c.weights);
    c.user_capacity = j.value("user_capacity", c.user_capacity);
    c.user_capacities = j.value("user_capacities", c.user_capacities);
    c.budget_mode = j.value("budget_mode", c.budget_mode);
    c.product_capacity = j.value("product_capacity", c.product_capacity);
    c.product_capacities = j.value("product_capacities", c.product_capacities);
    c.budgets = j.value("budgets", c.budgets);
    c.raw_costs = j.value("raw_costs", c.raw_costs);
    c.cost_exponent = j.value("cost_exponent", c.cost_exponent);
    c.group_count = j.value("group_count", c.group_count);
    c.group_limit = j.value("group_limit", c.group_limit);
    c.group_members = j.value("group_members", c.group_members);
    c.group_limits = j.value("group_limits", c.group_limits);
    c.delta = j.value("delta", c.delta);
    c.algorithms = j.value("algorithms", c.algorithms);
    c.seed = j.value("seed", c.seed);
    c.workers = j.value("workers", c.workers);
    c.axis_values = j.value("axis_values", c.axis_values);
    c.assets_dir = j.value("assets_dir", c.assets_dir);
    c.cascades_path = j.value("cascades_path", c.cascades_path);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config type error: ") + e.what());
  }
  return c;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path.string());
  std::stringstream buffer;
  buffer << is.rdbuf();
  return from_json_text(buffer.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c = config_from_json(j);
  c.validate();
  return c;
}

std::string ExperimentConfig::to_json_text() const {
  return config_to_json(*this).dump(2);
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& why) { throw ConfigError("invalid config: " + why); };
  if (products < 1) fail("products must be >= 1");
  if (candidates < 1) fail("candidates must be >= 1");
  if (power < 1 || power > 20) fail("power must lie in [1, 20]");
  if (static_cast<std::int64_t>(candidates) > (std::int64_t{1} << power))
    fail("more candidates than nodes");
  if (samples < 1) fail("samples must be >= 1");
  if (horizon < 0) fail("horizon must be >= 0");
  if (!horizons.empty() && static_cast<std::int32_t>(horizons.size()) != products)
    fail("horizons must list one value per product");
  for (double t : horizons)
    if (t < 0) fail("horizons must be >= 0");
  if (!weights.empty() && static_cast<std::int32_t>(weights.size()) != products)
    fail("weights must list one value per product");
  for (double w : weights)
    if (!(w > 0)) fail("weights must be positive");
  if (user_capacity < 0) fail("user_capacity must be >= 0");
  if (!user_capacities.empty()) {
    if (static_cast<std::int32_t>(user_capacities.size()) != candidates)
      fail("user_capacities must list one value per candidate");
    for (std::int32_t cap : user_capacities)
      if (cap < 0) fail("user_capacities must be >= 0");
  }
  if (budget_mode) {
    if (!budgets.empty() && static_cast<std::int32_t>(budgets.size()) != products)
      fail("budgets must list one value per product");
    for (double b : budgets)
      if (!(b > 0)) fail("budgets must be positive");
    if (!raw_costs.empty()) {
      if (static_cast<std::int32_t>(raw_costs.size()) != products)
        fail("raw_costs must list one row per product");
      for (const auto& row : raw_costs) {
        if (static_cast<std::int32_t>(row.size()) != candidates)
          fail("raw_costs rows must list one value per candidate");
        for (double c : row)
          if (!(c > 0)) fail("raw_costs must be positive");
      }
    }
    if (!product_capacities.empty())
      fail("product_capacities require the uniform-cost mode (capacities and budgets are exclusive)");
  } else {
    if (!budgets.empty()) fail("budgets require budget_mode (capacities and budgets are exclusive)");
    if (!raw_costs.empty()) fail("raw_costs require budget_mode");
    if (product_capacity < 0) fail("product_capacity must be >= 0");
    if (!product_capacities.empty()) {
      if (static_cast<std::int32_t>(product_capacities.size()) != products)
        fail("product_capacities must list one value per product");
      for (std::int32_t cap : product_capacities)
        if (cap < 0) fail("product_capacities must be >= 0");
    }
  }
  if (cost_exponent < 0) fail("cost_exponent must be >= 0");
  if (group_count < 0) fail("group_count must be >= 0");
  if (group_count > 0 && candidates % group_count != 0)
    fail("group_count must divide candidates");
  if (group_limit < 0) fail("group_limit must be >= 0");
  if (group_members.size() != group_limits.size())
    fail("group_members and group_limits must have the same length");
  for (const auto& members : group_members) {
    if (members.empty()) fail("explicit groups must be non-empty");
    for (std::int32_t slot : members)
      if (slot < 0 || slot >= candidates) fail("group member slot out of range");
  }
  for (std::int32_t limit : group_limits)
    if (limit < 0) fail("group_limits must be >= 0");
  if (!group_members.empty() && group_count > 0)
    fail("use either group_count or explicit group_members, not both");
  if (!(delta > 0)) fail("delta must be > 0");
  if (algorithms.empty()) fail("at least one algorithm required");
  for (const std::string& name : algorithms) {
    if (!known_algorithms().count(name)) fail("unknown algorithm: " + name);
    if (name == "degree-local" && group_count <= 0 && group_members.empty())
      fail("degree-local requires candidate groups");
  }
  if (workers < 1) fail("workers must be >= 1");
  for (double v : axis_values)
    if (!(v > 0)) fail("axis values must be positive");
  if (!assets_dir.empty() && !std::filesystem::exists(std::filesystem::path(assets_dir) / "manifest.json"))
    fail("assets_dir has no manifest.json: " + assets_dir);
  if (!cascades_path.empty() && !std::filesystem::exists(cascades_path))
    fail("cascades_path does not exist: " + cascades_path);
}

std::vector<std::pair<std::int32_t, std::int32_t>> PreparedExperiment::allocation_nodes(
    std::span<const GroundElement> solution) const {
  std::vector<std::pair<std::int32_t, std::int32_t>> out;
  out.reserve(solution.size());
  for (GroundElement z : solution)
    out.emplace_back(z.product, assets.candidates[static_cast<std::size_t>(z.user)]);
  return out;
}

PreparedExperiment prepare_experiment(const ExperimentConfig& config) {
  config.validate();
  PreparedExperiment prepared;
  if (!config.assets_dir.empty()) {
    prepared.assets = load_assets(config.assets_dir);
    if (prepared.assets.spec.products < config.products)
      throw ConfigError("assets_dir provides fewer products than requested");
    if (static_cast<std::int32_t>(prepared.assets.candidates.size()) != config.candidates)
      throw ConfigError("assets_dir candidate count does not match the config");
    const auto keep = static_cast<std::ptrdiff_t>(config.products);
    auto& a = prepared.assets;
    a.networks.erase(a.networks.begin() + keep, a.networks.end());
    a.types.erase(a.types.begin() + keep, a.types.end());
    a.raw_costs.erase(a.raw_costs.begin() + keep, a.raw_costs.end());
    a.budgets.erase(a.budgets.begin() + keep, a.budgets.end());
  } else {
    AssetSpec spec;
    spec.products = config.products;
    spec.candidates = config.candidates;
    spec.power = config.power;
    spec.types = config.network_types;
    spec.cost_exponent = config.cost_exponent;
    spec.group_count = config.group_count;
    spec.seed = config.seed;
    prepared.assets = generate_assets(spec);
  }

  prepared.banks.reserve(static_cast<std::size_t>(config.products));
  prepared.indices.reserve(static_cast<std::size_t>(config.products));
  for (std::int32_t i = 0; i < config.products; ++i) {
    const DiffusionNetwork& net = prepared.assets.networks[static_cast<std::size_t>(i)];
    const double horizon_i =
        config.horizons.empty() ? config.horizon : config.horizons[static_cast<std::size_t>(i)];
    prepared.banks.push_back(
        SampleBank::build(net, config.samples, derive_seed(config.seed, 5000 + static_cast<std::uint64_t>(i))));
    prepared.indices.push_back(CoverageIndex::build(prepared.banks.back(), net,
                                                    prepared.assets.candidates, horizon_i,
                                                    config.workers));
  }

  std::vector<const CoverageIndex*> index_ptrs;
  for (const auto& index : prepared.indices) index_ptrs.push_back(&index);
  prepared.objective = std::make_unique<Objective>(std::move(index_ptrs), config.weights);

  for (const auto& net : prepared.assets.networks) prepared.networks.push_back(&net);

  std::vector<std::pair<std::vector<std::int32_t>, std::int32_t>> limited_groups;
  if (!config.group_members.empty()) {
    for (std::size_t g = 0; g < config.group_members.size(); ++g)
      limited_groups.emplace_back(config.group_members[g],
                                  config.group_limits[g]);
  } else if (config.group_count > 0) {
    const std::int32_t per_group = config.candidates / config.group_count;
    for (std::int32_t g = 0; g < config.group_count; ++g) {
      std::vector<std::int32_t> slots;
      for (std::int32_t s = 0; s < per_group; ++s) slots.push_back(g * per_group + s);
      limited_groups.emplace_back(std::move(slots), config.group_limit);
    }
  }
  for (const auto& [slots, limit] : limited_groups) prepared.user_groups.push_back(slots);

  const GroundLayout layout{config.products, config.candidates};
  std::vector<std::shared_ptr<const Matroid>> matroids;
  matroids.push_back(std::make_shared<PartitionMatroid>(PartitionMatroid::per_user(
      layout.products, layout.users,
      config.user_capacities.empty()
          ? std::vector<std::int32_t>(static_cast<std::size_t>(layout.users),
                                      config.user_capacity)
          : config.user_capacities)));
  std::optional<GroupKnapsack> knapsack;
  if (config.budget_mode) {
    const std::vector<double>& budgets =
        config.budgets.empty() ? prepared.assets.budgets : config.budgets;
    const auto& raw = config.raw_costs.empty() ? prepared.assets.raw_costs : config.raw_costs;
    knapsack = normalize_costs(raw, budgets);
  } else {
    matroids.push_back(std::make_shared<PartitionMatroid>(PartitionMatroid::per_product(
        layout.products, layout.users,
        config.product_capacities.empty()
            ? std::vector<std::int32_t>(static_cast<std::size_t>(layout.products),
                                        config.product_capacity)
            : config.product_capacities)));
  }
  if (!limited_groups.empty())
    matroids.push_back(std::make_shared<LaminarMatroid>(
        LaminarMatroid::over_user_groups(layout.products, layout.users, limited_groups)));
  prepared.system =
      std::make_unique<ConstraintSystem>(layout, std::move(matroids), std::move(knapsack));
  return prepared;
}

namespace {

RunReport dispatch_algorithm(const std::string& name, const ExperimentConfig& config,
                             const PreparedExperiment& prepared, double delta, int grid_workers) {
  const Objective& objective = *prepared.objective;
  const ConstraintSystem& system = *prepared.system;
  if (name == "budgetmax") {
    if (config.budget_mode)
      return density_enumeration(objective, system, delta, grid_workers).best;
    RunReport report = uniform_cost_greedy(objective, system, delta);
    report.algorithm = "budgetmax";
    return report;
  }
  if (name == "lazy") return lazy_greedy(objective, system);
  if (name == "degree")
    return greedy_degree(std::span<const DiffusionNetwork* const>(prepared.networks), objective,
                         system);
  if (name == "degree-local")
    return greedy_degree_local(std::span<const DiffusionNetwork* const>(prepared.networks),
                               objective, system, prepared.user_groups);
  if (name == "random")
    return random_allocation(objective, system, derive_seed(config.seed, 77));
  throw ConfigError("unknown algorithm: " + name);
}

struct HeldoutData {
  std::vector<CascadeRecord> cascades;
  bool enabled = false;
};

HeldoutData load_heldout(const ExperimentConfig& config) {
  HeldoutData data;
  if (!config.cascades_path.empty()) {
    data.cascades = load_cascades(config.cascades_path);
    data.enabled = true;
  }
  return data;
}

std::vector<RunRow> run_prepared(const ExperimentConfig& config,
                                 const PreparedExperiment& prepared, const HeldoutData& heldout,
                                 const std::string& axis, double axis_value, double delta,
                                 int grid_workers) {
  std::vector<RunRow> rows;
  for (const std::string& name : config.algorithms) {
    RunRow row;
    row.algorithm = name;
    row.axis = axis;
    row.axis_value = axis_value;
    row.seed = config.seed;
    row.report = dispatch_algorithm(name, config, prepared, delta, grid_workers);
    if (heldout.enabled)
      row.heldout = heldout_evaluate(prepared.allocation_nodes(row.report.solution),
                                     heldout.cascades);
    rows.push_back(std::move(row));
  }
  return rows;
}

ExperimentConfig apply_axis(const ExperimentConfig& base, SweepAxis axis, double value) {
  ExperimentConfig c = base;
  switch (axis) {
    case SweepAxis::kProducts:
      c.products = static_cast<std::int32_t>(value);
      if (!c.weights.empty()) c.weights.resize(static_cast<std::size_t>(c.products), 1.0);
      if (!c.horizons.empty()) c.horizons.resize(static_cast<std::size_t>(c.products), c.horizon);
      if (!c.budgets.empty()) c.budgets.resize(static_cast<std::size_t>(c.products), 1.0);
      break;
    case SweepAxis::kProductBudget:
      if (c.budget_mode)
        c.budgets.assign(static_cast<std::size_t>(c.products), value);
      else
        c.product_capacity = static_cast<std::int32_t>(value);
      break;
    case SweepAxis::kUserConstraint:
      c.user_capacity = static_cast<std::int32_t>(value);
      break;
    case SweepAxis::kTimeWindow:
      c.horizon = value;
      c.horizons.clear();
      break;
    case SweepAxis::kDelta:
      c.delta = value;
      break;
    case SweepAxis::kGroupLimit:
      c.group_limit = static_cast<std::int32_t>(value);
      break;
  }
  c.validate();
  return c;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.resolved_config_json = config.to_json_text();
  const PreparedExperiment prepared = prepare_experiment(config);
  const HeldoutData heldout = load_heldout(config);
  result.rows = run_prepared(config, prepared, heldout, "", 0.0, config.delta, config.workers);
  return result;
}

ExperimentResult sweep(const ExperimentConfig& config, SweepAxis axis) {
  config.validate();
  if (axis == SweepAxis::kGroupLimit && config.group_count <= 0)
    throw ConfigError("group_limit sweeps require group_count > 0");
  const std::vector<double> values =
      config.axis_values.empty() ? default_axis_values(axis) : config.axis_values;
  ExperimentResult result;
  result.resolved_config_json = config.to_json_text();
  const HeldoutData heldout = load_heldout(config);
  const std::string axis_label = axis_name(axis);

  std::vector<std::vector<RunRow>> per_point(values.size());
  if (axis == SweepAxis::kDelta) {
    // The instance does not depend on delta: prepare once, reference the
    // lazy baseline once, then run each delta against the shared instance.
    const PreparedExperiment prepared = prepare_experiment(config);
    const RunReport lazy_ref = lazy_greedy(*prepared.objective, *prepared.system);
    parallel_for(values.size(), config.workers, [&](std::size_t i) {
      ExperimentConfig point = apply_axis(config, axis, values[i]);
      per_point[i] = run_prepared(point, prepared, heldout, axis_label, values[i], point.delta, 1);
      for (RunRow& row : per_point[i])
        if (lazy_ref.value > 0) row.relative_to_lazy = row.report.value / lazy_ref.value;
    });
  } else {
    parallel_for(values.size(), config.workers, [&](std::size_t i) {
      ExperimentConfig point = apply_axis(config, axis, values[i]);
      point.workers = 1;  // concurrency lives at the sweep level here
      const PreparedExperiment prepared = prepare_experiment(point);
      per_point[i] = run_prepared(point, prepared, heldout, axis_label, values[i], point.delta, 1);
    });
  }
  for (auto& rows : per_point)
    for (auto& row : rows) result.rows.push_back(std::move(row));
  return result;
}

void write_rows_csv(const ExperimentResult& result, std::ostream& os) {
  os << "algo,axis,axis_value,seed,objective,heldout,rel_lazy,k_a,evaluations,selected,wall_ms\n";
  for (const RunRow& row : result.rows) {
    os << row.algorithm << ',' << row.axis << ',' << format_double(row.axis_value) << ','
       << row.seed << ',' << format_double(row.report.value) << ','
       << (row.heldout ? format_double(*row.heldout) : std::string()) << ','
       << (row.relative_to_lazy ? format_double(*row.relative_to_lazy) : std::string()) << ','
       << row.report.active_knapsacks << ',' << row.report.evaluations << ','
       << row.report.solution.size() << ',' << format_double(row.report.wall_ms) << '\n';
  }
}

void write_rows_csv_file(const ExperimentResult& result, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open csv for writing: " + path.string());
  write_rows_csv(result, os);
}

std::string report_json(const RunRow& row, const ExperimentConfig& config,
                        const PreparedExperiment& prepared) {
  json j;
  j["algorithm"] = row.report.algorithm;
  j["delta"] = row.report.delta;
  j["rho"] = row.report.rho;
  j["value"] = row.report.value;
  j["k_a"] = row.report.active_knapsacks;
  j["evaluations"] = row.report.evaluations;
  j["wall_ms"] = row.report.wall_ms;
  j["thresholds"] = row.report.thresholds;
  j["selected_per_threshold"] = row.report.selected_per_threshold;
  json selections = json::array();
  for (const SelectionRecord& record : row.report.selections)
    selections.push_back({{"product", record.element.product},
                          {"user", record.element.user},
                          {"gain", record.gain},
                          {"threshold", record.threshold},
                          {"density_floor", record.density_floor},
                          {"threshold_index", record.threshold_index}});
  j["selections"] = selections;
  if (!row.report.blocking_sizes.empty()) j["blocking_sizes"] = row.report.blocking_sizes;
  json solution = json::array();
  for (GroundElement z : row.report.solution) solution.push_back({z.product, z.user});
  j["solution_slots"] = solution;
  json allocation = json::array();
  for (const auto& [product, node] : prepared.allocation_nodes(row.report.solution))
    allocation.push_back({product, node});
  j["allocation"] = allocation;
  if (row.heldout) j["heldout"] = *row.heldout;
  if (row.relative_to_lazy) j["relative_to_lazy"] = *row.relative_to_lazy;
  j["config"] = json::parse(config.to_json_text());
  return j.dump(2);
}

}  // namespace budgetmax
