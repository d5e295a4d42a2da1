#include "budgetmax/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace budgetmax {

namespace {

using nlohmann::json;

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

constexpr std::int32_t kMaxPower = 20;

}  // namespace

KroneckerSpec kronecker_spec(KroneckerType type, std::int32_t power) {
  KroneckerSpec spec;
  spec.power = power;
  spec.type = type;
  switch (type) {
    case KroneckerType::kCorePeriphery:
      spec.seed = {{{0.9, 0.5}, {0.5, 0.3}}};
      break;
    case KroneckerType::kRandom:
      spec.seed = {{{0.5, 0.5}, {0.5, 0.5}}};
      break;
    case KroneckerType::kHierarchical:
      spec.seed = {{{0.9, 0.1}, {0.1, 0.9}}};
      break;
  }
  return spec;
}

KroneckerSpec kronecker_spec(const std::string& type_name, std::int32_t power) {
  if (type_name == "core-periphery") return kronecker_spec(KroneckerType::kCorePeriphery, power);
  if (type_name == "random") return kronecker_spec(KroneckerType::kRandom, power);
  if (type_name == "hierarchical") return kronecker_spec(KroneckerType::kHierarchical, power);
  throw std::invalid_argument("unknown network type: " + type_name);
}

std::string kronecker_type_name(KroneckerType type) {
  switch (type) {
    case KroneckerType::kCorePeriphery:
      return "core-periphery";
    case KroneckerType::kRandom:
      return "random";
    case KroneckerType::kHierarchical:
      return "hierarchical";
  }
  return "unknown";
}

double kronecker_probability(const KroneckerSpec& spec, std::int64_t u, std::int64_t v) {
  require(spec.power >= 1 && spec.power <= kMaxPower, "power out of range");
  for (const auto& row : spec.seed)
    for (double p : row) require(p >= 0.0 && p <= 1.0, "seed entries must be probabilities");
  const std::int64_t n = std::int64_t{1} << spec.power;
  require(u >= 0 && u < n && v >= 0 && v < n, "node id out of range");
  double prob = 1.0;
  for (std::int32_t bit = 0; bit < spec.power; ++bit)
    prob *= spec.seed[static_cast<std::size_t>((u >> bit) & 1)]
                     [static_cast<std::size_t>((v >> bit) & 1)];
  return prob;
}

std::vector<std::pair<std::int32_t, std::int32_t>> sample_kronecker_edges(
    const KroneckerSpec& spec, Engine& rng) {
  const std::int64_t n = std::int64_t{1} << spec.power;
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  for (std::int64_t u = 0; u < n; ++u) {
    for (std::int64_t v = 0; v < n; ++v) {
      if (u == v) continue;
      if (uniform_unit(rng) < kronecker_probability(spec, u, v))
        edges.emplace_back(static_cast<std::int32_t>(u), static_cast<std::int32_t>(v));
    }
  }
  return edges;
}

std::vector<TransmissionFunction> assign_weibull(std::size_t edge_count, Engine& rng) {
  std::vector<TransmissionFunction> out;
  out.reserve(edge_count);
  for (std::size_t i = 0; i < edge_count; ++i) {
    const double shape = uniform_range(rng, 1.0, 10.0);
    const double scale = uniform_range(rng, 1.0, 10.0);
    out.push_back(TransmissionFunction::weibull(shape, scale));
  }
  return out;
}

DiffusionNetwork make_kronecker_network(const KroneckerSpec& spec, std::int32_t product_id,
                                        std::uint64_t seed) {
  Engine rng = make_engine(seed);
  const auto pairs = sample_kronecker_edges(spec, rng);
  const auto dynamics = assign_weibull(pairs.size(), rng);
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    edges.push_back({pairs[i].first, pairs[i].second, dynamics[i]});
  return DiffusionNetwork(std::int32_t{1} << spec.power, product_id, std::move(edges));
}

std::vector<double> degree_costs(std::span<const std::int32_t> degrees, double exponent) {
  require(exponent >= 0, "cost exponent must be >= 0");
  require(!degrees.empty(), "degree list must be non-empty");
  std::vector<double> costs;
  costs.reserve(degrees.size());
  double max_cost = 0;
  for (std::int32_t d : degrees) {
    require(d >= 0, "degrees must be >= 0");
    const double c = std::pow(static_cast<double>(d) + 1.0, -exponent);
    costs.push_back(c);
    max_cost = std::max(max_cost, c);
  }
  for (double& c : costs) c /= max_cost;
  return costs;
}

std::vector<double> generate_budgets(std::int32_t products, Engine& rng) {
  std::vector<double> budgets;
  budgets.reserve(static_cast<std::size_t>(products));
  for (std::int32_t i = 0; i < products; ++i) {
    const double base = 1.0 + static_cast<double>(uniform_below(rng, 10));  // integer in [1, 10]
    budgets.push_back(base + uniform_unit(rng));
  }
  return budgets;
}

GeneratedAssets generate_assets(const AssetSpec& spec) {
  require(spec.products >= 1, "at least one product required");
  require(spec.candidates >= 1, "at least one candidate required");
  require(spec.power >= 1 && spec.power <= kMaxPower, "power out of range");
  const std::int64_t nodes = std::int64_t{1} << spec.power;
  require(spec.candidates <= nodes, "more candidates than nodes");
  require(spec.group_count == 0 || spec.candidates % spec.group_count == 0,
          "group count must divide the candidate count");

  GeneratedAssets assets;
  assets.spec = spec;
  std::vector<std::string> types = spec.types;
  if (types.empty()) types = {"core-periphery", "random", "hierarchical"};

  for (std::int32_t i = 0; i < spec.products; ++i) {
    const std::string& type = types[static_cast<std::size_t>(i) % types.size()];
    assets.types.push_back(type);
    assets.networks.push_back(make_kronecker_network(
        kronecker_spec(type, spec.power), i, derive_seed(spec.seed, 1000 + static_cast<std::uint64_t>(i))));
  }

  Engine cand_rng = make_engine(derive_seed(spec.seed, 1));
  assets.candidates = sample_without_replacement(nodes, spec.candidates, cand_rng);

  assets.raw_costs.reserve(static_cast<std::size_t>(spec.products));
  for (std::int32_t i = 0; i < spec.products; ++i) {
    std::vector<std::int32_t> degrees;
    degrees.reserve(assets.candidates.size());
    for (std::int32_t node : assets.candidates)
      degrees.push_back(assets.networks[static_cast<std::size_t>(i)].out_degree(node));
    assets.raw_costs.push_back(degree_costs(degrees, spec.cost_exponent));
  }

  Engine budget_rng = make_engine(derive_seed(spec.seed, 2));
  assets.budgets = generate_budgets(spec.products, budget_rng);

  if (spec.group_count > 0) {
    const std::int32_t per_group = spec.candidates / spec.group_count;
    for (std::int32_t g = 0; g < spec.group_count; ++g) {
      std::vector<std::int32_t> slots;
      for (std::int32_t s = 0; s < per_group; ++s) slots.push_back(g * per_group + s);
      assets.candidate_groups.push_back(std::move(slots));
    }
  }
  return assets;
}

void write_assets(const GeneratedAssets& assets, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json manifest;
  manifest["seed"] = assets.spec.seed;
  manifest["power"] = assets.spec.power;
  manifest["products"] = assets.spec.products;
  manifest["cost_exponent"] = assets.spec.cost_exponent;
  manifest["candidates"] = assets.candidates;
  manifest["raw_costs"] = assets.raw_costs;
  manifest["budgets"] = assets.budgets;
  manifest["candidate_groups"] = assets.candidate_groups;
  // Costs use out-degree in the product's own network; Weibull shape and
  // scale are both drawn uniformly from [1, 10]; edges are sampled with the
  // exact per-entry Bernoulli model, not a ball-dropping approximation.
  manifest["cost_degree"] = "out";
  manifest["kronecker_sampling"] = "exact-per-entry";
  manifest["transmission"] = {
      {"family", "weibull"}, {"shape_range", {1.0, 10.0}}, {"scale_range", {1.0, 10.0}}};
  json nets = json::array();
  for (std::size_t i = 0; i < assets.networks.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "net_%03zu.txt", i);
    save_network_file(assets.networks[i], dir / name);
    nets.push_back({{"product", assets.networks[i].product_id()},
                    {"type", assets.types[i]},
                    {"file", name}});
  }
  manifest["networks"] = nets;
  std::ofstream os(dir / "manifest.json");
  if (!os) throw std::runtime_error("cannot write manifest: " + (dir / "manifest.json").string());
  os << manifest.dump(2) << "\n";
}

GeneratedAssets load_assets(const std::filesystem::path& dir) {
  std::ifstream is(dir / "manifest.json");
  if (!is) throw std::runtime_error("cannot open manifest: " + (dir / "manifest.json").string());
  json manifest = json::parse(is);
  GeneratedAssets assets;
  assets.spec.seed = manifest.at("seed").get<std::uint64_t>();
  assets.spec.power = manifest.at("power").get<std::int32_t>();
  assets.spec.products = manifest.at("products").get<std::int32_t>();
  assets.spec.cost_exponent = manifest.at("cost_exponent").get<double>();
  assets.candidates = manifest.at("candidates").get<std::vector<std::int32_t>>();
  assets.spec.candidates = static_cast<std::int32_t>(assets.candidates.size());
  assets.raw_costs = manifest.at("raw_costs").get<std::vector<std::vector<double>>>();
  assets.budgets = manifest.at("budgets").get<std::vector<double>>();
  assets.candidate_groups =
      manifest.at("candidate_groups").get<std::vector<std::vector<std::int32_t>>>();
  assets.spec.group_count = static_cast<std::int32_t>(assets.candidate_groups.size());
  for (const auto& net : manifest.at("networks")) {
    assets.types.push_back(net.at("type").get<std::string>());
    assets.networks.push_back(load_network_file(dir / net.at("file").get<std::string>()));
  }
  if (static_cast<std::int32_t>(assets.networks.size()) != assets.spec.products)
    throw std::runtime_error("manifest product count does not match network files");
  return assets;
}

}  // namespace budgetmax
