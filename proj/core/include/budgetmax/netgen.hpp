#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "budgetmax/diffusion.hpp"
#include "budgetmax/rng.hpp"

namespace budgetmax {

enum class KroneckerType { kCorePeriphery, kRandom, kHierarchical };

struct KroneckerSpec {
  std::array<std::array<double, 2>, 2> seed{{{0.5, 0.5}, {0.5, 0.5}}};
  std::int32_t power = 8;  // network has 2^power nodes
  KroneckerType type = KroneckerType::kRandom;
};

/// Canonical 2x2 parameter matrices: core-periphery [0.9 0.5; 0.5 0.3],
/// random [0.5 0.5; 0.5 0.5], hierarchical [0.9 0.1; 0.1 0.9].
KroneckerSpec kronecker_spec(KroneckerType type, std::int32_t power);
KroneckerSpec kronecker_spec(const std::string& type_name, std::int32_t power);
std::string kronecker_type_name(KroneckerType type);

/// Entry (u, v) of the p-fold Kronecker power, computed from the bit
/// decomposition without materializing the matrix.
double kronecker_probability(const KroneckerSpec& spec, std::int64_t u, std::int64_t v);

/// Exact per-entry Bernoulli sampling over all ordered pairs u != v.
std::vector<std::pair<std::int32_t, std::int32_t>> sample_kronecker_edges(
    const KroneckerSpec& spec, Engine& rng);

/// Weibull dynamics with shape and scale each uniform on [1, 10] per edge.
std::vector<TransmissionFunction> assign_weibull(std::size_t edge_count, Engine& rng);

/// Kronecker structure plus Weibull dynamics, deterministic in the seed.
DiffusionNetwork make_kronecker_network(const KroneckerSpec& spec, std::int32_t product_id,
                                        std::uint64_t seed);

/// Degree-decaying costs: (d_j + 1)^(-exponent), rescaled so the maximum
/// cost is exactly 1. The +1 keeps isolated candidates finite.
std::vector<double> degree_costs(std::span<const std::int32_t> degrees, double exponent);

/// Budgets B_i = uniform integer in [1, 10] plus uniform real in [0, 1).
std::vector<double> generate_budgets(std::int32_t products, Engine& rng);

struct AssetSpec {
  std::int32_t products = 8;
  std::int32_t candidates = 64;
  std::int32_t power = 10;
  std::vector<std::string> types;  // cycled per product; defaults to all three
  double cost_exponent = 3.0;
  std::int32_t group_count = 0;  // 0 disables candidate groups
  std::uint64_t seed = 1;
};

struct GeneratedAssets {
  AssetSpec spec;
  std::vector<DiffusionNetwork> networks;
  std::vector<std::string> types;               // resolved per product
  std::vector<std::int32_t> candidates;         // sorted node ids
  std::vector<std::vector<double>> raw_costs;   // L x C, degree-based per product
  std::vector<double> budgets;                  // L
  std::vector<std::vector<std::int32_t>> candidate_groups;  // slot lists, maybe empty
};

GeneratedAssets generate_assets(const AssetSpec& spec);

/// Writes net_###.txt files plus manifest.json (costs, budgets, candidate
/// set, seeds, transmission note) into `dir`.
void write_assets(const GeneratedAssets& assets, const std::filesystem::path& dir);
GeneratedAssets load_assets(const std::filesystem::path& dir);

}  // namespace budgetmax
