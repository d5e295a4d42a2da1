#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace budgetmax {

using Engine = std::mt19937_64;

/// One splitmix64 step; advances `state` and returns the mixed output.
std::uint64_t splitmix64_next(std::uint64_t& state);

/// Derives an independent stream seed from a master seed. Identical
/// (master, stream) pairs always yield the same seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

Engine make_engine(std::uint64_t seed);

/// Uniform double in [0, 1) using the top 53 bits of one engine draw.
/// Hand-rolled so that sampled values do not depend on the standard
/// library's distribution implementation.
double uniform_unit(Engine& rng);

/// Uniform double in [lo, hi).
double uniform_range(Engine& rng, double lo, double hi);

/// Uniform integer in [0, bound); bound must be >= 1. Unbiased (rejection).
std::uint64_t uniform_below(Engine& rng, std::uint64_t bound);

/// Fisher-Yates shuffle driven by uniform_below.
template <typename T>
void shuffle_in_place(std::vector<T>& values, Engine& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(values[i - 1], values[j]);
  }
}

/// `count` distinct values from [0, population), sorted ascending.
std::vector<std::int32_t> sample_without_replacement(std::int64_t population,
                                                     std::int32_t count,
                                                     Engine& rng);

}  // namespace budgetmax
