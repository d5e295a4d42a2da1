#include "budgetmax/rng.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace budgetmax {

std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t state = master;
  std::uint64_t a = splitmix64_next(state);
  state ^= stream * 0x9e3779b97f4a7c15ULL;
  std::uint64_t b = splitmix64_next(state);
  return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

Engine make_engine(std::uint64_t seed) { return Engine(seed); }

double uniform_unit(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_range(Engine& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

std::uint64_t uniform_below(Engine& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be >= 1");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::vector<std::int32_t> sample_without_replacement(std::int64_t population,
                                                     std::int32_t count,
                                                     Engine& rng) {
  if (count < 0 || population < count)
    throw std::invalid_argument("sample_without_replacement: count out of range");
  // Floyd's algorithm: O(count) draws, deterministic in the engine state.
  std::set<std::int64_t> chosen;
  for (std::int64_t i = population - count; i < population; ++i) {
    const auto j = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(i) + 1));
    if (!chosen.insert(j).second) chosen.insert(i);
  }
  std::vector<std::int32_t> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t v : chosen) out.push_back(static_cast<std::int32_t>(v));
  return out;
}

}  // namespace budgetmax
