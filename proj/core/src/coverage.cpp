#include "budgetmax/coverage.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "budgetmax/parallel.hpp"

namespace budgetmax {

namespace {

constexpr char kMagic[7] = {'B', 'M', 'A', 'X', 'C', 'I', 'X'};
constexpr std::uint8_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "coverage cache io assumes a little-endian host");

template <typename T>
void write_raw(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
void write_vec(std::ostream& os, const std::vector<T>& v) {
  const std::uint64_t n = v.size();
  write_raw(os, n);
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(n * sizeof(T)));
}

template <typename T>
T read_raw(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!is) throw std::runtime_error("coverage cache: truncated stream");
  return v;
}

template <typename T>
std::vector<T> read_vec(std::istream& is) {
  const auto n = read_raw<std::uint64_t>(is);
  std::vector<T> v(n);
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
  if (!is) throw std::runtime_error("coverage cache: truncated stream");
  return v;
}

}  // namespace

SampleBank SampleBank::build(const DiffusionNetwork& net, std::int32_t sample_count,
                             std::uint64_t seed) {
  if (sample_count < 1) throw std::invalid_argument("sample count must be >= 1");
  SampleBank bank;
  bank.sample_count_ = sample_count;
  bank.edge_count_ = net.edge_count();
  bank.product_id_ = net.product_id();
  bank.seed_ = seed;
  bank.delays_.resize(static_cast<std::size_t>(sample_count) *
                      static_cast<std::size_t>(bank.edge_count_));
  for (std::int32_t s = 0; s < sample_count; ++s) {
    Engine rng = make_engine(derive_seed(seed, static_cast<std::uint64_t>(s)));
    double* row = bank.delays_.data() +
                  static_cast<std::size_t>(s) * static_cast<std::size_t>(bank.edge_count_);
    for (std::int32_t e = 0; e < bank.edge_count_; ++e)
      row[e] = net.edges()[static_cast<std::size_t>(e)].delay.sample(rng);
  }
  return bank;
}

std::span<const double> SampleBank::delays(std::int32_t sample) const {
  if (sample < 0 || sample >= sample_count_) throw std::out_of_range("sample out of range");
  return {delays_.data() + static_cast<std::size_t>(sample) * static_cast<std::size_t>(edge_count_),
          static_cast<std::size_t>(edge_count_)};
}

std::size_t CoverageIndex::cell(std::int32_t sample, std::int32_t slot) const {
  return static_cast<std::size_t>(sample) * candidates_.size() + static_cast<std::size_t>(slot);
}

CoverageIndex CoverageIndex::build(const SampleBank& bank, const DiffusionNetwork& net,
                                   std::span<const std::int32_t> candidates, double horizon,
                                   int workers) {
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  if (bank.edge_count() != net.edge_count() || bank.product_id() != net.product_id())
    throw std::invalid_argument("sample bank does not belong to this network");
  CoverageIndex index;
  index.sample_count_ = bank.sample_count();
  index.node_count_ = net.node_count();
  index.product_id_ = net.product_id();
  index.horizon_ = horizon;
  index.bank_seed_ = bank.seed();
  index.network_hash_ = net.structure_hash();
  index.candidates_.assign(candidates.begin(), candidates.end());
  for (std::int32_t slot = 0; slot < index.candidate_count(); ++slot) {
    const std::int32_t id = index.candidates_[static_cast<std::size_t>(slot)];
    if (id < 0 || id >= net.node_count()) throw std::invalid_argument("candidate id out of range");
    if (!index.slot_of_.emplace(id, slot).second)
      throw std::invalid_argument("duplicate candidate id");
  }

  const std::size_t r = static_cast<std::size_t>(index.sample_count_);
  const std::size_t c = index.candidates_.size();
  std::vector<std::vector<std::int32_t>> per_sample(r);
  std::vector<std::uint64_t> sizes(r * c, 0);
  parallel_for(r, workers, [&](std::size_t s) {
    ReachComputer reach(net);
    auto delays = bank.delays(static_cast<std::int32_t>(s));
    auto& buf = per_sample[s];
    for (std::size_t slot = 0; slot < c; ++slot) {
      const std::size_t before = buf.size();
      reach.reach_within(delays, index.candidates_[slot], horizon, buf);
      sizes[s * c + slot] = buf.size() - before;
    }
  });

  index.offsets_.assign(r * c + 1, 0);
  for (std::size_t i = 0; i < r * c; ++i) index.offsets_[i + 1] = index.offsets_[i] + sizes[i];
  index.reach_nodes_.resize(static_cast<std::size_t>(index.offsets_.back()));
  parallel_for(r, workers, [&](std::size_t s) {
    const auto& buf = per_sample[s];
    std::copy(buf.begin(), buf.end(),
              index.reach_nodes_.begin() + static_cast<std::ptrdiff_t>(index.offsets_[s * c]));
  });
  return index;
}

std::int32_t CoverageIndex::candidate_id(std::int32_t slot) const {
  if (slot < 0 || slot >= candidate_count()) throw std::out_of_range("candidate slot out of range");
  return candidates_[static_cast<std::size_t>(slot)];
}

std::int32_t CoverageIndex::slot_of(std::int32_t candidate_node) const {
  const auto it = slot_of_.find(candidate_node);
  return it == slot_of_.end() ? -1 : it->second;
}

std::span<const std::int32_t> CoverageIndex::reach_set(std::int32_t sample,
                                                       std::int32_t slot) const {
  if (sample < 0 || sample >= sample_count_) throw std::out_of_range("sample out of range");
  if (slot < 0 || slot >= candidate_count()) throw std::out_of_range("candidate slot out of range");
  const std::size_t i = cell(sample, slot);
  return {reach_nodes_.data() + offsets_[i], static_cast<std::size_t>(offsets_[i + 1] - offsets_[i])};
}

std::int64_t CoverageIndex::covered_total_of_slots(std::span<const std::int32_t> slots) const {
  for (std::int32_t slot : slots)
    if (slot < 0 || slot >= candidate_count())
      throw std::out_of_range("candidate slot out of range");
  std::vector<std::int32_t> mark(static_cast<std::size_t>(node_count_), -1);
  std::int64_t total = 0;
  for (std::int32_t s = 0; s < sample_count_; ++s) {
    for (std::int32_t slot : slots) {
      for (std::int32_t node : reach_set(s, slot)) {
        auto& m = mark[static_cast<std::size_t>(node)];
        if (m != s) {
          m = s;
          ++total;
        }
      }
    }
  }
  return total;
}

double CoverageIndex::influence_of_slots(std::span<const std::int32_t> slots) const {
  return static_cast<double>(covered_total_of_slots(slots)) / static_cast<double>(sample_count_);
}

double CoverageIndex::influence_of_ids(std::span<const std::int32_t> candidate_nodes) const {
  std::vector<std::int32_t> slots;
  slots.reserve(candidate_nodes.size());
  for (std::int32_t id : candidate_nodes) {
    const std::int32_t slot = slot_of(id);
    if (slot < 0) throw std::out_of_range("node is not an indexed candidate");
    slots.push_back(slot);
  }
  return influence_of_slots(slots);
}

void CoverageIndex::save(std::ostream& os) const {
  os.write(kMagic, sizeof(kMagic));
  write_raw(os, kVersion);
  write_raw(os, network_hash_);
  write_raw(os, bank_seed_);
  write_raw(os, sample_count_);
  write_raw(os, node_count_);
  write_raw(os, product_id_);
  write_raw(os, horizon_);
  write_vec(os, candidates_);
  write_vec(os, offsets_);
  write_vec(os, reach_nodes_);
  if (!os) throw std::runtime_error("coverage cache: write failed");
}

void CoverageIndex::save_file(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open coverage cache for writing: " + path.string());
  save(os);
}

CoverageIndex CoverageIndex::load(std::istream& is) {
  char magic[sizeof(kMagic)];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("coverage cache: bad magic header");
  if (read_raw<std::uint8_t>(is) != kVersion)
    throw std::runtime_error("coverage cache: unsupported version");
  CoverageIndex index;
  index.network_hash_ = read_raw<std::uint64_t>(is);
  index.bank_seed_ = read_raw<std::uint64_t>(is);
  index.sample_count_ = read_raw<std::int32_t>(is);
  index.node_count_ = read_raw<std::int32_t>(is);
  index.product_id_ = read_raw<std::int32_t>(is);
  index.horizon_ = read_raw<double>(is);
  index.candidates_ = read_vec<std::int32_t>(is);
  index.offsets_ = read_vec<std::uint64_t>(is);
  index.reach_nodes_ = read_vec<std::int32_t>(is);
  if (index.sample_count_ < 1 || index.node_count_ < 0)
    throw std::runtime_error("coverage cache: corrupt counts");
  const std::size_t cells =
      static_cast<std::size_t>(index.sample_count_) * index.candidates_.size();
  if (index.offsets_.size() != cells + 1 || index.offsets_.front() != 0 ||
      index.offsets_.back() != index.reach_nodes_.size())
    throw std::runtime_error("coverage cache: corrupt offsets");
  for (std::int32_t slot = 0; slot < index.candidate_count(); ++slot)
    index.slot_of_.emplace(index.candidates_[static_cast<std::size_t>(slot)], slot);
  return index;
}

CoverageIndex CoverageIndex::load_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open coverage cache: " + path.string());
  return load(is);
}

bool CoverageIndex::matches(const DiffusionNetwork& net, std::uint64_t seed,
                            std::int32_t sample_count, double horizon) const {
  return network_hash_ == net.structure_hash() && bank_seed_ == seed &&
         sample_count_ == sample_count && horizon_ == horizon;
}

CoverageState::CoverageState(const CoverageIndex& index)
    : index_(&index),
      covered_bits_((static_cast<std::size_t>(index.sample_count()) *
                         static_cast<std::size_t>(index.node_count()) +
                     63) /
                        64,
                    0),
      per_sample_(static_cast<std::size_t>(index.sample_count()), 0),
      member_(static_cast<std::size_t>(index.candidate_count()), 0) {}

bool CoverageState::contains(std::int32_t slot) const {
  if (slot < 0 || slot >= index_->candidate_count())
    throw std::out_of_range("candidate slot out of range");
  return member_[static_cast<std::size_t>(slot)] != 0;
}

std::int32_t CoverageState::covered_in_sample(std::int32_t sample) const {
  if (sample < 0 || sample >= index_->sample_count())
    throw std::out_of_range("sample out of range");
  return per_sample_[static_cast<std::size_t>(sample)];
}

double CoverageState::value() const {
  return static_cast<double>(covered_total_) / static_cast<double>(index_->sample_count());
}

bool CoverageState::covered(std::int32_t sample, std::int32_t node) const {
  const std::size_t bit = static_cast<std::size_t>(sample) *
                              static_cast<std::size_t>(index_->node_count()) +
                          static_cast<std::size_t>(node);
  return (covered_bits_[bit >> 6] >> (bit & 63)) & 1u;
}

std::int64_t CoverageState::marginal_covered(std::int32_t slot) const {
  if (contains(slot)) return 0;
  std::int64_t gained = 0;
  for (std::int32_t s = 0; s < index_->sample_count(); ++s)
    for (std::int32_t node : index_->reach_set(s, slot)) gained += !covered(s, node);
  return gained;
}

double CoverageState::marginal_gain(std::int32_t slot) const {
  return static_cast<double>(marginal_covered(slot)) /
         static_cast<double>(index_->sample_count());
}

void CoverageState::commit(std::int32_t slot) {
  if (contains(slot)) return;
  for (std::int32_t s = 0; s < index_->sample_count(); ++s) {
    std::int32_t gained = 0;
    for (std::int32_t node : index_->reach_set(s, slot)) {
      const std::size_t bit = static_cast<std::size_t>(s) *
                                  static_cast<std::size_t>(index_->node_count()) +
                              static_cast<std::size_t>(node);
      std::uint64_t& word = covered_bits_[bit >> 6];
      const std::uint64_t mask = 1ULL << (bit & 63);
      if (!(word & mask)) {
        word |= mask;
        ++gained;
      }
    }
    per_sample_[static_cast<std::size_t>(s)] += gained;
    covered_total_ += gained;
  }
  member_[static_cast<std::size_t>(slot)] = 1;
  sources_.push_back(slot);
}

}  // namespace budgetmax
