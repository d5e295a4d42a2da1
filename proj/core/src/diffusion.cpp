#include "budgetmax/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace budgetmax {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

std::uint64_t hash_mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t double_bits(double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  return bits;
}

}  // namespace

TransmissionFunction TransmissionFunction::exponential(double rate) {
  require(rate > 0 && std::isfinite(rate), "exponential rate must be positive");
  return TransmissionFunction(DelayFamily::kExponential, rate, 0.0);
}

TransmissionFunction TransmissionFunction::weibull(double shape, double scale) {
  require(shape > 0 && std::isfinite(shape), "weibull shape must be positive");
  require(scale > 0 && std::isfinite(scale), "weibull scale must be positive");
  return TransmissionFunction(DelayFamily::kWeibull, shape, scale);
}

TransmissionFunction TransmissionFunction::deterministic(double delay) {
  require(delay >= 0 && std::isfinite(delay), "deterministic delay must be >= 0");
  return TransmissionFunction(DelayFamily::kDeterministic, delay, 0.0);
}

double TransmissionFunction::rate() const {
  require(family_ == DelayFamily::kExponential, "not an exponential transmission function");
  return a_;
}

double TransmissionFunction::shape() const {
  require(family_ == DelayFamily::kWeibull, "not a weibull transmission function");
  return a_;
}

double TransmissionFunction::scale() const {
  require(family_ == DelayFamily::kWeibull, "not a weibull transmission function");
  return b_;
}

double TransmissionFunction::delay() const {
  require(family_ == DelayFamily::kDeterministic, "not a deterministic transmission function");
  return a_;
}

double TransmissionFunction::sample(Engine& rng) const {
  switch (family_) {
    case DelayFamily::kExponential:
      return -std::log1p(-uniform_unit(rng)) / a_;
    case DelayFamily::kWeibull:
      return b_ * std::pow(-std::log1p(-uniform_unit(rng)), 1.0 / a_);
    case DelayFamily::kDeterministic:
      return a_;
  }
  return 0.0;  // unreachable
}

double sample_delay(const TransmissionFunction& tf, Engine& rng) { return tf.sample(rng); }

DiffusionNetwork::DiffusionNetwork(std::int32_t node_count, std::int32_t product_id,
                                   std::vector<Edge> edges)
    : node_count_(node_count), product_id_(product_id), edges_(std::move(edges)) {
  require(node_count_ >= 0, "node count must be >= 0");
  for (const Edge& e : edges_) {
    require(e.src >= 0 && e.src < node_count_, "edge source out of range");
    require(e.dst >= 0 && e.dst < node_count_, "edge target out of range");
    require(e.src != e.dst, "self-loops are not allowed");
  }
  std::vector<std::int32_t> order(edges_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    const Edge& ea = edges_[static_cast<std::size_t>(a)];
    const Edge& eb = edges_[static_cast<std::size_t>(b)];
    return std::pair(ea.src, ea.dst) < std::pair(eb.src, eb.dst);
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const Edge& a = edges_[static_cast<std::size_t>(order[i - 1])];
    const Edge& b = edges_[static_cast<std::size_t>(order[i])];
    require(std::pair(a.src, a.dst) != std::pair(b.src, b.dst), "duplicate directed edge");
  }
  out_offsets_.assign(static_cast<std::size_t>(node_count_) + 1, 0);
  for (const Edge& e : edges_) ++out_offsets_[static_cast<std::size_t>(e.src) + 1];
  for (std::size_t u = 1; u < out_offsets_.size(); ++u) out_offsets_[u] += out_offsets_[u - 1];
  out_edge_ids_.resize(edges_.size());
  std::vector<std::int32_t> cursor(out_offsets_.begin(), out_offsets_.end() - 1);
  for (std::int32_t id = 0; id < edge_count(); ++id) {
    const Edge& e = edges_[static_cast<std::size_t>(id)];
    out_edge_ids_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.src)]++)] = id;
  }
}

std::span<const std::int32_t> DiffusionNetwork::out_edges(std::int32_t u) const {
  if (u < 0 || u >= node_count_) throw std::out_of_range("node id out of range");
  const auto lo = static_cast<std::size_t>(out_offsets_[static_cast<std::size_t>(u)]);
  const auto hi = static_cast<std::size_t>(out_offsets_[static_cast<std::size_t>(u) + 1]);
  return {out_edge_ids_.data() + lo, hi - lo};
}

std::int32_t DiffusionNetwork::out_degree(std::int32_t u) const {
  return static_cast<std::int32_t>(out_edges(u).size());
}

std::uint64_t DiffusionNetwork::structure_hash() const {
  std::uint64_t h = 0x42554d4158ULL;
  h = hash_mix(h, static_cast<std::uint64_t>(node_count_));
  h = hash_mix(h, static_cast<std::uint64_t>(product_id_));
  for (const Edge& e : edges_) {
    h = hash_mix(h, static_cast<std::uint64_t>(e.src));
    h = hash_mix(h, static_cast<std::uint64_t>(e.dst));
    h = hash_mix(h, static_cast<std::uint64_t>(e.delay.family()));
    switch (e.delay.family()) {
      case DelayFamily::kExponential:
        h = hash_mix(h, double_bits(e.delay.rate()));
        break;
      case DelayFamily::kWeibull:
        h = hash_mix(h, double_bits(e.delay.shape()));
        h = hash_mix(h, double_bits(e.delay.scale()));
        break;
      case DelayFamily::kDeterministic:
        h = hash_mix(h, double_bits(e.delay.delay()));
        break;
    }
  }
  return h;
}

void earliest_arrival(const DiffusionNetwork& net, std::span<const double> edge_delays,
                      std::span<const std::int32_t> sources, double horizon,
                      std::vector<double>& out_times) {
  require(horizon >= 0, "horizon must be >= 0");
  require(edge_delays.size() == static_cast<std::size_t>(net.edge_count()),
          "one delay per edge required");
  const auto n = static_cast<std::size_t>(net.node_count());
  out_times.assign(n, kInfiniteTime);
  using Item = std::pair<double, std::int32_t>;
  std::vector<Item> heap;
  auto cmp = [](const Item& a, const Item& b) { return a.first > b.first; };
  for (std::int32_t s : sources) {
    if (s < 0 || s >= net.node_count()) throw std::out_of_range("source id out of range");
    if (out_times[static_cast<std::size_t>(s)] > 0.0) {
      out_times[static_cast<std::size_t>(s)] = 0.0;
      heap.emplace_back(0.0, s);
    }
  }
  std::make_heap(heap.begin(), heap.end(), cmp);
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), cmp);
    const auto [t, u] = heap.back();
    heap.pop_back();
    if (t > out_times[static_cast<std::size_t>(u)]) continue;
    for (std::int32_t eid : net.out_edges(u)) {
      const Edge& e = net.edges()[static_cast<std::size_t>(eid)];
      const double nt = t + edge_delays[static_cast<std::size_t>(eid)];
      if (nt <= horizon && nt < out_times[static_cast<std::size_t>(e.dst)]) {
        out_times[static_cast<std::size_t>(e.dst)] = nt;
        heap.emplace_back(nt, e.dst);
        std::push_heap(heap.begin(), heap.end(), cmp);
      }
    }
  }
}

CascadeOutcome sample_cascade(const DiffusionNetwork& net, std::span<const std::int32_t> sources,
                              double horizon, Engine& rng) {
  std::vector<double> delays;
  delays.reserve(static_cast<std::size_t>(net.edge_count()));
  for (const Edge& e : net.edges()) delays.push_back(e.delay.sample(rng));
  CascadeOutcome outcome;
  earliest_arrival(net, delays, sources, horizon, outcome.infection_time);
  return outcome;
}

ReachComputer::ReachComputer(const DiffusionNetwork& net)
    : net_(&net),
      time_(static_cast<std::size_t>(net.node_count()), 0.0),
      stamp_(static_cast<std::size_t>(net.node_count()), 0) {}

void ReachComputer::reach_within(std::span<const double> edge_delays, std::int32_t source,
                                 double horizon, std::vector<std::int32_t>& out) {
  require(horizon >= 0, "horizon must be >= 0");
  if (source < 0 || source >= net_->node_count()) throw std::out_of_range("source id out of range");
  ++epoch_;
  const std::size_t base = out.size();
  auto cmp = [](const std::pair<double, std::int32_t>& a, const std::pair<double, std::int32_t>& b) {
    return a.first > b.first;
  };
  heap_.clear();
  time_[static_cast<std::size_t>(source)] = 0.0;
  stamp_[static_cast<std::size_t>(source)] = epoch_;
  heap_.emplace_back(0.0, source);
  out.push_back(source);
  while (!heap_.empty()) {
    std::pop_heap(heap_.begin(), heap_.end(), cmp);
    const auto [t, u] = heap_.back();
    heap_.pop_back();
    if (t > time_[static_cast<std::size_t>(u)]) continue;
    for (std::int32_t eid : net_->out_edges(u)) {
      const Edge& e = net_->edges()[static_cast<std::size_t>(eid)];
      const double nt = t + edge_delays[static_cast<std::size_t>(eid)];
      const auto v = static_cast<std::size_t>(e.dst);
      if (nt > horizon) continue;
      if (stamp_[v] != epoch_) {
        stamp_[v] = epoch_;
        time_[v] = nt;
        heap_.emplace_back(nt, e.dst);
        std::push_heap(heap_.begin(), heap_.end(), cmp);
        out.push_back(e.dst);
      } else if (nt < time_[v]) {
        time_[v] = nt;
        heap_.emplace_back(nt, e.dst);
        std::push_heap(heap_.begin(), heap_.end(), cmp);
      }
    }
  }
  std::sort(out.begin() + static_cast<std::ptrdiff_t>(base), out.end());
}

void save_network(const DiffusionNetwork& net, std::ostream& os) {
  os << "nodes " << net.node_count() << " product " << net.product_id() << "\n";
  os.precision(17);
  for (const Edge& e : net.edges()) {
    os << e.src << ' ' << e.dst << ' ';
    switch (e.delay.family()) {
      case DelayFamily::kExponential:
        os << "exp " << e.delay.rate();
        break;
      case DelayFamily::kWeibull:
        os << "weibull " << e.delay.shape() << ' ' << e.delay.scale();
        break;
      case DelayFamily::kDeterministic:
        os << "det " << e.delay.delay();
        break;
    }
    os << "\n";
  }
}

void save_network_file(const DiffusionNetwork& net, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open network file for writing: " + path.string());
  save_network(net, os);
  if (!os) throw std::runtime_error("failed writing network file: " + path.string());
}

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& why) {
  std::ostringstream msg;
  msg << "network parse error at line " << line_no << ": " << why;
  throw std::runtime_error(msg.str());
}

}  // namespace

DiffusionNetwork load_network(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  std::int32_t node_count = -1;
  std::int32_t product_id = -1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string kw_nodes, kw_product;
    if (!(ss >> kw_nodes >> node_count >> kw_product >> product_id) || kw_nodes != "nodes" ||
        kw_product != "product")
      parse_fail(line_no, "expected header 'nodes <N> product <P>'");
    break;
  }
  if (node_count < 0) parse_fail(line_no == 0 ? 1 : line_no, "missing header");
  std::vector<Edge> edges;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::int32_t src, dst;
    std::string kind;
    if (!(ss >> src >> dst >> kind)) parse_fail(line_no, "expected '<src> <dst> <kind> ...'");
    double p1 = 0, p2 = 0;
    if (kind == "exp") {
      if (!(ss >> p1)) parse_fail(line_no, "exp needs one parameter");
      edges.push_back({src, dst, TransmissionFunction::exponential(p1)});
    } else if (kind == "weibull") {
      if (!(ss >> p1 >> p2)) parse_fail(line_no, "weibull needs two parameters");
      edges.push_back({src, dst, TransmissionFunction::weibull(p1, p2)});
    } else if (kind == "det") {
      if (!(ss >> p1)) parse_fail(line_no, "det needs one parameter");
      edges.push_back({src, dst, TransmissionFunction::deterministic(p1)});
    } else {
      parse_fail(line_no, "unknown transmission kind '" + kind + "'");
    }
    std::string trailing;
    if (ss >> trailing) parse_fail(line_no, "unexpected trailing token '" + trailing + "'");
  }
  return DiffusionNetwork(node_count, product_id, std::move(edges));
}

DiffusionNetwork load_network_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open network file: " + path.string());
  return load_network(is);
}

}  // namespace budgetmax
