#include "swarmsim/overlay.hpp"

#include <algorithm>

#include "swarmsim/rng.hpp"

namespace swarmsim {

void OverlayParams::validate() const {
  if (bits < 2 || bits > 32) {
    throw InvalidArgument("bits must be in [2, 32], got " + std::to_string(bits));
  }
  if (k < 1) {
    throw InvalidArgument("bucket size k must be >= 1");
  }
  if (n < 1) {
    throw InvalidArgument("overlay needs at least one node");
  }
  if (n > address_space_size(bits)) {
    throw CapacityError("cannot place " + std::to_string(n) + " nodes in a " +
                        std::to_string(bits) + "-bit address space");
  }
}

std::size_t RoutingTable::size() const {
  std::size_t total = 0;
  for (const auto& b : buckets) total += b.size();
  return total;
}

namespace {
[[noreturn]] void corrupt(const std::string& what) { throw FormatError("invalid overlay: " + what); }
}  // namespace

Overlay::Overlay(OverlayParams params, std::vector<Address> nodes, std::vector<RoutingTable> tables)
    : params_(params), nodes_(std::move(nodes)), tables_(std::move(tables)) {
  try {
    params_.validate();
  } catch (const Error& e) {
    corrupt(e.what());
  }
  const unsigned bits = params_.bits;
  if (nodes_.size() != params_.n) {
    corrupt("expected " + std::to_string(params_.n) + " nodes, found " + std::to_string(nodes_.size()));
  }
  node_values_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].bits() != bits) corrupt("node width does not match params.bits");
    if (i > 0 && !(nodes_[i - 1] < nodes_[i])) {
      corrupt(nodes_[i - 1] == nodes_[i] ? "duplicate node address " + to_string(nodes_[i])
                                         : "nodes not sorted ascending");
    }
    node_values_.push_back(nodes_[i].value());
  }
  if (tables_.size() != nodes_.size()) corrupt("table count does not match node count");

  bucket_offset_.reserve(nodes_.size() * (bits + 1) + 1);
  bucket_offset_.push_back(0);
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    const RoutingTable& t = tables_[i];
    if (t.owner != nodes_[i]) corrupt("table owner out of order at node " + to_string(nodes_[i]));
    if (t.buckets.size() != bits) corrupt("table of " + to_string(t.owner) + " has wrong bucket count");
    for (unsigned depth = 0; depth < bits; ++depth) {
      const auto& bucket = t.buckets[depth];
      if (bucket.size() > params_.k) corrupt("bucket exceeds capacity k");
      for (std::size_t e = 0; e < bucket.size(); ++e) {
        if (e > 0 && !(bucket[e - 1] < bucket[e])) corrupt("bucket entries not sorted/distinct");
        const std::uint32_t idx = index_of_raw(bucket[e].value());
        if (idx == kNone || bucket[e].bits() != bits) corrupt("bucket entry is not a node");
        if (proximity_order_raw(bucket[e].value(), t.owner.value(), bits) != depth) {
          corrupt("entry " + to_string(bucket[e]) + " in wrong bucket of " + to_string(t.owner));
        }
        entry_index_.push_back(idx);
      }
      const std::size_t candidates = candidate_count(i, depth);
      if (bucket.size() != std::min<std::size_t>(params_.k, candidates)) {
        corrupt("bucket " + std::to_string(depth) + " of " + to_string(t.owner) +
                " is not filled to min(k, candidates)");
      }
      bucket_offset_.push_back(entry_index_.size());
    }
    // Bucket `bits` (the owner itself) is always empty; keeps slot arithmetic uniform.
    bucket_offset_.push_back(entry_index_.size());
  }
}

std::optional<std::uint32_t> Overlay::index_of(Address a) const {
  if (a.bits() != params_.bits) return std::nullopt;
  const std::uint32_t idx = index_of_raw(a.value());
  if (idx == kNone) return std::nullopt;
  return idx;
}

std::uint32_t Overlay::index_of_raw(std::uint64_t value) const noexcept {
  auto it = std::lower_bound(node_values_.begin(), node_values_.end(), value);
  if (it == node_values_.end() || *it != value) return kNone;
  return static_cast<std::uint32_t>(it - node_values_.begin());
}

std::pair<std::size_t, std::size_t> Overlay::candidate_range(std::uint64_t value,
                                                             unsigned depth) const noexcept {
  const unsigned shift = params_.bits - depth - 1;
  const std::uint64_t prefix = (value >> shift) ^ 1U;
  const std::uint64_t lo = prefix << shift;
  const std::uint64_t hi = (prefix + 1) << shift;
  auto first = std::lower_bound(node_values_.begin(), node_values_.end(), lo);
  auto last = std::lower_bound(first, node_values_.end(), hi);
  return {static_cast<std::size_t>(first - node_values_.begin()),
          static_cast<std::size_t>(last - node_values_.begin())};
}

std::size_t Overlay::candidate_count(std::uint32_t index, unsigned depth) const noexcept {
  auto [first, last] = candidate_range(node_values_[index], depth);
  return last - first;
}

std::uint32_t Overlay::closest_index(std::uint64_t target) const noexcept {
  // Bitwise descent over the sorted node list: at every level keep the half
  // that agrees with the target's bit when it is non-empty.
  std::size_t lo = 0;
  std::size_t hi = node_values_.size();
  for (unsigned b = params_.bits; b-- > 0 && hi - lo > 1;) {
    const std::uint64_t mask = std::uint64_t{1} << b;
    auto mid_it = std::partition_point(node_values_.begin() + lo, node_values_.begin() + hi,
                                       [mask](std::uint64_t v) { return (v & mask) == 0; });
    const auto mid = static_cast<std::size_t>(mid_it - node_values_.begin());
    const bool want_one = (target & mask) != 0;
    if (want_one) {
      if (mid < hi) lo = mid;
    } else {
      if (mid > lo) hi = mid;
    }
  }
  return static_cast<std::uint32_t>(lo);
}

std::vector<Address> generate_addresses(std::uint64_t n, unsigned bits, std::uint64_t seed) {
  if (bits < 1 || bits > kMaxAddressBits) {
    throw InvalidArgument("bits must be in [1, 63], got " + std::to_string(bits));
  }
  if (n > address_space_size(bits)) {
    throw CapacityError("cannot draw " + std::to_string(n) + " distinct addresses from a " +
                        std::to_string(bits) + "-bit space");
  }
  Rng rng = Rng::derive(seed, "addresses");
  std::vector<Address> out;
  out.reserve(n);
  for (std::uint64_t v : rng.sample_without_replacement(address_space_size(bits), n)) {
    out.emplace_back(v, bits);
  }
  return out;
}

Overlay build_overlay(const OverlayParams& params) {
  params.validate();
  return build_overlay(params, generate_addresses(params.n, params.bits, params.seed));
}

Overlay build_overlay(const OverlayParams& params, std::vector<Address> nodes) {
  params.validate();
  if (nodes.size() != params.n) throw InvalidArgument("node list size does not match params.n");
  std::sort(nodes.begin(), nodes.end());
  if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
    throw InvalidArgument("node addresses must be distinct");
  }
  for (Address a : nodes) {
    if (a.bits() != params.bits) throw InvalidArgument("node width does not match params.bits");
  }

  // Candidate ranges are computed on the raw sorted values before the
  // Overlay object exists.
  std::vector<std::uint64_t> values;
  values.reserve(nodes.size());
  for (Address a : nodes) values.push_back(a.value());

  Rng rng = Rng::derive(params.seed, "topology");
  std::vector<RoutingTable> tables;
  tables.reserve(nodes.size());
  for (Address owner : nodes) {
    RoutingTable table{owner, std::vector<std::vector<Address>>(params.bits)};
    for (unsigned depth = 0; depth < params.bits; ++depth) {
      const unsigned shift = params.bits - depth - 1;
      const std::uint64_t prefix = (owner.value() >> shift) ^ 1U;
      auto first = std::lower_bound(values.begin(), values.end(), prefix << shift);
      auto last = std::lower_bound(first, values.end(), (prefix + 1) << shift);
      const auto count = static_cast<std::uint64_t>(last - first);
      auto& bucket = table.buckets[depth];
      if (count <= params.k) {
        for (auto it = first; it != last; ++it) bucket.emplace_back(*it, params.bits);
      } else {
        for (std::uint64_t pick : rng.sample_without_replacement(count, params.k)) {
          bucket.emplace_back(first[static_cast<std::ptrdiff_t>(pick)], params.bits);
        }
      }
    }
    tables.push_back(std::move(table));
  }
  return Overlay(params, std::move(nodes), std::move(tables));
}

Address closest_node_global(const Overlay& overlay, Address target) {
  if (overlay.size() == 0) {
    throw InvalidArgument("closest_node_global on an empty overlay");
  }
  if (target.bits() != overlay.bits()) {
    throw InvalidArgument("target width does not match overlay");
  }
  return overlay.node(overlay.closest_index(target.value()));
}

}  // namespace swarmsim
