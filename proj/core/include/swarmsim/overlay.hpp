#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmsim/address.hpp"

namespace swarmsim {

struct OverlayParams {
  std::uint64_t n = 1000;
  unsigned bits = 16;
  unsigned k = 4;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument for bits/k out of range, CapacityError when
  /// n exceeds the address space.
  void validate() const;

  friend bool operator==(const OverlayParams&, const OverlayParams&) = default;
};

/// Bucket i holds entries whose proximity order to `owner` is exactly i.
/// Entries within a bucket are sorted ascending.
struct RoutingTable {
  Address owner;
  std::vector<std::vector<Address>> buckets;

  std::size_t size() const;

  friend bool operator==(const RoutingTable&, const RoutingTable&) = default;
};

/// Static Kademlia overlay: sorted node list plus one routing table per node.
/// Immutable once built, so one instance can back any number of concurrent
/// runs.
class Overlay {
 public:
  static constexpr std::uint32_t kNone = ~std::uint32_t{0};

  /// Validates every overlay invariant (distinct sorted nodes, bucket depth,
  /// capacity, neighborhood completeness); throws FormatError on violation.
  Overlay(OverlayParams params, std::vector<Address> nodes, std::vector<RoutingTable> tables);

  const OverlayParams& params() const noexcept { return params_; }
  unsigned bits() const noexcept { return params_.bits; }
  std::size_t size() const noexcept { return nodes_.size(); }

  std::span<const Address> nodes() const noexcept { return nodes_; }
  Address node(std::uint32_t index) const { return nodes_.at(index); }
  const RoutingTable& table(std::uint32_t index) const { return tables_.at(index); }
  std::span<const RoutingTable> tables() const noexcept { return tables_; }

  std::optional<std::uint32_t> index_of(Address a) const;
  /// Index of a raw address value, or kNone.
  std::uint32_t index_of_raw(std::uint64_t value) const noexcept;

  /// Bucket `depth` of node `index` as node indices (hot-path view).
  std::span<const std::uint32_t> bucket_indices(std::uint32_t index, unsigned depth) const noexcept {
    const std::size_t slot = std::size_t{index} * (params_.bits + 1) + depth;
    return {entry_index_.data() + bucket_offset_[slot],
            bucket_offset_[slot + 1] - bucket_offset_[slot]};
  }

  std::uint64_t raw(std::uint32_t index) const noexcept { return node_values_[index]; }

  /// Node index minimizing XOR distance to `target` over all nodes.
  std::uint32_t closest_index(std::uint64_t target) const noexcept;

  /// Number of nodes other than `index` at proximity order exactly `depth`.
  std::size_t candidate_count(std::uint32_t index, unsigned depth) const noexcept;

  friend bool operator==(const Overlay& a, const Overlay& b) {
    return a.params_ == b.params_ && a.nodes_ == b.nodes_ && a.tables_ == b.tables_;
  }

 private:
  /// [begin, end) of node indices sharing the first `depth` bits of `value`
  /// and having bit `depth` flipped relative to it.
  std::pair<std::size_t, std::size_t> candidate_range(std::uint64_t value, unsigned depth) const noexcept;

  OverlayParams params_;
  std::vector<Address> nodes_;
  std::vector<std::uint64_t> node_values_;
  std::vector<RoutingTable> tables_;
  std::vector<std::uint32_t> entry_index_;
  std::vector<std::size_t> bucket_offset_;
};

/// `n` distinct addresses drawn uniformly without replacement from
/// [0, 2^bits), sorted ascending. Throws CapacityError if n > 2^bits.
std::vector<Address> generate_addresses(std::uint64_t n, unsigned bits, std::uint64_t seed);

/// Deterministic overlay: bucket i of each node holds all exact-depth
/// candidates when there are at most k of them, otherwise k sampled
/// uniformly without replacement.
Overlay build_overlay(const OverlayParams& params);

/// Same bucket construction over a caller-chosen node set (params.n must
/// equal nodes.size(); params.seed drives bucket sampling).
Overlay build_overlay(const OverlayParams& params, std::vector<Address> nodes);

/// Node closest to `target` by XOR distance.
Address closest_node_global(const Overlay& overlay, Address target);

}  // namespace swarmsim
