#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "swarmsim/overlay.hpp"

namespace swarmsim {

/// Forwarding-Kademlia delivery path. hops.front() is the originator and
/// hops.back() the storer; the chunk travels back along the same hops.
struct Path {
  std::vector<Address> hops;

  std::size_t size() const noexcept { return hops.size(); }
  friend bool operator==(const Path&, const Path&) = default;
};

/// Greedy routing stopped at a node that is not the storer. Only possible on
/// an overlay whose invariants are broken.
class RoutingFailure : public Error {
 public:
  RoutingFailure(std::string what, Path partial)
      : Error(std::move(what)), partial_(std::move(partial)) {}

  const Path& partial_path() const noexcept { return partial_; }

 private:
  Path partial_;
};

/// Entry of `current`'s table strictly closer to `chunk` than `current`
/// itself, minimizing XOR distance; nullopt when `current` is locally closest.
std::optional<Address> next_hop(const Overlay& overlay, Address current, Address chunk);

Path route(const Overlay& overlay, Address originator, Address chunk);

/// Index-based next hop; returns Overlay::kNone when no entry is closer.
std::uint32_t next_hop_index(const Overlay& overlay, std::uint32_t current, std::uint64_t chunk) noexcept;

/// Index-based route written into `hops` (cleared first). Used by the
/// simulation loop to avoid per-chunk allocation.
void route_indices(const Overlay& overlay, std::uint32_t originator, std::uint64_t chunk,
                   std::vector<std::uint32_t>& hops);

}  // namespace swarmsim
