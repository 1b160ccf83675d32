#include "swarmsim/routing.hpp"

namespace swarmsim {

std::uint32_t next_hop_index(const Overlay& overlay, std::uint32_t current,
                             std::uint64_t chunk) noexcept {
  const unsigned bits = overlay.bits();
  const std::uint64_t here = overlay.raw(current);
  const unsigned po = proximity_order_raw(here, chunk, bits);
  if (po == bits) return Overlay::kNone;

  // Entries of bucket `po` agree with the chunk on po+1 leading bits, so when
  // that bucket is non-empty its best entry beats every other entry and the
  // current node. Shallower buckets differ from the chunk earlier than the
  // current node does and can never win.
  std::uint32_t best = Overlay::kNone;
  std::uint64_t best_distance = here ^ chunk;
  auto consider = [&](unsigned depth) {
    for (std::uint32_t idx : overlay.bucket_indices(current, depth)) {
      const std::uint64_t d = overlay.raw(idx) ^ chunk;
      if (d < best_distance) {
        best_distance = d;
        best = idx;
      }
    }
  };
  consider(po);
  if (best != Overlay::kNone) return best;
  for (unsigned depth = po + 1; depth < bits; ++depth) consider(depth);
  return best;
}

void route_indices(const Overlay& overlay, std::uint32_t originator, std::uint64_t chunk,
                   std::vector<std::uint32_t>& hops) {
  hops.clear();
  hops.push_back(originator);
  const std::uint32_t storer = overlay.closest_index(chunk);
  std::uint32_t current = originator;
  while (current != storer) {
    const std::uint32_t next = next_hop_index(overlay, current, chunk);
    if (next == Overlay::kNone || hops.size() > overlay.bits()) {
      Path partial;
      for (std::uint32_t h : hops) partial.hops.push_back(overlay.node(h));
      throw RoutingFailure("routing stuck at " + to_string(overlay.node(current)) + " for chunk " +
                               std::to_string(chunk) + " (storer " +
                               to_string(overlay.node(storer)) + ")",
                           std::move(partial));
    }
    hops.push_back(next);
    current = next;
  }
}

namespace {
std::uint32_t require_node(const Overlay& overlay, Address a) {
  auto idx = overlay.index_of(a);
  if (!idx) throw InvalidArgument("address " + to_string(a) + " is not a node of the overlay");
  return *idx;
}

void require_width(const Overlay& overlay, Address chunk) {
  if (chunk.bits() != overlay.bits()) throw InvalidArgument("chunk width does not match overlay");
}
}  // namespace

std::optional<Address> next_hop(const Overlay& overlay, Address current, Address chunk) {
  require_width(overlay, chunk);
  const std::uint32_t idx = next_hop_index(overlay, require_node(overlay, current), chunk.value());
  if (idx == Overlay::kNone) return std::nullopt;
  return overlay.node(idx);
}

Path route(const Overlay& overlay, Address originator, Address chunk) {
  require_width(overlay, chunk);
  std::vector<std::uint32_t> hops;
  route_indices(overlay, require_node(overlay, originator), chunk.value(), hops);
  Path path;
  path.hops.reserve(hops.size());
  for (std::uint32_t h : hops) path.hops.push_back(overlay.node(h));
  return path;
}

}  // namespace swarmsim
