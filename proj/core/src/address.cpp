#include "swarmsim/address.hpp"

namespace swarmsim {

namespace {
void require_same_width(Address a, Address b) {
  if (a.bits() != b.bits()) {
    throw InvalidArgument("address widths differ: " + std::to_string(a.bits()) + " vs " +
                          std::to_string(b.bits()));
  }
}
}  // namespace

std::uint64_t xor_distance(Address a, Address b) {
  require_same_width(a, b);
  return a.value() ^ b.value();
}

unsigned proximity_order(Address a, Address b) {
  require_same_width(a, b);
  return proximity_order_raw(a.value(), b.value(), a.bits());
}

std::string to_string(Address a) { return std::to_string(a.value()); }

}  // namespace swarmsim
