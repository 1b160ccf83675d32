#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>

#include "swarmsim/error.hpp"

namespace swarmsim {

inline constexpr unsigned kMaxAddressBits = 63;

/// Identifier in the shared node/chunk address space [0, 2^bits).
class Address {
 public:
  constexpr Address() = default;

  Address(std::uint64_t value, unsigned bits) : value_(value), bits_(bits) {
    if (bits == 0 || bits > kMaxAddressBits) {
      throw InvalidArgument("address width must be in [1, 63], got " + std::to_string(bits));
    }
    if (value >> bits != 0) {
      throw InvalidArgument("address " + std::to_string(value) + " does not fit in " +
                            std::to_string(bits) + " bits");
    }
  }

  constexpr std::uint64_t value() const noexcept { return value_; }
  constexpr unsigned bits() const noexcept { return bits_; }

  friend constexpr bool operator==(const Address&, const Address&) = default;
  friend constexpr auto operator<=>(const Address&, const Address&) = default;

 private:
  std::uint64_t value_ = 0;
  unsigned bits_ = 1;
};

inline constexpr std::uint64_t address_space_size(unsigned bits) noexcept {
  return std::uint64_t{1} << bits;
}

/// Raw-value PO; `bits` is the shared width. Returns `bits` when equal.
inline constexpr unsigned proximity_order_raw(std::uint64_t a, std::uint64_t b,
                                              unsigned bits) noexcept {
  return bits - static_cast<unsigned>(std::bit_width(a ^ b));
}

std::uint64_t xor_distance(Address a, Address b);

/// Length of the common most-significant-bit prefix of `a` and `b`.
unsigned proximity_order(Address a, Address b);

std::string to_string(Address a);

}  // namespace swarmsim
