#include "swarmsim/rng.hpp"

#include <algorithm>
#include <unordered_set>

#include "swarmsim/error.hpp"

namespace swarmsim {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {
std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}
}  // namespace

Rng Rng::derive(std::uint64_t seed, std::string_view label, std::uint64_t index) {
  std::uint64_t h = splitmix64(seed ^ fnv1a(label));
  h = splitmix64(h ^ splitmix64(index));
  return Rng(h);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) {
    throw InvalidArgument("Rng::below requires a positive bound");
  }
  // Lemire's multiply-shift with rejection.
  __extension__ using u128 = unsigned __int128;
  u128 m = u128{next()} * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = u128{next()} * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t Rng::between(std::uint64_t lo, std::uint64_t hi) {
  if (hi < lo) {
    throw InvalidArgument("Rng::between requires lo <= hi");
  }
  if (hi - lo == ~std::uint64_t{0}) {
    return next();
  }
  return lo + below(hi - lo + 1);
}

std::vector<std::uint64_t> Rng::sample_without_replacement(std::uint64_t population,
                                                           std::uint64_t count) {
  if (count > population) {
    throw InvalidArgument("cannot sample " + std::to_string(count) + " of " +
                          std::to_string(population));
  }
  // Floyd's algorithm: O(count) draws regardless of population size.
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(count * 2);
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::uint64_t j = population - count; j < population; ++j) {
    const std::uint64_t t = below(j + 1);
    const std::uint64_t pick = chosen.insert(t).second ? t : j;
    if (pick == j) {
      chosen.insert(j);
    }
    out.push_back(pick);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace swarmsim
