#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace swarmsim {

/// Deterministic random stream. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; bounded draws use our own unbiased
/// reduction instead of std::uniform_int_distribution so results do not
/// depend on the standard library vendor.
class Rng {
 public:
  /// Bumped whenever any draw sequence changes; echoed into output files.
  static constexpr std::string_view kAlgorithm = "mt19937_64+splitmix64/v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent sub-stream identified by (seed, label, index).
  static Rng derive(std::uint64_t seed, std::string_view label, std::uint64_t index = 0);

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound); bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform in [lo, hi] inclusive.
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi);

  /// `count` distinct values from [0, population), sorted ascending.
  std::vector<std::uint64_t> sample_without_replacement(std::uint64_t population,
                                                        std::uint64_t count);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace swarmsim
