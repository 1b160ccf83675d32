#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swarmsim/simulation.hpp"

namespace swarmsim {

/// Non-negative values, optionally attributed to nodes (same length when
/// attributed).
struct ValueSeries {
  std::vector<double> values;
  std::vector<Address> nodes;

  std::size_t size() const noexcept { return values.size(); }
};

/// Mean absolute difference over twice the mean:
///   sum_i sum_j |v_i - v_j| / (2 n sum_i v_i)
/// 0 for perfect equality, (n-1)/n for a single earner. Throws
/// UndefinedMetric for an empty or all-zero series and InvalidArgument for
/// negative or non-finite entries.
double gini(std::span<const double> values);
inline double gini(const ValueSeries& s) { return gini(std::span<const double>(s.values)); }

/// The same ratio without the 1/n factor (equals n * gini()). Reported next
/// to the normalized value; it is not bounded by 1.
double gini_unnormalized(std::span<const double> values);

struct LorenzPoint {
  double population_share = 0.0;
  double value_share = 0.0;

  friend bool operator==(const LorenzPoint&, const LorenzPoint&) = default;
};

/// n+1 points from (0,0) to (1,1) over the ascending-sorted values.
std::vector<LorenzPoint> lorenz(std::span<const double> values);
inline std::vector<LorenzPoint> lorenz(const ValueSeries& s) { return lorenz(std::span<const double>(s.values)); }

/// Trapezoidal area between the equality diagonal and a Lorenz curve.
double lorenz_gap_area(std::span<const LorenzPoint> curve);

enum class F1Variant {
  /// forwarded / first_hop_forwarded: total service per paid service.
  first_hop_ratio,
  /// forwarded / income: service per accounting unit earned.
  per_reward,
};

F1Variant parse_f1_variant(std::string_view text);
std::string_view to_string(F1Variant v) noexcept;

/// Income of every node, zeros included.
ValueSeries f2_series(const RunResult& result);

/// One value per node with income > 0. Throws UndefinedMetric when no node
/// earned anything.
ValueSeries f1_series(const RunResult& result, F1Variant variant = F1Variant::first_hop_ratio);

struct HistogramBin {
  std::uint64_t low = 0;
  std::uint64_t count = 0;

  friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

struct Histogram {
  std::uint64_t bin_width = 1;
  /// Contiguous bins from 0 up to the bin holding the maximum, empty ones included.
  std::vector<HistogramBin> bins;

  std::uint64_t total() const noexcept;
};

/// max(1, round(max_forwarded / 50)).
std::uint64_t default_bin_width(const RunResult& result);

Histogram forwarded_histogram(const RunResult& result, std::uint64_t bin_width);

double average_forwarded(const RunResult& result);

/// Sums shards of one experiment. Requires identical overlay, topology,
/// workload, pricing and ledger settings, and pairwise-disjoint step ranges;
/// otherwise throws IncompatibleRuns naming the field.
RunResult merge_results(std::span<const RunResult> results);

struct FairnessReport {
  F1Variant f1_variant = F1Variant::first_hop_ratio;
  std::optional<double> gini_f1;
  std::optional<double> gini_f2;
  std::optional<double> gini_f1_unnormalized;
  std::optional<double> gini_f2_unnormalized;
  std::size_t f1_population = 0;
  std::size_t f2_population = 0;
  std::vector<LorenzPoint> lorenz_f1;
  std::vector<LorenzPoint> lorenz_f2;
  Histogram histogram;
  double average_forwarded = 0.0;
  std::uint64_t total_forwarded = 0;
};

/// Metrics that are undefined for this result are left empty rather than
/// thrown.
FairnessReport fairness_report(const RunResult& result, F1Variant variant = F1Variant::first_hop_ratio,
                               std::optional<std::uint64_t> bin_width = std::nullopt);

}  // namespace swarmsim
