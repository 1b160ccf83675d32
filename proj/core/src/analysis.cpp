#include "swarmsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace swarmsim {

namespace {
std::vector<double> sorted_checked(std::span<const double> values) {
  if (values.empty()) throw UndefinedMetric("inequality of an empty series is undefined");
  std::vector<double> v(values.begin(), values.end());
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) {
      throw InvalidArgument("series values must be finite and non-negative");
    }
  }
  std::sort(v.begin(), v.end());
  if (v.back() == 0.0) throw UndefinedMetric("inequality of an all-zero series is undefined");
  return v;
}

// sum_{i<j} |v_i - v_j| written over the gaps of the sorted series: the gap
// between ranks m-1 and m separates m values from n-m values. Every term is
// non-negative and an equal series yields exactly zero.
long double pairwise_difference_sum(const std::vector<double>& sorted) {
  const std::size_t n = sorted.size();
  long double acc = 0.0L;
  for (std::size_t m = 1; m < n; ++m) {
    const long double gap = static_cast<long double>(sorted[m]) - sorted[m - 1];
    if (gap != 0.0L) acc += gap * static_cast<long double>(m) * static_cast<long double>(n - m);
  }
  return acc;
}

long double total_of(const std::vector<double>& sorted) {
  long double total = 0.0L;
  for (double x : sorted) total += x;
  return total;
}
}  // namespace

double gini(std::span<const double> values) {
  const std::vector<double> v = sorted_checked(values);
  const auto n = static_cast<long double>(v.size());
  return static_cast<double>(pairwise_difference_sum(v) / (n * total_of(v)));
}

double gini_unnormalized(std::span<const double> values) {
  const std::vector<double> v = sorted_checked(values);
  return static_cast<double>(pairwise_difference_sum(v) / total_of(v));
}

std::vector<LorenzPoint> lorenz(std::span<const double> values) {
  const std::vector<double> v = sorted_checked(values);
  const long double total = total_of(v);
  const auto n = static_cast<double>(v.size());
  std::vector<LorenzPoint> points;
  points.reserve(v.size() + 1);
  points.push_back({0.0, 0.0});
  long double cumulative = 0.0L;
  for (std::size_t i = 0; i < v.size(); ++i) {
    cumulative += v[i];
    points.push_back({static_cast<double>(i + 1) / n, static_cast<double>(cumulative / total)});
  }
  points.back() = {1.0, 1.0};
  return points;
}

double lorenz_gap_area(std::span<const LorenzPoint> curve) {
  long double area = 0.0L;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const long double dx = curve[i].population_share - curve[i - 1].population_share;
    const long double diag = (curve[i].population_share + curve[i - 1].population_share) / 2.0L;
    const long double lz = (curve[i].value_share + curve[i - 1].value_share) / 2.0L;
    area += dx * (diag - lz);
  }
  return static_cast<double>(area);
}

F1Variant parse_f1_variant(std::string_view text) {
  if (text == "first-hop-ratio") return F1Variant::first_hop_ratio;
  if (text == "per-reward") return F1Variant::per_reward;
  throw InvalidArgument("unknown F1 variant '" + std::string(text) +
                        "' (expected first-hop-ratio or per-reward)");
}

std::string_view to_string(F1Variant v) noexcept {
  return v == F1Variant::first_hop_ratio ? "first-hop-ratio" : "per-reward";
}

ValueSeries f2_series(const RunResult& result) {
  ValueSeries s;
  s.values.reserve(result.per_node.size());
  for (const NodeCounters& c : result.per_node) s.values.push_back(static_cast<double>(c.income));
  s.nodes = result.nodes;
  return s;
}

ValueSeries f1_series(const RunResult& result, F1Variant variant) {
  ValueSeries s;
  for (std::size_t i = 0; i < result.per_node.size(); ++i) {
    const NodeCounters& c = result.per_node[i];
    if (c.income == 0) continue;
    const std::uint64_t denom = variant == F1Variant::first_hop_ratio ? c.first_hop_forwarded : c.income;
    if (denom == 0) {
      throw InvalidArgument("node " + to_string(result.nodes.at(i)) +
                            " has income but never served as first hop");
    }
    s.values.push_back(static_cast<double>(c.forwarded) / static_cast<double>(denom));
    s.nodes.push_back(result.nodes.at(i));
  }
  if (s.values.empty()) throw UndefinedMetric("no node received any reward");
  return s;
}

std::uint64_t Histogram::total() const noexcept {
  std::uint64_t t = 0;
  for (const auto& b : bins) t += b.count;
  return t;
}

namespace {
std::uint64_t max_forwarded(const RunResult& result) {
  std::uint64_t m = 0;
  for (const NodeCounters& c : result.per_node) m = std::max(m, c.forwarded);
  return m;
}
}  // namespace

std::uint64_t default_bin_width(const RunResult& result) {
  const std::uint64_t m = max_forwarded(result);
  return std::max<std::uint64_t>(1, (m + 25) / 50);
}

Histogram forwarded_histogram(const RunResult& result, std::uint64_t bin_width) {
  if (bin_width == 0) throw InvalidArgument("histogram bin width must be positive");
  Histogram h;
  h.bin_width = bin_width;
  const std::uint64_t bins = max_forwarded(result) / bin_width + 1;
  h.bins.resize(bins);
  for (std::uint64_t b = 0; b < bins; ++b) h.bins[b].low = b * bin_width;
  for (const NodeCounters& c : result.per_node) ++h.bins[c.forwarded / bin_width].count;
  return h;
}

double average_forwarded(const RunResult& result) {
  if (result.per_node.empty()) throw InvalidArgument("average over an empty node set");
  long double sum = 0.0L;
  for (const NodeCounters& c : result.per_node) sum += c.forwarded;
  return static_cast<double>(sum / static_cast<long double>(result.per_node.size()));
}

RunResult merge_results(std::span<const RunResult> results) {
  if (results.empty()) throw InvalidArgument("merge_results needs at least one result");
  const RunResult& head = results.front();
  for (const RunResult& r : results.subspan(1)) {
    if (!(r.overlay == head.overlay)) throw IncompatibleRuns("overlay params");
    if (r.topology_digest != head.topology_digest) throw IncompatibleRuns("topology digest");
    if (r.nodes != head.nodes || r.per_node.size() != head.per_node.size()) throw IncompatibleRuns("node list");
    if (!(r.workload == head.workload)) throw IncompatibleRuns("workload params");
    if (!(r.pricing == head.pricing)) throw IncompatibleRuns("pricing mode");
    if (!(r.ledger_settings == head.ledger_settings)) throw IncompatibleRuns("ledger settings");
  }

  std::vector<StepRange> ranges;
  for (const RunResult& r : results) {
    for (const StepRange& s : r.steps) {
      if (s.begin < s.end) ranges.push_back(s);
    }
  }
  std::sort(ranges.begin(), ranges.end(),
            [](const StepRange& a, const StepRange& b) { return a.begin < b.begin; });
  std::vector<StepRange> coalesced;
  for (const StepRange& s : ranges) {
    if (!coalesced.empty() && s.begin < coalesced.back().end) throw IncompatibleRuns("step ranges (overlap)");
    if (!coalesced.empty() && s.begin == coalesced.back().end) {
      coalesced.back().end = s.end;
    } else {
      coalesced.push_back(s);
    }
  }

  RunResult merged = head;
  merged.steps = std::move(coalesced);
  merged.totals = RunTotals{};
  std::fill(merged.per_node.begin(), merged.per_node.end(), NodeCounters{});
  std::map<std::pair<Address, Address>, std::int64_t> balances;
  std::map<std::pair<Address, Address>, ChequeSummary> cheques;
  for (const RunResult& r : results) {
    merged.totals += r.totals;
    for (std::size_t i = 0; i < r.per_node.size(); ++i) merged.per_node[i] += r.per_node[i];
    for (const BalanceEntry& b : r.ledger.balances) balances[{b.low, b.high}] += b.balance;
    for (const ChequeSummary& c : r.ledger.cheques) {
      ChequeSummary& m = cheques[{c.issuer, c.beneficiary}];
      m.issuer = c.issuer;
      m.beneficiary = c.beneficiary;
      m.cumulative_amount += c.cumulative_amount;
      m.last_step = std::max(m.last_step, c.last_step);
      m.count += c.count;
    }
  }
  merged.ledger = LedgerSnapshot{};
  for (const auto& [pair, value] : balances) {
    if (value != 0) merged.ledger.balances.push_back(BalanceEntry{pair.first, pair.second, value});
  }
  for (const auto& [pair, summary] : cheques) merged.ledger.cheques.push_back(summary);
  return merged;
}

FairnessReport fairness_report(const RunResult& result, F1Variant variant,
                               std::optional<std::uint64_t> bin_width) {
  FairnessReport report;
  report.f1_variant = variant;

  const ValueSeries f2 = f2_series(result);
  report.f2_population = f2.size();
  try {
    report.gini_f2 = gini(f2);
    report.gini_f2_unnormalized = gini_unnormalized(f2.values);
    report.lorenz_f2 = lorenz(f2);
  } catch (const UndefinedMetric&) {
  }

  try {
    const ValueSeries f1 = f1_series(result, variant);
    report.f1_population = f1.size();
    report.gini_f1 = gini(f1);
    report.gini_f1_unnormalized = gini_unnormalized(f1.values);
    report.lorenz_f1 = lorenz(f1);
  } catch (const UndefinedMetric&) {
  }

  report.histogram = forwarded_histogram(result, bin_width.value_or(default_bin_width(result)));
  if (!result.per_node.empty()) report.average_forwarded = average_forwarded(result);
  for (const NodeCounters& c : result.per_node) report.total_forwarded += c.forwarded;
  return report;
}

}  // namespace swarmsim
