#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmsim/analysis.hpp"
#include "swarmsim/overlay.hpp"
#include "swarmsim/simulation.hpp"

namespace swarmsim::harness {

/// One experiment cell. Exactly one of `overlay` / `topology_path` is set
/// after validate().
struct ExperimentConfig {
  std::optional<OverlayParams> overlay;
  std::optional<std::filesystem::path> topology_path;
  WorkloadParams workload;
  PricingMode pricing;
  LedgerSettings ledger;
  F1Variant f1_variant = F1Variant::first_hop_ratio;
  std::filesystem::path out = "out";
  std::optional<StepRange> shard;

  void validate() const;
};

/// Parses a config document. Every field is optional; absent fields keep
/// their defaults. Unknown keys are rejected.
ExperimentConfig config_from_string(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Parses "start:end" into a half-open step range.
StepRange parse_shard(const std::string& text);

/// `out` itself when it names a .json/.csv/.svg file, else `out / default_name`.
std::filesystem::path resolve_output(const std::filesystem::path& out, const std::string& default_name);

struct TopologySummary {
  std::uint64_t n = 0;
  unsigned bits = 0;
  unsigned k = 0;
  std::size_t buckets = 0;
  std::size_t total_entries = 0;
  /// Neighborhood depth -> number of nodes. A node's neighborhood depth is
  /// the shallowest proximity order at which fewer than k other nodes share
  /// its prefix.
  std::map<unsigned, std::size_t> neighborhood_depths;
};

TopologySummary summarize(const Overlay& overlay);
std::string to_string(const TopologySummary& summary);

struct TopologyOutcome {
  std::filesystem::path path;
  TopologySummary summary;
};

/// Builds the overlay for `params` and writes the canonical topology file.
TopologyOutcome cmd_topology(const OverlayParams& params, const std::filesystem::path& out);

struct RunOutcome {
  std::filesystem::path path;
  RunResult result;
};

/// Builds or loads the overlay, runs the (optionally sharded) experiment and
/// writes the result file. Propagates RoutingFailure.
RunOutcome cmd_run(const ExperimentConfig& config);

/// Merges result files; throws IncompatibleRuns naming the mismatched field.
RunOutcome cmd_merge(std::span<const std::filesystem::path> inputs, const std::filesystem::path& out);

struct ReportOutcome {
  std::vector<std::filesystem::path> files;
  FairnessReport report;
};

/// Writes report.json, lorenz_f1/f2.csv, forwarded_hist.csv and the three
/// SVG plots into `out_dir`. Undefined metrics are recorded in the files.
ReportOutcome cmd_report(const std::filesystem::path& result_file, const std::filesystem::path& out_dir,
                         F1Variant variant = F1Variant::first_hop_ratio,
                         std::optional<std::uint64_t> bin_width = std::nullopt);

}  // namespace swarmsim::harness
