#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "swarmsim/accounting.hpp"
#include "swarmsim/overlay.hpp"
#include "swarmsim/rng.hpp"
#include "swarmsim/routing.hpp"

namespace swarmsim {

struct WorkloadParams {
  std::uint64_t files = 100;
  std::uint64_t chunks_min = 100;
  std::uint64_t chunks_max = 1000;
  double originator_fraction = 0.2;
  std::uint64_t workload_seed = 0;

  void validate() const;

  friend bool operator==(const WorkloadParams&, const WorkloadParams&) = default;
};

/// One file download: a single originator requesting many chunks.
struct FileRequest {
  Address originator;
  std::vector<Address> chunks;
};

struct NodeCounters {
  /// Appearances at path index >= 1, storer's serve included.
  std::uint64_t forwarded = 0;
  /// Appearances at path index 1 (the paid zero-proximity hop).
  std::uint64_t first_hop_forwarded = 0;
  std::uint64_t income = 0;
  std::uint64_t paid = 0;
  /// Chunks this node requested as originator, zero-hop ones included.
  std::uint64_t originated_chunks = 0;

  NodeCounters& operator+=(const NodeCounters& o) noexcept;
  friend bool operator==(const NodeCounters&, const NodeCounters&) = default;
};

/// Half-open range of step indices [begin, end).
struct StepRange {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;

  friend bool operator==(const StepRange&, const StepRange&) = default;
};

struct RunTotals {
  std::uint64_t steps = 0;
  std::uint64_t chunks = 0;
  /// Sum over downloads of (path length - 1).
  std::uint64_t hops = 0;
  std::uint64_t zero_hop_downloads = 0;
  std::uint64_t payments = 0;
  /// Forwarder transfers that found their pair at or above the payment
  /// threshold. Always 0 when the threshold is disabled.
  std::uint64_t frozen_transfers = 0;

  RunTotals& operator+=(const RunTotals& o) noexcept;
  friend bool operator==(const RunTotals&, const RunTotals&) = default;
};

/// Everything one run (or a merge of shards) produced. per_node is aligned
/// with `nodes`, which is the overlay's sorted node list.
struct RunResult {
  OverlayParams overlay;
  std::uint64_t topology_digest = 0;
  WorkloadParams workload;
  PricingMode pricing;
  LedgerSettings ledger_settings;
  std::vector<Address> nodes;
  std::vector<NodeCounters> per_node;
  RunTotals totals;
  std::vector<StepRange> steps;
  LedgerSnapshot ledger;

  /// Zero-step result for the given configuration; identity for merging.
  static RunResult empty(const Overlay& overlay, const WorkloadParams& workload,
                         const PricingMode& pricing, const LedgerSettings& settings = {});

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Fixed set of floor(fraction * n) originators sampled without replacement.
std::vector<Address> originator_pool(const Overlay& overlay, double fraction,
                                     std::uint64_t workload_seed);

FileRequest sample_file_request(std::span<const Address> pool, const WorkloadParams& params,
                                unsigned bits, Rng& rng);

/// Stream from which step `step` of a workload draws its request.
Rng step_rng(std::uint64_t workload_seed, std::uint64_t step);

/// Paths taken during one step, for inspection in tests and debugging.
struct StepTrace {
  std::vector<Path> paths;
};

/// Routes every chunk of `request`, updating counters and the ledger.
/// Throws RoutingFailure on a broken overlay.
void run_step(const Overlay& overlay, SwapLedger& ledger, RunResult& result,
              const FileRequest& request, std::uint64_t step, StepTrace* trace = nullptr);

/// Runs steps [shard.begin, shard.end) of the workload (all `files` steps by
/// default) on a fresh ledger.
RunResult run_experiment(const Overlay& overlay, const WorkloadParams& workload,
                         const PricingMode& pricing, const LedgerSettings& settings = {},
                         std::optional<StepRange> shard = std::nullopt);

}  // namespace swarmsim
