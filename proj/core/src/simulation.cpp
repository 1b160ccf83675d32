#include "swarmsim/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "swarmsim/topology_io.hpp"

namespace swarmsim {

void WorkloadParams::validate() const {
  if (chunks_min < 1 || chunks_min > chunks_max) {
    throw InvalidArgument("chunk range must satisfy 1 <= chunks_min <= chunks_max");
  }
  if (!(originator_fraction > 0.0 && originator_fraction <= 1.0)) {
    throw InvalidArgument("originator fraction must be in (0, 1]");
  }
}

NodeCounters& NodeCounters::operator+=(const NodeCounters& o) noexcept {
  forwarded += o.forwarded;
  first_hop_forwarded += o.first_hop_forwarded;
  income += o.income;
  paid += o.paid;
  originated_chunks += o.originated_chunks;
  return *this;
}

RunTotals& RunTotals::operator+=(const RunTotals& o) noexcept {
  steps += o.steps;
  chunks += o.chunks;
  hops += o.hops;
  zero_hop_downloads += o.zero_hop_downloads;
  payments += o.payments;
  frozen_transfers += o.frozen_transfers;
  return *this;
}

RunResult RunResult::empty(const Overlay& overlay, const WorkloadParams& workload,
                           const PricingMode& pricing, const LedgerSettings& settings) {
  RunResult r;
  r.overlay = overlay.params();
  r.topology_digest = swarmsim::topology_digest(overlay);
  r.workload = workload;
  r.pricing = pricing;
  r.ledger_settings = settings;
  r.nodes.assign(overlay.nodes().begin(), overlay.nodes().end());
  r.per_node.assign(overlay.size(), NodeCounters{});
  return r;
}

std::vector<Address> originator_pool(const Overlay& overlay, double fraction,
                                     std::uint64_t workload_seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidArgument("originator fraction must be in (0, 1]");
  }
  // The epsilon keeps products such as 0.57 * 100 from flooring to 56.
  const auto count = static_cast<std::uint64_t>(
      std::floor(fraction * static_cast<double>(overlay.size()) + 1e-9));
  if (count == 0) {
    throw InvalidArgument("originator fraction " + std::to_string(fraction) +
                          " selects no node out of " + std::to_string(overlay.size()));
  }
  Rng rng = Rng::derive(workload_seed, "originators");
  std::vector<Address> pool;
  pool.reserve(count);
  for (std::uint64_t idx : rng.sample_without_replacement(overlay.size(), count)) {
    pool.push_back(overlay.node(static_cast<std::uint32_t>(idx)));
  }
  return pool;
}

FileRequest sample_file_request(std::span<const Address> pool, const WorkloadParams& params,
                                unsigned bits, Rng& rng) {
  if (pool.empty()) throw InvalidArgument("originator pool is empty");
  FileRequest req;
  req.originator = pool[rng.below(pool.size())];
  const std::uint64_t count = rng.between(params.chunks_min, params.chunks_max);
  req.chunks.reserve(count);
  const std::uint64_t space = address_space_size(bits);
  for (std::uint64_t i = 0; i < count; ++i) req.chunks.emplace_back(rng.below(space), bits);
  return req;
}

Rng step_rng(std::uint64_t workload_seed, std::uint64_t step) {
  return Rng::derive(workload_seed, "step", step);
}

void run_step(const Overlay& overlay, SwapLedger& ledger, RunResult& result,
              const FileRequest& request, std::uint64_t step, StepTrace* trace) {
  const auto origin = overlay.index_of(request.originator);
  if (!origin) {
    throw InvalidArgument("originator " + to_string(request.originator) + " is not an overlay node");
  }
  if (result.per_node.size() != overlay.size()) {
    throw InvalidArgument("result does not match overlay size");
  }
  const std::uint64_t origin_raw = overlay.raw(*origin);
  std::vector<std::uint32_t> hops;
  std::vector<std::uint32_t> beneficiaries;

  for (Address chunk : request.chunks) {
    if (chunk.bits() != overlay.bits()) throw InvalidArgument("chunk width does not match overlay");
    route_indices(overlay, *origin, chunk.value(), hops);
    if (trace) {
      Path p;
      for (std::uint32_t h : hops) p.hops.push_back(overlay.node(h));
      trace->paths.push_back(std::move(p));
    }
    ++result.totals.chunks;
    ++result.per_node[*origin].originated_chunks;
    if (hops.size() == 1) {
      ++result.totals.zero_hop_downloads;
      continue;
    }
    for (std::size_t j = 1; j < hops.size(); ++j) ++result.per_node[hops[j]].forwarded;
    result.totals.hops += hops.size() - 1;

    const std::uint32_t first = hops[1];
    ++result.per_node[first].first_hop_forwarded;
    const std::uint64_t amount = price_raw(overlay.raw(first), chunk.value(), overlay.bits(), result.pricing);
    ledger.pay(origin_raw, overlay.raw(first), amount);
    result.per_node[first].income += amount;
    result.per_node[*origin].paid += amount;
    ++result.totals.payments;
    beneficiaries.push_back(first);

    for (std::size_t j = 1; j + 1 < hops.size(); ++j) {
      const std::uint64_t consumer = overlay.raw(hops[j]);
      const std::uint64_t provider = overlay.raw(hops[j + 1]);
      if (ledger.check_threshold_raw(provider, consumer) == ThresholdState::frozen) {
        ++result.totals.frozen_transfers;
      }
      ledger.add_unsettled(provider, consumer, 1);
    }
  }

  // One cumulative cheque per beneficiary paid during this download.
  std::sort(beneficiaries.begin(), beneficiaries.end());
  beneficiaries.erase(std::unique(beneficiaries.begin(), beneficiaries.end()), beneficiaries.end());
  for (std::uint32_t b : beneficiaries) ledger.issue_cheque(request.originator, overlay.node(b), step);
  ledger.amortize(1);
  ++result.totals.steps;
}

RunResult run_experiment(const Overlay& overlay, const WorkloadParams& workload,
                         const PricingMode& pricing, const LedgerSettings& settings,
                         std::optional<StepRange> shard) {
  workload.validate();
  const StepRange range = shard.value_or(StepRange{0, workload.files});
  if (range.begin > range.end || range.end > workload.files) {
    throw InvalidArgument("shard [" + std::to_string(range.begin) + ", " + std::to_string(range.end) +
                          ") is outside [0, " + std::to_string(workload.files) + ")");
  }
  RunResult result = RunResult::empty(overlay, workload, pricing, settings);
  if (range.begin == range.end) return result;

  const std::vector<Address> pool = originator_pool(overlay, workload.originator_fraction, workload.workload_seed);
  SwapLedger ledger(overlay.bits(), settings);
  for (std::uint64_t step = range.begin; step < range.end; ++step) {
    Rng rng = step_rng(workload.workload_seed, step);
    const FileRequest request = sample_file_request(pool, workload, overlay.bits(), rng);
    run_step(overlay, ledger, result, request, step);
  }
  result.steps.push_back(range);
  result.ledger = ledger.snapshot();
  return result;
}

}  // namespace swarmsim
