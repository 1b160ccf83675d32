#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "swarmsim/simulation.hpp"

namespace swarmsim {
namespace {

TEST(OriginatorPool, FullFractionIsEveryNode) {
  const Overlay ov = build_overlay({50, 10, 4, 1});
  auto pool = originator_pool(ov, 1.0, 3);
  std::sort(pool.begin(), pool.end());
  EXPECT_EQ(pool, std::vector<Address>(ov.nodes().begin(), ov.nodes().end()));
}

TEST(OriginatorPool, TwentyPercentOfThousand) {
  const Overlay ov = build_overlay({1000, 16, 4, 1});
  const auto pool = originator_pool(ov, 0.2, 9);
  EXPECT_EQ(pool.size(), 200U);
  EXPECT_EQ(std::set<Address>(pool.begin(), pool.end()).size(), 200U);
  for (Address a : pool) EXPECT_TRUE(ov.index_of(a).has_value());
  EXPECT_EQ(pool, originator_pool(ov, 0.2, 9));
  EXPECT_NE(pool, originator_pool(ov, 0.2, 10));
}

TEST(OriginatorPool, RejectsEmptyPoolAndBadFraction) {
  const Overlay ov = build_overlay({10, 8, 4, 1});
  EXPECT_THROW(originator_pool(ov, 0.05, 0), InvalidArgument);
  EXPECT_THROW(originator_pool(ov, 0.0, 0), InvalidArgument);
  EXPECT_THROW(originator_pool(ov, 1.5, 0), InvalidArgument);
  EXPECT_EQ(originator_pool(ov, 0.1, 0).size(), 1U);
}

TEST(WorkloadParams, Validation) {
  EXPECT_THROW((WorkloadParams{1, 0, 5, 0.2, 0}).validate(), InvalidArgument);
  EXPECT_THROW((WorkloadParams{1, 6, 5, 0.2, 0}).validate(), InvalidArgument);
  EXPECT_THROW((WorkloadParams{1, 1, 5, 0.0, 0}).validate(), InvalidArgument);
  EXPECT_NO_THROW((WorkloadParams{0, 1, 1, 1.0, 0}).validate());
}

TEST(SampleFileRequest, SingleChunk) {
  const std::vector<Address> pool{Address(3, 8)};
  Rng rng(1);
  const auto req = sample_file_request(pool, WorkloadParams{1, 1, 1, 1.0, 0}, 8, rng);
  EXPECT_EQ(req.originator, Address(3, 8));
  EXPECT_EQ(req.chunks.size(), 1U);
  EXPECT_THROW(sample_file_request(std::span<const Address>{}, WorkloadParams{}, 8, rng), InvalidArgument);
}

TEST(SampleFileRequest, MeanChunkCountNear550) {
  const std::vector<Address> pool{Address(1, 16), Address(2, 16)};
  std::uint64_t total = 0;
  constexpr int kRequests = 100000;
  for (int i = 0; i < kRequests; ++i) {
    Rng rng = step_rng(7, static_cast<std::uint64_t>(i));
    const auto req = sample_file_request(pool, WorkloadParams{1, 100, 1000, 1.0, 0}, 4, rng);
    total += req.chunks.size();
  }
  const double mean = static_cast<double>(total) / kRequests;
  EXPECT_NEAR(mean, 550.0, 5.5);
}

TEST(SampleFileRequest, ChunkAddressesPassChiSquared) {
  const std::vector<Address> pool{Address(1, 16)};
  std::array<std::uint64_t, 16> bins{};
  std::uint64_t drawn = 0;
  Rng rng(11);
  while (drawn < 100000) {
    const auto req = sample_file_request(pool, WorkloadParams{1, 1000, 1000, 1.0, 0}, 16, rng);
    for (Address c : req.chunks) {
      ++bins[c.value() >> 12];
      ++drawn;
    }
  }
  const double expected = static_cast<double>(drawn) / 16.0;
  double chi2 = 0.0;
  for (auto count : bins) chi2 += (count - expected) * (count - expected) / expected;
  // 15 degrees of freedom, alpha = 0.001.
  EXPECT_LT(chi2, 37.697);
}

TEST(SampleFileRequest, OriginatorUniformOverPool) {
  const std::vector<Address> pool{Address(1, 8), Address(2, 8), Address(3, 8), Address(4, 8)};
  std::map<Address, int> hits;
  for (std::uint64_t s = 0; s < 8000; ++s) {
    Rng rng = step_rng(0, s);
    ++hits[sample_file_request(pool, WorkloadParams{1, 1, 1, 1.0, 0}, 8, rng).originator];
  }
  ASSERT_EQ(hits.size(), 4U);
  for (const auto& [a, n] : hits) EXPECT_NEAR(n, 2000, 200);
}

Overlay two_nodes() { return build_overlay({2, 4, 4, 0}, {Address(0b0000, 4), Address(0b1111, 4)}); }

TEST(RunStep, ChunkStoredByOriginator) {
  const Overlay ov = two_nodes();
  RunResult result = RunResult::empty(ov, WorkloadParams{}, PricingMode{});
  SwapLedger ledger(4);
  run_step(ov, ledger, result, FileRequest{Address(0, 4), {Address(1, 4)}}, 0);
  EXPECT_EQ(result.per_node[0], (NodeCounters{0, 0, 0, 0, 1}));
  EXPECT_EQ(result.per_node[1], NodeCounters{});
  EXPECT_EQ(result.totals.zero_hop_downloads, 1U);
  EXPECT_EQ(result.totals.hops, 0U);
  EXPECT_EQ(ledger.total_income(), 0U);
}

TEST(RunStep, OneHopNeighbour) {
  const Overlay ov = two_nodes();
  RunResult result = RunResult::empty(ov, WorkloadParams{}, PricingMode{});
  SwapLedger ledger(4);
  const Address chunk(0b1100, 4);
  run_step(ov, ledger, result, FileRequest{Address(0, 4), {chunk}}, 0);
  const std::uint64_t expected_price = 0b1111 ^ 0b1100;
  EXPECT_EQ(result.per_node[1], (NodeCounters{1, 1, expected_price, 0, 0}));
  EXPECT_EQ(result.per_node[0], (NodeCounters{0, 0, 0, expected_price, 1}));
  EXPECT_EQ(ledger.income(Address(0b1111, 4)), expected_price);
  ASSERT_EQ(ledger.cheques().size(), 1U);
  EXPECT_EQ(ledger.cheques()[0].cumulative_amount, expected_price);
}

TEST(RunStep, RejectsUnknownOriginator) {
  const Overlay ov = two_nodes();
  RunResult result = RunResult::empty(ov, WorkloadParams{}, PricingMode{});
  SwapLedger ledger(4);
  EXPECT_THROW(run_step(ov, ledger, result, FileRequest{Address(3, 4), {Address(1, 4)}}, 0), InvalidArgument);
}

TEST(RunStep, TotalsMatchRecordedPaths) {
  const Overlay ov = build_overlay({200, 12, 4, 5});
  const WorkloadParams w{1, 50, 200, 0.5, 2};
  const auto pool = originator_pool(ov, w.originator_fraction, w.workload_seed);
  RunResult result = RunResult::empty(ov, w, PricingMode{});
  SwapLedger ledger(12);
  for (std::uint64_t step = 0; step < 5; ++step) {
    Rng rng = step_rng(w.workload_seed, step);
    const FileRequest req = sample_file_request(pool, w, 12, rng);
    const RunTotals before = result.totals;
    StepTrace trace;
    run_step(ov, ledger, result, req, step, &trace);
    ASSERT_EQ(trace.paths.size(), req.chunks.size());
    std::uint64_t hops = 0;
    std::uint64_t zero = 0;
    for (const Path& p : trace.paths) {
      hops += p.size() - 1;
      zero += p.size() == 1;
      ASSERT_EQ(p.hops.front(), req.originator);
    }
    EXPECT_EQ(result.totals.hops - before.hops, hops);
    EXPECT_EQ(result.totals.zero_hop_downloads - before.zero_hop_downloads, zero);
    EXPECT_EQ(result.totals.chunks - before.chunks, req.chunks.size());
  }
}

TEST(RunExperiment, ZeroFilesLeavesCountersZero) {
  const Overlay ov = build_overlay({100, 10, 4, 0});
  const RunResult r = run_experiment(ov, WorkloadParams{0, 100, 1000, 0.2, 0}, PricingMode{});
  EXPECT_EQ(r.totals, RunTotals{});
  for (const auto& c : r.per_node) EXPECT_EQ(c, NodeCounters{});
  EXPECT_TRUE(r.steps.empty());
  EXPECT_TRUE(r.ledger.balances.empty());
}

TEST(RunExperiment, DeterministicAndSeedSensitive) {
  const Overlay ov = build_overlay({300, 12, 4, 0});
  const WorkloadParams w{40, 10, 100, 0.2, 4};
  const RunResult a = run_experiment(ov, w, PricingMode{});
  EXPECT_EQ(a, run_experiment(ov, w, PricingMode{}));
  WorkloadParams other = w;
  other.workload_seed = 5;
  EXPECT_NE(a.per_node, run_experiment(ov, other, PricingMode{}).per_node);
}

TEST(RunExperiment, RejectsShardOutsideRange) {
  const Overlay ov = build_overlay({20, 8, 4, 0});
  EXPECT_THROW(run_experiment(ov, WorkloadParams{10, 1, 2, 1.0, 0}, PricingMode{}, {}, StepRange{5, 11}),
               InvalidArgument);
  EXPECT_THROW(run_experiment(ov, WorkloadParams{10, 1, 2, 1.0, 0}, PricingMode{}, {}, StepRange{6, 5}),
               InvalidArgument);
}

class RunProperties : public ::testing::TestWithParam<std::tuple<unsigned, double, std::uint64_t>> {};

TEST_P(RunProperties, ConservationConsistencyMonotonicity) {
  const auto [k, fraction, seed] = GetParam();
  const Overlay ov = build_overlay({300, 12, k, seed});
  const WorkloadParams w{30, 10, 200, fraction, seed + 100};
  const RunResult r = run_experiment(ov, w, PricingMode{});

  std::uint64_t forwarded = 0;
  std::uint64_t income = 0;
  std::uint64_t paid = 0;
  std::uint64_t first_hops = 0;
  std::uint64_t originated = 0;
  for (const NodeCounters& c : r.per_node) {
    forwarded += c.forwarded;
    income += c.income;
    paid += c.paid;
    first_hops += c.first_hop_forwarded;
    originated += c.originated_chunks;
    EXPECT_LE(c.first_hop_forwarded, c.forwarded);
    if (c.income > 0) EXPECT_GT(c.first_hop_forwarded, 0U);
  }
  EXPECT_EQ(forwarded, r.totals.hops);
  EXPECT_EQ(income, paid);
  EXPECT_EQ(first_hops, r.totals.payments);
  EXPECT_EQ(r.totals.payments + r.totals.zero_hop_downloads, r.totals.chunks);
  EXPECT_EQ(originated, r.totals.chunks);
  EXPECT_EQ(r.totals.steps, 30U);

  // Doubling the workload replays the same first 30 steps, then adds more.
  WorkloadParams doubled = w;
  doubled.files = 60;
  const RunResult r2 = run_experiment(ov, doubled, PricingMode{});
  for (std::size_t i = 0; i < r.per_node.size(); ++i) {
    EXPECT_GE(r2.per_node[i].forwarded, r.per_node[i].forwarded);
    EXPECT_GE(r2.per_node[i].first_hop_forwarded, r.per_node[i].first_hop_forwarded);
    EXPECT_GE(r2.per_node[i].income, r.per_node[i].income);
    EXPECT_GE(r2.per_node[i].paid, r.per_node[i].paid);
    EXPECT_GE(r2.per_node[i].originated_chunks, r.per_node[i].originated_chunks);
  }
  EXPECT_GE(r2.totals.hops, r.totals.hops);
}

INSTANTIATE_TEST_SUITE_P(Cells, RunProperties,
                         ::testing::Combine(::testing::Values(4U, 20U), ::testing::Values(0.2, 1.0),
                                            ::testing::Values(std::uint64_t{1}, std::uint64_t{2})));

TEST(RunExperiment, ThresholdCountsFrozenTransfersOnly) {
  const Overlay ov = build_overlay({200, 12, 4, 0});
  const WorkloadParams w{20, 50, 100, 0.2, 0};
  const RunResult open = run_experiment(ov, w, PricingMode{});
  const RunResult limited = run_experiment(ov, w, PricingMode{}, LedgerSettings{2, 0});
  EXPECT_EQ(open.totals.frozen_transfers, 0U);
  EXPECT_GT(limited.totals.frozen_transfers, 0U);
  EXPECT_EQ(open.per_node, limited.per_node);
}

}  // namespace
}  // namespace swarmsim
