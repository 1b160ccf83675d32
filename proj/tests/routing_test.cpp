#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "swarmsim/rng.hpp"
#include "swarmsim/routing.hpp"

namespace swarmsim {
namespace {

Address a8(std::uint64_t v) { return Address(v, 8); }

// 8-bit network around node 91 = 0b01011011: five nodes with a leading 1
// (bucket 0 of 91), one at proximity 3 (64) and a few close neighbours.
Overlay node91_overlay() {
  std::vector<Address> nodes;
  for (std::uint64_t v : {91, 245, 200, 180, 130, 250, 64, 88, 90, 30}) nodes.push_back(a8(v));
  return build_overlay({nodes.size(), 8, 4, 1}, nodes);
}

TEST(NextHop, ChunkNear245LeavesNode91ThroughBucketZero) {
  const Overlay ov = node91_overlay();
  const RoutingTable& t = ov.table(*ov.index_of(a8(91)));
  ASSERT_EQ(t.buckets[0].size(), 4U);
  const auto hop = next_hop(ov, a8(91), a8(244));
  ASSERT_TRUE(hop.has_value());
  EXPECT_EQ(proximity_order(a8(91), *hop), 0U);
  EXPECT_NE(std::find(t.buckets[0].begin(), t.buckets[0].end(), *hop), t.buckets[0].end());
  // Chunk near 64 leaves through bucket 3.
  const auto hop64 = next_hop(ov, a8(91), a8(65));
  ASSERT_TRUE(hop64.has_value());
  EXPECT_EQ(*hop64, a8(64));
}

TEST(NextHop, GlobalClosestHasNoNextHop) {
  const Overlay ov = build_overlay({64, 8, 4, 2});
  for (std::uint64_t c = 0; c < 256; ++c) {
    const Address storer = closest_node_global(ov, a8(c));
    EXPECT_FALSE(next_hop(ov, storer, a8(c)).has_value());
  }
}

TEST(NextHop, RejectsNonNodeAndWidthMismatch) {
  const Overlay ov = node91_overlay();
  EXPECT_THROW(next_hop(ov, a8(92), a8(1)), InvalidArgument);
  EXPECT_THROW(next_hop(ov, a8(91), Address(1, 16)), InvalidArgument);
  EXPECT_THROW(route(ov, a8(92), a8(1)), InvalidArgument);
}

TEST(NextHop, PrefixBucketWinsExhaustively) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Overlay ov = build_overlay({32, 8, 2, seed});
    for (Address current : ov.nodes()) {
      const RoutingTable& t = ov.table(*ov.index_of(current));
      for (std::uint64_t c = 0; c < 256; ++c) {
        const auto hop = next_hop(ov, current, a8(c));
        ASSERT_EQ(hop, oracle::next_hop_full_scan(ov, current, c)) << to_string(current) << " chunk " << c;
        const unsigned po = proximity_order(current, a8(c));
        if (po < 8 && !t.buckets[po].empty()) {
          ASSERT_TRUE(hop.has_value());
          EXPECT_EQ(proximity_order(current, *hop), po);
        }
      }
    }
  }
}

TEST(Route, OriginatorIsStorer) {
  const Overlay ov = node91_overlay();
  const Path p = route(ov, a8(91), a8(91));
  ASSERT_EQ(p.size(), 1U);
  EXPECT_EQ(p.hops[0], a8(91));
}

TEST(Route, TwoNodeSingleHop) {
  const Overlay ov = build_overlay({2, 4, 4, 0}, {Address(0b0000, 4), Address(0b1111, 4)});
  const Path p = route(ov, Address(0b0000, 4), Address(0b1110, 4));
  ASSERT_EQ(p.size(), 2U);
  EXPECT_EQ(p.hops[1], Address(0b1111, 4));
}

class RouteOracle : public ::testing::TestWithParam<unsigned> {};

TEST_P(RouteOracle, EndsAtGlobalClosestWithValidPath) {
  const unsigned k = GetParam();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Overlay ov = build_overlay({64, 8, k, seed});
    for (Address origin : ov.nodes()) {
      for (std::uint64_t c = 0; c < 256; ++c) {
        const Path p = route(ov, origin, a8(c));
        ASSERT_EQ(p.hops.front(), origin);
        ASSERT_EQ(p.hops.back(), oracle::closest_linear(ov, c));
        ASSERT_LE(p.size(), 9U);
        std::set<Address> seen;
        for (std::size_t j = 0; j < p.size(); ++j) {
          ASSERT_TRUE(seen.insert(p.hops[j]).second);
          if (j == 0) continue;
          ASSERT_LT(p.hops[j].value() ^ c, p.hops[j - 1].value() ^ c);
          // Each hop is an entry of the previous hop's table.
          const RoutingTable& t = ov.table(*ov.index_of(p.hops[j - 1]));
          const auto& bucket = t.buckets[proximity_order(p.hops[j - 1], p.hops[j])];
          ASSERT_NE(std::find(bucket.begin(), bucket.end(), p.hops[j]), bucket.end());
        }
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(BucketSizes, RouteOracle, ::testing::Values(2U, 4U, 20U));

TEST(Route, FullScaleRoutesAlwaysReachStorer) {
  const Overlay ov = build_overlay({1000, 16, 4, 3});
  Rng rng(5);
  for (int i = 0; i < 20000; ++i) {
    const Address origin = ov.node(static_cast<std::uint32_t>(rng.below(ov.size())));
    const Address chunk(rng.below(1 << 16), 16);
    const Path p = route(ov, origin, chunk);
    ASSERT_EQ(p.hops.back(), closest_node_global(ov, chunk));
    ASSERT_LE(p.size(), 17U);
  }
}

}  // namespace
}  // namespace swarmsim
