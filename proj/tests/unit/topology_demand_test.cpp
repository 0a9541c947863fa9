#include <set>

#include <gtest/gtest.h>

#include "collsched/demand.hpp"
#include "collsched/error.hpp"
#include "collsched/generators.hpp"
#include "collsched/topology.hpp"
#include "fixtures.hpp"

namespace collsched {
namespace {

TEST(ValidateTopology, Star3IsClean) {
  EXPECT_TRUE(validate_topology(make_broadcast_star()).empty());
}

TEST(ValidateTopology, ZeroCapacityReported) {
  const Topology t({false, false}, {{0, 1, 0.0, 0.0}});
  const auto v = validate_topology(t);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, "non-positive capacity");
  EXPECT_THROW(require_valid(t), Error);
}

TEST(ValidateTopology, SwitchWithoutOutgoingEdge) {
  const Topology t({false, true}, {{0, 1, 1.0, 0.0}});
  EXPECT_EQ(validate_topology(t).size(), 1u);
}

TEST(ValidateTopology, NegativeAlphaAndSelfLoop) {
  const Topology t({false, false}, {{0, 1, 1.0, -1.0}, {1, 1, 1.0, 0.0}});
  const auto v = validate_topology(t);
  std::set<std::string> kinds;
  for (const auto& x : v) kinds.insert(x.kind);
  EXPECT_TRUE(kinds.count("negative alpha"));
  EXPECT_TRUE(kinds.count("self-loop"));
}

TEST(Topology, UnknownNodeThrows) {
  EXPECT_THROW(Topology({false}, {{0, 3, 1.0, 0.0}}), Error);
}

TEST(Topology, CapacityOverridePerEpoch) {
  const Topology t({false, false}, {{0, 1, 4.0, 0.0}}, {{0, 2, 1.0}});
  EXPECT_DOUBLE_EQ(t.capacity(0, 1), 4.0);
  EXPECT_DOUBLE_EQ(t.capacity(0, 2), 1.0);
  EXPECT_DOUBLE_EQ(t.capacity(0, 3), 4.0);
}

TEST(Generators, Dgx1Shape) {
  const Topology t = make_dgx1();
  EXPECT_EQ(t.num_nodes(), 8);
  EXPECT_EQ(t.num_edges(), 32);
  EXPECT_TRUE(t.switches().empty());
  EXPECT_TRUE(validate_topology(t).empty());
  EXPECT_DOUBLE_EQ(t.max_capacity(), 50e9);
  EXPECT_DOUBLE_EQ(t.min_capacity(), 25e9);
  // Every GPU has four NVLink neighbours.
  for (int v = 0; v < 8; ++v) {
    EXPECT_EQ(t.out_edges(v).size(), 4u);
    EXPECT_EQ(t.in_edges(v).size(), 4u);
  }
}

TEST(Generators, Ndv2MultiChassisAddsSwitch) {
  const Topology t = make_ndv2(4);
  EXPECT_EQ(t.num_nodes(), 33);
  EXPECT_EQ(t.switches(), std::vector<int>{32});
  EXPECT_EQ(t.num_edges(), 4 * 32 + 8);
  EXPECT_TRUE(validate_topology(t).empty());
}

TEST(Generators, Dgx2TwoChassis) {
  const Topology t = make_dgx2(2);
  EXPECT_EQ(t.num_nodes(), 34);
  EXPECT_EQ(t.switches().size(), 2u);
  EXPECT_EQ(t.num_edges(), 2 * 32 + 16);
  EXPECT_TRUE(validate_topology(t).empty());
}

TEST(Generators, RingAndLineEdgeCounts) {
  EXPECT_EQ(make_ring(6, 1.0, 0.0).num_edges(), 12);
  EXPECT_EQ(make_line(4, 1.0, 0.0).num_edges(), 6);
  EXPECT_EQ(make_star(4, 1.0, 0.0).num_edges(), 8);
}

TEST(GenerateDemand, AllGatherDgx1) {
  const Demand d = generate_demand(CollectiveKind::kAllGather, make_dgx1(), 1, 25e3);
  EXPECT_EQ(d.size(), 56);
  EXPECT_EQ(d.chunk_count(), 8);
  EXPECT_EQ(d.commodities().size(), 8u);
}

TEST(GenerateDemand, AllToAllDgx1DistinctChunks) {
  const Demand d = generate_demand(CollectiveKind::kAllToAll, make_dgx1(), 1, 25e3);
  EXPECT_EQ(d.size(), 56);
  std::set<int> chunks;
  for (const DemandEntry& e : d.entries()) chunks.insert(e.chunk);
  EXPECT_EQ(chunks.size(), 56u);
  for (const Commodity& c : d.commodities()) EXPECT_EQ(c.dsts.size(), 1u);
}

TEST(GenerateDemand, AllGatherTwoNodeLine) {
  const Demand d = generate_demand(CollectiveKind::kAllGather, make_line(2, 1.0, 0.0), 1, 1.0);
  EXPECT_EQ(d.entries(), (std::vector<DemandEntry>{{0, 0, 1}, {1, 1, 0}}));
}

TEST(GenerateDemand, SkipsSwitches) {
  const Demand d = generate_demand(CollectiveKind::kAllGather, make_star(3, 1.0, 0.0), 1, 1.0);
  for (const DemandEntry& e : d.entries()) {
    EXPECT_NE(e.src, 0);
    EXPECT_NE(e.dst, 0);
  }
  EXPECT_EQ(d.size(), 6);
}

TEST(Demand, RejectsSelfDemand) {
  EXPECT_THROW(Demand(1.0, 1, {{0, 0, 0}}), Error);
}

TEST(Demand, DeduplicatesEntries) {
  const Demand d(1.0, 1, {{0, 0, 1}, {0, 0, 1}});
  EXPECT_EQ(d.size(), 1);
}

TEST(MergeDemands, UnionShiftsChunkIds) {
  const Topology t = make_line(2, 1.0, 0.0);
  const Demand ag = generate_demand(CollectiveKind::kAllGather, t, 1, 1.0);
  const Demand a2a = generate_demand(CollectiveKind::kAllToAll, t, 1, 1.0);
  const Demand m = merge_demands({ag, a2a});
  EXPECT_EQ(m.chunk_count(), ag.chunk_count() + a2a.chunk_count());
  for (const DemandEntry& e : ag.entries()) EXPECT_TRUE(m.wants(e.src, e.chunk, e.dst));
  for (const DemandEntry& e : a2a.entries()) {
    EXPECT_TRUE(m.wants(e.src, e.chunk + ag.chunk_count(), e.dst));
  }
}

TEST(MergeDemands, SingleIsIdentity) {
  const Demand d = testing::funnel_demand();
  const Demand m = merge_demands({d});
  EXPECT_EQ(m.entries(), d.entries());
  EXPECT_EQ(m.chunk_count(), d.chunk_count());
}

TEST(MergeDemands, TwoAllGathersOnThreeNodes) {
  const Demand ag = generate_demand(CollectiveKind::kAllGather, make_ring(3, 1.0, 0.0), 1, 1.0);
  EXPECT_EQ(merge_demands({ag, ag}).size(), 12);
}

TEST(MergeDemands, ChunkSizeMismatchThrows) {
  EXPECT_THROW(merge_demands({Demand(1.0, 1, {{0, 0, 1}}), Demand(2.0, 1, {{0, 0, 1}})}),
               Error);
}

TEST(CheckDemand, SwitchAsDestinationRejected) {
  EXPECT_THROW(check_demand_against(make_broadcast_star(), Demand(1.0, 1, {{0, 0, 1}})),
               Error);
}

}  // namespace
}  // namespace collsched
