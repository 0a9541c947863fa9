#include <gtest/gtest.h>

#include "collsched/error.hpp"
#include "collsched/generators.hpp"
#include "collsched/simulator.hpp"
#include "fixtures.hpp"

namespace collsched {
namespace {

Schedule with_events(std::vector<ScheduleEvent> events) {
  Schedule s;
  s.events = std::move(events);
  return s;
}

bool has(const SimReport& r, ViolationKind kind) {
  for (const Violation& v : r.violations) {
    if (v.kind == kind) return true;
  }
  return false;
}

TEST(Simulate, Star3CopySchedule) {
  const Schedule s = with_events(
      {{0, 0, 0, 1, 0, 1.0}, {1, 0, 1, 2, 0, 1.0}, {1, 0, 1, 3, 0, 1.0}, {1, 0, 1, 4, 0, 1.0}});
  const SimReport r = simulate(s, make_broadcast_star(), testing::star3_demand());
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.completion_epoch, 1);
  EXPECT_DOUBLE_EQ(r.transfer_time_sec, 2.0);
  for (int d : {2, 3, 4}) EXPECT_DOUBLE_EQ(r.output_buffer_bytes[d], 1.0);
}

// s1's chunk crosses three one-epoch links and reaches h3 at the same time as
// s2's chunk over the five-epoch link; h3 then feeds d one chunk per epoch.
TEST(Simulate, LatencyChainHandSchedule) {
  const Schedule s = with_events({{0, 0, 0, 1, 0, 1.0},
                                  {0, 5, 5, 3, 1, 1.0},
                                  {2, 0, 1, 2, 0, 1.0},
                                  {4, 0, 2, 3, 0, 1.0},
                                  {6, 5, 3, 4, 1, 1.0},
                                  {7, 0, 3, 4, 0, 1.0}});
  const SimReport r = simulate(s, make_latency_chain(1.0, 5.0), testing::chain_demand());
  EXPECT_TRUE(r.ok());
  EXPECT_DOUBLE_EQ(r.transfer_time_sec, 8.0);
  EXPECT_LT(r.transfer_time_sec, 5.0 + 4.0);
}

TEST(Simulate, ForwardingTooEarlyIsCausality) {
  const Schedule s = with_events({{0, 0, 0, 1, 0, 1.0}, {1, 0, 1, 2, 0, 1.0}});
  const SimReport r =
      simulate(s, make_latency_chain(1.0, 5.0), Demand(1.0, 1, {{0, 0, 2}}));
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(has(r, ViolationKind::kCausality));
}

TEST(Simulate, TwoChunksOnUnitLinkIsCapacity) {
  const Schedule s = with_events({{0, 0, 0, 1, 0, 1.0}, {0, 0, 0, 1, 1, 1.0}});
  const SimReport r =
      simulate(s, make_line(2, 1.0, 0.0), Demand(1.0, 2, {{0, 0, 1}, {0, 1, 1}}));
  EXPECT_TRUE(has(r, ViolationKind::kCapacity));
}

TEST(Simulate, WindowedCapacityOnSlowLink) {
  const Topology t({false, false, false}, {{0, 1, 2.0, 0.0}, {0, 2, 1.0, 0.0}});
  Schedule s = with_events({{0, 0, 0, 2, 0, 1.0}, {1, 0, 0, 2, 1, 1.0}});
  s.tau_sec = 0.5;
  s.capacity_mode = CapacityMode::kWindowed;
  const SimReport r = simulate(s, t, Demand(1.0, 2, {{0, 0, 2}, {0, 1, 2}}));
  EXPECT_TRUE(has(r, ViolationKind::kCapacity));
  s.events[1].epoch = 2;
  EXPECT_TRUE(simulate(s, t, Demand(1.0, 2, {{0, 0, 2}, {0, 1, 2}})).ok());
}

TEST(Simulate, SwitchHoldingAcrossEpochs) {
  const Schedule s = with_events({{0, 0, 0, 1, 0, 1.0}, {2, 0, 1, 2, 0, 1.0}});
  const SimReport r = simulate(s, make_broadcast_star(), Demand(1.0, 1, {{0, 0, 2}}));
  EXPECT_TRUE(has(r, ViolationKind::kSwitchBuffer) || has(r, ViolationKind::kCausality));
  EXPECT_FALSE(r.ok());
}

TEST(Simulate, NoCopySwitchCannotDuplicate) {
  Schedule s = with_events({{0, 0, 0, 1, 0, 1.0}, {1, 0, 1, 2, 0, 1.0}, {1, 0, 1, 3, 0, 1.0}});
  s.switch_mode = SwitchMode::kNoCopy;
  const SimReport r =
      simulate(s, make_broadcast_star(), Demand(1.0, 1, {{0, 0, 2}, {0, 0, 3}}));
  EXPECT_FALSE(r.ok());
}

TEST(Simulate, HyperEdgeBudget) {
  Schedule s = with_events({{0, 0, 0, 2, 0, 1.0}, {0, 0, 0, 3, 0, 1.0}});
  s.switch_mode = SwitchMode::kHyperEdge;
  const SimReport r =
      simulate(s, make_broadcast_star(), Demand(1.0, 1, {{0, 0, 2}, {0, 0, 3}}));
  EXPECT_TRUE(has(r, ViolationKind::kHyperEdgeBudget));
  s.events[1].epoch = 1;
  EXPECT_TRUE(simulate(s, make_broadcast_star(), Demand(1.0, 1, {{0, 0, 2}, {0, 0, 3}})).ok());
}

TEST(Simulate, FluidHalvesAddUp) {
  Schedule s = with_events({{0, 0, 0, 1, 0, 0.5}, {0, 0, 0, 2, 0, 0.5}, {1, 0, 1, 3, 0, 0.5},
                            {1, 0, 2, 3, 0, 0.5}});
  s.transmission = Transmission::kFluid;
  const Demand d(1.0, 1, {{0, 0, 3}});
  const SimReport r = simulate(s, make_diamond(0.5), d);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.completion_epoch, 1);
  // Fluid sends consume the sender's share, so the source has nothing left.
  s.events.push_back({1, 0, 0, 1, 0, 0.5});
  EXPECT_TRUE(has(simulate(s, make_diamond(0.5), d), ViolationKind::kCausality));
}

TEST(Simulate, MalformedEventThrows) {
  EXPECT_THROW(simulate(with_events({{-1, 0, 0, 1, 0, 1.0}}), make_line(2, 1.0, 0.0),
                        Demand(1.0, 1, {{0, 0, 1}})),
               Error);
  EXPECT_THROW(simulate(with_events({{0, 0, 0, 1, 0, 1.5}}), make_line(2, 1.0, 0.0),
                        Demand(1.0, 1, {{0, 0, 1}})),
               Error);
}

TEST(AlgBw, Arithmetic) {
  SimReport r;
  r.transfer_time_sec = 1e-3;
  r.output_buffer_bytes = {1e6, 0.0};
  r.total_output_bytes = 1e6;
  const Bandwidth bw = algorithmic_bandwidth(r);
  EXPECT_DOUBLE_EQ(bw.max_node, 1e9);
  EXPECT_DOUBLE_EQ(bw.aggregate, 1e9);
}

TEST(AlgBw, Dgx1AllGatherFromPublishedTime) {
  SimReport r;
  r.transfer_time_sec = 6.1e-6;
  r.output_buffer_bytes.assign(8, 7 * 3 * 25e3);
  r.total_output_bytes = 8 * 7 * 3 * 25e3;
  EXPECT_NEAR(algorithmic_bandwidth(r).max_node / 1e9, 86.07, 0.01);
}

TEST(AlgBw, EmptyDemandIsZero) {
  const SimReport r = simulate(Schedule{}, make_line(2, 1.0, 0.0), Demand(1.0, 0, {}));
  const Bandwidth bw = algorithmic_bandwidth(r);
  EXPECT_DOUBLE_EQ(bw.max_node, 0.0);
  EXPECT_DOUBLE_EQ(bw.aggregate, 0.0);
}

TEST(AlgBw, RefusesViolatingReport) {
  SimReport r;
  r.violations.push_back({ViolationKind::kCapacity, "0->1", 0});
  EXPECT_THROW(algorithmic_bandwidth(r), Error);
}

}  // namespace
}  // namespace collsched
