#include <sstream>

#include <gtest/gtest.h>

#include "collsched/error.hpp"
#include "collsched/generators.hpp"
#include "collsched/milp_general.hpp"
#include "collsched/schedule.hpp"
#include "collsched/simulator.hpp"
#include "fixtures.hpp"

namespace collsched {
namespace {

using testing::unit_epochs;

TEST(Extract, Star3CopySupport) {
  const GeneralModel gm =
      build_general_model(make_broadcast_star(), testing::star3_demand(), unit_epochs(2), {});
  const Solution sol = solve(gm.model, {});
  const Schedule s = extract_schedule(gm, prune_unused_flows(gm, sol));
  const std::vector<ScheduleEvent> want = {
      {0, 0, 0, 1, 0, 1.0}, {1, 0, 1, 2, 0, 1.0}, {1, 0, 1, 3, 0, 1.0}, {1, 0, 1, 4, 0, 1.0}};
  EXPECT_EQ(s.events, want);
  EXPECT_EQ(s.completion_epoch, 1);
}

TEST(Extract, EmptyDemand) {
  const GeneralModel gm =
      build_general_model(make_line(2, 1.0, 0.0), Demand(1.0, 0, {}), unit_epochs(1), {});
  const Solution sol = solve(gm.model, {});
  const Schedule s = extract_schedule(gm, prune_unused_flows(gm, sol));
  EXPECT_TRUE(s.events.empty());
  EXPECT_DOUBLE_EQ(s.transfer_time_sec(), 0.0);
}

struct LineCase {
  Topology t = make_line(3, 1.0, 0.0);
  Demand d{1.0, 1, {{0, 0, 2}}};
  GeneralModel gm = build_general_model(t, d, unit_epochs(4), {});
  Solution sol = solve(gm.model, {});
};

TEST(PruneFlows, RemovesSpuriousLoop) {
  LineCase c;
  ASSERT_TRUE(c.sol.has_values());
  const Solution clean = prune_unused_flows(c.gm, c.sol);
  Solution dirty = clean;
  // Bounce the chunk back from 2 to 1 after it has been delivered.
  const int back = c.gm.flow(0, c.t.find_edge(2, 1), 2);
  ASSERT_GE(back, 0);
  dirty.values[back] = 1.0;
  const Solution pruned = prune_unused_flows(c.gm, dirty);
  EXPECT_DOUBLE_EQ(pruned.values[back], 0.0);
  for (int k = 0; k < 4; ++k) {
    const int r = c.gm.delivered(0, 0, k);
    if (r >= 0) {
      EXPECT_DOUBLE_EQ(pruned.values[r], dirty.values[r]);
    }
  }
  EXPECT_EQ(pruned.values, clean.values);
}

TEST(PruneFlows, Idempotent) {
  LineCase c;
  const Solution once = prune_unused_flows(c.gm, c.sol);
  EXPECT_EQ(prune_unused_flows(c.gm, once).values, once.values);
  EXPECT_TRUE(c.gm.model.check_values(once.values).empty());
}

TEST(PruneFlows, MissingDeliveryThrows) {
  LineCase c;
  Solution broken = c.sol;
  for (int e = 0; e < c.t.num_edges(); ++e) {
    for (int k = 0; k < 4; ++k) {
      const int f = c.gm.flow(0, e, k);
      if (f >= 0) broken.values[f] = 0.0;
    }
  }
  EXPECT_THROW(prune_unused_flows(c.gm, broken), Error);
}

TEST(PruneSchedule, DropsEventsNobodyNeeds) {
  const Topology t = make_line(3, 1.0, 0.0);
  const Demand d(1.0, 1, {{0, 0, 1}});
  Schedule s;
  s.num_epochs = 3;
  s.events = {{0, 0, 0, 1, 0, 1.0}, {1, 0, 1, 2, 0, 1.0}};
  const Schedule p = prune_schedule(s, t, d);
  ASSERT_EQ(p.events.size(), 1u);
  EXPECT_EQ(p.events[0], s.events[0]);
  EXPECT_EQ(p.completion_epoch, 0);
  EXPECT_EQ(prune_schedule(p, t, d).events, p.events);
}

TEST(PruneSchedule, UntraceableThrows) {
  const Topology t = make_line(3, 1.0, 0.0);
  Schedule s;
  s.events = {{0, 0, 1, 2, 0, 1.0}};
  EXPECT_THROW(prune_schedule(s, t, Demand(1.0, 1, {{0, 0, 2}})), Error);
}

TEST(ExportMsccl, ListsStepsPerGpu) {
  Schedule s;
  s.events = {{0, 0, 0, 1, 0, 1.0}, {1, 0, 1, 2, 0, 1.0}};
  std::ostringstream out;
  export_msccl(s, make_line(3, 1.0, 0.0), out);
  const std::string text = out.str();
  EXPECT_NE(text.find("<algo"), std::string::npos);
  EXPECT_NE(text.find("<gpu id=\"2\""), std::string::npos);
  EXPECT_NE(text.find("type=\"r\""), std::string::npos);
}

// Node 1 receives chunk 0 once through no-copy switch 2 and serves both its own
// demand and the later hop to 4 and 0 from that single arrival.
TEST(PruneFlows, GpuReusesArrivalBehindNoCopySwitch) {
  const Topology t({false, false, true, false, false, false},
                   {{0, 4, 1.0, 1.0}, {4, 0, 1.0, 1.0}, {1, 2, 2.0, 1.0}, {2, 1, 2.0, 1.0},
                    {1, 4, 1.0, 0.0}, {4, 1, 1.0, 0.0}, {2, 3, 2.0, 0.0}, {3, 2, 2.0, 0.0},
                    {4, 5, 2.0, 1.0}, {5, 4, 2.0, 1.0}});
  const Demand d(1.0, 2,
                 {{3, 0, 0}, {3, 0, 1}, {4, 1, 0}, {4, 1, 1}, {4, 1, 3}, {4, 1, 5}});
  ModelOptions o;
  o.switch_mode = SwitchMode::kNoCopy;
  const GeneralModel gm = build_general_model(t, d, unit_epochs(20), o);
  const Solution sol = solve(gm.model, {});
  ASSERT_TRUE(sol.has_values());
  const Solution pruned = prune_unused_flows(gm, sol);
  EXPECT_TRUE(gm.model.check_values(pruned.values).empty());
  EXPECT_TRUE(simulate(extract_schedule(gm, pruned), t, d).ok());
}

}  // namespace
}  // namespace collsched
