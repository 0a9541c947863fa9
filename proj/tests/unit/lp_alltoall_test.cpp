#include <gtest/gtest.h>

#include "collsched/error.hpp"
#include "collsched/generators.hpp"
#include "collsched/lp_alltoall.hpp"
#include "collsched/milp_general.hpp"
#include "collsched/simulator.hpp"
#include "fixtures.hpp"

namespace collsched {
namespace {

using testing::unit_epochs;

TEST(Lp, TwoNodeRingAllToAll) {
  const Topology t = make_line(2, 1.0, 0.0);
  const Demand d = generate_demand(CollectiveKind::kAllToAll, t, 1, 1.0);
  const LpModel lp = build_lp_model(t, d, unit_epochs(1), {});
  const Solution s = solve(lp.model, {});
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_NEAR(s.objective, 2.0, 1e-9);
  EXPECT_EQ(lp_completion_epoch(lp, s), 0);
}

int lp_min_horizon(const Topology& t, const Demand& d, const EpochConfig& base, int k_hi) {
  return min_feasible_horizon(
             [&](int K) {
               EpochConfig cfg = base;
               cfg.num_epochs = K;
               return build_lp_model(t, d, cfg, {});
             },
             1, k_hi, {})
      .horizon;
}

TEST(Lp, Dgx1ZeroAlphaAllToAllHorizon) {
  Topology t0 = make_dgx1();
  std::vector<Edge> edges = t0.edges();
  for (Edge& e : edges) e.alpha_sec = 0.0;
  const Topology t(t0.switch_flags(), edges);
  const Demand d = generate_demand(CollectiveKind::kAllToAll, t, 1, 25e3);
  EpochConfig cfg;
  cfg.duration_mode = DurationMode::kSlowestLink;
  cfg.tau_sec = epoch_duration(t, 25e3, cfg.duration_mode, 1);
  EXPECT_EQ(lp_min_horizon(t, d, cfg, 8), 3);
}

TEST(Lp, LatencyChainHorizon) {
  EXPECT_EQ(lp_min_horizon(make_latency_chain(1.0, 5.0), testing::chain_demand(), unit_epochs(1), 12),
            8);
}

TEST(Lp, RejectsHyperEdge) {
  ModelOptions o;
  o.switch_mode = SwitchMode::kHyperEdge;
  EXPECT_THROW(build_lp_model(make_broadcast_star(), testing::star3_demand(), unit_epochs(3), o),
               Error);
}

TEST(LpDecompose, SinglePathOneEvent) {
  const Topology t = make_line(2, 1.0, 0.0);
  const Demand d(1.0, 1, {{0, 0, 1}});
  const LpModel lp = build_lp_model(t, d, unit_epochs(1), {});
  const Solution s = solve(lp.model, {});
  const Schedule sch = lp_rates_to_schedule(lp, s);
  ASSERT_EQ(sch.events.size(), 1u);
  EXPECT_EQ(sch.events[0], (ScheduleEvent{0, 0, 0, 1, 0, 1.0}));
  EXPECT_EQ(sch.transmission, Transmission::kFluid);
}

// Half-capacity source links force the chunk across both branches.
TEST(LpDecompose, SplitOverParallelPaths) {
  const Topology t = make_diamond(0.5);
  const Demand d(1.0, 1, {{0, 0, 3}});
  const LpModel lp = build_lp_model(t, d, unit_epochs(2), {});
  const Solution s = solve(lp.model, {});
  ASSERT_TRUE(s.has_values());
  const Schedule sch = lp_rates_to_schedule(lp, s);
  double from_source = 0.0;
  int source_events = 0;
  for (const ScheduleEvent& ev : sch.events) {
    if (ev.from != 0) continue;
    ++source_events;
    from_source += ev.fraction;
    EXPECT_NEAR(ev.fraction, 0.5, 1e-9);
  }
  EXPECT_EQ(source_events, 2);
  EXPECT_NEAR(from_source, 1.0, 1e-9);
  EXPECT_TRUE(simulate(sch, t, d).ok());
}

TEST(LpDecompose, ZeroRatesLeaveResidue) {
  const Topology t = make_line(2, 1.0, 0.0);
  const Demand d(1.0, 1, {{0, 0, 1}});
  const LpModel lp = build_lp_model(t, d, unit_epochs(2), {});
  Solution s = solve(lp.model, {});
  std::fill(s.values.begin(), s.values.end(), 0.0);
  try {
    lp_rates_to_schedule(lp, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("conservation residue"), std::string::npos);
  }
}

TEST(LpVsMilp, RelaxationNeverSlower) {
  for (const Topology& t : {make_ring(4, 1.0, 0.0), make_line(3, 1.0, 0.0), make_star(3, 1.0, 0.0)}) {
    const Demand d = generate_demand(CollectiveKind::kAllToAll, t, 1, 1.0);
    const int lp = lp_min_horizon(t, d, unit_epochs(1), 10);
    const int milp =
        min_feasible_horizon(
            [&](int K) { return build_general_model(t, d, unit_epochs(K), {}); }, 1, 10, {})
            .horizon;
    EXPECT_LE(lp, milp);
  }
}

TEST(Lp, BufferLimitCapsHoldings) {
  const Topology t = make_funnel();
  const Demand d = testing::funnel_demand();
  ModelOptions o;
  o.node_buffer_limits[3] = 0;
  const LpModel lp = build_lp_model(t, d, unit_epochs(4), o);
  const Solution s = solve(lp.model, {});
  ASSERT_TRUE(s.has_values());
  for (int k = 0; k <= 4; ++k) {
    double held = 0.0;
    for (size_t si = 0; si < lp.sources.size(); ++si) {
      held += s.value(lp.buffer(static_cast<int>(si), 3, k));
    }
    EXPECT_LE(held, 1e-7);
  }
}

}  // namespace
}  // namespace collsched
