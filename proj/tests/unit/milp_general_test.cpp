#include <map>

#include <gtest/gtest.h>

#include "collsched/error.hpp"
#include "collsched/formulation.hpp"
#include "collsched/generators.hpp"
#include "collsched/milp_general.hpp"
#include "collsched/schedule.hpp"
#include "collsched/solver.hpp"
#include "fixtures.hpp"

namespace collsched {
namespace {

using testing::unit_epochs;

struct Solved {
  GeneralModel gm;
  Solution sol;
  Schedule schedule;
};

Solved solve_general(const Topology& t, const Demand& d, const EpochConfig& cfg,
                     const ModelOptions& o) {
  Solved s{build_general_model(t, d, cfg, o), {}, {}};
  s.sol = solve(s.gm.model, {});
  if (s.sol.has_values() && !o.relax_integrality) {
    s.schedule = extract_schedule(s.gm, prune_unused_flows(s.gm, s.sol));
  }
  return s;
}

int min_horizon(const Topology& t, const Demand& d, const ModelOptions& o, int k_hi = 12) {
  return min_feasible_horizon(
             [&](int K) { return build_general_model(t, d, unit_epochs(K), o); }, 1, k_hi, {})
      .horizon;
}

TEST(Star3, CopyCompletesInTwoEpochs) {
  const Solved s = solve_general(make_broadcast_star(), testing::star3_demand(), unit_epochs(2), {});
  ASSERT_EQ(s.sol.status, SolveStatus::kOptimal);
  EXPECT_EQ(s.schedule.completion_epoch, 1);
  EXPECT_DOUBLE_EQ(s.schedule.transfer_time_sec(), 2.0);
}

TEST(Star3, NoCopyNeedsFourEpochs) {
  ModelOptions o;
  o.switch_mode = SwitchMode::kNoCopy;
  EXPECT_EQ(min_horizon(make_broadcast_star(), testing::star3_demand(), o), 4);
}

// Three hyper-edges 0->2, 0->3, 0->4 share a budget of min(1, 3) = 1 per
// epoch, so the source serves one destination per epoch.
TEST(Star3, HyperEdgeServesOneDestinationPerEpoch) {
  ModelOptions o;
  o.switch_mode = SwitchMode::kHyperEdge;
  EXPECT_EQ(min_horizon(make_broadcast_star(), testing::star3_demand(), o), 3);
}

TEST(Funnel, ThreeEpochsWithUnlimitedBuffers) {
  const Solved s = solve_general(make_funnel(), testing::funnel_demand(), unit_epochs(3), {});
  ASSERT_TRUE(s.sol.has_values());
  EXPECT_EQ(s.schedule.completion_epoch, 2);
  EXPECT_EQ(s.schedule.events.size(), 6u);
}

// With a limit of 0 at h every chunk h receives leaves in the next epoch.
TEST(Funnel, ThreeEpochsWhenHubMustForwardImmediately) {
  ModelOptions o;
  o.node_buffer_limits[3] = 0;
  const Solved s = solve_general(make_funnel(), testing::funnel_demand(), unit_epochs(3), o);
  ASSERT_TRUE(s.sol.has_values());
  EXPECT_EQ(s.schedule.completion_epoch, 2);
  for (int k = 0; k <= 3; ++k) {
    for (int q = 0; q < s.gm.num_commodities(); ++q) {
      EXPECT_DOUBLE_EQ(s.sol.value(s.gm.buffer(q, 3, k)), 0.0);
    }
  }
  std::map<int, int> into_hub;
  std::map<int, int> out_of_hub;
  for (const ScheduleEvent& ev : s.schedule.events) {
    if (ev.to == 3) ++into_hub[ev.epoch + 1];
    if (ev.from == 3) ++out_of_hub[ev.epoch];
  }
  EXPECT_EQ(into_hub, out_of_hub);
}

TEST(Funnel, UnlimitedAndZeroLimitAgree) {
  ModelOptions o;
  o.node_buffer_limits[3] = 0;
  EXPECT_EQ(min_horizon(make_funnel(), testing::funnel_demand(), o),
            min_horizon(make_funnel(), testing::funnel_demand(), {}));
}

TEST(BufferLimit, TotalInitialChunksMatchesUnlimited) {
  struct Case {
    Topology t;
    Demand d;
    int limit;
  };
  const std::vector<Case> cases = {{make_broadcast_star(), testing::star3_demand(), 1},
                                   {make_funnel(), testing::funnel_demand(), 3}};
  for (const Case& c : cases) {
    ModelOptions limited;
    limited.buffer_limit = c.limit;
    EXPECT_EQ(min_horizon(c.t, c.d, limited), min_horizon(c.t, c.d, {}));
  }
}

TEST(BufferLimit, BelowInitialChunksRejected) {
  ModelOptions o;
  o.buffer_limit = 1;
  const Demand two(1.0, 2, {{0, 0, 1}, {0, 1, 1}});
  EXPECT_THROW(build_general_model(make_line(2, 1.0, 0.0), two, unit_epochs(4), o), Error);
}

TEST(LatencyChain, CompletesAtAlpha2PlusThreeBeta) {
  const Solved s = solve_general(make_latency_chain(1.0, 5.0), testing::chain_demand(),
                                 unit_epochs(12), {});
  ASSERT_TRUE(s.sol.has_values());
  EXPECT_EQ(s.schedule.completion_epoch + 1, 8);
  EXPECT_EQ(min_horizon(make_latency_chain(1.0, 5.0), testing::chain_demand(), {}), 8);
}

TEST(Diamond, WholeChunkUsesOneSourceLink) {
  const Topology t = make_diamond(0.5);
  const Demand d(1.0, 1, {{0, 0, 3}});
  EpochConfig cfg = unit_epochs(6);
  cfg.tau_sec = epoch_duration(t, 1.0, DurationMode::kFastestLink, 1);
  ModelOptions o;
  o.capacity_mode = CapacityMode::kWindowed;
  const Solved s = solve_general(t, d, cfg, o);
  ASSERT_TRUE(s.sol.has_values());
  EXPECT_EQ(s.schedule.completion_epoch + 1, 3);
  int egress = 0;
  for (const ScheduleEvent& ev : s.schedule.events) {
    if (ev.from == 0) ++egress;
    EXPECT_DOUBLE_EQ(ev.fraction, 1.0);
  }
  EXPECT_EQ(egress, 1);
}

TEST(Diamond, RelaxationSplitsIntoHalves) {
  const Topology t = make_diamond(0.5);
  const Demand d(1.0, 1, {{0, 0, 3}});
  ModelOptions o;
  o.relax_integrality = true;
  const GeneralModel gm = build_general_model(t, d, unit_epochs(2), o);
  const Solution s = solve(gm.model, {});
  ASSERT_TRUE(s.has_values());
  double out_of_source = 0.0;
  for (int e : t.out_edges(0)) out_of_source += s.value(gm.flow(0, e, 0));
  EXPECT_NEAR(out_of_source, 1.0, 1e-6);
}

TEST(Invariants, SolutionsSatisfyEveryRow) {
  for (SwitchMode mode : {SwitchMode::kCopy, SwitchMode::kNoCopy, SwitchMode::kHyperEdge}) {
    ModelOptions o;
    o.switch_mode = mode;
    const Solved s = solve_general(make_broadcast_star(), testing::star3_demand(), unit_epochs(5), o);
    ASSERT_TRUE(s.sol.has_values());
    EXPECT_TRUE(s.gm.model.check_values(s.sol.values).empty());
  }
}

TEST(Invariants, BuffersMonotoneWithoutLimit) {
  const Topology t = make_ring(4, 1.0, 0.0);
  const Demand d = generate_demand(CollectiveKind::kAllGather, t, 1, 1.0);
  const Solved s = solve_general(t, d, unit_epochs(4), {});
  ASSERT_TRUE(s.sol.has_values());
  for (int q = 0; q < s.gm.num_commodities(); ++q) {
    for (int n = 0; n < t.num_nodes(); ++n) {
      for (int k = 1; k <= 4; ++k) {
        EXPECT_GE(s.sol.value(s.gm.buffer(q, n, k)) + 1e-9, s.sol.value(s.gm.buffer(q, n, k - 1)));
      }
    }
  }
}

TEST(Pruning, LateFlowPruningKeepsOptimum) {
  const Topology t = make_latency_chain(1.0, 5.0);
  TimeExpandedSpec spec;
  spec.topology = t;
  spec.demand = testing::chain_demand();
  spec.cfg = unit_epochs(10);
  spec.commodities = spec.demand.commodities();
  for (const Commodity& c : spec.commodities) {
    spec.injections[{static_cast<int>(&c - spec.commodities.data()), c.src, 0}] = 1.0;
  }
  const GeneralModel pruned = build_time_expanded(spec);
  spec.prune_late_flows = false;
  const GeneralModel full = build_time_expanded(spec);
  EXPECT_LT(pruned.model.num_variables(), full.model.num_variables());
  const Solution a = solve(pruned.model, {});
  const Solution b = solve(full.model, {});
  ASSERT_TRUE(a.has_values() && b.has_values());
  EXPECT_NEAR(a.objective, b.objective, 1e-9);
  EXPECT_NEAR(a.objective, solve(build_general_model(t, spec.demand, spec.cfg, {}).model, {}).objective,
              1e-9);
}

TEST(Infeasible, UnreachableDestination) {
  const Topology t({false, false, false}, {{0, 1, 1.0, 0.0}, {1, 0, 1.0, 0.0}});
  const GeneralModel gm = build_general_model(t, Demand(1.0, 1, {{0, 0, 2}}), unit_epochs(3), {});
  EXPECT_EQ(solve(gm.model, {}).status, SolveStatus::kInfeasible);
}

TEST(HyperEdge, FourGpusBehindSwitch) {
  const HyperEdgeTopology h = make_hyper_edge_topology(make_star(4, 1.0, 0.0));
  EXPECT_EQ(h.omega.at(0).size(), 12u);
  EXPECT_EQ(h.budget.at(0), 4);
  for (int e = 0; e < h.network.num_edges(); ++e) EXPECT_EQ(h.via[e], 0);
}

TEST(HyperEdge, BudgetIsMinDegree) {
  // Two GPUs feed switch 2, which fans out to four GPUs.
  std::vector<Edge> edges = {{0, 2, 1.0, 0.0}, {1, 2, 1.0, 0.0}};
  for (int d = 3; d <= 6; ++d) edges.push_back({2, d, 1.0, 0.0});
  const Topology t({false, false, true, false, false, false, false}, edges);
  const HyperEdgeTopology h = make_hyper_edge_topology(t);
  EXPECT_EQ(h.budget.at(2), 2);
  EXPECT_EQ(h.omega.at(2).size(), 8u);
}

TEST(HyperEdge, SinglePairReducesToLink) {
  const Topology t({false, true, false}, {{0, 1, 2.0, 0.25}, {1, 2, 1.0, 0.5}});
  const HyperEdgeTopology h = make_hyper_edge_topology(t);
  EXPECT_EQ(h.budget.at(1), 1);
  ASSERT_EQ(h.network.num_edges(), 1);
  EXPECT_DOUBLE_EQ(h.network.edge(0).capacity_bytes_per_sec, 1.0);
  EXPECT_DOUBLE_EQ(h.network.edge(0).alpha_sec, 0.75);
}

}  // namespace
}  // namespace collsched
