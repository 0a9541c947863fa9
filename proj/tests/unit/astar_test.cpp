#include <chrono>
#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "collsched/astar.hpp"
#include "collsched/error.hpp"
#include "collsched/generators.hpp"
#include "collsched/simulator.hpp"
#include "fixtures.hpp"

namespace collsched {
namespace {

using testing::unit_epochs;

TEST(FloydWarshall, LineAlphaSum) {
  const DistanceTable fw = floyd_warshall_alpha(make_line(3, 1.0, 1.0));
  EXPECT_DOUBLE_EQ(fw.at(0, 2), 2.0);
  EXPECT_DOUBLE_EQ(fw.at(0, 0), 0.0);
}

TEST(FloydWarshall, CompleteGraphZeroAlpha) {
  std::vector<Edge> edges;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j) edges.push_back({i, j, 1.0, 0.0});
    }
  }
  const DistanceTable fw = floyd_warshall_alpha(Topology(std::vector<bool>(4, false), edges));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(fw.at(i, j), 0.0);
  }
}

TEST(FloydWarshall, LatencyChainPicksDirectLink) {
  const DistanceTable fw = floyd_warshall_alpha(make_latency_chain(1.0, 5.0));
  EXPECT_DOUBLE_EQ(fw.at(5, 4), 5.0);
  EXPECT_DOUBLE_EQ(fw.at(0, 4), 3.0);
  EXPECT_TRUE(std::isinf(fw.at(4, 0)));
}

TEST(FloydWarshall, EpochWeightsCountHops) {
  const Topology t = make_line(4, 1.0, 0.0);
  const DistanceTable fw = floyd_warshall_epochs(t, link_timings(t, 1.0, 1.0, CapacityMode::kPlain));
  EXPECT_DOUBLE_EQ(fw.at(0, 3), 3.0);
}

TEST(FloydWarshall, UnreachableDemandRejected) {
  const Topology t({false, false}, {{0, 1, 1.0, 0.0}});
  EXPECT_THROW(require_reachable(floyd_warshall_alpha(t), Demand(1.0, 1, {{1, 0, 0}})), Error);
}

AStarOptions rounds_of(int k) {
  AStarOptions o;
  o.epochs_per_round = k;
  return o;
}

TEST(AStar, EmptyDemandNoRounds) {
  const AStarResult r = astar_solve(make_line(3, 1.0, 0.0), Demand(1.0, 0, {}), unit_epochs(1), {},
                                    rounds_of(1));
  EXPECT_EQ(r.rounds, 0);
  EXPECT_TRUE(r.schedule.events.empty());
}

TEST(AStar, LineMovesChunkOneHopPerRound) {
  const Topology t = make_line(3, 1.0, 0.0);
  const Demand d(1.0, 1, {{0, 0, 2}});
  const AStarResult r = astar_solve(t, d, unit_epochs(1), {}, rounds_of(1));
  EXPECT_EQ(r.rounds, 2);
  ASSERT_EQ(r.schedule.events.size(), 2u);
  EXPECT_EQ(r.schedule.events[0], (ScheduleEvent{0, 0, 0, 1, 0, 1.0}));
  EXPECT_EQ(r.schedule.events[1], (ScheduleEvent{1, 0, 1, 2, 0, 1.0}));
  EXPECT_EQ(r.residual_history, (std::vector<int>{1, 1, 0}));
}

TEST(AStar, Star3TwoRoundsMatchOptimum) {
  const Topology t = make_broadcast_star();
  const AStarResult r = astar_solve(t, testing::star3_demand(), unit_epochs(1), {}, rounds_of(1));
  EXPECT_EQ(r.rounds, 2);
  EXPECT_EQ(r.schedule.completion_epoch + 1, 2);
  EXPECT_TRUE(simulate(r.schedule, t, testing::star3_demand()).ok());
}

TEST(AStar, StrictRuleAgrees) {
  const Topology t = make_ring(5, 1.0, 0.0);
  const Demand d = generate_demand(CollectiveKind::kAllGather, t, 1, 1.0);
  AStarOptions loose = rounds_of(2);
  AStarOptions strict = loose;
  strict.strict_last_lookahead = true;
  const AStarResult a = astar_solve(t, d, unit_epochs(1), {}, loose);
  const AStarResult b = astar_solve(t, d, unit_epochs(1), {}, strict);
  EXPECT_EQ(a.schedule.completion_epoch, b.schedule.completion_epoch);
  EXPECT_EQ(a.rounds, b.rounds);
}

TEST(AStar, LatencyCarriesAcrossRounds) {
  const Topology t = make_latency_chain(1.0, 5.0);
  const AStarResult r = astar_solve(t, testing::chain_demand(), unit_epochs(1), {}, {});
  EXPECT_EQ(r.epochs_per_round, 6);
  const SimReport rep = simulate(r.schedule, t, testing::chain_demand());
  EXPECT_TRUE(rep.ok());
  EXPECT_GE(rep.completion_epoch + 1, 8);
}

TEST(AStar, RoundShorterThanLagRejected) {
  EXPECT_THROW(astar_solve(make_latency_chain(1.0, 5.0), testing::chain_demand(), unit_epochs(1),
                           {}, rounds_of(5)),
               Error);
}

TEST(AStar, RoundBudgetExhaustedCarriesPartial) {
  const Topology t = make_line(4, 1.0, 0.0);
  const Demand d(1.0, 1, {{0, 0, 3}});
  AStarOptions o = rounds_of(1);
  o.max_rounds = 1;
  try {
    astar_solve(t, d, unit_epochs(1), {}, o);
    FAIL();
  } catch (const AStarIncomplete& e) {
    EXPECT_EQ(e.partial().rounds, 1);
    EXPECT_EQ(e.partial().schedule.events.size(), 1u);
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
  }
}

TEST(AStar, RejectsBufferLimitsAndBadGamma) {
  ModelOptions limited;
  limited.buffer_limit = 4;
  EXPECT_THROW(astar_solve(make_broadcast_star(), testing::star3_demand(), unit_epochs(1), limited, {}),
               Error);
  AStarOptions o;
  o.gamma = 1.0;
  EXPECT_THROW(astar_solve(make_broadcast_star(), testing::star3_demand(), unit_epochs(1), {}, o),
               Error);
}

TEST(AStar, NoCopySwitchStar) {
  ModelOptions o;
  o.switch_mode = SwitchMode::kNoCopy;
  const Topology t = make_broadcast_star();
  // Only epoch 0 of a 2-epoch round can feed the switch: one copy per round.
  const AStarResult r2 = astar_solve(t, testing::star3_demand(), unit_epochs(1), o, rounds_of(2));
  const SimReport rep2 = simulate(r2.schedule, t, testing::star3_demand());
  EXPECT_TRUE(rep2.ok());
  EXPECT_EQ(rep2.completion_epoch + 1, 6);
  const AStarResult r4 = astar_solve(t, testing::star3_demand(), unit_epochs(1), o, rounds_of(4));
  const SimReport rep4 = simulate(r4.schedule, t, testing::star3_demand());
  EXPECT_TRUE(rep4.ok());
  EXPECT_EQ(rep4.completion_epoch + 1, 4);
}

// Node 2 is a no-copy switch whose neighbours 1 and 3 are both sources. A
// chunk entering it after a round ends would have nowhere to go.
TEST(AStar, NoCopySwitchForwardsInsideRound) {
  const Topology t({false, false, true, false, false, false},
                   {{0, 4, 1.0, 1.0}, {4, 0, 1.0, 1.0}, {1, 2, 2.0, 1.0}, {2, 1, 2.0, 1.0},
                    {1, 4, 1.0, 0.0}, {4, 1, 1.0, 0.0}, {2, 3, 2.0, 0.0}, {3, 2, 2.0, 0.0},
                    {4, 5, 2.0, 1.0}, {5, 4, 2.0, 1.0}});
  const Demand d(1.0, 2,
                 {{3, 0, 0}, {3, 0, 1}, {4, 1, 0}, {4, 1, 1}, {4, 1, 3}, {4, 1, 5}});
  ModelOptions o;
  o.switch_mode = SwitchMode::kNoCopy;
  const AStarResult r = astar_solve(t, d, unit_epochs(1), o, {});
  EXPECT_TRUE(simulate(r.schedule, t, d).ok());
}

}  // namespace
}  // namespace collsched
