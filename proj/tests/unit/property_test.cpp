#include <random>

#include <gtest/gtest.h>

#include "collsched/lp_alltoall.hpp"
#include "collsched/milp_general.hpp"
#include "collsched/schedule.hpp"
#include "collsched/simulator.hpp"
#include "fixtures.hpp"
#include "random_instances.hpp"

namespace collsched {
namespace {

constexpr int kHorizon = 20;

class RandomMilp : public ::testing::TestWithParam<unsigned> {};

TEST_P(RandomMilp, PipelineSimulatesCleanly) {
  std::mt19937 rng(GetParam());
  const testing::RandomInstance inst = testing::random_instance(rng);
  ModelOptions o;
  o.switch_mode = inst.switch_mode;
  const GeneralModel gm =
      build_general_model(inst.topology, inst.demand, testing::unit_epochs(kHorizon), o);
  const Solution sol = solve(gm.model, {});
  ASSERT_TRUE(sol.has_values()) << to_string(sol.status);
  EXPECT_TRUE(gm.model.check_values(sol.values).empty());

  const Solution once = prune_unused_flows(gm, sol);
  const Solution twice = prune_unused_flows(gm, once);
  EXPECT_EQ(once.values, twice.values);
  EXPECT_TRUE(gm.model.check_values(once.values).empty());

  const Schedule before = extract_schedule(gm, sol);
  const Schedule after = extract_schedule(gm, once);
  EXPECT_EQ(before.completion_epoch, after.completion_epoch);
  EXPECT_LE(after.events.size(), before.events.size());

  const SimReport r = simulate(after, inst.topology, inst.demand);
  EXPECT_TRUE(r.ok()) << r.violations.size() << " violations, first "
                      << (r.ok() ? "" : std::string(to_string(r.violations[0].kind)));
  EXPECT_LE(r.completion_epoch, after.completion_epoch);
}

TEST_P(RandomMilp, LpNeverSlowerForUnicast) {
  std::mt19937 rng(GetParam());
  const testing::RandomInstance inst = testing::random_instance(rng);
  if (inst.switch_mode == SwitchMode::kHyperEdge) GTEST_SKIP() << "LP has no hyper-edge model";
  ModelOptions o;
  o.switch_mode = inst.switch_mode;
  const auto build_lp = [&](int K) {
    return build_lp_model(inst.topology, inst.demand, testing::unit_epochs(K), o);
  };
  const auto build_milp = [&](int K) {
    return build_general_model(inst.topology, inst.demand, testing::unit_epochs(K), o);
  };
  const auto lp = min_feasible_horizon(build_lp, 1, kHorizon, {});
  const auto milp = min_feasible_horizon(build_milp, 1, kHorizon, {});
  bool multicast = false;
  for (const Commodity& c : inst.demand.commodities()) multicast = multicast || c.dsts.size() > 1;
  if (!multicast) {
    EXPECT_LE(lp.horizon, milp.horizon);
  }
  const Schedule s = lp_rates_to_schedule(lp.built, lp.solution);
  const SimReport r = simulate(s, inst.topology, inst.demand);
  EXPECT_TRUE(r.ok()) << (r.ok() ? "" : std::string(to_string(r.violations[0].kind)) + " at " +
                                            r.violations[0].location + " epoch " +
                                            std::to_string(r.violations[0].epoch));
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomMilp, ::testing::Range(1u, 26u));

}  // namespace
}  // namespace collsched
