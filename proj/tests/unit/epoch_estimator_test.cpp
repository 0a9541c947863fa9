#include <gtest/gtest.h>

#include "collsched/epoch_estimator.hpp"
#include "collsched/error.hpp"
#include "collsched/generators.hpp"
#include "fixtures.hpp"

namespace collsched {
namespace {

// At 2s and 4 epochs tau is 0.5s, a unit link needs two epochs per chunk and
// the two hops finish by the end of epoch 3.
TEST(Estimator, Star3FirstCandidate) {
  const EpochEstimate e =
      estimate_epoch_upper_bound(make_broadcast_star(), testing::star3_demand(), 1.0, {2.0, 4.0});
  EXPECT_EQ(e.num_epochs, 2);
  EXPECT_DOUBLE_EQ(e.feasible_time_sec, 2.0);
  EXPECT_EQ(e.coarse_epochs, 4);
}

TEST(Estimator, SkipsInfeasibleCandidates) {
  const EpochEstimate e =
      estimate_epoch_upper_bound(make_broadcast_star(), testing::star3_demand(), 1.0, {1.0, 3.0});
  EXPECT_DOUBLE_EQ(e.feasible_time_sec, 3.0);
  EXPECT_EQ(e.num_epochs, 3);
}

TEST(Estimator, UnreachableDemand) {
  const Topology t({false, false, false}, {{0, 1, 1.0, 0.0}, {1, 0, 1.0, 0.0}});
  try {
    estimate_epoch_upper_bound(t, Demand(1.0, 1, {{0, 0, 2}}), 1.0, {1.0, 2.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
    EXPECT_NE(std::string(e.what()).find("no candidate feasible"), std::string::npos);
  }
}

TEST(Estimator, HugeCandidateGivesLooseBound) {
  const EpochEstimate e =
      estimate_epoch_upper_bound(make_broadcast_star(), testing::star3_demand(), 1.0, {100.0});
  EXPECT_EQ(e.num_epochs, 100);
}

TEST(Estimator, RejectsUnsortedCandidates) {
  EXPECT_THROW(
      estimate_epoch_upper_bound(make_broadcast_star(), testing::star3_demand(), 1.0, {4.0, 2.0}),
      Error);
}

TEST(DefaultCandidates, DoublingFromSeed) {
  // Two hops, zero latency, one byte into each destination over a 1 B/s link.
  const auto c = default_candidates(make_broadcast_star(), testing::star3_demand(), 4);
  EXPECT_EQ(c, (std::vector<double>{1.0, 2.0, 4.0, 8.0}));
}

}  // namespace
}  // namespace collsched
