#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "collsched/error.hpp"
#include "collsched/generators.hpp"
#include "collsched/milp_general.hpp"
#include "collsched/model.hpp"
#include "collsched/solver.hpp"
#include "fixtures.hpp"

namespace collsched {
namespace {

TEST(Solver, TrivialBinary) {
  Model m;
  const int x = m.add_variable("x", VarType::kBinary, 0.0, 1.0, 1.0);
  LinearExpr row;
  row.add(x, 1.0);
  m.add_row("c", row, RowSense::kLessEqual, 1.0);
  const Solution s = solve(m, {});
  EXPECT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_DOUBLE_EQ(s.values[x], 1.0);
}

TEST(Solver, Infeasible) {
  Model m;
  const int x = m.add_variable("x", VarType::kBinary, 0.0, 1.0, 1.0);
  LinearExpr row;
  row.add(x, 1.0);
  m.add_row("lo", row, RowSense::kGreaterEqual, 1.0);
  m.add_row("hi", row, RowSense::kLessEqual, 0.0);
  EXPECT_EQ(solve(m, {}).status, SolveStatus::kInfeasible);
}

TEST(Solver, ConstantRowMarksInfeasible) {
  Model m;
  LinearExpr row;
  row.add_constant(1.0);
  m.add_row("bad", row, RowSense::kLessEqual, 0.0);
  EXPECT_TRUE(m.trivially_infeasible());
  EXPECT_EQ(solve(m, {}).status, SolveStatus::kInfeasible);
}

// Random 0/1 knapsacks against exhaustive enumeration.
TEST(Solver, KnapsackMatchesEnumeration) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> w(1, 9);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 8;
    std::vector<int> weight(n), value(n);
    for (int i = 0; i < n; ++i) {
      weight[i] = w(rng);
      value[i] = w(rng);
    }
    const int cap = 15;
    Model m;
    LinearExpr row;
    for (int i = 0; i < n; ++i) {
      row.add(m.add_variable("x" + std::to_string(i), VarType::kBinary, 0, 1, value[i]), weight[i]);
    }
    m.add_row("cap", row, RowSense::kLessEqual, cap);
    int best = 0;
    for (int mask = 0; mask < (1 << n); ++mask) {
      int wt = 0, val = 0;
      for (int i = 0; i < n; ++i) {
        if (mask >> i & 1) {
          wt += weight[i];
          val += value[i];
        }
      }
      if (wt <= cap) best = std::max(best, val);
    }
    const Solution s = solve(m, {});
    ASSERT_EQ(s.status, SolveStatus::kOptimal);
    EXPECT_NEAR(s.objective, best, 1e-6);
    EXPECT_TRUE(m.check_values(s.values).empty());
  }
}

TEST(Solver, Star3ObjectiveMatchesHandValue) {
  const GeneralModel gm = build_general_model(make_broadcast_star(), testing::star3_demand(),
                                              testing::unit_epochs(2), {});
  const Solution s = solve(gm.model, {});
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  // Three destinations, each served at the end of epoch 1: 3 * 1/2.
  EXPECT_NEAR(s.objective, 1.5, 1e-9);
}

TEST(Solver, UnknownBackendThrows) {
  SolverOptions o;
  o.backend = "cplex-nonexistent";
  Model m;
  EXPECT_THROW(solve(m, o), Error);
  EXPECT_FALSE(available_backends().empty());
}

TEST(Solver, OptionsValidate) {
  SolverOptions o;
  o.relative_gap = 1.5;
  EXPECT_THROW(o.validate(), Error);
  EXPECT_DOUBLE_EQ(early_stop_options().relative_gap, 0.3);
}

GeneralModel star3_at(int K, SwitchMode mode) {
  ModelOptions o;
  o.switch_mode = mode;
  return build_general_model(make_broadcast_star(), testing::star3_demand(), testing::unit_epochs(K),
                             o);
}

TEST(MinFeasibleHorizon, Star3Copy) {
  const auto r = min_feasible_horizon([](int K) { return star3_at(K, SwitchMode::kCopy); }, 1, 8, {});
  EXPECT_EQ(r.horizon, 2);
}

TEST(MinFeasibleHorizon, Star3NoCopy) {
  const auto r =
      min_feasible_horizon([](int K) { return star3_at(K, SwitchMode::kNoCopy); }, 1, 8, {});
  EXPECT_EQ(r.horizon, 4);
}

TEST(MinFeasibleHorizon, TooShortRange) {
  try {
    min_feasible_horizon([](int K) { return star3_at(K, SwitchMode::kCopy); }, 1, 1, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
    EXPECT_NE(std::string(e.what()).find("k_hi infeasible"), std::string::npos);
  }
}

TEST(Model, WriteLpListsSections) {
  const GeneralModel gm = star3_at(2, SwitchMode::kCopy);
  std::ostringstream out;
  gm.model.write_lp(out);
  const std::string text = out.str();
  EXPECT_NE(text.find("Maximize"), std::string::npos);
  EXPECT_NE(text.find("Subject To"), std::string::npos);
  EXPECT_NE(text.find("Binary"), std::string::npos);
  EXPECT_TRUE(gm.model.check_well_formed().empty());
}

}  // namespace
}  // namespace collsched
