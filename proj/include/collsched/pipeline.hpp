#ifndef COLLSCHED_PIPELINE_HPP_
#define COLLSCHED_PIPELINE_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "collsched/astar.hpp"
#include "collsched/demand.hpp"
#include "collsched/epoch.hpp"
#include "collsched/formulation.hpp"
#include "collsched/schedule.hpp"
#include "collsched/simulator.hpp"
#include "collsched/solver.hpp"
#include "collsched/topology.hpp"

namespace collsched {

enum class Method { kMilp, kLp, kAStar };

std::string_view to_string(Method m);
// Throws Error(kInvalidInput) for an unknown name.
Method parse_method(std::string_view name);

struct SolveRequest {
  Method method = Method::kMilp;
  // num_epochs is the horizon for MILP and LP, and the upper end of the
  // search when min_horizon is set. A* ignores it.
  EpochConfig cfg;
  ModelOptions model;
  SolverOptions solver;
  AStarOptions astar;
  // Binary-search the smallest feasible horizon in [1, cfg.num_epochs].
  bool min_horizon = false;
};

struct SolveOutcome {
  Schedule schedule;
  SimReport report;
  SolveStatus status = SolveStatus::kOptimal;
  int num_epochs = 0;
  double achieved_gap = 0.0;
  double solver_wall_time_sec = 0.0;
  int astar_rounds = 0;
  std::vector<std::string> warnings;
};

// Builds and solves the chosen formulation, prunes and extracts the schedule
// and replays it. Throws Error(kInfeasible) without a schedule,
// Error(kTimeout) when the solver stops without one, and Error(kValidation)
// if the schedule fails simulation.
SolveOutcome run_solve(const Topology& t, const Demand& d,
                       const SolveRequest& req);

// Epoch duration for `cfg`'s mode and multiplier with the demand's chunk size.
EpochConfig make_epoch_config(const Topology& t, const Demand& d,
                              DurationMode mode, int em, int num_epochs);

}  // namespace collsched

#endif  // COLLSCHED_PIPELINE_HPP_
