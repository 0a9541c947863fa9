#ifndef COLLSCHED_EPOCH_ESTIMATOR_HPP_
#define COLLSCHED_EPOCH_ESTIMATOR_HPP_

#include <vector>

#include "collsched/demand.hpp"
#include "collsched/formulation.hpp"
#include "collsched/solver.hpp"
#include "collsched/topology.hpp"

namespace collsched {

struct EstimatorOptions {
  // Epoch counts tried for each candidate total time.
  std::vector<int> coarse_epochs = {4, 8, 12};
  SwitchMode switch_mode = SwitchMode::kCopy;
  SolverOptions solver;
};

struct EpochEstimate {
  int num_epochs = 0;
  double feasible_time_sec = 0.0;
  int coarse_epochs = 0;
};

// For each candidate total time T (ascending) and each coarse epoch count n,
// solves the general model with tau = T / n and n epochs. The first feasible
// (T, n) wins and the estimate is ceil(T / tau_opt). Throws
// Error(kInfeasible) with "no candidate feasible" if none is.
EpochEstimate estimate_epoch_upper_bound(const Topology& t, const Demand& d,
                                         double tau_opt_sec,
                                         const std::vector<double>& candidates_sec,
                                         const EstimatorOptions& opts = {});

// Doubling ladder of `count` total times starting from
// diameter * max alpha + (bytes into the busiest node) / (its ingress
// bandwidth).
std::vector<double> default_candidates(const Topology& t, const Demand& d,
                                       int count = 10);

}  // namespace collsched

#endif  // COLLSCHED_EPOCH_ESTIMATOR_HPP_
