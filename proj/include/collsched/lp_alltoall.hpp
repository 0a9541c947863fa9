#ifndef COLLSCHED_LP_ALLTOALL_HPP_
#define COLLSCHED_LP_ALLTOALL_HPP_

#include <map>
#include <vector>

#include "collsched/demand.hpp"
#include "collsched/epoch.hpp"
#include "collsched/formulation.hpp"
#include "collsched/model.hpp"
#include "collsched/schedule.hpp"
#include "collsched/solver.hpp"
#include "collsched/topology.hpp"

namespace collsched {

// Copy-free linear program over per-source flow rates. Chunks of one source
// are interchangeable, so F, B and R carry no chunk index and every variable
// is continuous.
//
// B[s,n,k] is what n keeps after sending in epoch k (0..K). R[s,d,k] is what d
// consumes from arrivals up to the end of epoch k; its running sum must reach
// the demand by epoch K-1.
struct LpModel {
  Model model;
  Topology topology;
  Demand demand;
  EpochConfig cfg;
  ModelOptions opts;
  std::vector<int> sources;          // node of each source index
  std::vector<double> supply;        // chunks each source injects
  std::vector<std::vector<int>> dsts;  // per source index
  std::vector<std::vector<int>> demand_count;  // per source index, per slot
  std::vector<LinkTiming> timing;    // lag = ceil(alpha / tau)

  int num_epochs() const { return cfg.num_epochs; }
  int flow(int si, int e, int k) const;
  int buffer(int si, int n, int k) const;
  int read(int si, int slot, int k) const;
  int cumulative(int si, int slot, int k) const;

  int nodes_ = 0;
  int edges_ = 0;
  std::vector<int> flow_;
  std::vector<int> buffer_;
  std::vector<std::vector<int>> read_;
  std::vector<std::vector<int>> cumulative_;
};

// Throws Error(kInvalidInput) for hyper-edge mode or a demand that names nodes
// absent from the topology.
LpModel build_lp_model(const Topology& t, const Demand& d,
                       const EpochConfig& cfg, const ModelOptions& opts);

// Largest over (source, destination) of the first epoch whose cumulative
// reads meet the demand.
int lp_completion_epoch(const LpModel& lp, const Solution& sol);

// Splits the rates into per-chunk fractional events by tracing every read
// back to its source through the time-expanded graph. Predecessors are tried
// earliest epoch first, then lowest node id. Throws Error(kValidation) with
// "conservation residue" if a read cannot be traced.
Schedule lp_rates_to_schedule(const LpModel& lp, const Solution& sol);

}  // namespace collsched

#endif  // COLLSCHED_LP_ALLTOALL_HPP_
