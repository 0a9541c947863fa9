#ifndef COLLSCHED_ASTAR_HPP_
#define COLLSCHED_ASTAR_HPP_

#include <map>
#include <tuple>
#include <vector>

#include "collsched/demand.hpp"
#include "collsched/epoch.hpp"
#include "collsched/error.hpp"
#include "collsched/formulation.hpp"
#include "collsched/milp_general.hpp"
#include "collsched/schedule.hpp"
#include "collsched/solver.hpp"
#include "collsched/topology.hpp"

namespace collsched {

// All-pairs shortest distances; +infinity where no path exists.
struct DistanceTable {
  std::vector<std::vector<double>> dist;

  double at(int i, int j) const { return dist[i][j]; }
  int size() const { return static_cast<int>(dist.size()); }
};

// Shortest paths with edge weight alpha (seconds).
DistanceTable floyd_warshall_alpha(const Topology& t);

// Shortest paths with edge weight lag + 1, the epochs a hop costs. This is the
// distance the round objective uses, so that progress counts even when
// every alpha is zero.
DistanceTable floyd_warshall_epochs(const Topology& t,
                                    const std::vector<LinkTiming>& timing);

// Throws Error(kInvalidInput) naming the first demanded pair with no path.
void require_reachable(const DistanceTable& fw, const Demand& d);

// Chunks entering the next round: (commodity, node, k') -> count. At a GPU
// the chunk is held from epoch k' on; at a switch it must be forwarded in
// epoch k'.
using Carry = std::map<std::tuple<int, int, int>, double>;

struct RoundState {
  int round = 0;
  // Same order as Demand::commodities(); `dsts` lists destinations not yet
  // served.
  std::vector<Commodity> residual;
  Carry carry;
  Schedule prefix;

  int residual_entries() const;
};

RoundState initial_round_state(const Demand& d);

// One round: the time-expanded model without the final delivery requirement,
// plus carry variables Q for chunks still in flight when the round ends and
// progress variables P rewarding residual chunks by their distance to the
// destination.
struct RoundModel {
  GeneralModel core;
  // Round-local commodity q -> index into RoundState::residual.
  std::vector<int> global_commodity;
  int lookahead = 0;
  std::map<std::tuple<int, int, int>, int> carry_var;     // (q, n, k')
  std::map<std::tuple<int, int, int>, int> progress_var;  // (loc, d, k')

  int carry(int q, int n, int kp) const;
  int progress(int loc, int d, int kp) const;
};

inline const Model& model_of(const RoundModel& r) { return r.core.model; }

// Largest lag over the links of the graph the model uses.
int max_lookahead(const Topology& t, const Demand& d, const EpochConfig& cfg,
                  const ModelOptions& opts);

// `fw` must be in epochs (floyd_warshall_epochs over the model's graph).
// Throws Error(kInvalidInput) if cfg.num_epochs <= lookahead, or gamma is
// outside (0, 1).
RoundModel build_round_model(const Topology& t, const Demand& d,
                             const RoundState& state, const EpochConfig& cfg,
                             const ModelOptions& opts, const DistanceTable& fw,
                             double gamma);

struct AStarOptions {
  double gamma = 0.5;
  // 0 selects max(4, lookahead + 1).
  int epochs_per_round = 0;
  int max_rounds = 64;
  // Mark a delivery only from the carry at the last look-ahead index.
  // Carries at GPUs are cumulative, so both rules agree.
  bool strict_last_lookahead = false;
  SolverOptions solver;
};

struct AStarResult {
  Schedule schedule;
  int rounds = 0;
  int epochs_per_round = 0;
  double solver_wall_time_sec = 0.0;
  // Residual demanded entries before each round, then after the last.
  std::vector<int> residual_history;
};

// Thrown when the round budget runs out; carries the partial schedule.
class AStarIncomplete : public Error {
 public:
  AStarIncomplete(std::string message, AStarResult partial)
      : Error(ErrorKind::kInfeasible, std::move(message)),
        partial_(std::move(partial)) {}
  const AStarResult& partial() const { return partial_; }

 private:
  AStarResult partial_;
};

// cfg.num_epochs is ignored; rounds use opts.epochs_per_round. Buffer limits
// are rejected with Error(kInvalidInput).
AStarResult astar_solve(const Topology& t, const Demand& d,
                        const EpochConfig& cfg, const ModelOptions& model_opts,
                        const AStarOptions& opts);

}  // namespace collsched

#endif  // COLLSCHED_ASTAR_HPP_
