#include "collsched/epoch_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "collsched/epoch.hpp"
#include "collsched/error.hpp"
#include "collsched/milp_general.hpp"

namespace collsched {

EpochEstimate estimate_epoch_upper_bound(const Topology& t, const Demand& d,
                                         double tau_opt_sec,
                                         const std::vector<double>& candidates_sec,
                                         const EstimatorOptions& opts) {
  if (!(tau_opt_sec > 0.0)) {
    throw Error(ErrorKind::kInvalidInput, "tau_opt must be positive");
  }
  if (!std::is_sorted(candidates_sec.begin(), candidates_sec.end())) {
    throw Error(ErrorKind::kInvalidInput, "candidates must be sorted ascending");
  }
  // Probes only need feasibility.
  SolverOptions probe = opts.solver;
  probe.relative_gap = std::max(probe.relative_gap, 0.99);
  ModelOptions mo;
  mo.switch_mode = opts.switch_mode;
  mo.capacity_mode = CapacityMode::kWindowed;
  for (double total : candidates_sec) {
    if (!(total > 0.0)) {
      throw Error(ErrorKind::kInvalidInput, "candidate times must be positive");
    }
    for (int n : opts.coarse_epochs) {
      EpochConfig cfg;
      cfg.tau_sec = total / n;
      cfg.num_epochs = n;
      const GeneralModel gm = build_general_model(t, d, cfg, mo);
      const Solution sol = solve(gm.model, probe);
      if (sol.status == SolveStatus::kTimeout) {
        throw Error(ErrorKind::kTimeout, "estimator probe timed out");
      }
      if (sol.has_values()) {
        return {ceil_tolerant(total / tau_opt_sec), total, n};
      }
    }
  }
  throw Error(ErrorKind::kInfeasible, "no candidate feasible");
}

std::vector<double> default_candidates(const Topology& t, const Demand& d,
                                       int count) {
  const int n = t.num_nodes();
  int diameter = 0;
  for (int s = 0; s < n; ++s) {
    std::vector<int> hops(n, -1);
    std::queue<int> frontier;
    hops[s] = 0;
    frontier.push(s);
    while (!frontier.empty()) {
      const int v = frontier.front();
      frontier.pop();
      diameter = std::max(diameter, hops[v]);
      for (int e : t.out_edges(v)) {
        const int w = t.edge(e).dst;
        if (hops[w] < 0) {
          hops[w] = hops[v] + 1;
          frontier.push(w);
        }
      }
    }
  }
  double max_alpha = 0.0;
  for (const Edge& e : t.edges()) max_alpha = std::max(max_alpha, e.alpha_sec);
  double transfer = 0.0;
  for (int v = 0; v < n; ++v) {
    const double bytes = d.demanded_at(v) * d.chunk_size_bytes();
    if (bytes <= 0.0) continue;
    double ingress = 0.0;
    for (int e : t.in_edges(v)) ingress += t.edge(e).capacity_bytes_per_sec;
    if (ingress > 0.0) transfer = std::max(transfer, bytes / ingress);
  }
  double seed = diameter * max_alpha + transfer;
  if (!(seed > 0.0)) seed = d.chunk_size_bytes() / std::max(t.max_capacity(), 1e-30);
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(seed * std::pow(2.0, i));
  return out;
}

}  // namespace collsched
