#include "collsched/pipeline.hpp"

#include <chrono>
#include <string>
#include <type_traits>

#include "collsched/error.hpp"
#include "collsched/lp_alltoall.hpp"
#include "collsched/milp_general.hpp"

namespace collsched {
namespace {

void require_solution(const Solution& sol, int K) {
  if (sol.has_values()) return;
  if (sol.status == SolveStatus::kTimeout) {
    throw Error(ErrorKind::kTimeout, "solver stopped without a schedule");
  }
  throw Error(ErrorKind::kInfeasible,
              "no schedule within " + std::to_string(K) + " epochs");
}

template <typename Builder>
auto solve_horizon(Builder&& build, const SolveRequest& req) {
  if (req.min_horizon) {
    return min_feasible_horizon(build, 1, req.cfg.num_epochs, req.solver);
  }
  using Built = std::decay_t<std::invoke_result_t<Builder, int>>;
  HorizonResult<Built> r{req.cfg.num_epochs, build(req.cfg.num_epochs), {}};
  r.solution = solve(model_of(r.built), req.solver);
  require_solution(r.solution, req.cfg.num_epochs);
  return r;
}

bool has_multicast(const Demand& d) {
  for (const Commodity& c : d.commodities()) {
    if (c.dsts.size() > 1) return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kMilp: return "milp";
    case Method::kLp: return "lp";
    case Method::kAStar: return "astar";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kMilp, Method::kLp, Method::kAStar}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorKind::kInvalidInput, "unknown method '" + std::string(name) + "'");
}

EpochConfig make_epoch_config(const Topology& t, const Demand& d,
                              DurationMode mode, int em, int num_epochs) {
  EpochConfig cfg;
  cfg.duration_mode = mode;
  cfg.epoch_multiplier = em;
  cfg.num_epochs = num_epochs;
  cfg.tau_sec = epoch_duration(t, d.chunk_size_bytes(), mode, em);
  cfg.validate();
  return cfg;
}

SolveOutcome run_solve(const Topology& t, const Demand& d,
                       const SolveRequest& req) {
  SolveOutcome out;
  const auto start = std::chrono::steady_clock::now();
  switch (req.method) {
    case Method::kMilp: {
      auto r = solve_horizon(
          [&](int K) {
            EpochConfig cfg = req.cfg;
            cfg.num_epochs = K;
            return build_general_model(t, d, cfg, req.model);
          },
          req);
      const Solution pruned = prune_unused_flows(r.built, r.solution);
      out.schedule = extract_schedule(r.built, pruned);
      out.status = r.solution.status;
      out.achieved_gap = r.solution.achieved_gap;
      out.num_epochs = r.horizon;
      break;
    }
    case Method::kLp: {
      if (has_multicast(d)) {
        out.warnings.push_back("LP ignores copy; result is a bound");
      }
      auto r = solve_horizon(
          [&](int K) {
            EpochConfig cfg = req.cfg;
            cfg.num_epochs = K;
            return build_lp_model(t, d, cfg, req.model);
          },
          req);
      out.schedule = lp_rates_to_schedule(r.built, r.solution);
      out.status = r.solution.status;
      out.achieved_gap = r.solution.achieved_gap;
      out.num_epochs = r.horizon;
      break;
    }
    case Method::kAStar: {
      const AStarResult r = astar_solve(t, d, req.cfg, req.model, req.astar);
      out.schedule = r.schedule;
      out.astar_rounds = r.rounds;
      out.num_epochs = r.schedule.num_epochs;
      break;
    }
  }
  out.solver_wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.report = simulate(out.schedule, t, d);
  if (!out.report.ok()) {
    const Violation& v = out.report.violations.front();
    throw Error(ErrorKind::kValidation,
                "schedule fails simulation: " + std::string(to_string(v.kind)) +
                    " at " + v.location + " epoch " + std::to_string(v.epoch));
  }
  return out;
}

}  // namespace collsched
