#include "collsched/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>

namespace collsched {

std::unique_ptr<SolverBackend> make_highs_backend();

void SolverOptions::validate() const {
  if (!(time_limit_sec > 0.0)) {
    throw Error(ErrorKind::kInvalidInput, "time_limit must be positive");
  }
  if (!(relative_gap >= 0.0 && relative_gap < 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "relative_gap must be in [0, 1)");
  }
}

SolverOptions early_stop_options() {
  SolverOptions opts;
  opts.relative_gap = 0.3;
  return opts;
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasibleGap: return "feasible-gap";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kTimeout: return "timeout";
  }
  return "unknown";
}

std::vector<std::string> available_backends() { return {"highs"}; }

std::unique_ptr<SolverBackend> make_backend(std::string_view name) {
  std::string chosen(name);
  if (chosen.empty()) {
    const char* env = std::getenv("COLLSCHED_SOLVER");
    chosen = env != nullptr && *env != '\0' ? env : "highs";
  }
  if (chosen == "highs") return make_highs_backend();
  throw Error(ErrorKind::kBackend, "unknown solver backend '" + chosen + "'");
}

Solution solve(const Model& m, const SolverOptions& opts) {
  opts.validate();
  const auto start = std::chrono::steady_clock::now();
  Solution sol;
  if (m.trivially_infeasible()) {
    sol.status = SolveStatus::kInfeasible;
  } else {
    sol = make_backend(opts.backend)->solve(m, opts);
  }
  if (sol.has_values()) {
    for (int v = 0; v < m.num_variables(); ++v) {
      if (m.variable(v).type == VarType::kContinuous) continue;
      const double r = std::round(sol.values[v]);
      if (std::fabs(sol.values[v] - r) <= 1e-6) sol.values[v] = r;
    }
  } else {
    sol.values.clear();
  }
  sol.wall_time_sec = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return sol;
}

}  // namespace collsched
