#ifndef COLLSCHED_SOLVER_HPP_
#define COLLSCHED_SOLVER_HPP_

#include <memory>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "collsched/error.hpp"
#include "collsched/model.hpp"

namespace collsched {

struct SolverOptions {
  double time_limit_sec = 300.0;
  // Stop once (bound - incumbent) / bound falls below this.
  double relative_gap = 0.0;
  unsigned seed = 0;
  int verbosity = 0;
  // Empty selects $COLLSCHED_SOLVER, then "highs".
  std::string backend;

  void validate() const;
};

// Options for the early-stop mode: gap 0.3.
SolverOptions early_stop_options();

enum class SolveStatus { kOptimal, kFeasibleGap, kInfeasible, kTimeout };

std::string_view to_string(SolveStatus status);

struct Solution {
  SolveStatus status = SolveStatus::kInfeasible;
  // One entry per model variable; empty unless has_values().
  std::vector<double> values;
  double objective = 0.0;
  double best_bound = 0.0;
  double achieved_gap = 0.0;
  double wall_time_sec = 0.0;

  bool has_values() const {
    return status == SolveStatus::kOptimal ||
           status == SolveStatus::kFeasibleGap;
  }
  double value(int var) const { return var < 0 ? 0.0 : values[var]; }
};

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual std::string name() const = 0;
  virtual Solution solve(const Model& m, const SolverOptions& opts) = 0;
};

// Throws Error(kBackend) for an unknown name.
std::unique_ptr<SolverBackend> make_backend(std::string_view name);
std::vector<std::string> available_backends();

// Integer variables in the result are snapped to integers.
Solution solve(const Model& m, const SolverOptions& opts);

inline const Model& model_of(const Model& m) { return m; }
template <typename Built>
const Model& model_of(const Built& b) {
  return b.model;
}

template <typename Built>
struct HorizonResult {
  int horizon = 0;
  Built built;
  Solution solution;
};

// Smallest K in [k_lo, k_hi] whose model is feasible, assuming feasibility is
// monotone in K. `build(K)` returns a Model or a struct with a `model` member.
// Throws Error(kInfeasible) if k_hi is infeasible and Error(kTimeout) if a
// probe ends without a verdict.
template <typename Builder>
auto min_feasible_horizon(Builder&& build, int k_lo, int k_hi,
                          const SolverOptions& opts)
    -> HorizonResult<std::decay_t<std::invoke_result_t<Builder, int>>> {
  using Built = std::decay_t<std::invoke_result_t<Builder, int>>;
  if (k_lo < 1 || k_hi < k_lo) {
    throw Error(ErrorKind::kInvalidInput, "empty horizon range");
  }
  auto probe = [&](int k) {
    HorizonResult<Built> r{k, build(k), {}};
    r.solution = solve(model_of(r.built), opts);
    if (r.solution.status == SolveStatus::kTimeout) {
      throw Error(ErrorKind::kTimeout,
                  "solver timed out at horizon " + std::to_string(k));
    }
    return r;
  };
  HorizonResult<Built> best = probe(k_hi);
  if (!best.solution.has_values()) {
    throw Error(ErrorKind::kInfeasible,
                "k_hi infeasible: no schedule within " + std::to_string(k_hi) +
                    " epochs");
  }
  int lo = k_lo;
  int hi = k_hi;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    HorizonResult<Built> r = probe(mid);
    if (r.solution.has_values()) {
      hi = mid;
      best = std::move(r);
    } else {
      lo = mid + 1;
    }
  }
  return best;
}

}  // namespace collsched

#endif  // COLLSCHED_SOLVER_HPP_
