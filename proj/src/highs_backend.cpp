#include <Highs.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "collsched/solver.hpp"

namespace collsched {
namespace {

class HighsBackend final : public SolverBackend {
 public:
  std::string name() const override { return "highs"; }

  Solution solve(const Model& m, const SolverOptions& opts) override {
    const int num_col = m.num_variables();
    const int num_row = m.num_rows();
    const double inf = kHighsInf;

    std::vector<double> cost(num_col), col_lower(num_col), col_upper(num_col);
    std::vector<HighsInt> integrality(num_col);
    bool is_mip = false;
    for (int v = 0; v < num_col; ++v) {
      const Variable& var = m.variable(v);
      cost[v] = var.objective;
      col_lower[v] = std::isinf(var.lower) ? -inf : var.lower;
      col_upper[v] = std::isinf(var.upper) ? inf : var.upper;
      const bool integer = var.type != VarType::kContinuous;
      integrality[v] = static_cast<HighsInt>(integer ? HighsVarType::kInteger
                                                     : HighsVarType::kContinuous);
      is_mip = is_mip || integer;
    }

    std::vector<double> row_lower(num_row), row_upper(num_row);
    std::vector<HighsInt> start(num_row + 1, 0);
    std::vector<HighsInt> index;
    std::vector<double> value;
    for (int r = 0; r < num_row; ++r) {
      const Row& row = m.rows()[r];
      row_lower[r] = row.sense == RowSense::kLessEqual ? -inf : row.rhs;
      row_upper[r] = row.sense == RowSense::kGreaterEqual ? inf : row.rhs;
      for (const Term& t : row.terms) {
        index.push_back(t.var);
        value.push_back(t.coef);
      }
      start[r + 1] = static_cast<HighsInt>(index.size());
    }

    Solution sol;
    if (num_col == 0) {
      sol.status = SolveStatus::kOptimal;
      return sol;
    }

    Highs highs;
    highs.setOptionValue("output_flag", opts.verbosity > 0);
    highs.setOptionValue("threads", 1);
    highs.setOptionValue("random_seed", static_cast<int>(opts.seed % 2147483647u));
    highs.setOptionValue("time_limit", opts.time_limit_sec);
    highs.setOptionValue("mip_rel_gap", opts.relative_gap);
    highs.setOptionValue("mip_feasibility_tolerance", 1e-7);

    const HighsStatus pass = highs.passModel(
        num_col, num_row, static_cast<HighsInt>(index.size()),
        static_cast<HighsInt>(MatrixFormat::kRowwise),
        static_cast<HighsInt>(ObjSense::kMaximize), 0.0, cost.data(),
        col_lower.data(), col_upper.data(), row_lower.data(), row_upper.data(),
        start.data(), index.empty() ? nullptr : index.data(),
        value.empty() ? nullptr : value.data(),
        is_mip ? integrality.data() : nullptr);
    if (pass == HighsStatus::kError) {
      throw Error(ErrorKind::kBackend, "HiGHS rejected the model");
    }
    if (highs.run() == HighsStatus::kError &&
        highs.getModelStatus() == HighsModelStatus::kNotset) {
      throw Error(ErrorKind::kBackend, "HiGHS failed to run");
    }

    const HighsInfo& info = highs.getInfo();
    const bool has_primal = info.primal_solution_status == kSolutionStatusFeasible;
    if (has_primal) {
      sol.values = highs.getSolution().col_value;
      sol.objective = info.objective_function_value;
      sol.best_bound = is_mip ? info.mip_dual_bound : sol.objective;
      const double denom = std::max(std::fabs(sol.best_bound), 1e-12);
      sol.achieved_gap = std::max(0.0, (sol.best_bound - sol.objective) / denom);
      if (!std::isfinite(sol.achieved_gap)) sol.achieved_gap = 1.0;
    }

    switch (highs.getModelStatus()) {
      case HighsModelStatus::kOptimal:
        if (!is_mip || sol.achieved_gap <= 1e-9) {
          sol.status = SolveStatus::kOptimal;
          sol.achieved_gap = 0.0;
        } else {
          sol.status = SolveStatus::kFeasibleGap;
        }
        break;
      case HighsModelStatus::kModelEmpty:
        sol.status = SolveStatus::kOptimal;
        break;
      case HighsModelStatus::kInfeasible:
      case HighsModelStatus::kUnboundedOrInfeasible:
        sol.status = SolveStatus::kInfeasible;
        break;
      case HighsModelStatus::kTimeLimit:
      case HighsModelStatus::kIterationLimit:
      case HighsModelStatus::kSolutionLimit:
      case HighsModelStatus::kInterrupt:
        sol.status = has_primal && is_mip && sol.achieved_gap <= opts.relative_gap
                         ? SolveStatus::kFeasibleGap
                         : SolveStatus::kTimeout;
        break;
      default:
        throw Error(ErrorKind::kBackend,
                    "HiGHS ended with status " +
                        highs.modelStatusToString(highs.getModelStatus()));
    }
    if (!sol.has_values()) sol.values.clear();
    return sol;
  }
};

}  // namespace

std::unique_ptr<SolverBackend> make_highs_backend() {
  return std::make_unique<HighsBackend>();
}

}  // namespace collsched
