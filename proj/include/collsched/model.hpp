#ifndef COLLSCHED_MODEL_HPP_
#define COLLSCHED_MODEL_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace collsched {

enum class VarType { kBinary, kInteger, kContinuous };
enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

struct Variable {
  std::string name;
  VarType type = VarType::kContinuous;
  double lower = 0.0;
  double upper = 0.0;
  double objective = 0.0;
};

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Row {
  std::string name;
  std::vector<Term> terms;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
};

// A linear expression with a constant part, used while assembling rows.
struct LinearExpr {
  std::vector<Term> terms;
  double constant = 0.0;

  LinearExpr& add(int var, double coef);
  LinearExpr& add_constant(double c);
  LinearExpr& add(const LinearExpr& other, double scale = 1.0);
};

// A maximization program over typed, bounded variables.
class Model {
 public:
  int add_variable(std::string name, VarType type, double lower, double upper,
                   double objective = 0.0);
  // Moves the constant of `lhs` to the right-hand side. A row without terms is
  // checked immediately; if it cannot hold the model is marked infeasible.
  void add_row(std::string name, const LinearExpr& lhs, RowSense sense,
               double rhs);
  void add_objective(int var, double coef);
  void mark_infeasible(std::string reason);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Row>& rows() const { return rows_; }
  const Variable& variable(int v) const { return variables_[v]; }
  bool trivially_infeasible() const { return !infeasible_reason_.empty(); }
  const std::string& infeasible_reason() const { return infeasible_reason_; }
  int count(VarType type) const;

  // Empty iff every row references declared variables and bounds are sane.
  std::vector<std::string> check_well_formed() const;

  // Row and bound violations of `values` above `tol` (scaled by row size).
  std::vector<std::string> check_values(const std::vector<double>& values,
                                        double tol = 1e-6) const;
  double objective_value(const std::vector<double>& values) const;

  // CPLEX LP text format.
  void write_lp(std::ostream& out) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Row> rows_;
  std::string infeasible_reason_;
};

}  // namespace collsched

#endif  // COLLSCHED_MODEL_HPP_
