#include "collsched/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "collsched/error.hpp"

namespace collsched {
namespace {

// LP format names may not start with a digit or contain brackets/commas.
std::string lp_name(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char ch : name) {
    if (ch == '[' || ch == ',' || ch == ']' || ch == ' ' || ch == ':') {
      out.push_back('_');
    } else {
      out.push_back(ch);
    }
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) {
    out.insert(out.begin(), 'v');
  }
  return out;
}

void write_number(std::ostream& out, double v) {
  out << std::setprecision(17) << v;
}

void write_terms(std::ostream& out, const std::vector<Term>& terms,
                 const std::vector<Variable>& vars) {
  int on_line = 0;
  for (size_t i = 0; i < terms.size(); ++i) {
    const Term& t = terms[i];
    out << (t.coef < 0 ? " - " : (i == 0 ? " " : " + "));
    const double mag = std::fabs(t.coef);
    if (mag != 1.0) {
      write_number(out, mag);
      out << ' ';
    }
    out << lp_name(vars[t.var].name);
    if (++on_line == 8) {
      out << "\n  ";
      on_line = 0;
    }
  }
  if (terms.empty()) out << " 0 " << lp_name(vars.empty() ? "x" : vars[0].name);
}

bool row_holds(double lhs, RowSense sense, double rhs, double tol) {
  switch (sense) {
    case RowSense::kLessEqual: return lhs <= rhs + tol;
    case RowSense::kGreaterEqual: return lhs >= rhs - tol;
    case RowSense::kEqual: return std::fabs(lhs - rhs) <= tol;
  }
  return false;
}

}  // namespace

LinearExpr& LinearExpr::add(int var, double coef) {
  if (var >= 0 && coef != 0.0) terms.push_back({var, coef});
  return *this;
}

LinearExpr& LinearExpr::add_constant(double c) {
  constant += c;
  return *this;
}

LinearExpr& LinearExpr::add(const LinearExpr& other, double scale) {
  for (const Term& t : other.terms) add(t.var, t.coef * scale);
  constant += other.constant * scale;
  return *this;
}

int Model::add_variable(std::string name, VarType type, double lower,
                        double upper, double objective) {
  if (type == VarType::kBinary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
  }
  variables_.push_back({std::move(name), type, lower, upper, objective});
  return static_cast<int>(variables_.size()) - 1;
}

void Model::add_row(std::string name, const LinearExpr& lhs, RowSense sense,
                    double rhs) {
  // Merge duplicate variables so the matrix has one entry per (row, var).
  std::map<int, double> merged;
  for (const Term& t : lhs.terms) merged[t.var] += t.coef;
  Row row;
  row.name = std::move(name);
  row.sense = sense;
  row.rhs = rhs - lhs.constant;
  for (auto [var, coef] : merged) {
    if (coef != 0.0) row.terms.push_back({var, coef});
  }
  if (row.terms.empty()) {
    if (!row_holds(0.0, sense, row.rhs, 1e-9)) {
      mark_infeasible("row " + row.name + " cannot be satisfied");
    }
    return;
  }
  rows_.push_back(std::move(row));
}

void Model::add_objective(int var, double coef) {
  variables_[var].objective += coef;
}

void Model::mark_infeasible(std::string reason) {
  if (infeasible_reason_.empty()) infeasible_reason_ = std::move(reason);
}

int Model::count(VarType type) const {
  return static_cast<int>(
      std::count_if(variables_.begin(), variables_.end(),
                    [type](const Variable& v) { return v.type == type; }));
}

std::vector<std::string> Model::check_well_formed() const {
  std::vector<std::string> out;
  const int n = num_variables();
  for (const Variable& v : variables_) {
    if (v.lower > v.upper) out.push_back("bounds cross on " + v.name);
  }
  for (const Row& r : rows_) {
    for (const Term& t : r.terms) {
      if (t.var < 0 || t.var >= n) {
        out.push_back("row " + r.name + " references an undeclared variable");
        break;
      }
    }
  }
  return out;
}

std::vector<std::string> Model::check_values(const std::vector<double>& values,
                                             double tol) const {
  std::vector<std::string> out;
  if (static_cast<int>(values.size()) != num_variables()) {
    out.push_back("value vector has the wrong size");
    return out;
  }
  for (int v = 0; v < num_variables(); ++v) {
    const Variable& var = variables_[v];
    const double x = values[v];
    if (x < var.lower - tol || x > var.upper + tol) {
      out.push_back("bound violated on " + var.name);
    }
    if (var.type != VarType::kContinuous && std::fabs(x - std::round(x)) > tol) {
      out.push_back("integrality violated on " + var.name);
    }
  }
  for (const Row& r : rows_) {
    double lhs = 0.0;
    double scale = 1.0;
    for (const Term& t : r.terms) {
      lhs += t.coef * values[t.var];
      scale = std::max(scale, std::fabs(t.coef * values[t.var]));
    }
    if (!row_holds(lhs, r.sense, r.rhs, tol * scale)) {
      std::ostringstream msg;
      msg << "row " << r.name << " violated: lhs=" << lhs << " rhs=" << r.rhs;
      out.push_back(msg.str());
    }
  }
  return out;
}

double Model::objective_value(const std::vector<double>& values) const {
  double total = 0.0;
  for (int v = 0; v < num_variables(); ++v) {
    total += variables_[v].objective * values[v];
  }
  return total;
}

void Model::write_lp(std::ostream& out) const {
  out << "\\ " << num_variables() << " variables, " << num_rows() << " rows\n";
  if (trivially_infeasible()) {
    out << "\\ trivially infeasible: " << infeasible_reason_ << "\n";
  }
  out << "Maximize\n obj:";
  std::vector<Term> objective;
  for (int v = 0; v < num_variables(); ++v) {
    if (variables_[v].objective != 0.0) {
      objective.push_back({v, variables_[v].objective});
    }
  }
  write_terms(out, objective, variables_);
  out << "\nSubject To\n";
  for (const Row& r : rows_) {
    out << ' ' << lp_name(r.name) << ':';
    write_terms(out, r.terms, variables_);
    switch (r.sense) {
      case RowSense::kLessEqual: out << " <= "; break;
      case RowSense::kGreaterEqual: out << " >= "; break;
      case RowSense::kEqual: out << " = "; break;
    }
    write_number(out, r.rhs);
    out << '\n';
  }
  out << "Bounds\n";
  const double inf = std::numeric_limits<double>::infinity();
  for (const Variable& v : variables_) {
    if (v.type == VarType::kBinary && v.lower == 0.0 && v.upper == 1.0) continue;
    out << ' ';
    if (v.lower == -inf) {
      out << "-inf";
    } else {
      write_number(out, v.lower);
    }
    out << " <= " << lp_name(v.name) << " <= ";
    if (v.upper == inf) {
      out << "+inf";
    } else {
      write_number(out, v.upper);
    }
    out << '\n';
  }
  std::vector<const Variable*> general;
  std::vector<const Variable*> binary;
  for (const Variable& v : variables_) {
    if (v.type == VarType::kInteger) general.push_back(&v);
    if (v.type == VarType::kBinary) binary.push_back(&v);
  }
  if (!general.empty()) {
    out << "General\n";
    for (const Variable* v : general) out << ' ' << lp_name(v->name) << '\n';
  }
  if (!binary.empty()) {
    out << "Binary\n";
    for (const Variable* v : binary) out << ' ' << lp_name(v->name) << '\n';
  }
  out << "End\n";
}

}  // namespace collsched
