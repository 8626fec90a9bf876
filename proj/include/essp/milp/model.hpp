// Copyright 2026 The essp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ESSP_MILP_MODEL_HPP_
#define ESSP_MILP_MODEL_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace essp::milp {

// Every decision variable is integral; LP relaxations exist only inside the
// solver. Binary variables are bounded integers fixed to {0,1}.
enum class VarKind { kBinary, kInteger };

struct Variable {
  std::string name;
  VarKind kind = VarKind::kBinary;
  double lower = 0.0;
  double upper = 1.0;
};

struct LinTerm {
  int var = -1;
  double coeff = 0.0;
};

// A linear expression as an ordered term list. Builders may add several terms
// on the same variable; consumers see the merged form via merged_terms().
class LinExpr {
 public:
  LinExpr& add(int var, double coeff) {
    if (coeff != 0.0) terms_.push_back({var, coeff});
    return *this;
  }

  const std::vector<LinTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  // Terms merged by variable, ascending index, zero coefficients dropped.
  std::vector<LinTerm> merged_terms() const {
    std::map<int, double> acc;
    for (const LinTerm& t : terms_) acc[t.var] += t.coeff;
    std::vector<LinTerm> out;
    out.reserve(acc.size());
    for (const auto& [var, coeff] : acc) {
      if (coeff != 0.0) out.push_back({var, coeff});
    }
    return out;
  }

  double evaluate(const std::vector<double>& values) const {
    double acc = 0.0;
    for (const LinTerm& t : terms_) {
      acc += t.coeff * values[static_cast<std::size_t>(t.var)];
    }
    return acc;
  }

 private:
  std::vector<LinTerm> terms_;
};

enum class Sense { kLessEq, kEq, kGreaterEq };

struct Constraint {
  std::string name;
  LinExpr expr;
  Sense sense = Sense::kLessEq;
  double rhs = 0.0;
};

// A minimization model over named integer variables. Variable and constraint
// order is the insertion order; all downstream artifacts (LP text, branching)
// follow it, which is what makes solves reproducible.
class MilpModel {
 public:
  int add_variable(const std::string& name, VarKind kind, double lower,
                   double upper) {
    if (!names_.emplace(name, static_cast<int>(variables_.size())).second) {
      throw std::invalid_argument("duplicate variable name: " + name);
    }
    variables_.push_back({name, kind, lower, upper});
    return static_cast<int>(variables_.size()) - 1;
  }

  int add_binary(const std::string& name) {
    return add_variable(name, VarKind::kBinary, 0.0, 1.0);
  }

  int add_integer(const std::string& name, double lower, double upper) {
    return add_variable(name, VarKind::kInteger, lower, upper);
  }

  // Pins a variable to one value; used to re-solve with partial decisions
  // frozen (e.g. an open-shelter pattern from an earlier phase).
  void fix_variable(int var, double value) {
    Variable& v = variables_.at(static_cast<std::size_t>(var));
    v.lower = value;
    v.upper = value;
  }

  void set_objective(LinExpr expr) { objective_ = std::move(expr); }

  int add_constraint(const std::string& name, LinExpr expr, Sense sense,
                     double rhs) {
    constraints_.push_back({name, std::move(expr), sense, rhs});
    return static_cast<int>(constraints_.size()) - 1;
  }

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const LinExpr& objective() const { return objective_; }

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }

  int find_variable(const std::string& name) const {
    auto it = names_.find(name);
    return it == names_.end() ? -1 : it->second;
  }

  double eval_objective(const std::vector<double>& values) const {
    return objective_.evaluate(values);
  }

  // Well-formedness: term indices in range, binaries exactly {0,1}, finite
  // and ordered bounds, no empty constraints, unique constraint names.
  std::vector<std::string> validate() const {
    std::vector<std::string> problems;
    for (std::size_t i = 0; i < variables_.size(); ++i) {
      const Variable& v = variables_[i];
      if (v.kind == VarKind::kBinary &&
          !((v.lower == 0.0 || v.lower == 1.0) &&
            (v.upper == 0.0 || v.upper == 1.0) && v.lower <= v.upper)) {
        problems.push_back("binary variable " + v.name +
                           " has bounds outside {0,1}");
      }
      if (!std::isfinite(v.lower) || !std::isfinite(v.upper)) {
        problems.push_back("variable " + v.name + " has non-finite bounds");
      } else if (v.lower > v.upper) {
        problems.push_back("variable " + v.name + " has lower > upper");
      }
    }
    auto check_expr = [&](const LinExpr& e, const std::string& where) {
      for (const LinTerm& t : e.terms()) {
        if (t.var < 0 || t.var >= num_variables()) {
          problems.push_back(where + " references undeclared variable index " +
                             std::to_string(t.var));
        }
        if (!std::isfinite(t.coeff)) {
          problems.push_back(where + " has a non-finite coefficient");
        }
      }
    };
    check_expr(objective_, "objective");
    std::map<std::string, int> cnames;
    for (const Constraint& c : constraints_) {
      check_expr(c.expr, "constraint " + c.name);
      if (c.expr.merged_terms().empty()) {
        problems.push_back("constraint " + c.name + " has no terms");
      }
      if (!std::isfinite(c.rhs)) {
        problems.push_back("constraint " + c.name + " has non-finite rhs");
      }
      if (++cnames[c.name] == 2) {
        problems.push_back("duplicate constraint name: " + c.name);
      }
    }
    return problems;
  }

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  LinExpr objective_;
  std::map<std::string, int> names_;
};

enum class SolveStatus { kOptimal, kFeasible, kInfeasible, kTimedOut,
                         kUnbounded };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kTimedOut: return "timed_out";
    case SolveStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

struct MilpSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> values;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double best_bound = -std::numeric_limits<double>::infinity();
  long nodes = 0;
  double wall_time_s = 0.0;
  std::string message;

  bool has_values() const { return !values.empty(); }

  double value(const MilpModel& model, const std::string& name) const {
    int idx = model.find_variable(name);
    if (idx < 0) {
      throw std::invalid_argument("unknown variable name: " + name);
    }
    return values.at(static_cast<std::size_t>(idx));
  }

  std::map<std::string, double> values_by_name(const MilpModel& model) const {
    std::map<std::string, double> out;
    for (int i = 0; i < model.num_variables(); ++i) {
      out[model.variables()[static_cast<std::size_t>(i)].name] =
          values.at(static_cast<std::size_t>(i));
    }
    return out;
  }
};

}  // namespace essp::milp

#endif  // ESSP_MILP_MODEL_HPP_
