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

#ifndef ESSP_MILP_BRANCH_AND_BOUND_HPP_
#define ESSP_MILP_BRANCH_AND_BOUND_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "essp/milp/model.hpp"
#include "essp/milp/simplex.hpp"

namespace essp::milp {

struct SolveLimits {
  double time_limit_s = std::numeric_limits<double>::infinity();
  long node_limit = std::numeric_limits<long>::max();
};

// Emitted once per explored node, after its LP relaxation is solved.
// `incumbent` is +inf until the first integral solution is found.
struct NodeInfo {
  long node = 0;
  int depth = 0;
  double lp_bound = 0.0;
  double incumbent = std::numeric_limits<double>::infinity();
};

using NodeCallback = std::function<void(const NodeInfo&)>;

namespace detail {

inline constexpr double kIntegralityTol = 1e-6;

class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& model, const SolveLimits& limits,
                 const NodeCallback& callback)
      : model_(model),
        limits_(limits),
        callback_(callback),
        lp_(LpProblem::from_model(model)),
        start_(std::chrono::steady_clock::now()) {
    lower_.reserve(model.variables().size());
    upper_.reserve(model.variables().size());
    for (const Variable& v : model.variables()) {
      lower_.push_back(v.lower);
      upper_.push_back(v.upper);
    }
  }

  MilpSolution run() {
    dfs(0, -std::numeric_limits<double>::infinity());

    MilpSolution out;
    out.nodes = nodes_;
    out.wall_time_s = elapsed();
    if (root_unbounded_) {
      out.status = SolveStatus::kUnbounded;
      out.message = "LP relaxation is unbounded";
      return out;
    }
    bool has_incumbent = !incumbent_.empty();
    if (!interrupted_) {
      out.status =
          has_incumbent ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
      if (has_incumbent) {
        out.values = incumbent_;
        out.objective = incumbent_obj_;
        out.best_bound = incumbent_obj_;
      } else {
        out.message = "no integer-feasible point exists";
      }
      return out;
    }
    out.status = SolveStatus::kTimedOut;
    out.message = limit_reason_;
    double bound = open_bound_;
    if (has_incumbent) {
      out.values = incumbent_;
      out.objective = incumbent_obj_;
      bound = std::min(bound, incumbent_obj_);
    }
    out.best_bound = bound;
    return out;
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

  bool hit_limit() {
    if (nodes_ >= limits_.node_limit) {
      limit_reason_ = "node limit reached";
      return true;
    }
    if (elapsed() >= limits_.time_limit_s) {
      limit_reason_ = "time limit reached";
      return true;
    }
    return false;
  }

  // Depth-first search; bounds in lower_/upper_ are mutated on the way down
  // and restored on the way up. Returns after setting interrupted_ when a
  // limit fires; every frame then records a valid bound for whatever part of
  // the tree it leaves unexplored. `inherited_bound` is the parent's LP
  // value, the tightest bound known before this node's own LP is solved.
  void dfs(int depth, double inherited_bound) {
    if (interrupted_) return;
    if (hit_limit()) {
      interrupted_ = true;
      open_bound_ = std::min(open_bound_, inherited_bound);
      return;
    }

    ++nodes_;
    LpResult lp = Simplex::solve(lp_, lower_, upper_);
    if (lp.status == LpStatus::kIterLimit) {
      throw std::runtime_error("simplex iteration limit; numerically stuck");
    }
    if (lp.status == LpStatus::kUnbounded) {
      // Only the root can be unbounded: children shrink the feasible set.
      root_unbounded_ = true;
      interrupted_ = true;
      return;
    }
    if (lp.status == LpStatus::kInfeasible) return;

    if (callback_) {
      callback_({nodes_, depth, lp.objective,
                 incumbent_.empty()
                     ? std::numeric_limits<double>::infinity()
                     : incumbent_obj_});
    }

    // Prune on bound against the incumbent.
    if (!incumbent_.empty() &&
        lp.objective >= incumbent_obj_ - 1e-9 * std::max(1.0, std::fabs(incumbent_obj_))) {
      return;
    }

    // Branch on the most fractional integer variable, smallest index on ties.
    int branch_var = -1;
    double branch_val = 0.0;
    double best_frac = kIntegralityTol;
    for (std::size_t j = 0; j < lp.x.size(); ++j) {
      double v = lp.x[j];
      double frac = std::fabs(v - std::round(v));
      if (frac > best_frac + 1e-12) {
        best_frac = frac;
        branch_var = static_cast<int>(j);
        branch_val = v;
      }
    }

    if (branch_var < 0) {
      // Integral: snap and take as incumbent if strictly better.
      std::vector<double> x = lp.x;
      for (double& v : x) v = std::round(v);
      double obj = model_.eval_objective(x);
      if (incumbent_.empty() || obj < incumbent_obj_) {
        incumbent_ = std::move(x);
        incumbent_obj_ = obj;
      }
      return;
    }

    double down = std::floor(branch_val);
    double up = down + 1.0;
    std::size_t j = static_cast<std::size_t>(branch_var);
    double frac = branch_val - down;

    struct Child {
      bool is_down;
    };
    // Explore the side the LP value leans toward first.
    Child order[2] = {{frac <= 0.5}, {frac > 0.5}};

    for (const Child& child : order) {
      double saved_lower = lower_[j];
      double saved_upper = upper_[j];
      if (child.is_down) {
        upper_[j] = std::min(upper_[j], down);
      } else {
        lower_[j] = std::max(lower_[j], up);
      }
      if (lower_[j] <= upper_[j]) {
        dfs(depth + 1, lp.objective);
      }
      lower_[j] = saved_lower;
      upper_[j] = saved_upper;
      if (interrupted_) {
        // Any sibling subtree not yet entered can be no better than this
        // node's relaxation, so that is a valid open bound for it.
        if (&child == &order[0]) {
          open_bound_ = std::min(open_bound_, lp.objective);
        }
        return;
      }
    }
  }

  const MilpModel& model_;
  SolveLimits limits_;
  NodeCallback callback_;
  LpProblem lp_;
  std::chrono::steady_clock::time_point start_;

  std::vector<double> lower_, upper_;
  std::vector<double> incumbent_;
  double incumbent_obj_ = std::numeric_limits<double>::infinity();
  double open_bound_ = std::numeric_limits<double>::infinity();
  long nodes_ = 0;
  bool interrupted_ = false;
  bool root_unbounded_ = false;
  std::string limit_reason_;
};

}  // namespace detail

// Exact minimization by depth-first branch-and-bound with LP relaxation
// bounds. Deterministic: the same model always yields the same status,
// objective, and values. Integer values in the result are exactly integral
// (snapped after the 1e-6 integrality test).
inline MilpSolution solve_builtin(const MilpModel& model,
                                  const SolveLimits& limits = {},
                                  const NodeCallback& callback = {}) {
  if (auto problems = model.validate(); !problems.empty()) {
    std::string msg = "malformed model: " + problems.front();
    if (problems.size() > 1) {
      msg += " (+" + std::to_string(problems.size() - 1) + " more)";
    }
    throw std::invalid_argument(msg);
  }
  detail::BranchAndBound bnb(model, limits, callback);
  return bnb.run();
}

}  // namespace essp::milp

#endif  // ESSP_MILP_BRANCH_AND_BOUND_HPP_
