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

#ifndef ESSP_MILP_SIMPLEX_HPP_
#define ESSP_MILP_SIMPLEX_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "essp/milp/model.hpp"

namespace essp::milp {

// Linear program in row form, shared by every node of a branch-and-bound
// tree; only the variable bounds change between solves.
struct LpProblem {
  struct Row {
    std::vector<LinTerm> terms;
    Sense sense = Sense::kLessEq;
    double rhs = 0.0;
  };

  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Row> rows;

  static LpProblem from_model(const MilpModel& model) {
    LpProblem lp;
    lp.num_vars = model.num_variables();
    lp.objective.assign(static_cast<std::size_t>(lp.num_vars), 0.0);
    for (const LinTerm& t : model.objective().merged_terms()) {
      lp.objective[static_cast<std::size_t>(t.var)] = t.coeff;
    }
    for (const Constraint& c : model.constraints()) {
      lp.rows.push_back({c.expr.merged_terms(), c.sense, c.rhs});
    }
    return lp;
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterLimit };

struct LpResult {
  LpStatus status = LpStatus::kIterLimit;
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> x;
  // Optimality certificate material: reduced costs and at-bound side per
  // structural variable (-1 lower, +1 upper, 0 basic).
  std::vector<double> reduced_costs;
  std::vector<int> bound_side;
  long pivots = 0;
};

// Dense bounded-variable primal simplex.
//
// Every row is rewritten as a.x + s = b with the slack's bounds encoding the
// sense, so the all-slack basis is always an identity basis. Rows whose slack
// starts outside its bounds get a signed artificial; phase 1 minimizes total
// artificial magnitude. Bland's smallest-index rule is used for entering and
// leaving variables in both phases, which rules out cycling.
class Simplex {
 public:
  // Tolerances: dj below this is treated as optimal (pivot tolerance), bound
  // and feasibility checks use the looser feasibility tolerance.
  static constexpr double kPivotTol = 1e-9;
  static constexpr double kFeasTol = 1e-6;

  static LpResult solve(const LpProblem& lp, const std::vector<double>& lower,
                        const std::vector<double>& upper) {
    Simplex s(lp, lower, upper);
    return s.run();
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  enum Status : signed char { kAtLower = -1, kBasic = 0, kAtUpper = 1 };

  Simplex(const LpProblem& lp, const std::vector<double>& lower,
          const std::vector<double>& upper)
      : n_(lp.num_vars), m_(static_cast<int>(lp.rows.size())) {
    int total_guess = n_ + m_ + m_;
    lb_.reserve(static_cast<std::size_t>(total_guess));
    ub_.reserve(static_cast<std::size_t>(total_guess));
    lb_.assign(lower.begin(), lower.end());
    ub_.assign(upper.begin(), upper.end());

    // Slack bounds encode the sense of each row.
    for (const LpProblem::Row& row : lp.rows) {
      switch (row.sense) {
        case Sense::kLessEq:
          lb_.push_back(0.0);
          ub_.push_back(kInf);
          break;
        case Sense::kGreaterEq:
          lb_.push_back(-kInf);
          ub_.push_back(0.0);
          break;
        case Sense::kEq:
          lb_.push_back(0.0);
          ub_.push_back(0.0);
          break;
      }
    }

    // Nonbasic structural variables start at a finite bound (lower when both
    // are finite). Fully free variables are not produced by any builder here.
    status_.assign(static_cast<std::size_t>(n_ + m_), kAtLower);
    for (int j = 0; j < n_; ++j) {
      status_[static_cast<std::size_t>(j)] =
          std::isfinite(lb_[static_cast<std::size_t>(j)]) ? kAtLower : kAtUpper;
    }

    // Initial basic value of each slack, with structural at their bounds.
    std::vector<double> slack0(static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) {
      double ax = 0.0;
      for (const LinTerm& t : lp.rows[static_cast<std::size_t>(i)].terms) {
        ax += t.coeff * nonbasic_value(t.var);
      }
      slack0[static_cast<std::size_t>(i)] =
          lp.rows[static_cast<std::size_t>(i)].rhs - ax;
    }

    // Decide which rows need an artificial before sizing the tableau. The
    // sign records which bound the initial slack value violates.
    art_sign_.assign(static_cast<std::size_t>(m_), 0);
    int num_art = 0;
    for (int i = 0; i < m_; ++i) {
      int slack = n_ + i;
      double v = slack0[static_cast<std::size_t>(i)];
      if (v < lb_[static_cast<std::size_t>(slack)]) {
        art_sign_[static_cast<std::size_t>(i)] = 1;
        ++num_art;
      } else if (v > ub_[static_cast<std::size_t>(slack)]) {
        art_sign_[static_cast<std::size_t>(i)] = -1;
        ++num_art;
      }
    }

    total_ = n_ + m_ + num_art;
    status_.resize(static_cast<std::size_t>(total_), kAtLower);
    tab_.assign(static_cast<std::size_t>(m_) * total_, 0.0);
    basis_.assign(static_cast<std::size_t>(m_), -1);
    xb_.assign(static_cast<std::size_t>(m_), 0.0);

    int art = n_ + m_;
    for (int i = 0; i < m_; ++i) {
      for (const LinTerm& t : lp.rows[static_cast<std::size_t>(i)].terms) {
        at(i, t.var) += t.coeff;
      }
      at(i, n_ + i) = 1.0;
      int slack = n_ + i;
      double v = slack0[static_cast<std::size_t>(i)];
      if (art_sign_[static_cast<std::size_t>(i)] != 0) {
        // Clamp the slack to its violated bound and let the artificial carry
        // the residual; the artificial is confined to one sign so that a
        // cost of that sign measures |value|.
        double clamped = art_sign_[static_cast<std::size_t>(i)] > 0
                             ? lb_[static_cast<std::size_t>(slack)]
                             : ub_[static_cast<std::size_t>(slack)];
        status_[static_cast<std::size_t>(slack)] =
            art_sign_[static_cast<std::size_t>(i)] > 0 ? kAtLower : kAtUpper;
        double residual = v - clamped;
        at(i, art) = 1.0;
        if (residual >= 0.0) {
          lb_.push_back(0.0);
          ub_.push_back(kInf);
        } else {
          lb_.push_back(-kInf);
          ub_.push_back(0.0);
        }
        basis_[static_cast<std::size_t>(i)] = art;
        status_[static_cast<std::size_t>(art)] = kBasic;
        xb_[static_cast<std::size_t>(i)] = residual;
        art_cost_.push_back(residual >= 0.0 ? 1.0 : -1.0);
        ++art;
      } else {
        basis_[static_cast<std::size_t>(i)] = slack;
        status_[static_cast<std::size_t>(slack)] = kBasic;
        xb_[static_cast<std::size_t>(i)] = v;
      }
    }
    first_art_ = n_ + m_;
    num_art_ = num_art;

    obj_.assign(static_cast<std::size_t>(total_), 0.0);
    for (int j = 0; j < n_; ++j) {
      obj_[static_cast<std::size_t>(j)] = lp.objective[static_cast<std::size_t>(j)];
    }
  }

  double& at(int row, int col) {
    return tab_[static_cast<std::size_t>(row) * total_ + col];
  }
  double at(int row, int col) const {
    return tab_[static_cast<std::size_t>(row) * total_ + col];
  }

  double nonbasic_value(int j) const {
    return status_[static_cast<std::size_t>(j)] == kAtUpper
               ? ub_[static_cast<std::size_t>(j)]
               : lb_[static_cast<std::size_t>(j)];
  }

  // Reduced costs d = c - c_B^T B^{-1} A over the current tableau.
  void compute_reduced_costs(const std::vector<double>& cost) {
    d_.assign(cost.begin(), cost.end());
    for (int i = 0; i < m_; ++i) {
      double cb = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
      if (cb == 0.0) continue;
      const double* row = &tab_[static_cast<std::size_t>(i) * total_];
      for (int j = 0; j < total_; ++j) d_[static_cast<std::size_t>(j)] -= cb * row[j];
    }
    for (int i = 0; i < m_; ++i) {
      d_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = 0.0;
    }
  }

  // One simplex phase with costs already reflected in d_. `allow` masks
  // columns that may enter. Returns kOptimal when no eligible column remains.
  LpStatus iterate(const std::vector<bool>& allow, long* pivots) {
    const long iter_cap = 50000L + 200L * (m_ + total_);
    for (long iter = 0; iter < iter_cap; ++iter) {
      // Entering: Bland's rule, smallest index with a profitable direction.
      int e = -1;
      int dir = 0;
      for (int j = 0; j < total_; ++j) {
        if (status_[static_cast<std::size_t>(j)] == kBasic ||
            !allow[static_cast<std::size_t>(j)]) {
          continue;
        }
        double range = ub_[static_cast<std::size_t>(j)] - lb_[static_cast<std::size_t>(j)];
        if (!(range > 0.0)) continue;
        double dj = d_[static_cast<std::size_t>(j)];
        if (status_[static_cast<std::size_t>(j)] == kAtLower && dj < -kPivotTol) {
          e = j;
          dir = 1;
          break;
        }
        if (status_[static_cast<std::size_t>(j)] == kAtUpper && dj > kPivotTol) {
          e = j;
          dir = -1;
          break;
        }
      }
      if (e < 0) return LpStatus::kOptimal;

      // Ratio test: how far the entering variable can move before a basic
      // variable hits a bound, or it reaches its own opposite bound.
      double t_bound = ub_[static_cast<std::size_t>(e)] - lb_[static_cast<std::size_t>(e)];
      double t_best = kInf;
      int leave_row = -1;
      int leave_side = 0;
      for (int i = 0; i < m_; ++i) {
        double a = at(i, e);
        if (std::fabs(a) <= kPivotTol) continue;
        double alpha = a * dir;
        int b = basis_[static_cast<std::size_t>(i)];
        double limit;
        int side;
        if (alpha > 0.0) {
          double lo = lb_[static_cast<std::size_t>(b)];
          if (!std::isfinite(lo)) continue;
          limit = (xb_[static_cast<std::size_t>(i)] - lo) / alpha;
          side = -1;
        } else {
          double hi = ub_[static_cast<std::size_t>(b)];
          if (!std::isfinite(hi)) continue;
          limit = (hi - xb_[static_cast<std::size_t>(i)]) / (-alpha);
          side = 1;
        }
        if (limit < 0.0) limit = 0.0;
        if (limit < t_best - 1e-12 ||
            (limit < t_best + 1e-12 && leave_row >= 0 &&
             b < basis_[static_cast<std::size_t>(leave_row)])) {
          t_best = limit;
          leave_row = i;
          leave_side = side;
        }
      }

      if (t_bound <= t_best) {
        if (!std::isfinite(t_bound)) return LpStatus::kUnbounded;
        // Bound flip: the entering variable crosses to its other bound and
        // the basis is unchanged.
        for (int i = 0; i < m_; ++i) {
          double a = at(i, e);
          if (a != 0.0) xb_[static_cast<std::size_t>(i)] -= a * dir * t_bound;
        }
        status_[static_cast<std::size_t>(e)] =
            status_[static_cast<std::size_t>(e)] == kAtLower ? kAtUpper : kAtLower;
        continue;
      }

      double enter_value = dir > 0 ? lb_[static_cast<std::size_t>(e)] + t_best
                                   : ub_[static_cast<std::size_t>(e)] - t_best;
      for (int i = 0; i < m_; ++i) {
        if (i == leave_row) continue;
        double a = at(i, e);
        if (a != 0.0) xb_[static_cast<std::size_t>(i)] -= a * dir * t_best;
      }
      int leaving = basis_[static_cast<std::size_t>(leave_row)];
      status_[static_cast<std::size_t>(leaving)] =
          leave_side < 0 ? kAtLower : kAtUpper;

      // Pivot: normalize the leaving row, eliminate the entering column.
      double pivot = at(leave_row, e);
      double* prow = &tab_[static_cast<std::size_t>(leave_row) * total_];
      double inv = 1.0 / pivot;
      for (int j = 0; j < total_; ++j) prow[j] *= inv;
      for (int i = 0; i < m_; ++i) {
        if (i == leave_row) continue;
        double f = at(i, e);
        if (f == 0.0) continue;
        double* row = &tab_[static_cast<std::size_t>(i) * total_];
        for (int j = 0; j < total_; ++j) row[j] -= f * prow[j];
        row[e] = 0.0;
      }
      double de = d_[static_cast<std::size_t>(e)];
      if (de != 0.0) {
        for (int j = 0; j < total_; ++j) d_[static_cast<std::size_t>(j)] -= de * prow[j];
      }
      d_[static_cast<std::size_t>(e)] = 0.0;

      basis_[static_cast<std::size_t>(leave_row)] = e;
      status_[static_cast<std::size_t>(e)] = kBasic;
      xb_[static_cast<std::size_t>(leave_row)] = enter_value;
      ++*pivots;
    }
    return LpStatus::kIterLimit;
  }

  LpResult run() {
    LpResult result;

    if (num_art_ > 0) {
      // Phase 1: drive total artificial magnitude to zero.
      std::vector<double> cost(static_cast<std::size_t>(total_), 0.0);
      for (int k = 0; k < num_art_; ++k) {
        cost[static_cast<std::size_t>(first_art_ + k)] =
            art_cost_[static_cast<std::size_t>(k)];
      }
      compute_reduced_costs(cost);
      std::vector<bool> allow(static_cast<std::size_t>(total_), true);
      LpStatus st = iterate(allow, &result.pivots);
      if (st == LpStatus::kIterLimit) {
        result.status = st;
        return result;
      }
      std::vector<double> values = current_values();
      double infeasibility = 0.0;
      for (int k = 0; k < num_art_; ++k) {
        infeasibility += std::fabs(values[static_cast<std::size_t>(first_art_ + k)]);
      }
      if (infeasibility > kFeasTol) {
        result.status = LpStatus::kInfeasible;
        return result;
      }
      // Pin artificials at zero for phase 2. Basic-at-zero artificials may
      // stay basic; the ratio test keeps them at zero from here on.
      for (int k = 0; k < num_art_; ++k) {
        int col = first_art_ + k;
        lb_[static_cast<std::size_t>(col)] = 0.0;
        ub_[static_cast<std::size_t>(col)] = 0.0;
        if (status_[static_cast<std::size_t>(col)] != kBasic) {
          status_[static_cast<std::size_t>(col)] = kAtLower;
        }
      }
    }

    compute_reduced_costs(obj_);
    std::vector<bool> allow(static_cast<std::size_t>(total_), true);
    for (int k = 0; k < num_art_; ++k) {
      allow[static_cast<std::size_t>(first_art_ + k)] = false;
    }
    LpStatus st = iterate(allow, &result.pivots);
    if (st != LpStatus::kOptimal) {
      result.status = st;
      return result;
    }

    result.status = LpStatus::kOptimal;
    std::vector<double> values = current_values();
    result.x.assign(values.begin(), values.begin() + n_);
    // Clamp tiny excursions from drift so bound checks downstream hold.
    for (int j = 0; j < n_; ++j) {
      double& v = result.x[static_cast<std::size_t>(j)];
      v = std::min(std::max(v, lb_[static_cast<std::size_t>(j)]),
                   ub_[static_cast<std::size_t>(j)]);
    }
    result.objective = 0.0;
    for (int j = 0; j < n_; ++j) {
      result.objective += obj_[static_cast<std::size_t>(j)] *
                          result.x[static_cast<std::size_t>(j)];
    }
    result.reduced_costs.assign(static_cast<std::size_t>(n_), 0.0);
    result.bound_side.assign(static_cast<std::size_t>(n_), 0);
    for (int j = 0; j < n_; ++j) {
      result.reduced_costs[static_cast<std::size_t>(j)] = d_[static_cast<std::size_t>(j)];
      result.bound_side[static_cast<std::size_t>(j)] =
          status_[static_cast<std::size_t>(j)] == kBasic
              ? 0
              : (status_[static_cast<std::size_t>(j)] == kAtLower ? -1 : 1);
    }
    return result;
  }

  // Value of every column under the current basis and statuses. Nonbasic
  // columns are read off their bound, so no drift accumulates there.
  std::vector<double> current_values() const {
    std::vector<double> v(static_cast<std::size_t>(total_), 0.0);
    for (int j = 0; j < total_; ++j) {
      if (status_[static_cast<std::size_t>(j)] != kBasic) {
        v[static_cast<std::size_t>(j)] = nonbasic_value(j);
      }
    }
    for (int i = 0; i < m_; ++i) {
      v[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] =
          xb_[static_cast<std::size_t>(i)];
    }
    return v;
  }

  int n_ = 0;
  int m_ = 0;
  int total_ = 0;
  int first_art_ = 0;
  int num_art_ = 0;
  std::vector<double> tab_;
  std::vector<double> lb_, ub_;
  std::vector<double> obj_;
  std::vector<double> d_;
  std::vector<double> xb_;
  std::vector<int> basis_;
  std::vector<signed char> status_;
  std::vector<signed char> art_sign_;
  std::vector<double> art_cost_;
};

}  // namespace essp::milp

#endif  // ESSP_MILP_SIMPLEX_HPP_
