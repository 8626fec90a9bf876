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

#ifndef ESSP_METHODS_BASELINES_HPP_
#define ESSP_METHODS_BASELINES_HPP_

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "essp/methods/common.hpp"
#include "essp/methods/opt.hpp"

namespace essp::methods {

namespace detail {

// Assignment-only model: every evacuee picks one shelter for their whole
// stay, minimizing the alpha-weighted evacuation distance. Capacity binds at
// step 1, when everyone is present at once.
struct NoMoveBuild {
  milp::MilpModel model;
  std::vector<int> shelters;
  std::map<int, std::vector<int>> x_var;  // evacuee -> per-shelter index
};

inline NoMoveBuild build_nomove(const Instance& inst, const WardInstance& ward,
                                const CostParams& params) {
  InstanceIndex index(inst);
  std::vector<const Location*> shelters = shelters_of(ward);
  std::vector<const Evacuee*> evacuees = evacuees_by_id(ward);

  long capacity = 0;
  for (const Location* m : shelters) capacity += m->capacity;
  if (capacity < static_cast<long>(evacuees.size())) {
    throw std::runtime_error("ward " + std::to_string(ward.id) +
                             ": capacity " + std::to_string(capacity) +
                             " cannot host " +
                             std::to_string(evacuees.size()) +
                             " evacuees at t=1");
  }

  NoMoveBuild build;
  for (const Location* m : shelters) build.shelters.push_back(m->id);
  milp::LinExpr objective;
  for (const Evacuee* ev : evacuees) {
    const Location& origin = index.location(ev->origin);
    std::vector<int>& vars = build.x_var[ev->id];
    for (const Location* m : shelters) {
      int idx = build.model.add_binary("x_1_" + std::to_string(m->id) + "_" +
                                       std::to_string(ev->id));
      vars.push_back(idx);
      double d = movement_cost(0, origin, *m, params);
      if (d != 0.0) objective.add(idx, d);
    }
  }
  build.model.set_objective(objective);
  for (const Evacuee* ev : evacuees) {
    milp::LinExpr assign;
    for (int v : build.x_var.at(ev->id)) assign.add(v, 1.0);
    build.model.add_constraint("c_assign_" + std::to_string(ev->id), assign,
                               milp::Sense::kEq, 1.0);
  }
  for (std::size_t mi = 0; mi < shelters.size(); ++mi) {
    milp::LinExpr cap;
    for (const Evacuee* ev : evacuees) cap.add(build.x_var.at(ev->id)[mi], 1.0);
    build.model.add_constraint(
        "c_cap_" + std::to_string(shelters[mi]->id), cap, milp::Sense::kLessEq,
        static_cast<double>(shelters[mi]->capacity));
  }
  return build;
}

}  // namespace detail

// Stay-put baseline: one assignment minimizing evacuation cost; nobody ever
// relocates, and a shelter stays open until its last occupant returns home.
//
// Co-optimal assignments can differ in operation cost; the default keeps the
// deterministic solver's pick. With `lexicographic_nomove` a second solve
// picks, among evacuation-cost optima, an assignment with minimal operation
// cost.
//
// solver_objective_sum for this method equals the evacuation cost (the
// lexicographic pass contributes its operation-cost objective separately in
// ward_info and is excluded from the sum).
inline MethodResult run_nomove(const Instance& inst, const CostParams& params,
                               SolverBackend& backend,
                               const RunOptions& options = {}) {
  detail::require_valid(inst);
  params.check();
  InstanceIndex index(inst);

  MethodResult result;
  result.method = "nomove";
  for (const WardInstance& ward : inst.wards) {
    detail::NoMoveBuild build = detail::build_nomove(inst, ward, params);
    milp::MilpSolution sol =
        backend.solve(build.model, options.limits,
                      detail::label(options, ward.id, "nomove"));
    detail::require_values(sol, ward.id, "nomove");
    result.ward_info.push_back(detail::info_of(sol, ward.id, "nomove"));

    std::map<int, int> assignment;
    for (const auto& [n, vars] : build.x_var) {
      for (std::size_t mi = 0; mi < vars.size(); ++mi) {
        if (sol.values[static_cast<std::size_t>(vars[mi])] > 0.5) {
          assignment[n] = build.shelters[mi];
        }
      }
    }

    if (options.lexicographic_nomove) {
      // Among assignments with this evacuation cost, minimize operation
      // cost. Opening variables enter only here; the budget row pins the
      // movement total.
      std::vector<const Location*> shelters = shelters_of(ward);
      milp::MilpModel lex;
      milp::LinExpr lex_obj;
      std::map<std::pair<int, int>, int> y_var;
      for (int t = 0; t < inst.horizon; ++t) {
        for (const Location* m : shelters) {
          int idx = lex.add_binary("y_" + std::to_string(t) + "_" +
                                   std::to_string(m->id));
          y_var[{t, m->id}] = idx;
          lex_obj.add(idx, index.type_of(*m).op_cost);
        }
      }
      std::map<int, std::vector<int>> x_var;
      milp::LinExpr budget;
      for (const auto& [n, vars] : build.x_var) {
        const Location& origin = index.location(index.evacuee(n).origin);
        std::vector<int>& copy = x_var[n];
        for (std::size_t mi = 0; mi < vars.size(); ++mi) {
          int idx = lex.add_binary("x_1_" + std::to_string(build.shelters[mi]) +
                                   "_" + std::to_string(n));
          copy.push_back(idx);
          double d = movement_cost(
              0, origin, index.location(build.shelters[mi]), params);
          if (d != 0.0) budget.add(idx, d);
        }
      }
      lex.set_objective(lex_obj);
      for (const auto& [n, vars] : x_var) {
        milp::LinExpr assign;
        for (int v : vars) assign.add(v, 1.0);
        lex.add_constraint("c_assign_" + std::to_string(n), assign,
                           milp::Sense::kEq, 1.0);
      }
      for (int t = 1; t < inst.horizon; ++t) {
        for (std::size_t mi = 0; mi < shelters.size(); ++mi) {
          milp::LinExpr cap;
          for (const auto& [n, vars] : x_var) {
            if (index.evacuee(n).return_time >= t) cap.add(vars[mi], 1.0);
          }
          if (cap.empty()) continue;
          cap.add(y_var.at({t, shelters[mi]->id}),
                  -static_cast<double>(shelters[mi]->capacity));
          lex.add_constraint("c_cap_" + std::to_string(t) + "_" +
                                 std::to_string(shelters[mi]->id),
                             cap, milp::Sense::kLessEq, 0.0);
        }
      }
      detail::add_monotone_rows(&lex, y_var, shelters, inst.horizon);
      double budget_rhs =
          sol.objective + 1e-9 * std::max(1.0, std::fabs(sol.objective));
      lex.add_constraint("c_budget", budget, milp::Sense::kLessEq, budget_rhs);

      milp::MilpSolution lex_sol =
          backend.solve(lex, options.limits,
                        detail::label(options, ward.id, "nomove_lex"));
      detail::require_values(lex_sol, ward.id, "nomove_lex");
      WardSolveInfo info = detail::info_of(lex_sol, ward.id, "nomove_lex");
      info.objective = 0.0;  // keep solver_objective_sum = evacuation cost
      result.ward_info.push_back(info);
      assignment.clear();
      for (const auto& [n, vars] : x_var) {
        for (std::size_t mi = 0; mi < vars.size(); ++mi) {
          if (lex_sol.values[static_cast<std::size_t>(vars[mi])] > 0.5) {
            assignment[n] = build.shelters[mi];
          }
        }
      }
    }

    for (const auto& [n, m] : assignment) {
      const Evacuee& ev = index.evacuee(n);
      auto& path = result.schedule.positions[n];
      path.assign(static_cast<std::size_t>(ev.return_time), m);
      auto it = result.schedule.open_until.find(m);
      int last = it == result.schedule.open_until.end() ? -1 : it->second;
      result.schedule.open_until[m] = std::max(last, ev.return_time);
    }
  }
  detail::finalize(&result, inst, params);
  return result;
}

// Two-phase baseline. Phase 1 ignores distances entirely: pick the cheapest
// monotone open pattern whose capacity covers the headcount at every step.
// Phase 2 routes evacuees through that fixed pattern minimizing movement.
//
// solver_objective_sum = phase-1 objective (operation cost) + phase-2
// objective (movement cost) = the evaluated total objective.
inline MethodResult run_binpack(const Instance& inst, const CostParams& params,
                                SolverBackend& backend,
                                const RunOptions& options = {}) {
  detail::require_valid(inst);
  params.check();
  InstanceIndex index(inst);

  MethodResult result;
  result.method = "binpack";
  for (const WardInstance& ward : inst.wards) {
    std::vector<const Location*> shelters = shelters_of(ward);

    milp::MilpModel phase1;
    milp::LinExpr p1_obj;
    std::map<std::pair<int, int>, int> y_var;
    for (int t = 0; t < inst.horizon; ++t) {
      for (const Location* m : shelters) {
        int idx = phase1.add_binary("y_" + std::to_string(t) + "_" +
                                    std::to_string(m->id));
        y_var[{t, m->id}] = idx;
        p1_obj.add(idx, index.type_of(*m).op_cost);
      }
    }
    phase1.set_objective(p1_obj);
    for (int t = 1; t < inst.horizon; ++t) {
      int count = present_count(ward, t);
      if (count == 0) continue;
      milp::LinExpr cover;
      for (const Location* m : shelters) {
        cover.add(y_var.at({t, m->id}), static_cast<double>(m->capacity));
      }
      phase1.add_constraint("c_cover_" + std::to_string(t), cover,
                            milp::Sense::kGreaterEq,
                            static_cast<double>(count));
    }
    detail::add_monotone_rows(&phase1, y_var, shelters, inst.horizon);

    milp::MilpSolution p1_sol =
        backend.solve(phase1, options.limits,
                      detail::label(options, ward.id, "binpack_y"));
    detail::require_values(p1_sol, ward.id, "binpack_y");
    result.ward_info.push_back(detail::info_of(p1_sol, ward.id, "binpack_y"));

    std::map<std::pair<int, int>, bool> fixed_y;
    for (const auto& [key, idx] : y_var) {
      fixed_y[key] = p1_sol.values[static_cast<std::size_t>(idx)] > 0.5;
    }

    OptBuildOptions phase2_opts;
    phase2_opts.operation_in_objective = false;
    phase2_opts.fixed_y = &fixed_y;
    std::string lbl = detail::label(options, ward.id, "binpack_x");
    milp::MilpSolution p2_sol;
    Schedule ward_sched;
    if (options.aggregated) {
      AggregatedOptBuild build =
          build_opt_aggregated(inst, ward, params, phase2_opts);
      detail::check_builtin_size(backend, build.model, options);
      p2_sol = backend.solve(build.model, options.limits, lbl);
      detail::require_values(p2_sol, ward.id, "binpack_x");
      ward_sched = build.decode(p2_sol.values, ward);
    } else {
      OptBuild build = build_opt(inst, ward, params, phase2_opts);
      detail::check_builtin_size(backend, build.model, options);
      p2_sol = backend.solve(build.model, options.limits, lbl);
      detail::require_values(p2_sol, ward.id, "binpack_x");
      ward_sched = build.decode(p2_sol.values, ward);
    }
    result.ward_info.push_back(detail::info_of(p2_sol, ward.id, "binpack_x"));
    detail::merge_ward_schedule(&result.schedule, ward_sched);
  }
  detail::finalize(&result, inst, params);
  return result;
}

}  // namespace essp::methods

#endif  // ESSP_METHODS_BASELINES_HPP_
