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

#ifndef ESSP_METHODS_COMMON_HPP_
#define ESSP_METHODS_COMMON_HPP_

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "essp/backend.hpp"
#include "essp/costs.hpp"
#include "essp/json_io.hpp"
#include "essp/milp/model.hpp"
#include "essp/model.hpp"

namespace essp::methods {

// Options shared by every method runner. `label_prefix` seeds the labels
// handed to the backend (and thus exported file names); callers typically use
// the instance file stem.
struct RunOptions {
  milp::SolveLimits limits;
  bool aggregated = false;
  bool grouped_seqflp = true;
  bool lexicographic_nomove = false;
  // The builtin solver refuses full-horizon models above this many variables;
  // such instances must go through an external backend.
  int builtin_variable_limit = 5000;
  std::string label_prefix;
};

// Outcome of one MILP solve inside a method (one ward, one phase or step).
struct WardSolveInfo {
  int ward = -1;
  std::string step;
  milp::SolveStatus status = milp::SolveStatus::kInfeasible;
  double objective = 0.0;
  double best_bound = 0.0;
  long nodes = 0;
  double wall_time_s = 0.0;
};

// A method's full output: the assembled city-wide schedule, its evaluated
// costs, and per-solve metadata. `solver_objective_sum` adds up the raw model
// objectives; what that sum means depends on the method (documented at each
// runner) and is checked against the evaluated costs in tests.
struct MethodResult {
  std::string method;
  Schedule schedule;
  CostBreakdown costs;
  std::vector<WardSolveInfo> ward_info;
  double solver_objective_sum = 0.0;
  double wall_time_s = 0.0;

  bool all_optimal() const {
    for (const WardSolveInfo& info : ward_info) {
      if (info.status != milp::SolveStatus::kOptimal) return false;
    }
    return !ward_info.empty();
  }
};

inline Json to_json(const WardSolveInfo& info) {
  Json j;
  j["ward"] = info.ward;
  j["step"] = info.step;
  j["status"] = milp::to_string(info.status);
  j["objective"] = info.objective;
  j["best_bound"] = info.best_bound;
  j["nodes"] = info.nodes;
  j["wall_time_s"] = info.wall_time_s;
  return j;
}

inline Json to_json(const MethodResult& result) {
  Json j;
  j["method"] = result.method;
  j["schedule"] = essp::to_json(result.schedule);
  j["costs"] = essp::to_json(result.costs);
  j["ward_info"] = Json::array();
  for (const WardSolveInfo& info : result.ward_info) {
    j["ward_info"].push_back(to_json(info));
  }
  j["solver_objective_sum"] = result.solver_objective_sum;
  j["wall_time_s"] = result.wall_time_s;
  j["all_optimal"] = result.all_optimal();
  return j;
}

namespace detail {

// Throws unless the instance passes validation; every runner's precondition.
inline void require_valid(const Instance& inst) {
  if (auto violations = validate_instance(inst); !violations.empty()) {
    throw std::invalid_argument("invalid instance: " +
                                essp::detail::describe(violations));
  }
}

// Raises a descriptive error when a sub-solve did not produce usable values.
inline void require_values(const milp::MilpSolution& sol, int ward,
                           const std::string& step) {
  if (sol.has_values()) return;
  throw std::runtime_error(
      "ward " + std::to_string(ward) + ", " + step + ": solver returned " +
      std::string(milp::to_string(sol.status)) +
      (sol.message.empty() ? std::string() : " (" + sol.message + ")"));
}

// Largest t with y_(t,m) set, verifying the no-reopen prefix shape. Values
// come from a solver, so only 0/1 (within integrality snapping) appear.
inline std::map<int, int> decode_open_until(
    const std::vector<const Location*>& shelters, int horizon,
    const std::function<double(int, int)>& y_value) {
  std::map<int, int> open_until;
  for (const Location* m : shelters) {
    int last_open = -1;
    bool seen_closed = false;
    for (int t = 0; t < horizon; ++t) {
      bool open = y_value(t, m->id) > 0.5;
      if (open && seen_closed) {
        throw std::runtime_error("shelter " + std::to_string(m->id) +
                                 " reopens at t=" + std::to_string(t) +
                                 "; open intervals must be prefixes");
      }
      if (open) {
        last_open = t;
      } else {
        seen_closed = true;
      }
    }
    if (last_open >= 0) open_until[m->id] = last_open;
  }
  return open_until;
}

inline void merge_ward_schedule(Schedule* city, const Schedule& ward) {
  for (const auto& [n, path] : ward.positions) city->positions[n] = path;
  for (const auto& [m, t] : ward.open_until) city->open_until[m] = t;
}

// Evaluates the assembled schedule and stamps the shared result fields.
inline void finalize(MethodResult* result, const Instance& inst,
                     const CostParams& params) {
  result->costs = evaluate_schedule(inst, result->schedule, params);
  result->solver_objective_sum = 0.0;
  result->wall_time_s = 0.0;
  for (const WardSolveInfo& info : result->ward_info) {
    result->solver_objective_sum += info.objective;
    result->wall_time_s += info.wall_time_s;
  }
}

inline WardSolveInfo info_of(const milp::MilpSolution& sol, int ward,
                             std::string step) {
  WardSolveInfo info;
  info.ward = ward;
  info.step = std::move(step);
  info.status = sol.status;
  info.objective = sol.objective;
  info.best_bound = sol.best_bound;
  info.nodes = sol.nodes;
  info.wall_time_s = sol.wall_time_s;
  return info;
}

inline std::string label(const RunOptions& options, int ward,
                         const std::string& suffix) {
  std::string out = options.label_prefix;
  if (!out.empty()) out += "_";
  out += "w" + std::to_string(ward) + "_" + suffix;
  return out;
}

// Full-horizon models beyond the builtin solver's working size must use the
// external path; refusing beats silently grinding for hours.
inline void check_builtin_size(const SolverBackend& backend,
                               const milp::MilpModel& model,
                               const RunOptions& options) {
  if (backend.name() == "builtin" &&
      model.num_variables() > options.builtin_variable_limit) {
    throw std::runtime_error(
        "model has " + std::to_string(model.num_variables()) +
        " variables, above the builtin solver limit of " +
        std::to_string(options.builtin_variable_limit) +
        "; use an external solver backend");
  }
}

}  // namespace detail

}  // namespace essp::methods

#endif  // ESSP_METHODS_COMMON_HPP_
