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

#ifndef ESSP_COSTS_HPP_
#define ESSP_COSTS_HPP_

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "essp/model.hpp"

namespace essp {

// Cost parameters of one evaluation: lambda is the movement cost per
// person-kilometre, alpha the extra weight on the initial evacuation move.
struct CostParams {
  double lambda = 1.0;
  double alpha = 1.0;

  void check() const {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
    if (!(alpha >= 1.0)) throw std::invalid_argument("alpha must be >= 1");
  }
};

// Parameters taken from the instance, with lambda optionally overridden (the
// instance may not carry one before estimation).
inline CostParams cost_params(const Instance& inst,
                              std::optional<double> lambda_override = {}) {
  CostParams p;
  if (lambda_override.has_value()) {
    p.lambda = *lambda_override;
  } else if (inst.lambda.has_value()) {
    p.lambda = *inst.lambda;
  } else {
    throw std::invalid_argument(
        "instance carries no lambda and no override was given");
  }
  p.alpha = inst.alpha;
  p.check();
  return p;
}

// Euclidean distance in kilometres. Both endpoints must lie in the same ward;
// cross-ward distances are undefined by construction.
inline double distance(const Location& a, const Location& b) {
  if (a.ward != b.ward) {
    throw std::invalid_argument(
        "distance undefined across wards (" + std::to_string(a.id) + " in " +
        std::to_string(a.ward) + ", " + std::to_string(b.id) + " in " +
        std::to_string(b.ward) + ")");
  }
  double dx = a.coord[0] - b.coord[0];
  double dy = a.coord[1] - b.coord[1];
  return std::sqrt(dx * dx + dy * dy);
}

// Cost of moving one person from `a` to `b` at the transition following step
// t. The t = 0 move is the evacuation itself and is weighted by alpha; later
// moves are relocations at plain lambda per kilometre.
inline double movement_cost(int t, const Location& a, const Location& b,
                            const CostParams& p) {
  double d = distance(a, b);
  return t == 0 ? p.alpha * p.lambda * d : p.lambda * d;
}

// Evaluates one schedule. The schedule must be valid for the instance; the
// first violation found is thrown as invalid_argument.
//
// evacuation_cost: alpha-weighted move origin -> first shelter, per evacuee.
// relocation_cost: moves between consecutive sheltered steps.
// operation_cost: sum over opened shelters of f_m times open steps, where a
//   shelter open until step t has run for t + 1 steps (0 .. t inclusive).
// relocation_count: person-moves with distinct consecutive shelters.
inline CostBreakdown evaluate_schedule(const Instance& inst,
                                       const Schedule& sched,
                                       const CostParams& params) {
  params.check();
  if (auto violations = validate_schedule(inst, sched); !violations.empty()) {
    throw std::invalid_argument("invalid schedule: " +
                                detail::describe(violations));
  }
  InstanceIndex index(inst);

  CostBreakdown out;
  for (const WardInstance& ward : inst.wards) {
    for (const Evacuee& ev : ward.evacuees) {
      const Location& origin = index.location(ev.origin);
      const Location& first = index.location(sched.position(1, ev.id));
      out.evacuation_cost += movement_cost(0, origin, first, params);
      for (int t = 1; t < ev.return_time; ++t) {
        const Location& from = index.location(sched.position(t, ev.id));
        const Location& to = index.location(sched.position(t + 1, ev.id));
        if (from.id != to.id) {
          out.relocation_cost += movement_cost(t, from, to, params);
          ++out.relocation_count;
        }
      }
    }
  }
  for (const auto& [loc_id, last_open] : sched.open_until) {
    out.operation_cost += index.op_cost(loc_id) * (last_open + 1);
  }
  out.objective =
      out.evacuation_cost + out.relocation_cost + out.operation_cost;
  return out;
}

// Estimated occupied days per facility type: shelter-open steps summed per
// type, scaled by the shelter ratio and optionally by the step length in
// days. Entry l corresponds to facility type l; types never opened get 0.
inline std::vector<double> occupancy_estimate(const Schedule& sched,
                                              const Instance& inst,
                                              bool apply_step_days = false) {
  InstanceIndex index(inst);
  std::vector<double> out(inst.facility_types.size(), 0.0);
  for (const auto& [loc_id, last_open] : sched.open_until) {
    const FacilityType& type = index.type_of(index.location(loc_id));
    out[static_cast<std::size_t>(type.id)] += last_open + 1;
  }
  double scale = inst.ratio_shelters * (apply_step_days ? inst.step_days : 1.0);
  for (double& v : out) v *= scale;
  return out;
}

// Mean squared error between estimated and observed per-type totals.
inline double mse(const std::vector<double>& estimated,
                  const std::vector<double>& observed) {
  if (estimated.size() != observed.size()) {
    throw std::invalid_argument("mse: size mismatch (" +
                                std::to_string(estimated.size()) + " vs " +
                                std::to_string(observed.size()) + ")");
  }
  if (estimated.empty()) {
    throw std::invalid_argument("mse: empty vectors");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < estimated.size(); ++i) {
    double d = estimated[i] - observed[i];
    acc += d * d;
  }
  return acc / static_cast<double>(estimated.size());
}

// Operation cost scaled back to real-world magnitude: the schedule's total
// shelter-operation spend times the shelter ratio, in dollars.
inline double scaled_operation_cost(const Schedule& sched,
                                    const Instance& inst) {
  InstanceIndex index(inst);
  double acc = 0.0;
  for (const auto& [loc_id, last_open] : sched.open_until) {
    acc += index.op_cost(loc_id) * (last_open + 1);
  }
  return acc * inst.ratio_shelters;
}

// Movement cost per real person: the reduced instance's movement total spread
// over the real population each reduced evacuee stands for.
inline double per_real_person_cost(double total_movement_cost,
                                   const Instance& inst) {
  return total_movement_cost / inst.ratio_evacuees;
}

}  // namespace essp

#endif  // ESSP_COSTS_HPP_
