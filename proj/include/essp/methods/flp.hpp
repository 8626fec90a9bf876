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

#ifndef ESSP_METHODS_FLP_HPP_
#define ESSP_METHODS_FLP_HPP_

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "essp/methods/common.hpp"

namespace essp::methods {

// State of one sequential-allocation round in one ward: who still needs a
// shelter at step t+1, where they are at step t, and which shelters remain
// available. Only evacuees with return_time > t appear.
struct FlpSnapshot {
  int time = 0;
  std::vector<int> evacuees;
  std::map<int, int> current_location;
  std::vector<int> shelters;
};

// Round-0 snapshot: everyone at their origin, all of the ward's shelters.
inline FlpSnapshot make_snapshot(const WardInstance& ward, int t = 0) {
  FlpSnapshot snap;
  snap.time = t;
  for (const Evacuee& ev : ward.evacuees) {
    if (ev.return_time > t) {
      snap.evacuees.push_back(ev.id);
      snap.current_location[ev.id] = ev.origin;
    }
  }
  for (const Location* m : shelters_of(ward)) snap.shelters.push_back(m->id);
  return snap;
}

// A single-round facility location model plus the mapping needed to read the
// solution back. Variables: x_<m>_<n> assignment binaries, y_<m> open
// binaries; objective movement-into-round cost plus one step of operation.
struct FlpBuild {
  milp::MilpModel model;
  int time = 0;
  std::vector<int> evacuees;
  std::vector<int> shelters;
  std::vector<std::vector<int>> x;  // [shelter][evacuee] variable index
  std::vector<int> y;               // [shelter] variable index

  struct Decoded {
    std::map<int, int> assignment;  // evacuee -> shelter
    std::set<int> open;
  };

  Decoded decode(const std::vector<double>& values) const {
    Decoded out;
    for (std::size_t mi = 0; mi < shelters.size(); ++mi) {
      if (values[static_cast<std::size_t>(y[mi])] > 0.5) {
        out.open.insert(shelters[mi]);
      }
      for (std::size_t ni = 0; ni < evacuees.size(); ++ni) {
        if (values[static_cast<std::size_t>(x[mi][ni])] > 0.5) {
          out.assignment[evacuees[ni]] = shelters[mi];
        }
      }
    }
    return out;
  }
};

namespace detail {

inline void check_snapshot_capacity(const InstanceIndex& index,
                                    const FlpSnapshot& snap) {
  long capacity = 0;
  for (int m : snap.shelters) capacity += index.location(m).capacity;
  if (capacity < static_cast<long>(snap.evacuees.size())) {
    throw std::runtime_error(
        "round t=" + std::to_string(snap.time) + " infeasible: capacity " +
        std::to_string(capacity) + " for " +
        std::to_string(snap.evacuees.size()) + " evacuees");
  }
}

}  // namespace detail

// One-round facility location problem: assign every active evacuee to an
// open shelter, paying the move from their current location plus f_m per
// opened shelter. A round with more evacuees than remaining capacity is
// rejected before any solving happens.
inline FlpBuild build_flp(const Instance& inst, const FlpSnapshot& snap,
                          const CostParams& params) {
  InstanceIndex index(inst);
  detail::check_snapshot_capacity(index, snap);

  FlpBuild build;
  build.time = snap.time;
  build.evacuees = snap.evacuees;
  build.shelters = snap.shelters;

  const std::size_t num_m = snap.shelters.size();
  const std::size_t num_n = snap.evacuees.size();
  build.y.resize(num_m);
  build.x.assign(num_m, std::vector<int>(num_n, -1));

  milp::LinExpr objective;
  for (std::size_t mi = 0; mi < num_m; ++mi) {
    int m = snap.shelters[mi];
    build.y[mi] = build.model.add_binary("y_" + std::to_string(m));
    objective.add(build.y[mi], index.type_of(index.location(m)).op_cost);
  }
  for (std::size_t mi = 0; mi < num_m; ++mi) {
    const Location& to = index.location(snap.shelters[mi]);
    for (std::size_t ni = 0; ni < num_n; ++ni) {
      int n = snap.evacuees[ni];
      build.x[mi][ni] = build.model.add_binary(
          "x_" + std::to_string(snap.shelters[mi]) + "_" + std::to_string(n));
      const Location& from = index.location(snap.current_location.at(n));
      double d = movement_cost(snap.time, from, to, params);
      if (d != 0.0) objective.add(build.x[mi][ni], d);
    }
  }
  build.model.set_objective(objective);

  for (std::size_t ni = 0; ni < num_n; ++ni) {
    milp::LinExpr assign;
    for (std::size_t mi = 0; mi < num_m; ++mi) assign.add(build.x[mi][ni], 1.0);
    build.model.add_constraint(
        "c_assign_" + std::to_string(snap.evacuees[ni]), assign,
        milp::Sense::kEq, 1.0);
  }
  for (std::size_t mi = 0; mi < num_m; ++mi) {
    const Location& m = index.location(snap.shelters[mi]);
    milp::LinExpr cap;
    for (std::size_t ni = 0; ni < num_n; ++ni) cap.add(build.x[mi][ni], 1.0);
    cap.add(build.y[mi], -static_cast<double>(m.capacity));
    build.model.add_constraint("c_cap_" + std::to_string(m.id), cap,
                               milp::Sense::kLessEq, 0.0);
  }
  return build;
}

namespace detail {

// The same round grouped by current location: evacuees standing at the same
// spot are interchangeable, so integer flows location->shelter replace
// per-evacuee binaries. Exact for this round (the regrouped problem is an
// integer transportation problem once y is fixed), and much smaller from
// round 1 on, where many evacuees share a shelter.
struct GroupedFlpBuild {
  milp::MilpModel model;
  std::vector<int> shelters;
  std::vector<int> group_location;             // [group] location id
  std::vector<std::vector<int>> group_members; // [group] evacuee ids, sorted
  std::vector<std::vector<int>> flow;          // [group][shelter] var index
  std::vector<int> y;

  FlpBuild::Decoded decode(const std::vector<double>& values) const {
    FlpBuild::Decoded out;
    for (std::size_t mi = 0; mi < shelters.size(); ++mi) {
      if (values[static_cast<std::size_t>(y[mi])] > 0.5) {
        out.open.insert(shelters[mi]);
      }
    }
    for (std::size_t g = 0; g < group_members.size(); ++g) {
      std::size_t next = 0;
      for (std::size_t mi = 0; mi < shelters.size(); ++mi) {
        long count = std::lround(values[static_cast<std::size_t>(flow[g][mi])]);
        for (long k = 0; k < count; ++k) {
          out.assignment[group_members[g][next++]] = shelters[mi];
        }
      }
    }
    return out;
  }
};

inline GroupedFlpBuild build_flp_grouped(const Instance& inst,
                                         const FlpSnapshot& snap,
                                         const CostParams& params) {
  InstanceIndex index(inst);
  check_snapshot_capacity(index, snap);

  GroupedFlpBuild build;
  build.shelters = snap.shelters;

  std::map<int, std::vector<int>> groups;
  for (int n : snap.evacuees) groups[snap.current_location.at(n)].push_back(n);
  for (auto& [loc, members] : groups) {
    std::sort(members.begin(), members.end());
    build.group_location.push_back(loc);
    build.group_members.push_back(members);
  }

  const std::size_t num_m = snap.shelters.size();
  const std::size_t num_g = build.group_location.size();
  build.y.resize(num_m);
  build.flow.assign(num_g, std::vector<int>(num_m, -1));

  milp::LinExpr objective;
  for (std::size_t mi = 0; mi < num_m; ++mi) {
    int m = snap.shelters[mi];
    build.y[mi] = build.model.add_binary("y_" + std::to_string(m));
    objective.add(build.y[mi], index.type_of(index.location(m)).op_cost);
  }
  for (std::size_t g = 0; g < num_g; ++g) {
    const Location& from = index.location(build.group_location[g]);
    double size = static_cast<double>(build.group_members[g].size());
    for (std::size_t mi = 0; mi < num_m; ++mi) {
      const Location& to = index.location(snap.shelters[mi]);
      build.flow[g][mi] = build.model.add_integer(
          "g_" + std::to_string(from.id) + "_" + std::to_string(to.id), 0.0,
          size);
      double d = movement_cost(snap.time, from, to, params);
      if (d != 0.0) objective.add(build.flow[g][mi], d);
    }
  }
  build.model.set_objective(objective);

  for (std::size_t g = 0; g < num_g; ++g) {
    milp::LinExpr supply;
    for (std::size_t mi = 0; mi < num_m; ++mi) supply.add(build.flow[g][mi], 1.0);
    build.model.add_constraint(
        "c_supply_" + std::to_string(build.group_location[g]), supply,
        milp::Sense::kEq, static_cast<double>(build.group_members[g].size()));
  }
  for (std::size_t mi = 0; mi < num_m; ++mi) {
    const Location& m = index.location(snap.shelters[mi]);
    milp::LinExpr cap;
    for (std::size_t g = 0; g < num_g; ++g) cap.add(build.flow[g][mi], 1.0);
    cap.add(build.y[mi], -static_cast<double>(m.capacity));
    build.model.add_constraint("c_cap_" + std::to_string(m.id), cap,
                               milp::Sense::kLessEq, 0.0);
  }
  return build;
}

}  // namespace detail

// Sequential allocation: per ward, one facility location round per step.
// Round t moves everyone still sheltered at t+1 into open shelters, paying
// one operation step per open shelter; shelters left out of round t's
// solution are gone for good, which is how the no-reopen rule emerges here.
//
// solver_objective_sum for this method equals the evaluated objective minus
// one trailing operation step per opened shelter: a shelter open through its
// last hosting step runs one step longer in the schedule than the myopic
// rounds have charged.
inline MethodResult run_seqflp(const Instance& inst, const CostParams& params,
                               SolverBackend& backend,
                               const RunOptions& options = {}) {
  detail::require_valid(inst);
  params.check();
  InstanceIndex index(inst);

  MethodResult result;
  result.method = "seqflp";
  for (const WardInstance& ward : inst.wards) {
    Schedule ward_schedule;
    FlpSnapshot snap = make_snapshot(ward, 0);
    std::map<int, int> last_round_chosen;  // shelter -> last round picked

    for (int t = 0; t < inst.horizon && !snap.evacuees.empty(); ++t) {
      snap.time = t;
      std::string step = "seqflp_t" + std::to_string(t);
      milp::MilpSolution sol;
      FlpBuild::Decoded decoded;
      if (options.grouped_seqflp) {
        auto build = detail::build_flp_grouped(inst, snap, params);
        sol = backend.solve(build.model, options.limits,
                            detail::label(options, ward.id, step));
        detail::require_values(sol, ward.id, step);
        decoded = build.decode(sol.values);
      } else {
        auto build = build_flp(inst, snap, params);
        sol = backend.solve(build.model, options.limits,
                            detail::label(options, ward.id, step));
        detail::require_values(sol, ward.id, step);
        decoded = build.decode(sol.values);
      }
      result.ward_info.push_back(detail::info_of(sol, ward.id, step));

      for (const auto& [n, m] : decoded.assignment) {
        ward_schedule.positions[n].push_back(m);
      }
      for (int m : decoded.open) last_round_chosen[m] = t;

      // Advance: drop evacuees returning after step t+1, restrict shelters
      // to those opened this round, move everyone to their assignment.
      FlpSnapshot next;
      next.time = t + 1;
      for (int n : snap.evacuees) {
        if (index.evacuee(n).return_time > t + 1) {
          next.evacuees.push_back(n);
          next.current_location[n] = decoded.assignment.at(n);
        }
      }
      next.shelters.assign(decoded.open.begin(), decoded.open.end());
      snap = std::move(next);
    }

    // A shelter picked last in round t hosts through step t+1.
    for (const auto& [m, t] : last_round_chosen) {
      ward_schedule.open_until[m] = t + 1;
    }
    detail::merge_ward_schedule(&result.schedule, ward_schedule);
  }

  detail::finalize(&result, inst, params);
  return result;
}

}  // namespace essp::methods

#endif  // ESSP_METHODS_FLP_HPP_
