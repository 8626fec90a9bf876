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

#ifndef ESSP_METHODS_OPT_HPP_
#define ESSP_METHODS_OPT_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "essp/methods/common.hpp"

namespace essp::methods {

// Builder switches shared by the full-horizon formulations. `fixed_y` pins
// the open pattern decided by an earlier phase; `operation_in_objective`
// drops the f-terms so the model minimizes movement alone (used with a fixed
// pattern, where operation cost is a constant anyway).
struct OptBuildOptions {
  bool operation_in_objective = true;
  const std::map<std::pair<int, int>, bool>* fixed_y = nullptr;
};

namespace detail {

inline std::vector<const Evacuee*> evacuees_by_id(const WardInstance& ward) {
  std::vector<const Evacuee*> out;
  for (const Evacuee& ev : ward.evacuees) out.push_back(&ev);
  std::sort(out.begin(), out.end(),
            [](const Evacuee* a, const Evacuee* b) { return a->id < b->id; });
  return out;
}

// Creates y_<t>_<m> for t in 0..T-1 with monotone non-increasing rows, the
// shared opening structure of every full-horizon model here. Returns the
// variable index per (t, shelter id).
inline std::map<std::pair<int, int>, int> add_open_variables(
    milp::MilpModel* model, milp::LinExpr* objective,
    const InstanceIndex& index, const std::vector<const Location*>& shelters,
    int horizon, const OptBuildOptions& opts) {
  std::map<std::pair<int, int>, int> y;
  for (int t = 0; t < horizon; ++t) {
    for (const Location* m : shelters) {
      int idx = model->add_binary("y_" + std::to_string(t) + "_" +
                                  std::to_string(m->id));
      y[{t, m->id}] = idx;
      if (opts.operation_in_objective) {
        objective->add(idx, index.type_of(*m).op_cost);
      }
      if (opts.fixed_y) {
        auto it = opts.fixed_y->find({t, m->id});
        if (it == opts.fixed_y->end()) {
          throw std::invalid_argument("fixed_y misses (t=" + std::to_string(t) +
                                      ", m=" + std::to_string(m->id) + ")");
        }
        model->fix_variable(idx, it->second ? 1.0 : 0.0);
      }
    }
  }
  return y;
}

inline void add_monotone_rows(milp::MilpModel* model,
                              const std::map<std::pair<int, int>, int>& y,
                              const std::vector<const Location*>& shelters,
                              int horizon) {
  for (int t = 0; t + 1 < horizon; ++t) {
    for (const Location* m : shelters) {
      milp::LinExpr e;
      e.add(y.at({t + 1, m->id}), 1.0);
      e.add(y.at({t, m->id}), -1.0);
      model->add_constraint("c_mono_" + std::to_string(t) + "_" +
                                std::to_string(m->id),
                            e, milp::Sense::kLessEq, 0.0);
    }
  }
}

}  // namespace detail

// Full-horizon exact model with one assignment binary per (step, shelter,
// evacuee) and movement linearized through z variables: z is wedged between
// x_t + x_{t+1} - 1 and each factor, so at 0/1 points it equals their
// product. z variables exist only for transitions that can happen: origin to
// shelter before step 1, shelter to shelter afterwards.
struct OptBuild {
  milp::MilpModel model;
  std::vector<int> shelters;
  int horizon = 0;
  std::map<std::pair<int, int>, int> y_var;              // (t, m) -> index
  std::map<std::pair<int, int>, std::vector<int>> x_var; // (t, n) -> per-shelter

  Schedule decode(const std::vector<double>& values,
                  const WardInstance& ward) const {
    Schedule sched;
    for (const Evacuee& ev : ward.evacuees) {
      auto& path = sched.positions[ev.id];
      for (int t = 1; t <= ev.return_time; ++t) {
        const std::vector<int>& vars = x_var.at({t, ev.id});
        int chosen = -1;
        for (std::size_t mi = 0; mi < vars.size(); ++mi) {
          if (values[static_cast<std::size_t>(vars[mi])] > 0.5) {
            chosen = shelters[mi];
          }
        }
        if (chosen < 0) {
          throw std::runtime_error("no shelter picked for evacuee " +
                                   std::to_string(ev.id) + " at t=" +
                                   std::to_string(t));
        }
        path.push_back(chosen);
      }
    }
    std::vector<const Location*> shelter_locs = shelters_of(ward);
    sched.open_until = detail::decode_open_until(
        shelter_locs, horizon, [&](int t, int m) {
          return values[static_cast<std::size_t>(y_var.at({t, m}))];
        });
    return sched;
  }
};

inline OptBuild build_opt(const Instance& inst, const WardInstance& ward,
                          const CostParams& params,
                          const OptBuildOptions& opts = {}) {
  InstanceIndex index(inst);
  const int horizon = inst.horizon;
  std::vector<const Location*> shelters = shelters_of(ward);
  std::vector<const Evacuee*> evacuees = detail::evacuees_by_id(ward);

  OptBuild build;
  build.horizon = horizon;
  for (const Location* m : shelters) build.shelters.push_back(m->id);

  milp::MilpModel& model = build.model;
  milp::LinExpr objective;

  build.y_var = detail::add_open_variables(&model, &objective, index, shelters,
                                           horizon, opts);

  for (const Evacuee* ev : evacuees) {
    for (int t = 1; t <= ev->return_time; ++t) {
      std::vector<int>& vars = build.x_var[{t, ev->id}];
      for (const Location* m : shelters) {
        vars.push_back(model.add_binary("x_" + std::to_string(t) + "_" +
                                        std::to_string(m->id) + "_" +
                                        std::to_string(ev->id)));
      }
    }
  }

  // Movement products. At t = 0 the origin factor is the constant 1, so the
  // product collapses to z = x_1; the upper link against the constant is the
  // binary bound itself and is not emitted as a row.
  struct ZLink {
    int z = -1;
    int x_from = -1;  // -1 when the from-factor is the fixed origin
    int x_to = -1;
    std::string suffix;
  };
  std::vector<ZLink> links;
  for (const Evacuee* ev : evacuees) {
    const Location& origin = index.location(ev->origin);
    for (std::size_t mi = 0; mi < shelters.size(); ++mi) {
      const Location* mp = shelters[mi];
      std::string suffix = "0_" + std::to_string(origin.id) + "_" +
                           std::to_string(mp->id) + "_" +
                           std::to_string(ev->id);
      int z = model.add_binary("z_" + suffix);
      double d = movement_cost(0, origin, *mp, params);
      if (d != 0.0) objective.add(z, d);
      links.push_back({z, -1, build.x_var.at({1, ev->id})[mi], suffix});
    }
    for (int t = 1; t < ev->return_time; ++t) {
      for (std::size_t mi = 0; mi < shelters.size(); ++mi) {
        for (std::size_t mj = 0; mj < shelters.size(); ++mj) {
          const Location* m = shelters[mi];
          const Location* mp = shelters[mj];
          std::string suffix = std::to_string(t) + "_" +
                               std::to_string(m->id) + "_" +
                               std::to_string(mp->id) + "_" +
                               std::to_string(ev->id);
          int z = model.add_binary("z_" + suffix);
          double d = movement_cost(t, *m, *mp, params);
          if (d != 0.0) objective.add(z, d);
          links.push_back({z, build.x_var.at({t, ev->id})[mi],
                           build.x_var.at({t + 1, ev->id})[mj], suffix});
        }
      }
    }
  }
  model.set_objective(objective);

  for (const Evacuee* ev : evacuees) {
    for (int t = 1; t <= ev->return_time; ++t) {
      milp::LinExpr assign;
      for (int v : build.x_var.at({t, ev->id})) assign.add(v, 1.0);
      model.add_constraint("c_assign_" + std::to_string(t) + "_" +
                               std::to_string(ev->id),
                           assign, milp::Sense::kEq, 1.0);
    }
  }
  for (int t = 1; t < horizon; ++t) {
    for (std::size_t mi = 0; mi < shelters.size(); ++mi) {
      milp::LinExpr cap;
      for (const Evacuee* ev : evacuees) {
        if (ev->return_time >= t) cap.add(build.x_var.at({t, ev->id})[mi], 1.0);
      }
      cap.add(build.y_var.at({t, shelters[mi]->id}),
              -static_cast<double>(shelters[mi]->capacity));
      model.add_constraint("c_cap_" + std::to_string(t) + "_" +
                               std::to_string(shelters[mi]->id),
                           cap, milp::Sense::kLessEq, 0.0);
    }
  }
  detail::add_monotone_rows(&model, build.y_var, shelters, horizon);

  for (const ZLink& link : links) {
    if (link.x_from < 0) {
      milp::LinExpr lo;
      lo.add(link.z, 1.0).add(link.x_to, -1.0);
      model.add_constraint("c_zlo_" + link.suffix, lo, milp::Sense::kGreaterEq,
                           0.0);
      milp::LinExpr hi;
      hi.add(link.z, 1.0).add(link.x_to, -1.0);
      model.add_constraint("c_zhi_" + link.suffix, hi, milp::Sense::kLessEq,
                           0.0);
    } else {
      milp::LinExpr both;
      both.add(link.z, 1.0).add(link.x_from, -1.0).add(link.x_to, -1.0);
      model.add_constraint("c_zl1_" + link.suffix, both,
                           milp::Sense::kGreaterEq, -1.0);
      milp::LinExpr from;
      from.add(link.z, 1.0).add(link.x_from, -1.0);
      model.add_constraint("c_zl2_" + link.suffix, from, milp::Sense::kLessEq,
                           0.0);
      milp::LinExpr to;
      to.add(link.z, 1.0).add(link.x_to, -1.0);
      model.add_constraint("c_zl3_" + link.suffix, to, milp::Sense::kLessEq,
                           0.0);
    }
  }
  return build;
}

// Exact reformulation that replaces per-evacuee tracking after step 1 with
// integer cohort flows: evacuees sharing a shelter and a return time are
// interchangeable, so only their counts matter. Variables stay per-evacuee at
// step 1 because origins are distinct; w_<t>_<m>_<mp>_<tau> then carries how
// many of the tau-cohort move m -> mp between t and t+1.
struct AggregatedOptBuild {
  milp::MilpModel model;
  std::vector<int> shelters;
  int horizon = 0;
  std::map<std::pair<int, int>, int> y_var;
  std::map<int, std::vector<int>> x1_var;  // evacuee -> per-shelter index
  // (t, m, mp, tau) -> flow variable index
  std::map<std::tuple<int, int, int, int>, int> w_var;
  std::map<int, std::vector<int>> cohorts;  // tau -> evacuee ids, sorted

  Schedule decode(const std::vector<double>& values,
                  const WardInstance& ward) const {
    Schedule sched;
    // Members currently in each (shelter, cohort) cell, in id order; the
    // split of a cell across targets is cost-identical for any member order,
    // so taking them in id order is just the deterministic choice.
    std::map<std::pair<int, int>, std::vector<int>> cell;
    for (const auto& [tau, members] : cohorts) {
      for (int n : members) {
        const std::vector<int>& vars = x1_var.at(n);
        int chosen = -1;
        for (std::size_t mi = 0; mi < vars.size(); ++mi) {
          if (values[static_cast<std::size_t>(vars[mi])] > 0.5) {
            chosen = shelters[mi];
          }
        }
        if (chosen < 0) {
          throw std::runtime_error("no shelter picked for evacuee " +
                                   std::to_string(n) + " at t=1");
        }
        sched.positions[n].push_back(chosen);
        cell[{chosen, tau}].push_back(n);
      }
    }
    for (int t = 1; t + 1 < horizon; ++t) {
      std::map<std::pair<int, int>, std::vector<int>> next;
      for (auto& [key, members] : cell) {
        auto [m, tau] = key;
        if (tau <= t) continue;  // cohort returns home after step t
        std::size_t taken = 0;
        for (int mp : shelters) {
          auto it = w_var.find({t, m, mp, tau});
          if (it == w_var.end()) continue;
          long count = std::lround(values[static_cast<std::size_t>(it->second)]);
          for (long k = 0; k < count; ++k) {
            int n = members[taken++];
            sched.positions[n].push_back(mp);
            next[{mp, tau}].push_back(n);
          }
        }
        if (taken != members.size()) {
          throw std::runtime_error("cohort flow mismatch at t=" +
                                   std::to_string(t));
        }
      }
      cell = std::move(next);
    }
    std::vector<const Location*> shelter_locs = shelters_of(ward);
    sched.open_until = detail::decode_open_until(
        shelter_locs, horizon, [&](int t, int m) {
          return values[static_cast<std::size_t>(y_var.at({t, m}))];
        });
    return sched;
  }
};

inline AggregatedOptBuild build_opt_aggregated(const Instance& inst,
                                               const WardInstance& ward,
                                               const CostParams& params,
                                               const OptBuildOptions& opts = {}) {
  InstanceIndex index(inst);
  const int horizon = inst.horizon;
  std::vector<const Location*> shelters = shelters_of(ward);
  std::vector<const Evacuee*> evacuees = detail::evacuees_by_id(ward);

  AggregatedOptBuild build;
  build.horizon = horizon;
  for (const Location* m : shelters) build.shelters.push_back(m->id);
  for (const Evacuee* ev : evacuees) {
    build.cohorts[ev->return_time].push_back(ev->id);
  }

  milp::MilpModel& model = build.model;
  milp::LinExpr objective;
  build.y_var = detail::add_open_variables(&model, &objective, index, shelters,
                                           horizon, opts);

  for (const Evacuee* ev : evacuees) {
    const Location& origin = index.location(ev->origin);
    std::vector<int>& vars = build.x1_var[ev->id];
    for (const Location* m : shelters) {
      int idx = model.add_binary("x_1_" + std::to_string(m->id) + "_" +
                                 std::to_string(ev->id));
      vars.push_back(idx);
      double d = movement_cost(0, origin, *m, params);
      if (d != 0.0) objective.add(idx, d);
    }
  }

  for (int t = 1; t + 1 < horizon; ++t) {
    for (const Location* m : shelters) {
      for (const Location* mp : shelters) {
        double d = movement_cost(t, *m, *mp, params);
        for (const auto& [tau, members] : build.cohorts) {
          if (tau <= t) continue;
          int idx = model.add_integer(
              "w_" + std::to_string(t) + "_" + std::to_string(m->id) + "_" +
                  std::to_string(mp->id) + "_" + std::to_string(tau),
              0.0, static_cast<double>(members.size()));
          build.w_var[{t, m->id, mp->id, tau}] = idx;
          if (d != 0.0) objective.add(idx, d);
        }
      }
    }
  }
  model.set_objective(objective);

  for (const Evacuee* ev : evacuees) {
    milp::LinExpr assign;
    for (int v : build.x1_var.at(ev->id)) assign.add(v, 1.0);
    model.add_constraint("c_assign_" + std::to_string(ev->id), assign,
                         milp::Sense::kEq, 1.0);
  }

  // Occupancy of (t, m, tau) as an expression over earlier variables.
  auto occupancy = [&](int t, int m, int tau) {
    milp::LinExpr occ;
    if (t == 1) {
      for (int n : build.cohorts.at(tau)) {
        std::size_t mi = 0;
        for (; mi < shelters.size(); ++mi) {
          if (shelters[mi]->id == m) break;
        }
        occ.add(build.x1_var.at(n)[mi], 1.0);
      }
    } else {
      for (const Location* mpp : shelters) {
        occ.add(build.w_var.at({t - 1, mpp->id, m, tau}), 1.0);
      }
    }
    return occ;
  };

  for (int t = 1; t + 1 < horizon; ++t) {
    for (const Location* m : shelters) {
      for (const auto& [tau, members] : build.cohorts) {
        if (tau <= t) continue;
        milp::LinExpr flow;
        for (const Location* mp : shelters) {
          flow.add(build.w_var.at({t, m->id, mp->id, tau}), 1.0);
        }
        milp::LinExpr occ = occupancy(t, m->id, tau);
        for (const milp::LinTerm& term : occ.terms()) {
          flow.add(term.var, -term.coeff);
        }
        model.add_constraint("c_flow_" + std::to_string(t) + "_" +
                                 std::to_string(m->id) + "_" +
                                 std::to_string(tau),
                             flow, milp::Sense::kEq, 0.0);
      }
    }
  }

  for (int t = 1; t < horizon; ++t) {
    for (const Location* m : shelters) {
      milp::LinExpr cap;
      for (const auto& [tau, members] : build.cohorts) {
        if (tau < t) continue;
        milp::LinExpr occ = occupancy(t, m->id, tau);
        for (const milp::LinTerm& term : occ.terms()) {
          cap.add(term.var, term.coeff);
        }
      }
      cap.add(build.y_var.at({t, m->id}),
              -static_cast<double>(m->capacity));
      model.add_constraint("c_cap_" + std::to_string(t) + "_" +
                               std::to_string(m->id),
                           cap, milp::Sense::kLessEq, 0.0);
    }
  }
  detail::add_monotone_rows(&model, build.y_var, shelters, horizon);
  return build;
}

// Exact full-horizon optimization per ward. With the builtin backend the
// model size is capped (see RunOptions); larger instances go through the
// external file-exchange path.
inline MethodResult run_opt(const Instance& inst, const CostParams& params,
                            SolverBackend& backend,
                            const RunOptions& options = {}) {
  detail::require_valid(inst);
  params.check();

  MethodResult result;
  result.method = "opt";
  for (const WardInstance& ward : inst.wards) {
    std::string lbl = detail::label(options, ward.id, "opt");
    milp::MilpSolution sol;
    Schedule ward_sched;
    if (options.aggregated) {
      AggregatedOptBuild build = build_opt_aggregated(inst, ward, params);
      detail::check_builtin_size(backend, build.model, options);
      sol = backend.solve(build.model, options.limits, lbl);
      detail::require_values(sol, ward.id, "opt");
      ward_sched = build.decode(sol.values, ward);
    } else {
      OptBuild build = build_opt(inst, ward, params);
      detail::check_builtin_size(backend, build.model, options);
      sol = backend.solve(build.model, options.limits, lbl);
      detail::require_values(sol, ward.id, "opt");
      ward_sched = build.decode(sol.values, ward);
    }
    result.ward_info.push_back(detail::info_of(sol, ward.id, "opt"));
    detail::merge_ward_schedule(&result.schedule, ward_sched);
  }
  detail::finalize(&result, inst, params);
  return result;
}

}  // namespace essp::methods

#endif  // ESSP_METHODS_OPT_HPP_
