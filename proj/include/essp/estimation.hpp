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

#ifndef ESSP_ESTIMATION_HPP_
#define ESSP_ESTIMATION_HPP_

// Movement-cost calibration: grid search over lambda. Each candidate is
// scored by rolling out the myopic per-step procedure on every training
// instance, converting the resulting schedules to per-facility-type occupied
// totals, and comparing those against an observed vector by mean squared
// error. The candidate with the smallest mean error wins; ties go to the
// smallest lambda.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "essp/costs.hpp"
#include "essp/csv.hpp"
#include "essp/json_io.hpp"
#include "essp/methods/baselines.hpp"
#include "essp/methods/common.hpp"
#include "essp/methods/flp.hpp"
#include "essp/model.hpp"

namespace essp {

struct EstimationConfig {
  // When set, estimated occupancy is denominated in days (open steps times
  // step length); otherwise in steps. The observed vector must use the same
  // unit.
  bool apply_step_days = false;
  // When set, the report also carries the mean scaled operation cost of the
  // no-movement and covering baselines at the selected lambda, as context for
  // the rollout curve.
  bool anchors = false;
  methods::RunOptions run;
  // Provenance only: the seeds that produced the training instances, echoed
  // into the report so a curve can be regenerated.
  std::vector<std::uint64_t> seeds;
};

// One grid point. Means are taken over the instances whose rollout
// succeeded; an entry is valid if at least one did. Failed instances keep a
// null slot in per_instance_mse and a message in errors.
struct LambdaEntry {
  double lambda = 0.0;
  bool valid = false;
  double mean_mse = 0.0;
  double mean_op_cost_musd = 0.0;
  std::vector<std::optional<double>> per_instance_mse;
  std::vector<std::string> errors;
};

struct EstimationReport {
  std::vector<LambdaEntry> curve;
  double selected_lambda = 0.0;
  double selected_mse = 0.0;
  bool apply_step_days = false;
  int instance_count = 0;
  std::vector<std::uint64_t> seeds;
  std::optional<double> nomove_op_cost_musd;
  std::optional<double> binpack_op_cost_musd;
  std::vector<std::string> anchor_errors;
};

namespace detail {

// Mean scaled operation cost of one method over the training set, in
// millions. Any failure is recorded and leaves the anchor unset.
template <typename RunFn>
std::optional<double> operation_anchor(const char* name,
                                       const std::vector<Instance>& train,
                                       double lambda, RunFn run,
                                       std::vector<std::string>& errors) {
  double acc = 0.0;
  for (std::size_t i = 0; i < train.size(); ++i) {
    try {
      methods::MethodResult result = run(train[i], lambda);
      acc += scaled_operation_cost(result.schedule, train[i]) / 1e6;
    } catch (const std::exception& e) {
      errors.push_back(std::string(name) + " on instance " + std::to_string(i) +
                       ": " + e.what());
      return std::nullopt;
    }
  }
  return acc / static_cast<double>(train.size());
}

}  // namespace detail

// Grid search for the movement-cost scale. For every candidate the myopic
// rollout runs on every training instance; the per-instance squared errors
// are averaged (errors first, never the occupancy vectors) and the candidate
// with the smallest mean wins. A rollout failure excludes only that instance
// from the candidate's mean; a candidate is dropped from the argmin only when
// every instance failed.
inline EstimationReport estimate_lambda(const std::vector<Instance>& train,
                                        const std::vector<double>& observed_U,
                                        const std::vector<double>& grid,
                                        const EstimationConfig& config,
                                        SolverBackend& backend) {
  if (grid.empty()) throw std::invalid_argument("estimate_lambda: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) {
      throw std::invalid_argument("estimate_lambda: grid values must be positive");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("estimate_lambda: grid must be strictly increasing");
    }
  }
  if (train.empty()) throw std::invalid_argument("estimate_lambda: no training instances");
  for (std::size_t i = 0; i < train.size(); ++i) {
    std::vector<Violation> violations = validate_instance(train[i]);
    if (!violations.empty()) {
      throw std::invalid_argument("estimate_lambda: training instance " +
                                  std::to_string(i) + " invalid: " +
                                  detail::describe(violations));
    }
    if (observed_U.size() != train[i].facility_types.size()) {
      throw std::invalid_argument(
          "estimate_lambda: observed vector has " +
          std::to_string(observed_U.size()) + " entries but instance " +
          std::to_string(i) + " has " +
          std::to_string(train[i].facility_types.size()) + " facility types");
    }
  }

  EstimationReport report;
  report.apply_step_days = config.apply_step_days;
  report.instance_count = static_cast<int>(train.size());
  report.seeds = config.seeds;

  for (double lambda : grid) {
    LambdaEntry entry;
    entry.lambda = lambda;
    double mse_acc = 0.0;
    double op_acc = 0.0;
    int successes = 0;
    for (std::size_t i = 0; i < train.size(); ++i) {
      try {
        methods::MethodResult rollout = methods::run_seqflp(train[i], cost_params(train[i], lambda),
                                          backend, config.run);
        std::vector<double> estimated =
            occupancy_estimate(rollout.schedule, train[i], config.apply_step_days);
        double err = mse(estimated, observed_U);
        entry.per_instance_mse.push_back(err);
        mse_acc += err;
        op_acc += scaled_operation_cost(rollout.schedule, train[i]) / 1e6;
        ++successes;
      } catch (const std::exception& e) {
        entry.per_instance_mse.push_back(std::nullopt);
        entry.errors.push_back("instance " + std::to_string(i) + ": " + e.what());
      }
    }
    entry.valid = successes > 0;
    if (entry.valid) {
      entry.mean_mse = mse_acc / successes;
      entry.mean_op_cost_musd = op_acc / successes;
    }
    report.curve.push_back(std::move(entry));
  }

  const LambdaEntry* best = nullptr;
  for (const LambdaEntry& entry : report.curve) {
    if (!entry.valid) continue;
    if (best == nullptr || entry.mean_mse < best->mean_mse) best = &entry;
  }
  if (best == nullptr) {
    throw std::runtime_error(
        "estimate_lambda: every grid point failed on every training instance");
  }
  report.selected_lambda = best->lambda;
  report.selected_mse = best->mean_mse;

  if (config.anchors) {
    report.nomove_op_cost_musd = detail::operation_anchor(
        "nomove", train, report.selected_lambda,
        [&](const Instance& inst, double lambda) {
          return methods::run_nomove(inst, cost_params(inst, lambda), backend, config.run);
        },
        report.anchor_errors);
    report.binpack_op_cost_musd = detail::operation_anchor(
        "binpack", train, report.selected_lambda,
        [&](const Instance& inst, double lambda) {
          return methods::run_binpack(inst, cost_params(inst, lambda), backend, config.run);
        },
        report.anchor_errors);
  }
  return report;
}

inline Json to_json(const LambdaEntry& entry) {
  Json j;
  j["lambda"] = entry.lambda;
  j["valid"] = entry.valid;
  j["mean_mse"] = entry.valid ? Json(entry.mean_mse) : Json(nullptr);
  j["mean_op_cost_musd"] =
      entry.valid ? Json(entry.mean_op_cost_musd) : Json(nullptr);
  j["per_instance_mse"] = Json::array();
  for (const std::optional<double>& v : entry.per_instance_mse) {
    j["per_instance_mse"].push_back(v ? Json(*v) : Json(nullptr));
  }
  j["errors"] = entry.errors;
  return j;
}

inline Json to_json(const EstimationReport& report) {
  Json j;
  j["selected_lambda"] = report.selected_lambda;
  j["selected_mse"] = report.selected_mse;
  j["apply_step_days"] = report.apply_step_days;
  j["instance_count"] = report.instance_count;
  j["seeds"] = report.seeds;
  j["curve"] = Json::array();
  for (const LambdaEntry& entry : report.curve) j["curve"].push_back(to_json(entry));
  j["nomove_op_cost_musd"] =
      report.nomove_op_cost_musd ? Json(*report.nomove_op_cost_musd) : Json(nullptr);
  j["binpack_op_cost_musd"] =
      report.binpack_op_cost_musd ? Json(*report.binpack_op_cost_musd) : Json(nullptr);
  j["anchor_errors"] = report.anchor_errors;
  return j;
}

// Companion curve for plotting: one row per valid grid point.
inline csv::Table lambda_curve_csv(const EstimationReport& report) {
  csv::Table table({"lambda", "mse", "op_cost_musd"});
  for (const LambdaEntry& entry : report.curve) {
    if (!entry.valid) continue;
    table.row({csv::num(entry.lambda), csv::num(entry.mean_mse),
               csv::num(entry.mean_op_cost_musd)});
  }
  return table;
}

}  // namespace essp

#endif  // ESSP_ESTIMATION_HPP_
