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

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "essp/milp/branch_and_bound.hpp"
#include "essp/milp/model.hpp"
#include "oracles.hpp"

using Catch::Approx;
using essp::milp::LinExpr;
using essp::milp::MilpModel;
using essp::milp::MilpSolution;
using essp::milp::Sense;
using essp::milp::SolveLimits;
using essp::milp::SolveStatus;

namespace {

// min -3 x0 - 2 x1  s.t.  2 x0 + 2 x1 <= 3, binaries. The LP relaxation is
// fractional (1, 0.5) so at least one branching step is required; the integer
// optimum is (1, 0) with value -3.
MilpModel small_knapsack() {
  MilpModel model;
  int x0 = model.add_binary("x0");
  int x1 = model.add_binary("x1");
  LinExpr obj;
  obj.add(x0, -3.0).add(x1, -2.0);
  model.set_objective(obj);
  LinExpr cap;
  cap.add(x0, 2.0).add(x1, 2.0);
  model.add_constraint("cap", cap, Sense::kLessEq, 3.0);
  return model;
}

bool satisfies_all(const MilpModel& model, const std::vector<double>& x) {
  for (const essp::milp::Constraint& c : model.constraints()) {
    double lhs = c.expr.evaluate(x);
    double tol = 1e-6 * std::max(1.0, std::fabs(c.rhs));
    switch (c.sense) {
      case Sense::kLessEq:
        if (lhs > c.rhs + tol) return false;
        break;
      case Sense::kEq:
        if (std::fabs(lhs - c.rhs) > tol) return false;
        break;
      case Sense::kGreaterEq:
        if (lhs < c.rhs - tol) return false;
        break;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("solves a fractional knapsack to integer optimality") {
  MilpModel model = small_knapsack();
  MilpSolution sol = essp::milp::solve_builtin(model);

  REQUIRE(sol.status == SolveStatus::kOptimal);
  CHECK(sol.objective == Approx(-3.0));
  CHECK(sol.best_bound == Approx(-3.0));
  CHECK(sol.value(model, "x0") == 1.0);
  CHECK(sol.value(model, "x1") == 0.0);
  CHECK(sol.nodes >= 2);  // the root alone cannot be integral here
}

TEST_CASE("reports infeasibility") {
  MilpModel model;
  model.add_binary("a");
  model.add_binary("b");
  LinExpr obj;
  obj.add(0, 1.0);
  model.set_objective(obj);
  LinExpr sum;
  sum.add(0, 1.0).add(1, 1.0);
  model.add_constraint("too_much", sum, Sense::kGreaterEq, 3.0);

  MilpSolution sol = essp::milp::solve_builtin(model);
  CHECK(sol.status == SolveStatus::kInfeasible);
  CHECK_FALSE(sol.has_values());
  CHECK(sol.message == "no integer-feasible point exists");
}

TEST_CASE("malformed models are rejected up front") {
  SECTION("non-finite variable bound") {
    MilpModel model;
    model.add_integer("x", 0.0, std::numeric_limits<double>::infinity());
    LinExpr e;
    e.add(0, 1.0);
    model.set_objective(e);
    model.add_constraint("c", e, Sense::kGreaterEq, 0.0);
    CHECK_THROWS_WITH(essp::milp::solve_builtin(model),
                      Catch::Matchers::StartsWith("malformed model:"));
  }
  SECTION("constraint with no terms") {
    MilpModel model;
    model.add_binary("x");
    LinExpr e;
    e.add(0, 1.0);
    model.set_objective(e);
    model.add_constraint("empty", LinExpr{}, Sense::kLessEq, 1.0);
    CHECK_THROWS_AS(essp::milp::solve_builtin(model), std::invalid_argument);
  }
  SECTION("undeclared variable index") {
    MilpModel model;
    model.add_binary("x");
    LinExpr e;
    e.add(5, 1.0);
    model.set_objective(e);
    LinExpr c;
    c.add(0, 1.0);
    model.add_constraint("c", c, Sense::kLessEq, 1.0);
    CHECK_THROWS_AS(essp::milp::solve_builtin(model), std::invalid_argument);
  }
}

TEST_CASE("integer variables snap to exact integers") {
  MilpModel model;
  model.add_integer("x", 0.0, 10.0);
  LinExpr obj;
  obj.add(0, 1.0);
  model.set_objective(obj);
  LinExpr c;
  c.add(0, 1.0);
  model.add_constraint("floor", c, Sense::kGreaterEq, 2.5);

  MilpSolution sol = essp::milp::solve_builtin(model);
  REQUIRE(sol.status == SolveStatus::kOptimal);
  CHECK(sol.values[0] == 3.0);  // exactly, not approximately
  CHECK(sol.objective == Approx(3.0));
}

TEST_CASE("a fully fixed model reduces to evaluation") {
  MilpModel model = small_knapsack();
  model.fix_variable(0, 1.0);
  model.fix_variable(1, 0.0);

  MilpSolution sol = essp::milp::solve_builtin(model);
  REQUIRE(sol.status == SolveStatus::kOptimal);
  CHECK(sol.objective == Approx(-3.0));
  CHECK(sol.nodes == 1);
}

TEST_CASE("agrees with exhaustive enumeration on random programs") {
  int feasible_seen = 0;
  int infeasible_seen = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    MilpModel model = oracle::random_model(&rng);

    oracle::MilpBest truth;
    try {
      truth = oracle::enumerate_milp(model);
    } catch (const std::invalid_argument&) {
      continue;  // domain product too large for the oracle; skip the seed
    }

    INFO("seed " << seed);
    MilpSolution sol = essp::milp::solve_builtin(model);
    if (!truth.feasible) {
      ++infeasible_seen;
      CHECK(sol.status == SolveStatus::kInfeasible);
      continue;
    }
    ++feasible_seen;
    REQUIRE(sol.status == SolveStatus::kOptimal);
    double tol = 1e-6 * std::max(1.0, std::fabs(truth.objective));
    CHECK(std::fabs(sol.objective - truth.objective) <= tol);
    CHECK(satisfies_all(model, sol.values));
    for (double v : sol.values) CHECK(v == std::round(v));
    CHECK(model.eval_objective(sol.values) == Approx(sol.objective));
    CHECK(sol.best_bound == Approx(sol.objective));
  }
  // The generator must have exercised both outcomes for this test to mean
  // anything.
  CHECK(feasible_seen > 30);
  CHECK(infeasible_seen > 10);
}

TEST_CASE("solves are deterministic") {
  for (std::uint64_t seed : {3u, 17u, 99u}) {
    std::mt19937_64 rng(seed);
    MilpModel model = oracle::random_model(&rng);

    MilpSolution a = essp::milp::solve_builtin(model);
    MilpSolution b = essp::milp::solve_builtin(model);
    CHECK(a.status == b.status);
    CHECK(a.nodes == b.nodes);
    if (a.has_values()) {
      CHECK(a.objective == b.objective);
      CHECK(a.values == b.values);
    }
  }
}

TEST_CASE("node callbacks observe a valid bound sandwich") {
  MilpModel model = small_knapsack();
  oracle::MilpBest truth = oracle::enumerate_milp(model);
  REQUIRE(truth.feasible);

  std::vector<essp::milp::NodeInfo> infos;
  MilpSolution sol = essp::milp::solve_builtin(
      model, {}, [&infos](const essp::milp::NodeInfo& i) {
        infos.push_back(i);
      });
  REQUIRE(sol.status == SolveStatus::kOptimal);
  REQUIRE_FALSE(infos.empty());

  // Root: first node, depth zero, relaxation below the integer optimum.
  CHECK(infos.front().node == 1);
  CHECK(infos.front().depth == 0);
  double root_bound = infos.front().lp_bound;
  CHECK(root_bound <= truth.objective + 1e-9);

  double prev_incumbent = std::numeric_limits<double>::infinity();
  for (const essp::milp::NodeInfo& info : infos) {
    // Every node's relaxation sits over a subset of the root's feasible
    // region, so no node bound can undercut the root bound.
    CHECK(info.lp_bound >= root_bound - 1e-9);
    // Incumbents are feasible objectives: never below the optimum, never
    // increasing as the search proceeds.
    CHECK(info.incumbent >= truth.objective - 1e-9);
    CHECK(info.incumbent <= prev_incumbent + 1e-9);
    prev_incumbent = info.incumbent;
  }
}

TEST_CASE("hitting the node limit yields a usable lower bound") {
  MilpModel model = small_knapsack();

  MilpSolution sol = essp::milp::solve_builtin(model, {.node_limit = 1});
  CHECK(sol.status == SolveStatus::kTimedOut);
  CHECK(sol.message == "node limit reached");
  CHECK_FALSE(sol.has_values());  // one fractional root, no incumbent yet
  CHECK(sol.nodes == 1);
  // The root relaxation value is the tightest bound available.
  CHECK(sol.best_bound == Approx(-4.0));
  CHECK(sol.best_bound <= -3.0);  // never above the true optimum
}

TEST_CASE("hitting the time limit before any node reports honestly") {
  MilpModel model = small_knapsack();

  MilpSolution sol = essp::milp::solve_builtin(model, {.time_limit_s = 0.0});
  CHECK(sol.status == SolveStatus::kTimedOut);
  CHECK(sol.message == "time limit reached");
  CHECK(sol.nodes == 0);
  CHECK_FALSE(sol.has_values());
}

TEST_CASE("a generous node limit still reaches the optimum") {
  MilpModel model = small_knapsack();
  MilpSolution sol = essp::milp::solve_builtin(model, {.node_limit = 10000});
  CHECK(sol.status == SolveStatus::kOptimal);
  CHECK(sol.objective == Approx(-3.0));
}
