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
#include <stdexcept>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "essp/costs.hpp"
#include "essp/model.hpp"
#include "fixtures.hpp"

using Catch::Approx;

TEST_CASE("distance is euclidean within a ward") {
  essp::Instance inst = fixtures::two_shelter_instance();
  const essp::WardInstance& ward = inst.wards[0];
  const essp::Location& a = ward.locations[0];  // (0, 0)
  const essp::Location& b = ward.locations[1];  // (6, 0)
  const essp::Location& o = ward.locations[2];  // (3, 4)

  CHECK(essp::distance(a, b) == Approx(6.0));
  CHECK(essp::distance(b, a) == Approx(6.0));
  CHECK(essp::distance(a, a) == 0.0);
  CHECK(essp::distance(o, a) == Approx(5.0));
  CHECK(essp::distance(o, b) == Approx(5.0));
}

TEST_CASE("distance across wards is undefined") {
  essp::Instance inst = fixtures::two_ward_instance();
  const essp::Location& in_w1 = inst.wards[0].locations[0];
  const essp::Location& in_w2 = inst.wards[1].locations[0];
  CHECK_THROWS_AS(essp::distance(in_w1, in_w2), std::invalid_argument);
}

TEST_CASE("movement cost weights only the evacuation move by alpha") {
  essp::Instance inst = fixtures::two_shelter_instance();
  const essp::WardInstance& ward = inst.wards[0];
  const essp::Location& a = ward.locations[0];
  const essp::Location& o = ward.locations[2];  // 5 km from a
  essp::CostParams p{2.0, 10.0};

  CHECK(essp::movement_cost(0, o, a, p) == Approx(100.0));  // alpha*lambda*d
  CHECK(essp::movement_cost(1, o, a, p) == Approx(10.0));   // lambda*d
  CHECK(essp::movement_cost(3, o, a, p) == Approx(10.0));
  CHECK(essp::movement_cost(1, a, a, p) == 0.0);
}

TEST_CASE("cost parameter resolution") {
  essp::Instance inst = fixtures::single_path_instance();  // lambda = 1

  essp::CostParams from_instance = essp::cost_params(inst);
  CHECK(from_instance.lambda == 1.0);
  CHECK(from_instance.alpha == 10.0);

  essp::CostParams overridden = essp::cost_params(inst, 7.5);
  CHECK(overridden.lambda == 7.5);
  CHECK(overridden.alpha == 10.0);

  inst.lambda.reset();
  CHECK_THROWS_AS(essp::cost_params(inst), std::invalid_argument);
  CHECK(essp::cost_params(inst, 3.0).lambda == 3.0);

  CHECK_THROWS_AS((essp::CostParams{0.0, 1.0}).check(), std::invalid_argument);
  CHECK_THROWS_AS((essp::CostParams{-1.0, 1.0}).check(), std::invalid_argument);
  CHECK_THROWS_AS((essp::CostParams{1.0, 0.5}).check(), std::invalid_argument);
}

TEST_CASE("evaluating the one-evacuee instance") {
  essp::Instance inst = fixtures::single_path_instance();
  essp::Schedule sched;
  sched.positions[0] = {0};
  sched.open_until[0] = 1;

  essp::CostBreakdown costs =
      essp::evaluate_schedule(inst, sched, essp::cost_params(inst));
  CHECK(costs.evacuation_cost == Approx(10.0));  // 10 * 1 * 1 km
  CHECK(costs.relocation_cost == 0.0);
  CHECK(costs.operation_cost == Approx(20.0));  // f=10, open steps 0..1
  CHECK(costs.objective == Approx(30.0));
  CHECK(costs.relocation_count == 0);
}

TEST_CASE("evaluating a stay-put schedule") {
  essp::Instance inst = fixtures::two_shelter_instance();
  essp::Schedule sched = fixtures::two_shelter_schedule();

  essp::CostBreakdown costs =
      essp::evaluate_schedule(inst, sched, essp::cost_params(inst));
  // Evacuation, per evacuee: 10*2*5 + 10*2*3 + 10*2*8 + 10*2*5.
  CHECK(costs.evacuation_cost == Approx(420.0));
  CHECK(costs.relocation_cost == 0.0);
  CHECK(costs.relocation_count == 0);
  // Shelter 0 runs 4 steps at f=5, shelter 1 runs 3 steps at f=2.
  CHECK(costs.operation_cost == Approx(26.0));
  CHECK(costs.objective == Approx(446.0));
  CHECK(costs.objective ==
        Approx(costs.evacuation_cost + costs.relocation_cost +
               costs.operation_cost));
}

TEST_CASE("relocations are charged per move at plain lambda") {
  essp::Instance inst = fixtures::two_shelter_instance();
  essp::Schedule sched = fixtures::two_shelter_schedule();
  // Evacuee 0 bounces: shelter 0 -> 1 -> 0, two 6 km moves.
  sched.positions[0] = {0, 1, 0};

  essp::CostBreakdown costs =
      essp::evaluate_schedule(inst, sched, essp::cost_params(inst));
  CHECK(costs.evacuation_cost == Approx(420.0));
  CHECK(costs.relocation_cost == Approx(24.0));  // 2 * lambda(2) * 6 km
  CHECK(costs.relocation_count == 2);
  CHECK(costs.operation_cost == Approx(26.0));
  CHECK(costs.objective == Approx(470.0));
}

TEST_CASE("movement scales linearly in lambda, operation does not") {
  essp::Instance inst = fixtures::two_shelter_instance();
  essp::Schedule sched = fixtures::two_shelter_schedule();
  sched.positions[0] = {0, 1, 0};

  essp::CostBreakdown at2 =
      essp::evaluate_schedule(inst, sched, essp::cost_params(inst, 2.0));
  essp::CostBreakdown at6 =
      essp::evaluate_schedule(inst, sched, essp::cost_params(inst, 6.0));
  CHECK(at6.evacuation_cost == Approx(3.0 * at2.evacuation_cost));
  CHECK(at6.relocation_cost == Approx(3.0 * at2.relocation_cost));
  CHECK(at6.operation_cost == Approx(at2.operation_cost));
  CHECK(at6.relocation_count == at2.relocation_count);
}

TEST_CASE("evaluation refuses an invalid schedule") {
  essp::Instance inst = fixtures::two_shelter_instance();
  essp::Schedule sched = fixtures::two_shelter_schedule();
  sched.positions.erase(3);

  CHECK_THROWS_WITH(
      essp::evaluate_schedule(inst, sched, essp::cost_params(inst)),
      Catch::Matchers::StartsWith("invalid schedule: "));
}

TEST_CASE("occupancy estimate sums open steps per facility type") {
  essp::Instance inst = fixtures::two_shelter_instance();
  essp::Schedule sched = fixtures::two_shelter_schedule();

  std::vector<double> occ = essp::occupancy_estimate(sched, inst);
  REQUIRE(occ.size() == 2);
  CHECK(occ[0] == Approx(4.0));  // shelter 0, type 0, open steps 0..3
  CHECK(occ[1] == Approx(3.0));  // shelter 1, type 1, open steps 0..2

  SECTION("shelter ratio scales the estimate") {
    inst.ratio_shelters = 6.93;
    std::vector<double> scaled = essp::occupancy_estimate(sched, inst);
    CHECK(scaled[0] == Approx(4.0 * 6.93));
    CHECK(scaled[1] == Approx(3.0 * 6.93));
  }
  SECTION("step length converts steps to days on request") {
    std::vector<double> days = essp::occupancy_estimate(sched, inst, true);
    CHECK(days[0] == Approx(4.0 * 30.0));
    CHECK(days[1] == Approx(3.0 * 30.0));
  }
  SECTION("types never opened stay at zero") {
    essp::Schedule only_first;
    only_first.open_until[0] = 1;
    std::vector<double> partial = essp::occupancy_estimate(only_first, inst);
    CHECK(partial[0] == Approx(2.0));
    CHECK(partial[1] == 0.0);
  }
}

TEST_CASE("mean squared error") {
  CHECK(essp::mse({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 0.0);
  CHECK(essp::mse({1.0, 2.0, 3.0}, {2.0, 4.0, 3.0}) == Approx(5.0 / 3.0));
  CHECK(essp::mse({0.0}, {5.0}) == Approx(25.0));
  CHECK_THROWS_AS(essp::mse({1.0, 2.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(essp::mse({}, {}), std::invalid_argument);
}

TEST_CASE("real-world scaling helpers") {
  essp::Instance inst = fixtures::two_shelter_instance();
  essp::Schedule sched = fixtures::two_shelter_schedule();

  CHECK(essp::scaled_operation_cost(sched, inst) == Approx(26.0));
  inst.ratio_shelters = 6.93;
  CHECK(essp::scaled_operation_cost(sched, inst) == Approx(26.0 * 6.93));

  inst.ratio_evacuees = 66.1;
  CHECK(essp::per_real_person_cost(661.0, inst) == Approx(10.0));
}
