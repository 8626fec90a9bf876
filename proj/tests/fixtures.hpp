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

#ifndef ESSP_TESTS_FIXTURES_HPP_
#define ESSP_TESTS_FIXTURES_HPP_

// Hand-built miniature instances shared across test files. Coordinates are
// chosen so every distance is exact in floating point (3-4-5 triangles and
// axis-aligned segments), which lets tests assert costs with == semantics.

#include <filesystem>
#include <stdexcept>
#include <string>

#include <unistd.h>

#include "essp/model.hpp"

namespace fixtures {

inline essp::FacilityType facility(int id, const char* name, double op_cost,
                                   int capacity, double occupied_days = 0.0) {
  essp::FacilityType t;
  t.id = id;
  t.name = name;
  t.op_cost = op_cost;
  t.capacity = capacity;
  t.real_occupied_days = occupied_days;
  return t;
}

inline essp::Location shelter(int id, int ward, double x, double y,
                              int capacity, int facility_type) {
  essp::Location loc;
  loc.id = id;
  loc.ward = ward;
  loc.coord = {x, y};
  loc.capacity = capacity;
  loc.facility_type = facility_type;
  return loc;
}

inline essp::Location origin(int id, int ward, double x, double y) {
  essp::Location loc;
  loc.id = id;
  loc.ward = ward;
  loc.coord = {x, y};
  loc.capacity = 0;
  return loc;
}

inline essp::Evacuee evacuee(int id, int origin_id, int return_time) {
  essp::Evacuee ev;
  ev.id = id;
  ev.origin = origin_id;
  ev.return_time = return_time;
  return ev;
}

// One evacuee, one shelter 1 km from the origin, two steps. The only
// feasible schedule shelters the evacuee at step 1 with the shelter open at
// steps 0 and 1: evacuation alpha * lambda * 1 km, operation 2 * f.
inline essp::Instance single_path_instance() {
  essp::Instance inst;
  inst.facility_types = {facility(0, "hut", 10.0, 1)};
  essp::WardInstance ward;
  ward.id = 1;
  ward.side_km = 2.0;
  ward.locations = {shelter(0, 1, 0.0, 0.0, 1, 0), origin(1, 1, 1.0, 0.0)};
  ward.evacuees = {evacuee(0, 1, 1)};
  inst.wards = {ward};
  inst.horizon = 2;
  inst.alpha = 10.0;
  inst.lambda = 1.0;
  return inst;
}

// One ward, two shelters (capacities 3 and 2), four evacuees with return
// times 3, 2, 2, 1 over horizon 4. Exact origin-to-shelter distances:
//   evacuee 0 at (3,4): 5 to A, 5 to B
//   evacuee 1 at (0,3): 3 to A, sqrt(45) to B
//   evacuee 2 at (6,8): 10 to A, 8 to B
//   evacuee 3 at (9,4): sqrt(97) to A, 5 to B
// Shelter A at (0,0) and B at (6,0) are 6 km apart.
inline essp::Instance two_shelter_instance() {
  essp::Instance inst;
  inst.facility_types = {facility(0, "school", 5.0, 3),
                         facility(1, "park", 2.0, 2)};
  essp::WardInstance ward;
  ward.id = 1;
  ward.side_km = 10.0;
  ward.locations = {shelter(0, 1, 0.0, 0.0, 3, 0), shelter(1, 1, 6.0, 0.0, 2, 1),
                    origin(2, 1, 3.0, 4.0), origin(3, 1, 0.0, 3.0),
                    origin(4, 1, 6.0, 8.0), origin(5, 1, 9.0, 4.0)};
  ward.evacuees = {evacuee(0, 2, 3), evacuee(1, 3, 2), evacuee(2, 4, 2),
                   evacuee(3, 5, 1)};
  inst.wards = {ward};
  inst.horizon = 4;
  inst.alpha = 10.0;
  inst.lambda = 2.0;
  return inst;
}

// Two wards with one shelter and one evacuee each; used to exercise the
// cross-ward rules.
inline essp::Instance two_ward_instance() {
  essp::Instance inst;
  inst.facility_types = {facility(0, "hall", 3.0, 2)};
  essp::WardInstance w1;
  w1.id = 1;
  w1.side_km = 4.0;
  w1.locations = {shelter(0, 1, 0.0, 0.0, 2, 0), origin(1, 1, 3.0, 0.0)};
  w1.evacuees = {evacuee(0, 1, 1)};
  essp::WardInstance w2;
  w2.id = 2;
  w2.side_km = 4.0;
  w2.locations = {shelter(2, 2, 0.0, 0.0, 2, 0), origin(3, 2, 0.0, 2.0)};
  w2.evacuees = {evacuee(1, 3, 1)};
  inst.wards = {w1, w2};
  inst.horizon = 2;
  inst.alpha = 10.0;
  inst.lambda = 1.0;
  return inst;
}

// A feasible schedule for two_shelter_instance: evacuees 0 and 1 in shelter
// A, evacuees 2 and 3 in shelter B, nobody relocating. A hosts through step 3
// and B through step 2.
inline essp::Schedule two_shelter_schedule() {
  essp::Schedule sched;
  sched.positions[0] = {0, 0, 0};
  sched.positions[1] = {0, 0};
  sched.positions[2] = {1, 1};
  sched.positions[3] = {1};
  sched.open_until[0] = 3;
  sched.open_until[1] = 2;
  return sched;
}

// Unique scratch directory under the system temp root, removed on scope
// exit. Tests that write files get isolation from parallel runs this way.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::filesystem::path base = std::filesystem::temp_directory_path();
    for (int i = 0; i < 10000; ++i) {
      std::filesystem::path candidate =
          base / ("essp_" + tag + "_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter_++));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create a scratch directory for " + tag);
  }

  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }

  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

}  // namespace fixtures

#endif  // ESSP_TESTS_FIXTURES_HPP_
