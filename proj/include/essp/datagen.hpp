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

#ifndef ESSP_DATAGEN_HPP_
#define ESSP_DATAGEN_HPP_

// Instance generators. `generate_hanshin` builds Kobe-area benchmark
// instances from a checked-in blueprint (facility catalog, per-ward shelter
// counts, per-ward evacuee presence over time, ward areas); only geometry is
// random. `generate_synthetic` builds small fully random instances for tests.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "essp/json_io.hpp"
#include "essp/model.hpp"
#include "essp/rng.hpp"

namespace essp {

// Blueprint for the Kobe-area benchmark. Counts are data, not samples: a
// generated instance reproduces them exactly, and two seeds differ only in
// coordinates. The t = 0 presence row counts everyone who initially fled;
// only people still displaced at t = 1 ever occupy a shelter, so only they
// become instance evacuees.
struct HanshinConfig {
  std::vector<FacilityType> catalog;
  // shelter_counts[k][w]: shelters of catalog type k placed in ward w.
  std::vector<std::vector<int>> shelter_counts;
  std::vector<double> ward_areas_km2;
  // present_by_t[w][t]: evacuees of ward w still displaced at step t.
  std::vector<std::vector<int>> present_by_t;
  int horizon = 8;
  double alpha = 10.0;
  double ratio_shelters = 6.93;
  double ratio_evacuees = 202.0;
  double step_days = 30.0;

  int ward_count() const { return static_cast<int>(ward_areas_km2.size()); }

  int shelters_in_ward(int w) const {
    int total = 0;
    for (const auto& row : shelter_counts) total += row[static_cast<std::size_t>(w)];
    return total;
  }

  int ward_capacity(int w) const {
    int total = 0;
    for (std::size_t k = 0; k < catalog.size(); ++k) {
      total += shelter_counts[k][static_cast<std::size_t>(w)] * catalog[k].capacity;
    }
    return total;
  }

  // Throws std::invalid_argument on the first violated requirement.
  void validate() const;

  // The standard nine-ward blueprint (100 shelters, 526 sheltered evacuees).
  static HanshinConfig standard();

  friend bool operator==(const HanshinConfig&, const HanshinConfig&) = default;
};

inline void HanshinConfig::validate() const {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("HanshinConfig: " + msg);
  };
  if (catalog.empty()) fail("facility catalog is empty");
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    const FacilityType& type = catalog[k];
    if (type.id != static_cast<int>(k)) {
      fail("facility type ids must be dense 0..K-1; slot " + std::to_string(k) +
           " has id " + std::to_string(type.id));
    }
    if (type.capacity <= 0) fail("facility type " + type.name + ": capacity must be positive");
    if (type.op_cost < 0.0) fail("facility type " + type.name + ": negative operation cost");
    if (type.real_occupied_days < 0.0) {
      fail("facility type " + type.name + ": negative occupied days");
    }
  }
  const std::size_t wards = ward_areas_km2.size();
  if (wards == 0) fail("no wards");
  for (std::size_t w = 0; w < wards; ++w) {
    if (!(ward_areas_km2[w] > 0.0)) {
      fail("ward area " + std::to_string(w) + " must be positive");
    }
  }
  if (shelter_counts.size() != catalog.size()) {
    fail("shelter_counts must have one row per facility type");
  }
  for (std::size_t k = 0; k < shelter_counts.size(); ++k) {
    if (shelter_counts[k].size() != wards) {
      fail("shelter_counts row " + std::to_string(k) + " must have one entry per ward");
    }
    for (int c : shelter_counts[k]) {
      if (c < 0) fail("negative shelter count in row " + std::to_string(k));
    }
  }
  if (horizon < 2) fail("horizon must be at least 2");
  if (alpha < 1.0) fail("alpha must be at least 1");
  if (!(ratio_shelters > 0.0)) fail("ratio_shelters must be positive");
  if (!(ratio_evacuees > 0.0)) fail("ratio_evacuees must be positive");
  if (!(step_days > 0.0)) fail("step_days must be positive");
  if (present_by_t.size() != wards) {
    fail("present_by_t must have one row per ward");
  }
  for (std::size_t w = 0; w < wards; ++w) {
    const std::vector<int>& row = present_by_t[w];
    if (row.size() != static_cast<std::size_t>(horizon)) {
      fail("present_by_t row " + std::to_string(w) + " must have one entry per step");
    }
    for (std::size_t t = 0; t < row.size(); ++t) {
      if (row[t] < 0) fail("negative presence count in ward row " + std::to_string(w));
      if (t > 0 && row[t] > row[t - 1]) {
        fail("ward row " + std::to_string(w) +
             ": presence counts must be non-increasing in t");
      }
    }
    int capacity = ward_capacity(static_cast<int>(w));
    if (row.size() > 1 && capacity < row[1]) {
      fail("ward row " + std::to_string(w) + ": shelter capacity " +
           std::to_string(capacity) + " below peak occupancy " +
           std::to_string(row[1]));
    }
  }
}

inline HanshinConfig HanshinConfig::standard() {
  HanshinConfig c;
  auto type = [](int id, const char* name, double f, int cap, double days) {
    FacilityType t;
    t.id = id;
    t.name = name;
    t.op_cost = f;
    t.capacity = cap;
    t.real_occupied_days = days;
    return t;
  };
  c.catalog = {
      type(0, "Daycares and kindergartens", 11100.0, 3, 4353.0),
      type(1, "Elementary schools", 54900.0, 23, 19882.0),
      type(2, "Junior high schools", 52800.0, 22, 7437.0),
      type(3, "High schools", 66600.0, 24, 4652.0),
      type(4, "Universities and colleges", 36900.0, 21, 788.0),
      type(5, "Public facilities (small)", 13500.0, 2, 14866.0),
      type(6, "Public facilities (medium)", 57300.0, 3, 9406.0),
      type(7, "Public facilities (large)", 89400.0, 8, 2749.0),
      type(8, "Private facilities (small)", 27900.0, 2, 9783.0),
      type(9, "Private facilities (large)", 137400.0, 4, 388.0),
      type(10, "Parks", 2100.0, 6, 7736.0),
  };
  c.shelter_counts = {
      {1, 1, 1, 1, 1, 1, 1, 0, 0},  // daycares and kindergartens
      {3, 2, 2, 2, 3, 3, 3, 1, 2},  // elementary schools
      {1, 1, 1, 1, 1, 1, 1, 0, 1},  // junior high schools
      {1, 0, 0, 0, 1, 1, 1, 0, 0},  // high schools
      {1, 0, 0, 0, 0, 0, 0, 0, 0},  // universities and colleges
      {4, 3, 3, 4, 2, 1, 1, 0, 1},  // public facilities (small)
      {2, 2, 1, 2, 1, 0, 0, 0, 1},  // public facilities (medium)
      {1, 1, 0, 1, 0, 0, 0, 0, 0},  // public facilities (large)
      {0, 4, 6, 5, 1, 3, 0, 0, 0},  // private facilities (small)
      {0, 0, 1, 0, 0, 0, 0, 0, 0},  // private facilities (large)
      {1, 2, 2, 1, 2, 0, 0, 0, 0},  // parks
  };
  c.ward_areas_km2 = {34.0, 33.0, 29.0, 15.0, 11.0, 29.0, 28.0, 138.0, 240.0};
  c.present_by_t = {
      {296, 155, 91, 61, 45, 31, 24, 12},
      {132, 69, 40, 27, 20, 14, 11, 6},
      {142, 75, 44, 30, 22, 15, 12, 6},
      {112, 59, 35, 24, 18, 13, 10, 5},
      {197, 103, 61, 41, 30, 21, 16, 8},
      {88, 47, 28, 19, 14, 10, 8, 4},
      {15, 8, 5, 4, 3, 2, 2, 1},
      {4, 2, 1, 0, 0, 0, 0, 0},
      {14, 8, 5, 4, 3, 2, 2, 1},
  };
  return c;
}

inline Json to_json(const HanshinConfig& c) {
  Json j;
  j["facility_types"] = Json::array();
  for (const FacilityType& ft : c.catalog) j["facility_types"].push_back(to_json(ft));
  j["shelter_counts"] = c.shelter_counts;
  j["ward_areas_km2"] = c.ward_areas_km2;
  j["present_by_t"] = c.present_by_t;
  j["horizon"] = c.horizon;
  j["alpha"] = c.alpha;
  j["ratio_shelters"] = c.ratio_shelters;
  j["ratio_evacuees"] = c.ratio_evacuees;
  j["step_days"] = c.step_days;
  return j;
}

inline HanshinConfig hanshin_config_from_json(const Json& j) {
  const char* ctx = "hanshin config";
  detail::check_keys(j,
                     {"facility_types", "shelter_counts", "ward_areas_km2",
                      "present_by_t", "horizon", "alpha", "ratio_shelters",
                      "ratio_evacuees", "step_days"},
                     {}, ctx);
  HanshinConfig c;
  for (const Json& fj : j.at("facility_types")) {
    c.catalog.push_back(facility_type_from_json(fj));
  }
  c.shelter_counts = j.at("shelter_counts").get<std::vector<std::vector<int>>>();
  c.ward_areas_km2 = j.at("ward_areas_km2").get<std::vector<double>>();
  c.present_by_t = j.at("present_by_t").get<std::vector<std::vector<int>>>();
  c.horizon = detail::get_as<int>(j, "horizon", ctx);
  c.alpha = detail::get_as<double>(j, "alpha", ctx);
  c.ratio_shelters = detail::get_as<double>(j, "ratio_shelters", ctx);
  c.ratio_evacuees = detail::get_as<double>(j, "ratio_evacuees", ctx);
  c.step_days = detail::get_as<double>(j, "step_days", ctx);
  return c;
}

inline HanshinConfig read_hanshin_config(const std::string& path) {
  return hanshin_config_from_json(load_json_file(path));
}

// Builds one benchmark instance. Geometry is the only random part: shelter
// and origin coordinates are drawn uniformly on each ward's square through
// streams keyed by (seed, ward, purpose), so adding a ward or a sampling site
// never perturbs the others. Evacuees are materialized in decreasing order of
// return time; the count with return time exactly t is the drop in presence
// between steps t and t + 1.
inline Instance generate_hanshin(const HanshinConfig& config, std::uint64_t seed) {
  config.validate();
  Instance inst;
  inst.facility_types = config.catalog;
  inst.horizon = config.horizon;
  inst.alpha = config.alpha;
  inst.lambda = std::nullopt;
  inst.ratio_shelters = config.ratio_shelters;
  inst.ratio_evacuees = config.ratio_evacuees;
  inst.step_days = config.step_days;

  int next_location = 0;
  int next_evacuee = 0;
  for (int w = 0; w < config.ward_count(); ++w) {
    WardInstance ward;
    ward.id = w + 1;
    ward.side_km = std::sqrt(config.ward_areas_km2[static_cast<std::size_t>(w)]);

    Rng shelters = Rng::stream(seed, static_cast<std::uint64_t>(ward.id), "shelters");
    for (std::size_t k = 0; k < config.catalog.size(); ++k) {
      const FacilityType& type = config.catalog[k];
      for (int i = 0; i < config.shelter_counts[k][static_cast<std::size_t>(w)]; ++i) {
        Location loc;
        loc.id = next_location++;
        loc.ward = ward.id;
        loc.coord = {shelters.uniform(0.0, ward.side_km),
                     shelters.uniform(0.0, ward.side_km)};
        loc.capacity = type.capacity;
        loc.facility_type = type.id;
        ward.locations.push_back(loc);
      }
    }

    Rng origins = Rng::stream(seed, static_cast<std::uint64_t>(ward.id), "origins");
    const std::vector<int>& present = config.present_by_t[static_cast<std::size_t>(w)];
    for (int tau = config.horizon - 1; tau >= 1; --tau) {
      int still_present = present[static_cast<std::size_t>(tau)];
      int present_next =
          tau + 1 < config.horizon ? present[static_cast<std::size_t>(tau) + 1] : 0;
      for (int i = 0; i < still_present - present_next; ++i) {
        Location origin;
        origin.id = next_location++;
        origin.ward = ward.id;
        origin.coord = {origins.uniform(0.0, ward.side_km),
                        origins.uniform(0.0, ward.side_km)};
        origin.capacity = 0;
        ward.locations.push_back(origin);

        Evacuee ev;
        ev.id = next_evacuee++;
        ev.origin = origin.id;
        ev.return_time = tau;
        ward.evacuees.push_back(ev);
      }
    }
    inst.wards.push_back(std::move(ward));
  }

  std::vector<Violation> violations = validate_instance(inst);
  if (!violations.empty()) {
    throw std::logic_error("generate_hanshin: produced invalid instance: " +
                           detail::describe(violations));
  }
  return inst;
}

// Shape parameters for fully random test instances. Every ward gets the same
// counts; facility types are sampled once per instance and shelters draw a
// type uniformly. Capacity feasibility is enforced by resampling the type
// assignment of any ward whose total capacity cannot host its evacuees.
struct SyntheticParams {
  int wards = 1;
  int shelters_per_ward = 3;
  int evacuees_per_ward = 5;
  int horizon = 4;
  int facility_type_count = 3;
  int capacity_min = 2;
  int capacity_max = 6;
  double op_cost_min = 1.0;
  double op_cost_max = 20.0;
  double side_km = 4.0;
  double alpha = 10.0;
  std::optional<double> lambda;
  double ratio_shelters = 1.0;
  double ratio_evacuees = 1.0;
  double step_days = 30.0;
  int max_resample_attempts = 100;
};

inline Instance generate_synthetic(const SyntheticParams& p, std::uint64_t seed) {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("generate_synthetic: " + msg);
  };
  if (p.wards < 1) fail("wards must be positive");
  if (p.shelters_per_ward < 1) fail("shelters_per_ward must be positive");
  if (p.evacuees_per_ward < 0) fail("evacuees_per_ward must be non-negative");
  if (p.horizon < 2) fail("horizon must be at least 2");
  if (p.facility_type_count < 1) fail("facility_type_count must be positive");
  if (p.capacity_min < 1 || p.capacity_max < p.capacity_min) {
    fail("capacity range must satisfy 1 <= min <= max");
  }
  if (!(p.op_cost_min >= 0.0) || p.op_cost_max < p.op_cost_min) {
    fail("operation cost range must satisfy 0 <= min <= max");
  }
  if (!(p.side_km > 0.0)) fail("side_km must be positive");
  if (p.alpha < 1.0) fail("alpha must be at least 1");
  if (p.lambda && !(*p.lambda > 0.0)) fail("lambda must be positive");
  if (static_cast<long long>(p.shelters_per_ward) * p.capacity_max <
      p.evacuees_per_ward) {
    fail("infeasible shape: " + std::to_string(p.shelters_per_ward) +
         " shelters of capacity at most " + std::to_string(p.capacity_max) +
         " cannot host " + std::to_string(p.evacuees_per_ward) + " evacuees");
  }

  Instance inst;
  inst.horizon = p.horizon;
  inst.alpha = p.alpha;
  inst.lambda = p.lambda;
  inst.ratio_shelters = p.ratio_shelters;
  inst.ratio_evacuees = p.ratio_evacuees;
  inst.step_days = p.step_days;

  Rng catalog = Rng::stream(seed, 0, "catalog");
  for (int k = 0; k < p.facility_type_count; ++k) {
    FacilityType type;
    type.id = k;
    type.name = "type_" + std::to_string(k);
    type.op_cost = catalog.uniform(p.op_cost_min, p.op_cost_max);
    type.capacity = catalog.uniform_int(p.capacity_min, p.capacity_max);
    type.real_occupied_days = catalog.uniform(100.0, 10000.0);
    inst.facility_types.push_back(type);
  }

  int next_location = 0;
  int next_evacuee = 0;
  for (int w = 0; w < p.wards; ++w) {
    WardInstance ward;
    ward.id = w + 1;
    ward.side_km = p.side_km;

    Rng types = Rng::stream(seed, static_cast<std::uint64_t>(ward.id), "types");
    std::vector<int> assignment(static_cast<std::size_t>(p.shelters_per_ward));
    int capacity = 0;
    int attempt = 0;
    for (;; ++attempt) {
      if (attempt >= p.max_resample_attempts) {
        fail("ward " + std::to_string(ward.id) + ": no type assignment with capacity >= " +
             std::to_string(p.evacuees_per_ward) + " after " +
             std::to_string(attempt) + " attempts; widen the capacity range");
      }
      capacity = 0;
      for (int& slot : assignment) {
        slot = types.uniform_int(0, p.facility_type_count - 1);
        capacity += inst.facility_types[static_cast<std::size_t>(slot)].capacity;
      }
      if (capacity >= p.evacuees_per_ward) break;
    }

    Rng shelters = Rng::stream(seed, static_cast<std::uint64_t>(ward.id), "shelters");
    for (int slot : assignment) {
      const FacilityType& type = inst.facility_types[static_cast<std::size_t>(slot)];
      Location loc;
      loc.id = next_location++;
      loc.ward = ward.id;
      loc.coord = {shelters.uniform(0.0, ward.side_km),
                   shelters.uniform(0.0, ward.side_km)};
      loc.capacity = type.capacity;
      loc.facility_type = type.id;
      ward.locations.push_back(loc);
    }

    Rng origins = Rng::stream(seed, static_cast<std::uint64_t>(ward.id), "origins");
    Rng returns = Rng::stream(seed, static_cast<std::uint64_t>(ward.id), "returns");
    for (int i = 0; i < p.evacuees_per_ward; ++i) {
      Location origin;
      origin.id = next_location++;
      origin.ward = ward.id;
      origin.coord = {origins.uniform(0.0, ward.side_km),
                      origins.uniform(0.0, ward.side_km)};
      origin.capacity = 0;
      ward.locations.push_back(origin);

      Evacuee ev;
      ev.id = next_evacuee++;
      ev.origin = origin.id;
      ev.return_time = returns.uniform_int(1, p.horizon - 1);
      ward.evacuees.push_back(ev);
    }
    inst.wards.push_back(std::move(ward));
  }

  std::vector<Violation> violations = validate_instance(inst);
  if (!violations.empty()) {
    throw std::logic_error("generate_synthetic: produced invalid instance: " +
                           detail::describe(violations));
  }
  return inst;
}

}  // namespace essp

#endif  // ESSP_DATAGEN_HPP_
