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

#ifndef ESSP_MODEL_HPP_
#define ESSP_MODEL_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace essp {

// One row of the facility catalog: a building category with its daily
// operation cost f (dollars per time step), its evacuee capacity C (persons),
// and the observed real occupied-days total U for that category, used when
// fitting the movement-cost weight.
struct FacilityType {
  int id = -1;
  std::string name;
  double op_cost = 0.0;
  int capacity = 0;
  double real_occupied_days = 0.0;

  friend bool operator==(const FacilityType&, const FacilityType&) = default;
};

// A point in some ward's plane. Shelters have capacity > 0 and reference a
// facility type; evacuation origins have capacity 0 and no type. Coordinates
// are kilometres within the ward square.
struct Location {
  int id = -1;
  int ward = -1;
  std::array<double, 2> coord{0.0, 0.0};
  int capacity = 0;
  std::optional<int> facility_type;

  bool is_shelter() const { return capacity > 0; }

  friend bool operator==(const Location&, const Location&) = default;
};

// An evacuee: starts at `origin` at t = 0 and must be sheltered for
// t = 1 .. return_time inclusive, after which they go home.
struct Evacuee {
  int id = -1;
  int origin = -1;
  int return_time = 0;

  friend bool operator==(const Evacuee&, const Evacuee&) = default;
};

// One ward: an independent square region with its own shelters and evacuees.
// Movement never crosses ward boundaries, so each ward is a self-contained
// subproblem.
struct WardInstance {
  int id = -1;
  double side_km = 0.0;
  std::vector<Location> locations;
  std::vector<Evacuee> evacuees;

  friend bool operator==(const WardInstance&, const WardInstance&) = default;
};

// A full problem instance. `alpha` is the evacuation-vs-relocation cost
// multiplier, `lambda` the movement cost per person-kilometre (absent when it
// is still to be estimated). `ratio_shelters` and `ratio_evacuees` scale the
// reduced instance back to real-world magnitudes; `step_days` is the length of
// one time step in days.
struct Instance {
  std::vector<FacilityType> facility_types;
  std::vector<WardInstance> wards;
  int horizon = 0;
  double alpha = 1.0;
  std::optional<double> lambda;
  double ratio_shelters = 1.0;
  double ratio_evacuees = 1.0;
  double step_days = 30.0;

  friend bool operator==(const Instance&, const Instance&) = default;
};

// An allocation over time. `positions[n]` lists evacuee n's shelter for each
// sheltered step t = 1 .. return_time (index 0 holds t = 1). `open_until[m]`
// is the last step at which shelter m is open; shelters absent from the map
// are never opened. Encoding openness as a single closing step makes the
// no-reopen rule structural: an open interval is always {0, .., last_open_t}.
struct Schedule {
  std::map<int, std::vector<int>> positions;
  std::map<int, int> open_until;

  // Shelter of evacuee n at step t (1-based within the sheltered interval).
  // Throws if the evacuee has no position at t.
  int position(int t, int evacuee) const {
    auto it = positions.find(evacuee);
    if (it == positions.end() || t < 1 ||
        t > static_cast<int>(it->second.size())) {
      throw std::out_of_range("no position for evacuee " +
                              std::to_string(evacuee) + " at t=" +
                              std::to_string(t));
    }
    return it->second[static_cast<std::size_t>(t - 1)];
  }

  // Number of steps shelter m is open (0 if never opened).
  int open_steps(int m) const {
    auto it = open_until.find(m);
    return it == open_until.end() ? 0 : it->second + 1;
  }

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

// Cost totals of one schedule under fixed cost parameters. `objective` is
// always the sum of the three components; `relocation_count` counts
// person-moves between consecutive sheltered steps.
struct CostBreakdown {
  double evacuation_cost = 0.0;
  double relocation_cost = 0.0;
  double operation_cost = 0.0;
  double objective = 0.0;
  long relocation_count = 0;

  friend bool operator==(const CostBreakdown&, const CostBreakdown&) = default;
};

// One violated rule found by a validator. `rule` is a stable identifier,
// `entity` names the offending object, `message` is human-readable.
struct Violation {
  std::string rule;
  std::string entity;
  std::string message;
};

namespace detail {

inline std::string describe(const std::vector<Violation>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << "; ";
    os << v[i].rule << " (" << v[i].entity << "): " << v[i].message;
  }
  return os.str();
}

}  // namespace detail

// Fast lookups into an Instance. Holds pointers into the instance, so the
// instance must outlive the index and stay unmodified.
class InstanceIndex {
 public:
  explicit InstanceIndex(const Instance& instance) : instance_(&instance) {
    for (std::size_t w = 0; w < instance.wards.size(); ++w) {
      const WardInstance& ward = instance.wards[w];
      for (const Location& loc : ward.locations) {
        locations_.emplace(loc.id, Entry{&loc, static_cast<int>(w)});
      }
      for (const Evacuee& ev : ward.evacuees) {
        evacuees_.emplace(ev.id, Entry{&ev, static_cast<int>(w)});
      }
    }
  }

  const Instance& instance() const { return *instance_; }

  const Location* find_location(int id) const {
    auto it = locations_.find(id);
    return it == locations_.end() ? nullptr
                                  : static_cast<const Location*>(it->second.ptr);
  }

  const Evacuee* find_evacuee(int id) const {
    auto it = evacuees_.find(id);
    return it == evacuees_.end() ? nullptr
                                 : static_cast<const Evacuee*>(it->second.ptr);
  }

  const Location& location(int id) const {
    const Location* loc = find_location(id);
    if (!loc) {
      throw std::invalid_argument("unknown location id " + std::to_string(id));
    }
    return *loc;
  }

  const Evacuee& evacuee(int id) const {
    const Evacuee* ev = find_evacuee(id);
    if (!ev) {
      throw std::invalid_argument("unknown evacuee id " + std::to_string(id));
    }
    return *ev;
  }

  // Index into instance().wards, not the ward's own id field.
  int ward_of_location(int id) const {
    auto it = locations_.find(id);
    if (it == locations_.end()) {
      throw std::invalid_argument("unknown location id " + std::to_string(id));
    }
    return it->second.ward;
  }

  int ward_of_evacuee(int id) const {
    auto it = evacuees_.find(id);
    if (it == evacuees_.end()) {
      throw std::invalid_argument("unknown evacuee id " + std::to_string(id));
    }
    return it->second.ward;
  }

  const FacilityType& type_of(const Location& loc) const {
    if (!loc.facility_type.has_value()) {
      throw std::invalid_argument("location " + std::to_string(loc.id) +
                                  " has no facility type");
    }
    int t = *loc.facility_type;
    if (t < 0 || t >= static_cast<int>(instance_->facility_types.size())) {
      throw std::invalid_argument("location " + std::to_string(loc.id) +
                                  " references unknown facility type " +
                                  std::to_string(t));
    }
    return instance_->facility_types[static_cast<std::size_t>(t)];
  }

  double op_cost(int location_id) const {
    return type_of(location(location_id)).op_cost;
  }

 private:
  struct Entry {
    const void* ptr;
    int ward;
  };

  const Instance* instance_;
  std::unordered_map<int, Entry> locations_;
  std::unordered_map<int, Entry> evacuees_;
};

// Shelters of one ward in ascending id order. Every formulation iterates
// shelters in this order so that variable numbering is reproducible.
inline std::vector<const Location*> shelters_of(const WardInstance& ward) {
  std::vector<const Location*> out;
  for (const Location& loc : ward.locations) {
    if (loc.is_shelter()) out.push_back(&loc);
  }
  std::sort(out.begin(), out.end(),
            [](const Location* a, const Location* b) { return a->id < b->id; });
  return out;
}

// Number of evacuees of `ward` still sheltered at step t (t >= 1).
inline int present_count(const WardInstance& ward, int t) {
  int n = 0;
  for (const Evacuee& ev : ward.evacuees) {
    if (ev.return_time >= t) ++n;
  }
  return n;
}

// Structural checks on an instance. Returns every violated rule; an empty
// result means the instance is well-formed and every ward has enough shelter
// capacity for its peak load.
inline std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out;
  auto add = [&out](std::string rule, std::string entity, std::string msg) {
    out.push_back({std::move(rule), std::move(entity), std::move(msg)});
  };

  if (inst.horizon < 1) {
    add("horizon_positive", "instance",
        "horizon must be >= 1, got " + std::to_string(inst.horizon));
  }
  if (!(inst.alpha >= 1.0)) {
    add("alpha_at_least_one", "instance", "alpha must be >= 1");
  }
  if (inst.lambda.has_value() && !(*inst.lambda > 0.0)) {
    add("lambda_positive", "instance", "lambda must be > 0 when present");
  }
  if (!(inst.ratio_shelters > 0.0) || !(inst.ratio_evacuees > 0.0)) {
    add("ratios_positive", "instance", "scaling ratios must be > 0");
  }
  if (!(inst.step_days > 0.0)) {
    add("step_days_positive", "instance", "step_days must be > 0");
  }

  for (std::size_t i = 0; i < inst.facility_types.size(); ++i) {
    const FacilityType& ft = inst.facility_types[i];
    std::string ent = "facility_type " + std::to_string(ft.id);
    if (ft.id != static_cast<int>(i)) {
      add("facility_type_ids_dense", ent,
          "facility type ids must be 0..L-1 in order");
    }
    if (ft.op_cost < 0.0) add("op_cost_nonnegative", ent, "op_cost < 0");
    if (ft.capacity < 0) add("capacity_nonnegative", ent, "capacity < 0");
    if (ft.real_occupied_days < 0.0) {
      add("occupied_days_nonnegative", ent, "real_occupied_days < 0");
    }
  }

  // Locations across all wards are registered before evacuees are checked,
  // so an origin in a later ward is a cross-ward reference, not a missing id.
  std::map<int, int> ward_ids;
  std::map<int, int> location_wards;
  std::map<int, int> evacuee_wards;
  for (const WardInstance& ward : inst.wards) {
    std::string went = "ward " + std::to_string(ward.id);
    if (!ward_ids.emplace(ward.id, 1).second) {
      add("ward_ids_unique", went, "duplicate ward id");
    }
    if (!(ward.side_km > 0.0)) {
      add("ward_side_positive", went, "side_km must be > 0");
    }
    for (const Location& loc : ward.locations) {
      std::string ent = "location " + std::to_string(loc.id);
      if (!location_wards.emplace(loc.id, ward.id).second) {
        add("location_ids_unique", ent, "duplicate location id");
      }
      if (loc.ward != ward.id) {
        add("location_ward_field", ent, "ward field does not match its ward");
      }
      if (loc.coord[0] < 0.0 || loc.coord[0] > ward.side_km ||
          loc.coord[1] < 0.0 || loc.coord[1] > ward.side_km) {
        add("location_in_ward_square", ent,
            "coordinates outside [0, side_km]^2");
      }
      if (loc.capacity < 0) {
        add("capacity_nonnegative", ent, "capacity < 0");
      }
      if (loc.is_shelter() != loc.facility_type.has_value()) {
        add("shelter_iff_typed", ent,
            "capacity > 0 exactly when a facility type is set");
      }
      if (loc.facility_type.has_value() &&
          (*loc.facility_type < 0 ||
           *loc.facility_type >=
               static_cast<int>(inst.facility_types.size()))) {
        add("facility_type_exists", ent, "unknown facility type id");
      }
    }
  }
  for (const WardInstance& ward : inst.wards) {
    std::string went = "ward " + std::to_string(ward.id);
    for (const Evacuee& ev : ward.evacuees) {
      std::string ent = "evacuee " + std::to_string(ev.id);
      if (!evacuee_wards.emplace(ev.id, ward.id).second) {
        add("evacuee_ids_unique", ent, "duplicate evacuee id");
      }
      auto origin_it = location_wards.find(ev.origin);
      bool origin_here = false;
      for (const Location& loc : ward.locations) {
        if (loc.id == ev.origin) origin_here = true;
      }
      if (origin_it == location_wards.end() && !origin_here) {
        add("origin_exists", ent,
            "origin location " + std::to_string(ev.origin) + " not found");
      } else if (!origin_here) {
        add("origin_in_own_ward", ent, "origin lies in another ward");
      }
      if (ev.return_time < 1 || ev.return_time > inst.horizon - 1) {
        add("return_time_in_range", ent,
            "return_time must be in [1, horizon-1]");
      }
    }

    // Peak sheltered population must fit in the ward's total shelter capacity,
    // otherwise no feasible allocation exists at some step.
    int total_capacity = 0;
    for (const Location& loc : ward.locations) total_capacity += loc.capacity;
    int peak = 0;
    for (int t = 1; t < std::max(inst.horizon, 2); ++t) {
      peak = std::max(peak, present_count(ward, t));
    }
    if (total_capacity < peak) {
      add("ward_capacity_sufficient", went,
          "total shelter capacity " + std::to_string(total_capacity) +
              " below peak sheltered population " + std::to_string(peak));
    }
  }
  return out;
}

// Checks a schedule against an instance. Unknown evacuee or location ids are
// malformed input and throw; rule violations on known entities are returned.
inline std::vector<Violation> validate_schedule(const Instance& inst,
                                                const Schedule& sched) {
  InstanceIndex index(inst);
  std::vector<Violation> out;
  auto add = [&out](std::string rule, std::string entity, std::string msg) {
    out.push_back({std::move(rule), std::move(entity), std::move(msg)});
  };

  for (const auto& [evacuee_id, path] : sched.positions) {
    index.evacuee(evacuee_id);
    for (int loc_id : path) index.location(loc_id);
  }
  for (const auto& [loc_id, last] : sched.open_until) {
    index.location(loc_id);
    if (last < 0 || last > inst.horizon - 1) {
      add("open_until_in_horizon", "location " + std::to_string(loc_id),
          "last_open_t outside [0, horizon-1]");
    }
    if (!index.location(loc_id).is_shelter()) {
      add("open_only_shelters", "location " + std::to_string(loc_id),
          "open_until entry for a non-shelter location");
    }
  }

  // Sheltered exactly for t = 1 .. return_time, in a shelter of the own ward.
  for (const WardInstance& ward : inst.wards) {
    for (const Evacuee& ev : ward.evacuees) {
      std::string ent = "evacuee " + std::to_string(ev.id);
      auto it = sched.positions.find(ev.id);
      if (it == sched.positions.end()) {
        add("sheltered_until_return", ent, "no positions recorded");
        continue;
      }
      if (static_cast<int>(it->second.size()) != ev.return_time) {
        add("sheltered_until_return", ent,
            "positions cover " + std::to_string(it->second.size()) +
                " steps, return_time is " + std::to_string(ev.return_time));
        continue;
      }
      for (int t = 1; t <= ev.return_time; ++t) {
        const Location& loc = index.location(sched.position(t, ev.id));
        if (!loc.is_shelter()) {
          add("positions_are_shelters", ent,
              "assigned to non-shelter location " + std::to_string(loc.id) +
                  " at t=" + std::to_string(t));
        } else if (loc.ward != ward.id) {
          add("positions_in_own_ward", ent,
              "assigned across ward boundary at t=" + std::to_string(t));
        }
      }
    }
  }

  // Capacity and openness per occupied step. A shelter that still hosts
  // evacuees after its open_until step is the observable form of a
  // close-then-reopen plan, which the encoding forbids.
  std::map<std::pair<int, int>, int> occupancy;
  for (const auto& [evacuee_id, path] : sched.positions) {
    for (std::size_t i = 0; i < path.size(); ++i) {
      ++occupancy[{static_cast<int>(i) + 1, path[i]}];
    }
  }
  for (const auto& [key, count] : occupancy) {
    auto [t, loc_id] = key;
    const Location& loc = index.location(loc_id);
    if (!loc.is_shelter()) continue;
    std::string ent = "location " + std::to_string(loc_id);
    if (count > loc.capacity) {
      add("capacity_respected", ent,
          "occupancy " + std::to_string(count) + " exceeds capacity " +
              std::to_string(loc.capacity) + " at t=" + std::to_string(t));
    }
    auto open_it = sched.open_until.find(loc_id);
    int last_open = open_it == sched.open_until.end() ? -1 : open_it->second;
    if (std::min(t, inst.horizon - 1) > last_open) {
      add("occupied_while_open", ent,
          "occupied at t=" + std::to_string(t) + " but open_until=" +
              std::to_string(last_open));
    }
  }
  return out;
}

}  // namespace essp

#endif  // ESSP_MODEL_HPP_
