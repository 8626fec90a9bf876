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

#ifndef ESSP_JSON_IO_HPP_
#define ESSP_JSON_IO_HPP_

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "essp/model.hpp"

namespace essp {

// ordered_json keeps insertion order on output, so files are byte-stable.
using Json = nlohmann::ordered_json;

namespace detail {

// Schema checks are strict: every listed key must be handled, anything else
// is rejected so silently-ignored typos cannot corrupt experiments.
inline void require_object(const Json& j, const std::string& ctx) {
  if (!j.is_object()) {
    throw std::invalid_argument(ctx + ": expected a JSON object");
  }
}

inline void check_keys(const Json& j, const std::set<std::string>& required,
                       const std::set<std::string>& optional,
                       const std::string& ctx) {
  require_object(j, ctx);
  for (const auto& item : j.items()) {
    if (!required.count(item.key()) && !optional.count(item.key())) {
      throw std::invalid_argument(ctx + ": unknown key \"" + item.key() +
                                  "\"");
    }
  }
  for (const std::string& key : required) {
    if (!j.contains(key)) {
      throw std::invalid_argument(ctx + ": missing key \"" + key + "\"");
    }
  }
}

template <typename T>
T get_as(const Json& j, const std::string& key, const std::string& ctx) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(ctx + ": bad value for \"" + key +
                                "\": " + e.what());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Instance

inline Json to_json(const FacilityType& ft) {
  Json j;
  j["id"] = ft.id;
  j["name"] = ft.name;
  j["op_cost"] = ft.op_cost;
  j["capacity"] = ft.capacity;
  j["real_occupied_days"] = ft.real_occupied_days;
  return j;
}

inline Json to_json(const Location& loc) {
  Json j;
  j["id"] = loc.id;
  j["ward"] = loc.ward;
  j["x"] = loc.coord[0];
  j["y"] = loc.coord[1];
  j["capacity"] = loc.capacity;
  if (loc.facility_type.has_value()) j["facility_type"] = *loc.facility_type;
  return j;
}

inline Json to_json(const Evacuee& ev) {
  Json j;
  j["id"] = ev.id;
  j["origin"] = ev.origin;
  j["return_time"] = ev.return_time;
  return j;
}

inline Json to_json(const WardInstance& ward) {
  Json j;
  j["id"] = ward.id;
  j["side_km"] = ward.side_km;
  j["locations"] = Json::array();
  for (const Location& loc : ward.locations) j["locations"].push_back(to_json(loc));
  j["evacuees"] = Json::array();
  for (const Evacuee& ev : ward.evacuees) j["evacuees"].push_back(to_json(ev));
  return j;
}

inline Json to_json(const Instance& inst) {
  Json j;
  j["facility_types"] = Json::array();
  for (const FacilityType& ft : inst.facility_types) {
    j["facility_types"].push_back(to_json(ft));
  }
  j["wards"] = Json::array();
  for (const WardInstance& w : inst.wards) j["wards"].push_back(to_json(w));
  j["horizon"] = inst.horizon;
  j["alpha"] = inst.alpha;
  if (inst.lambda.has_value()) {
    j["lambda"] = *inst.lambda;
  } else {
    j["lambda"] = nullptr;
  }
  j["ratio_shelters"] = inst.ratio_shelters;
  j["ratio_evacuees"] = inst.ratio_evacuees;
  j["step_days"] = inst.step_days;
  return j;
}

inline FacilityType facility_type_from_json(const Json& j) {
  const std::string ctx = "facility_type";
  detail::check_keys(j, {"id", "name", "op_cost", "capacity",
                         "real_occupied_days"}, {}, ctx);
  FacilityType ft;
  ft.id = detail::get_as<int>(j, "id", ctx);
  ft.name = detail::get_as<std::string>(j, "name", ctx);
  ft.op_cost = detail::get_as<double>(j, "op_cost", ctx);
  ft.capacity = detail::get_as<int>(j, "capacity", ctx);
  ft.real_occupied_days = detail::get_as<double>(j, "real_occupied_days", ctx);
  return ft;
}

inline Location location_from_json(const Json& j) {
  const std::string ctx = "location";
  detail::check_keys(j, {"id", "ward", "x", "y", "capacity"},
                     {"facility_type"}, ctx);
  Location loc;
  loc.id = detail::get_as<int>(j, "id", ctx);
  loc.ward = detail::get_as<int>(j, "ward", ctx);
  loc.coord[0] = detail::get_as<double>(j, "x", ctx);
  loc.coord[1] = detail::get_as<double>(j, "y", ctx);
  loc.capacity = detail::get_as<int>(j, "capacity", ctx);
  if (j.contains("facility_type")) {
    loc.facility_type = detail::get_as<int>(j, "facility_type", ctx);
  }
  return loc;
}

inline Evacuee evacuee_from_json(const Json& j) {
  const std::string ctx = "evacuee";
  detail::check_keys(j, {"id", "origin", "return_time"}, {}, ctx);
  Evacuee ev;
  ev.id = detail::get_as<int>(j, "id", ctx);
  ev.origin = detail::get_as<int>(j, "origin", ctx);
  ev.return_time = detail::get_as<int>(j, "return_time", ctx);
  return ev;
}

inline WardInstance ward_from_json(const Json& j) {
  const std::string ctx = "ward";
  detail::check_keys(j, {"id", "side_km", "locations", "evacuees"}, {}, ctx);
  WardInstance w;
  w.id = detail::get_as<int>(j, "id", ctx);
  w.side_km = detail::get_as<double>(j, "side_km", ctx);
  for (const Json& lj : j.at("locations")) {
    w.locations.push_back(location_from_json(lj));
  }
  for (const Json& ej : j.at("evacuees")) {
    w.evacuees.push_back(evacuee_from_json(ej));
  }
  return w;
}

inline Instance instance_from_json(const Json& j) {
  const std::string ctx = "instance";
  detail::check_keys(j,
                     {"facility_types", "wards", "horizon", "alpha", "lambda",
                      "ratio_shelters", "ratio_evacuees", "step_days"},
                     {}, ctx);
  Instance inst;
  for (const Json& fj : j.at("facility_types")) {
    inst.facility_types.push_back(facility_type_from_json(fj));
  }
  for (const Json& wj : j.at("wards")) {
    inst.wards.push_back(ward_from_json(wj));
  }
  inst.horizon = detail::get_as<int>(j, "horizon", ctx);
  inst.alpha = detail::get_as<double>(j, "alpha", ctx);
  if (!j.at("lambda").is_null()) {
    inst.lambda = detail::get_as<double>(j, "lambda", ctx);
  }
  inst.ratio_shelters = detail::get_as<double>(j, "ratio_shelters", ctx);
  inst.ratio_evacuees = detail::get_as<double>(j, "ratio_evacuees", ctx);
  inst.step_days = detail::get_as<double>(j, "step_days", ctx);
  return inst;
}

// ---------------------------------------------------------------------------
// Schedule

inline Json to_json(const Schedule& sched) {
  Json j;
  j["positions"] = Json::array();
  for (const auto& [evacuee, path] : sched.positions) {
    for (std::size_t i = 0; i < path.size(); ++i) {
      Json entry;
      entry["t"] = static_cast<int>(i) + 1;
      entry["evacuee"] = evacuee;
      entry["location"] = path[i];
      j["positions"].push_back(entry);
    }
  }
  j["open_until"] = Json::array();
  for (const auto& [location, last] : sched.open_until) {
    Json entry;
    entry["location"] = location;
    entry["last_open_t"] = last;
    j["open_until"].push_back(entry);
  }
  return j;
}

inline Schedule schedule_from_json(const Json& j) {
  const std::string ctx = "schedule";
  detail::check_keys(j, {"positions", "open_until"}, {}, ctx);
  Schedule sched;
  for (const Json& pj : j.at("positions")) {
    detail::check_keys(pj, {"t", "evacuee", "location"}, {}, "position");
    int t = detail::get_as<int>(pj, "t", "position");
    int evacuee = detail::get_as<int>(pj, "evacuee", "position");
    int location = detail::get_as<int>(pj, "location", "position");
    if (t < 1) {
      throw std::invalid_argument("position: t must be >= 1, got " +
                                  std::to_string(t));
    }
    auto& path = sched.positions[evacuee];
    if (static_cast<int>(path.size()) < t) path.resize(t, -1);
    if (path[t - 1] != -1) {
      throw std::invalid_argument("position: duplicate (t=" +
                                  std::to_string(t) + ", evacuee=" +
                                  std::to_string(evacuee) + ")");
    }
    path[t - 1] = location;
  }
  for (auto& [evacuee, path] : sched.positions) {
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (path[i] == -1) {
        throw std::invalid_argument(
            "schedule: evacuee " + std::to_string(evacuee) +
            " has a gap at t=" + std::to_string(i + 1));
      }
    }
  }
  for (const Json& oj : j.at("open_until")) {
    detail::check_keys(oj, {"location", "last_open_t"}, {}, "open_until");
    int location = detail::get_as<int>(oj, "location", "open_until");
    int last = detail::get_as<int>(oj, "last_open_t", "open_until");
    if (!sched.open_until.emplace(location, last).second) {
      throw std::invalid_argument("open_until: duplicate location " +
                                  std::to_string(location));
    }
  }
  return sched;
}

inline Json to_json(const CostBreakdown& c) {
  Json j;
  j["evacuation_cost"] = c.evacuation_cost;
  j["relocation_cost"] = c.relocation_cost;
  j["operation_cost"] = c.operation_cost;
  j["objective"] = c.objective;
  j["relocation_count"] = c.relocation_count;
  return j;
}

inline CostBreakdown cost_breakdown_from_json(const Json& j) {
  const std::string ctx = "cost_breakdown";
  detail::check_keys(j,
                     {"evacuation_cost", "relocation_cost", "operation_cost",
                      "objective", "relocation_count"},
                     {}, ctx);
  CostBreakdown c;
  c.evacuation_cost = detail::get_as<double>(j, "evacuation_cost", ctx);
  c.relocation_cost = detail::get_as<double>(j, "relocation_cost", ctx);
  c.operation_cost = detail::get_as<double>(j, "operation_cost", ctx);
  c.objective = detail::get_as<double>(j, "objective", ctx);
  c.relocation_count = detail::get_as<long>(j, "relocation_count", ctx);
  return c;
}

// Digest of an instance's canonical JSON form, used to pair result files
// with the instance they were computed from. Not cryptographic.
inline std::string instance_digest(const Instance& inst) {
  std::string dump = to_json(inst).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Files

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": JSON parse error: " + e.what());
  }
}

inline void save_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << j.dump(2) << "\n";
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

inline Instance read_instance(const std::string& path) {
  return instance_from_json(load_json_file(path));
}

inline void write_instance(const Instance& inst, const std::string& path) {
  save_json_file(to_json(inst), path);
}

inline Schedule read_schedule(const std::string& path) {
  return schedule_from_json(load_json_file(path));
}

inline void write_schedule(const Schedule& sched, const std::string& path) {
  save_json_file(to_json(sched), path);
}

}  // namespace essp

#endif  // ESSP_JSON_IO_HPP_
