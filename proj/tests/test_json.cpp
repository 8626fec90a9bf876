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

#include <cctype>
#include <fstream>
#include <stdexcept>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "essp/datagen.hpp"
#include "essp/json_io.hpp"
#include "essp/model.hpp"
#include "fixtures.hpp"

using Catch::Matchers::ContainsSubstring;

TEST_CASE("instance JSON round trip") {
  essp::Instance inst = fixtures::two_shelter_instance();
  CHECK(essp::instance_from_json(essp::to_json(inst)) == inst);

  essp::Instance hanshin =
      essp::generate_hanshin(essp::HanshinConfig::standard(), 11);
  CHECK(essp::instance_from_json(essp::to_json(hanshin)) == hanshin);
}

TEST_CASE("a missing lambda survives the round trip as null") {
  essp::Instance inst = fixtures::single_path_instance();
  inst.lambda.reset();

  essp::Json j = essp::to_json(inst);
  CHECK(j.at("lambda").is_null());

  essp::Instance back = essp::instance_from_json(j);
  CHECK_FALSE(back.lambda.has_value());
  CHECK(back == inst);
}

TEST_CASE("instance parsing is strict about keys") {
  essp::Json j = essp::to_json(fixtures::single_path_instance());

  SECTION("unknown top-level key") {
    j["surprise"] = 1;
    CHECK_THROWS_WITH(essp::instance_from_json(j),
                      ContainsSubstring("unknown key \"surprise\""));
  }
  SECTION("missing top-level key") {
    j.erase("horizon");
    CHECK_THROWS_WITH(essp::instance_from_json(j),
                      ContainsSubstring("missing key \"horizon\""));
  }
  SECTION("unknown key in a nested object") {
    j["wards"][0]["locations"][0]["color"] = "red";
    CHECK_THROWS_WITH(essp::instance_from_json(j),
                      ContainsSubstring("unknown key \"color\""));
  }
  SECTION("wrong value type") {
    j["horizon"] = "two";
    CHECK_THROWS_WITH(essp::instance_from_json(j),
                      ContainsSubstring("bad value for \"horizon\""));
  }
  SECTION("non-object where an object is required") {
    j["facility_types"][0] = 7;
    CHECK_THROWS_AS(essp::instance_from_json(j), std::invalid_argument);
  }
}

TEST_CASE("schedule JSON round trip") {
  essp::Schedule sched = fixtures::two_shelter_schedule();
  CHECK(essp::schedule_from_json(essp::to_json(sched)) == sched);

  essp::Schedule empty;
  CHECK(essp::schedule_from_json(essp::to_json(empty)) == empty);
}

TEST_CASE("position entries may arrive in any order") {
  essp::Json j;
  j["positions"] = essp::Json::array();
  for (auto [t, ev, loc] : {std::tuple{2, 0, 1}, {1, 1, 0}, {1, 0, 0},
                            {2, 1, 0}, {3, 0, 1}}) {
    essp::Json entry;
    entry["t"] = t;
    entry["evacuee"] = ev;
    entry["location"] = loc;
    j["positions"].push_back(entry);
  }
  j["open_until"] = essp::Json::array();

  essp::Schedule sched = essp::schedule_from_json(j);
  CHECK(sched.positions[0] == std::vector<int>{0, 1, 1});
  CHECK(sched.positions[1] == std::vector<int>{0, 0});
}

TEST_CASE("schedule parsing rejects malformed position tables") {
  essp::Json base = essp::to_json(fixtures::two_shelter_schedule());

  SECTION("duplicate (t, evacuee) pair") {
    base["positions"].push_back(base["positions"][0]);
    CHECK_THROWS_WITH(essp::schedule_from_json(base),
                      ContainsSubstring("duplicate"));
  }
  SECTION("gap in an evacuee's timeline") {
    essp::Json j;
    j["positions"] = essp::Json::array();
    essp::Json entry;
    entry["t"] = 3;
    entry["evacuee"] = 0;
    entry["location"] = 0;
    j["positions"].push_back(entry);
    j["open_until"] = essp::Json::array();
    CHECK_THROWS_WITH(essp::schedule_from_json(j), ContainsSubstring("gap"));
  }
  SECTION("t below one") {
    base["positions"][0]["t"] = 0;
    CHECK_THROWS_WITH(essp::schedule_from_json(base),
                      ContainsSubstring("t must be >= 1"));
  }
  SECTION("duplicate open_until location") {
    base["open_until"].push_back(base["open_until"][0]);
    CHECK_THROWS_WITH(essp::schedule_from_json(base),
                      ContainsSubstring("duplicate location"));
  }
}

TEST_CASE("cost breakdown JSON round trip") {
  essp::CostBreakdown c{420.0, 24.0, 26.0, 470.0, 2};
  CHECK(essp::cost_breakdown_from_json(essp::to_json(c)) == c);

  essp::Json j = essp::to_json(c);
  j.erase("relocation_count");
  CHECK_THROWS_WITH(essp::cost_breakdown_from_json(j),
                    ContainsSubstring("missing key"));
}

TEST_CASE("instance digest") {
  essp::Instance a = fixtures::two_shelter_instance();

  std::string digest = essp::instance_digest(a);
  REQUIRE(digest.size() == 16);
  for (char c : digest) CHECK(std::isxdigit(static_cast<unsigned char>(c)));

  CHECK(essp::instance_digest(a) == digest);  // stable

  essp::Instance b = a;
  b.alpha += 1.0;
  CHECK(essp::instance_digest(b) != digest);  // sensitive to content

  CHECK(essp::instance_digest(fixtures::single_path_instance()) != digest);
}

TEST_CASE("instance and schedule file IO") {
  fixtures::TempDir dir("json");

  essp::Instance inst = fixtures::two_shelter_instance();
  std::string inst_path = dir.file("instance.json");
  essp::write_instance(inst, inst_path);
  CHECK(essp::read_instance(inst_path) == inst);

  essp::Schedule sched = fixtures::two_shelter_schedule();
  std::string sched_path = dir.file("schedule.json");
  essp::write_schedule(sched, sched_path);
  CHECK(essp::read_schedule(sched_path) == sched);

  SECTION("written files are byte-stable") {
    std::string again = dir.file("instance2.json");
    essp::write_instance(inst, again);
    std::ifstream f1(inst_path), f2(again);
    std::string s1((std::istreambuf_iterator<char>(f1)), {});
    std::string s2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(s1 == s2);
    CHECK_FALSE(s1.empty());
  }
}

TEST_CASE("file errors are reported with the path") {
  fixtures::TempDir dir("json_err");

  CHECK_THROWS_AS(essp::read_instance(dir.file("missing.json")),
                  std::runtime_error);

  std::string bad = dir.file("bad.json");
  std::ofstream(bad) << "{ not json";
  CHECK_THROWS_WITH(essp::read_instance(bad),
                    ContainsSubstring("JSON parse error"));

  CHECK_THROWS_AS(
      essp::write_instance(fixtures::single_path_instance(),
                           dir.file("no_such_dir/out.json")),
      std::runtime_error);
}
