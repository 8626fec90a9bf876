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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "essp/costs.hpp"
#include "essp/json_io.hpp"
#include "essp/model.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using Catch::Approx;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CliRun run_cli(const std::string& args, const fs::path& scratch) {
  fs::path out_file = scratch / "cli_stdout.txt";
  fs::path err_file = scratch / "cli_stderr.txt";
  std::string cmd = std::string(ESSP_CLI_PATH) + " " + args + " > " +
                    out_file.string() + " 2> " + err_file.string();
  int raw = std::system(cmd.c_str());
  CliRun run;
  run.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  run.out = slurp(out_file);
  run.err = slurp(err_file);
  return run;
}

// Generates one default-shape synthetic instance carrying lambda 2 and
// returns its path.
fs::path generate_one(const fixtures::TempDir& dir, const std::string& extra = "") {
  CliRun gen = run_cli("generate --synthetic --seeds 3 --lambda 2 " + extra +
                           " --out " + (dir.path() / "data").string(),
                       dir.path());
  REQUIRE(gen.code == 0);
  return dir.path() / "data" / "instance_3.json";
}

}  // namespace

TEST_CASE("cli usage errors exit non-zero with a message") {
  fixtures::TempDir dir("cli_usage");

  SECTION("no subcommand") {
    CliRun run = run_cli("", dir.path());
    CHECK(run.code != 0);
  }
  SECTION("generator mode is mandatory") {
    CliRun run = run_cli(
        "generate --seeds 1 --out " + (dir.path() / "x").string(), dir.path());
    CHECK(run.code == 1);
    CHECK_THAT(run.err, Catch::Matchers::ContainsSubstring(
                            "error: pick exactly one of --hanshin / --synthetic"));
  }
  SECTION("empty seed range") {
    CliRun run = run_cli("generate --synthetic --seeds 5..1 --out " +
                             (dir.path() / "x").string(),
                         dir.path());
    CHECK(run.code == 1);
    CHECK_THAT(run.err,
               Catch::Matchers::ContainsSubstring("error: seed range is empty"));
  }
  SECTION("missing instance file") {
    CliRun run = run_cli("solve --instance does_not_exist.json --method opt",
                         dir.path());
    CHECK(run.code == 1);
    CHECK_THAT(run.err, Catch::Matchers::StartsWith("error: "));
  }
  SECTION("method names are validated at parse time") {
    CliRun run = run_cli("solve --instance x.json --method magic", dir.path());
    CHECK(run.code != 0);
  }
}

TEST_CASE("cli generates instances with a manifest and stable bytes") {
  fixtures::TempDir dir("cli_generate");
  fs::path dir_a = dir.path() / "a";
  fs::path dir_b = dir.path() / "b";

  CliRun first = run_cli("generate --synthetic --seeds 0..4 --out " +
                             dir_a.string(), dir.path());
  REQUIRE(first.code == 0);
  CHECK_THAT(first.out,
             Catch::Matchers::ContainsSubstring("wrote 5 instance files"));

  for (int seed = 0; seed < 5; ++seed) {
    fs::path p = dir_a / ("instance_" + std::to_string(seed) + ".json");
    REQUIRE(fs::exists(p));
    essp::Instance inst = essp::read_instance(p.string());
    CHECK(essp::validate_instance(inst).empty());
  }

  essp::Json manifest = essp::load_json_file((dir_a / "manifest.json").string());
  CHECK(manifest.at("kind") == "synthetic");
  CHECK(manifest.at("seeds").size() == 5);
  REQUIRE(manifest.at("files").size() == 5);
  const essp::Json& entry = manifest.at("files")[2];
  CHECK(entry.at("seed") == 2);
  CHECK(entry.at("file") == "instance_2.json");
  essp::Instance third =
      essp::read_instance((dir_a / "instance_2.json").string());
  CHECK(entry.at("instance_hash") == essp::instance_digest(third));

  CliRun second = run_cli("generate --synthetic --seeds 0..4 --out " +
                              dir_b.string(), dir.path());
  REQUIRE(second.code == 0);
  CHECK(slurp(dir_a / "instance_1.json") == slurp(dir_b / "instance_1.json"));
  CHECK(slurp(dir_a / "manifest.json") == slurp(dir_b / "manifest.json"));
}

TEST_CASE("cli generates the benchmark set") {
  fixtures::TempDir dir("cli_hanshin");
  CliRun run = run_cli("generate --hanshin --seeds 7 --out " +
                           (dir.path() / "h").string(), dir.path());
  REQUIRE(run.code == 0);

  essp::Instance inst =
      essp::read_instance((dir.path() / "h" / "instance_7.json").string());
  CHECK(essp::validate_instance(inst).empty());
  CHECK(inst.wards.size() == 9);
  int evacuees = 0;
  int shelters = 0;
  for (const essp::WardInstance& ward : inst.wards) {
    evacuees += static_cast<int>(ward.evacuees.size());
    for (const essp::Location& loc : ward.locations) {
      if (loc.capacity > 0) ++shelters;
    }
  }
  CHECK(evacuees == 526);
  CHECK(shelters == 100);
}

TEST_CASE("cli solve produces a verifiable result file") {
  fixtures::TempDir dir("cli_solve");
  fs::path inst_path = generate_one(dir);
  fs::path out_path = dir.path() / "result_opt.json";

  CliRun run = run_cli("solve --instance " + inst_path.string() +
                           " --method opt --out " + out_path.string(),
                       dir.path());
  REQUIRE(run.code == 0);
  CHECK_THAT(run.out, Catch::Matchers::StartsWith("opt: objective"));

  essp::Json j = essp::load_json_file(out_path.string());
  essp::Instance inst = essp::read_instance(inst_path.string());
  CHECK(j.at("instance_file") == inst_path.string());
  CHECK(j.at("instance_hash") == essp::instance_digest(inst));
  CHECK(j.at("lambda") == 2.0);
  CHECK(j.at("alpha") == 10.0);
  CHECK(j.at("backend") == "builtin");
  CHECK(j.at("result").at("method") == "opt");
  CHECK(j.at("result").at("all_optimal") == true);

  // The written objective is the true optimum.
  essp::CostParams params = essp::cost_params(inst);
  std::optional<double> truth = oracle::best_objective(inst, params);
  REQUIRE(truth.has_value());
  double objective = j.at("result").at("costs").at("objective").get<double>();
  CHECK(objective == Approx(*truth).epsilon(1e-6));

  // The stored schedule replays to the stored costs.
  essp::Schedule sched = essp::schedule_from_json(j.at("result").at("schedule"));
  essp::CostBreakdown replay = essp::evaluate_schedule(inst, sched, params);
  CHECK(replay.objective == Approx(objective));
}

TEST_CASE("cli solve needs a movement scale from somewhere") {
  fixtures::TempDir dir("cli_lambda");
  CliRun gen = run_cli("generate --synthetic --seeds 3 --out " +
                           (dir.path() / "data").string(), dir.path());
  REQUIRE(gen.code == 0);
  fs::path inst_path = dir.path() / "data" / "instance_3.json";

  CliRun bare = run_cli("solve --instance " + inst_path.string() +
                            " --method nomove", dir.path());
  CHECK(bare.code == 1);
  CHECK_THAT(bare.err,
             Catch::Matchers::ContainsSubstring("no movement-cost scale"));

  CliRun with_flag = run_cli("solve --instance " + inst_path.string() +
                                 " --method nomove --lambda 2", dir.path());
  CHECK(with_flag.code == 0);
}

TEST_CASE("cli stay-put solve never relocates") {
  fixtures::TempDir dir("cli_nomove");
  fs::path inst_path = generate_one(dir);
  fs::path out_path = dir.path() / "result_nomove.json";

  CliRun run = run_cli("solve --instance " + inst_path.string() +
                           " --method nomove --out " + out_path.string(),
                       dir.path());
  REQUIRE(run.code == 0);
  essp::Json j = essp::load_json_file(out_path.string());
  CHECK(j.at("result").at("costs").at("relocation_cost") == 0.0);
  CHECK(j.at("result").at("costs").at("relocation_count") == 0);
}

TEST_CASE("cli LP export round trips through the reference solver") {
  fixtures::TempDir dir("cli_lp");
  fs::path inst_path = generate_one(dir);
  fs::path lp_dir = dir.path() / "lp";
  fs::path builtin_out = dir.path() / "builtin.json";
  fs::path manual_out = dir.path() / "manual.json";

  CliRun builtin = run_cli("solve --instance " + inst_path.string() +
                               " --method opt --out " + builtin_out.string(),
                           dir.path());
  REQUIRE(builtin.code == 0);

  CliRun exported = run_cli("solve --instance " + inst_path.string() +
                                " --method opt --export-lp " + lp_dir.string(),
                            dir.path());
  REQUIRE(exported.code == 0);
  CHECK_THAT(exported.out, Catch::Matchers::ContainsSubstring("--solutions"));
  fs::path lp_file = lp_dir / "instance_3_w1_opt.lp";
  REQUIRE(fs::exists(lp_file));

  std::string solve_cmd = "python3 " + std::string(ESSP_TOOLS_DIR) +
                          "/lp_solve.py --lp " + lp_file.string() + " --out " +
                          (lp_dir / "instance_3_w1_opt.sol").string();
  REQUIRE(std::system(solve_cmd.c_str()) == 0);

  CliRun imported = run_cli("solve --instance " + inst_path.string() +
                                " --method opt --solutions " + lp_dir.string() +
                                " --out " + manual_out.string(),
                            dir.path());
  REQUIRE(imported.code == 0);

  essp::Json a = essp::load_json_file(builtin_out.string());
  essp::Json b = essp::load_json_file(manual_out.string());
  double obj_a = a.at("result").at("costs").at("objective").get<double>();
  double obj_b = b.at("result").at("costs").at("objective").get<double>();
  CHECK(obj_b == Approx(obj_a).epsilon(1e-9));
  CHECK(b.at("backend") == "manual");
  // A bare point proves feasibility, not optimality.
  CHECK(b.at("result").at("ward_info")[0].at("status") == "feasible");
  CHECK(b.at("result").at("all_optimal") == false);
}

TEST_CASE("cli estimation writes a report the solver can consume") {
  fixtures::TempDir dir("cli_estimate");
  fs::path train_dir = dir.path() / "train";
  CliRun gen = run_cli("generate --synthetic --seeds 0..1 --out " +
                           train_dir.string(), dir.path());
  REQUIRE(gen.code == 0);

  fs::path observed = dir.path() / "observed.json";
  {
    std::ofstream out(observed);
    out << "[40.0, 40.0, 40.0]\n";  // default shape has three facility types
  }
  fs::path report_path = dir.path() / "est" / "report.json";
  fs::create_directories(report_path.parent_path());

  CliRun est = run_cli("estimate --train " + train_dir.string() +
                           " --observed " + observed.string() +
                           " --grid 1,2 --out " + report_path.string(),
                       dir.path());
  REQUIRE(est.code == 0);
  CHECK_THAT(est.out, Catch::Matchers::ContainsSubstring("selected lambda"));

  essp::Json report = essp::load_json_file(report_path.string());
  double selected = report.at("selected_lambda").get<double>();
  CHECK((selected == 1.0 || selected == 2.0));
  CHECK(report.at("instance_count") == 2);
  CHECK(report.at("curve").size() == 2);

  fs::path curve = report_path.parent_path() / "lambda_curve.csv";
  REQUIRE(fs::exists(curve));
  CHECK_THAT(slurp(curve),
             Catch::Matchers::StartsWith("lambda,mse,op_cost_musd\n"));

  // The report feeds back into solve via --lambda-from.
  fs::path inst_path = train_dir / "instance_0.json";
  CliRun solve = run_cli("solve --instance " + inst_path.string() +
                             " --method nomove --lambda-from " +
                             report_path.string(),
                         dir.path());
  CHECK(solve.code == 0);
}

TEST_CASE("cli comparison table aggregates methods in order") {
  fixtures::TempDir dir("cli_compare");
  fs::path inst_path = generate_one(dir);
  fs::path csv_path = dir.path() / "compare.csv";
  fs::path results_dir = dir.path() / "results";

  CliRun run = run_cli("compare --instance " + inst_path.string() +
                           " --methods nomove,seqflp,binpack --out " +
                           csv_path.string() + " --results-dir " +
                           results_dir.string(),
                       dir.path());
  REQUIRE(run.code == 0);

  std::string csv = slurp(csv_path);
  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line ==
        "method,objective_k,evac_k,reloc_k,reloc_count,op_k,op_scaled_musd,time_s");
  REQUIRE(std::getline(lines, line));
  CHECK_THAT(line, Catch::Matchers::StartsWith("nomove,"));
  REQUIRE(std::getline(lines, line));
  CHECK_THAT(line, Catch::Matchers::StartsWith("seqflp,"));
  REQUIRE(std::getline(lines, line));
  CHECK_THAT(line, Catch::Matchers::StartsWith("binpack,"));
  CHECK_FALSE(std::getline(lines, line));

  CHECK(fs::exists(results_dir / "instance_3_nomove.json"));
  CHECK(fs::exists(results_dir / "instance_3_seqflp.json"));
  CHECK(fs::exists(results_dir / "instance_3_binpack.json"));

  // A failing method keeps the table shape and flips the exit code.
  CliRun bad = run_cli("compare --instance " + inst_path.string() +
                           " --methods nomove,bogus --out " +
                           (dir.path() / "bad.csv").string(),
                       dir.path());
  CHECK(bad.code == 1);
  CHECK_THAT(bad.err, Catch::Matchers::ContainsSubstring("unknown method"));
  CHECK_THAT(slurp(dir.path() / "bad.csv"),
             Catch::Matchers::ContainsSubstring("bogus,nan,nan,nan,nan,nan,nan,nan"));
}

TEST_CASE("cli report renders history and trajectories") {
  fixtures::TempDir dir("cli_report");
  fs::path inst_path = generate_one(dir);
  fs::path r_opt = dir.path() / "r_opt.json";
  fs::path r_nomove = dir.path() / "r_nomove.json";

  REQUIRE(run_cli("solve --instance " + inst_path.string() +
                      " --method opt --out " + r_opt.string(),
                  dir.path())
              .code == 0);
  REQUIRE(run_cli("solve --instance " + inst_path.string() +
                      " --method nomove --out " + r_nomove.string(),
                  dir.path())
              .code == 0);

  fs::path report_dir = dir.path() / "report";
  CliRun run = run_cli("report --instance " + inst_path.string() + " --result " +
                           r_opt.string() + " --result " + r_nomove.string() +
                           " --out-dir " + report_dir.string(),
                       dir.path());
  REQUIRE(run.code == 0);

  std::string history = slurp(report_dir / "history.csv");
  CHECK_THAT(history,
             Catch::Matchers::StartsWith("t,evacuees,shelters_opt,shelters_nomove\n"));
  // Header plus one row per step of the default four-step horizon.
  CHECK(std::count(history.begin(), history.end(), '\n') == 5);

  std::string traj = slurp(report_dir / "trajectories.csv");
  CHECK_THAT(traj, Catch::Matchers::StartsWith(
                       "method,t,from_x,from_y,to_x,to_y,persons,kind\n"));
  CHECK_THAT(traj, Catch::Matchers::ContainsSubstring(",evacuation"));
  CHECK_THAT(traj, Catch::Matchers::ContainsSubstring("nomove,0,"));

  // Results from a different instance are refused by hash.
  essp::Json tampered = essp::load_json_file(r_opt.string());
  tampered["instance_hash"] = "0000000000000000";
  fs::path tampered_path = dir.path() / "tampered.json";
  essp::save_json_file(tampered, tampered_path.string());
  CliRun bad = run_cli("report --instance " + inst_path.string() + " --result " +
                           tampered_path.string() + " --out-dir " +
                           (dir.path() / "bad").string(),
                       dir.path());
  CHECK(bad.code == 1);
  CHECK_THAT(bad.err, Catch::Matchers::ContainsSubstring("different instance"));
}
