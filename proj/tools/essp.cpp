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

// essp command line front end.
//
//   essp generate   write benchmark or synthetic instance files
//   essp solve      run one method on one instance
//   essp estimate   grid-search the movement-cost scale on a training set
//   essp compare    run several methods over an instance set, means per method
//   essp report     emit per-step history and movement trajectories as CSV
//
// Exit code 0 means every requested solve reached its requested status:
// optimality, or verified feasibility when a time limit or manual solution
// import makes optimality unknowable.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "essp/essp.hpp"

namespace fs = std::filesystem;
namespace methods = essp::methods;

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_digest(const std::string& s) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(s)));
  return buf;
}

// Seed lists are written either as an inclusive range `0..9` or as a comma
// list `0,3,7`.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  auto parse_one = [](const std::string& tok) {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("bad seed: " + tok);
    return static_cast<std::uint64_t>(v);
  };
  std::size_t dots = text.find("..");
  if (dots != std::string::npos) {
    std::uint64_t lo = parse_one(text.substr(0, dots));
    std::uint64_t hi = parse_one(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("seed range is empty: " + text);
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string tok = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (tok.empty()) throw std::invalid_argument("empty seed token in: " + text);
    seeds.push_back(parse_one(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (seeds.empty()) throw std::invalid_argument("no seeds given");
  return seeds;
}

// Grid syntax: `lo:hi:step` (inclusive of hi up to rounding) or a comma list.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (std::count(text.begin(), text.end(), ':') == 2) {
    std::size_t a = text.find(':');
    std::size_t b = text.find(':', a + 1);
    double lo = std::stod(text.substr(0, a));
    double hi = std::stod(text.substr(a + 1, b - a - 1));
    double step = std::stod(text.substr(b + 1));
    if (!(step > 0.0) || hi < lo) {
      throw std::invalid_argument("bad grid range: " + text);
    }
    for (double v = lo; v <= hi + 1e-9 * step; v += step) grid.push_back(v);
    return grid;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string tok = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (tok.empty()) throw std::invalid_argument("empty grid token in: " + text);
    grid.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return grid;
}

// Shared solver-selection flags.
struct BackendArgs {
  std::string backend = "builtin";
  std::string solver_cmd;
  std::string work_dir = "lp_work";
  double time_limit_s = 0.0;  // 0 = unlimited
  long node_limit = 0;        // 0 = unlimited
  bool aggregated = false;
  bool ungrouped_seqflp = false;
  bool lexicographic_nomove = false;
  int builtin_variable_limit = 5000;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--backend", backend, "MILP backend: builtin or external")
        ->check(CLI::IsMember({"builtin", "external"}));
    cmd->add_option("--solver-cmd", solver_cmd,
                    "external solver command template with {lp} and {sol} "
                    "placeholders (default: env ESSP_SOLVER_CMD)");
    cmd->add_option("--work-dir", work_dir,
                    "scratch directory for external LP/solution files");
    cmd->add_option("--time-limit", time_limit_s,
                    "per-solve time limit in seconds (0 = none)");
    cmd->add_option("--node-limit", node_limit,
                    "builtin branch and bound node limit (0 = none)");
    cmd->add_flag("--aggregated", aggregated,
                  "use the cohort-flow model for full-horizon solves");
    cmd->add_flag("--ungrouped-seqflp", ungrouped_seqflp,
                  "use per-evacuee binaries in the per-step subproblems");
    cmd->add_flag("--lexicographic-nomove", lexicographic_nomove,
                  "after the no-movement assignment, minimize operation cost "
                  "among its optima");
    cmd->add_option("--builtin-variable-limit", builtin_variable_limit,
                    "refuse builtin full-horizon solves above this many "
                    "variables");
  }

  std::unique_ptr<essp::SolverBackend> make_backend() const {
    if (backend == "builtin") return std::make_unique<essp::BuiltinBackend>();
    std::string tmpl = solver_cmd;
    if (tmpl.empty()) {
      const char* env = std::getenv("ESSP_SOLVER_CMD");
      if (env != nullptr) tmpl = env;
    }
    if (tmpl.empty()) {
      throw std::invalid_argument(
          "--backend external needs --solver-cmd or ESSP_SOLVER_CMD");
    }
    return std::make_unique<essp::ExternalCommandBackend>(tmpl, work_dir);
  }

  methods::RunOptions run_options(const std::string& label_prefix) const {
    methods::RunOptions opt;
    if (time_limit_s > 0.0) opt.limits.time_limit_s = time_limit_s;
    if (node_limit > 0) opt.limits.node_limit = node_limit;
    opt.aggregated = aggregated;
    opt.grouped_seqflp = !ungrouped_seqflp;
    opt.lexicographic_nomove = lexicographic_nomove;
    opt.builtin_variable_limit = builtin_variable_limit;
    opt.label_prefix = label_prefix;
    return opt;
  }

  bool time_limited() const { return time_limit_s > 0.0 || node_limit > 0; }
};

methods::MethodResult run_method(const std::string& method,
                                 const essp::Instance& inst,
                                 const essp::CostParams& params,
                                 essp::SolverBackend& backend,
                                 const methods::RunOptions& options) {
  if (method == "opt") return methods::run_opt(inst, params, backend, options);
  if (method == "seqflp") return methods::run_seqflp(inst, params, backend, options);
  if (method == "nomove") return methods::run_nomove(inst, params, backend, options);
  if (method == "binpack") return methods::run_binpack(inst, params, backend, options);
  throw std::invalid_argument("unknown method: " + method);
}

// A time-limited run may legitimately stop at a feasible incumbent; without a
// limit anything short of optimal is a failure.
bool reached_requested_status(const methods::MethodResult& result,
                              bool time_limited) {
  if (result.ward_info.empty()) return false;
  for (const methods::WardSolveInfo& info : result.ward_info) {
    if (info.status == essp::milp::SolveStatus::kOptimal) continue;
    if (time_limited && info.status == essp::milp::SolveStatus::kFeasible) continue;
    if (time_limited && info.status == essp::milp::SolveStatus::kTimedOut) continue;
    return false;
  }
  return true;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string tok = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!tok.empty()) out.push_back(tok);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Instance files from an explicit list plus an optional directory, sorted by
// path for a stable processing order.
std::vector<fs::path> collect_instances(const std::vector<std::string>& files,
                                        const std::string& dir) {
  std::vector<fs::path> paths;
  for (const std::string& f : files) paths.emplace_back(f);
  if (!dir.empty()) {
    if (!fs::is_directory(dir)) {
      throw std::invalid_argument("not a directory: " + dir);
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      std::string name = entry.path().filename().string();
      if (name.rfind("instance_", 0) == 0 && entry.path().extension() == ".json") {
        paths.push_back(entry.path());
      }
    }
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw std::invalid_argument("no instance files found");
  return paths;
}

double resolve_lambda(const essp::Instance& inst, double lambda_flag,
                      const std::string& lambda_from) {
  if (lambda_flag > 0.0) return lambda_flag;
  if (!lambda_from.empty()) {
    essp::Json report = essp::load_json_file(lambda_from);
    if (!report.contains("selected_lambda")) {
      throw std::invalid_argument(lambda_from + " has no selected_lambda");
    }
    return report.at("selected_lambda").get<double>();
  }
  if (inst.lambda.has_value()) return *inst.lambda;
  throw std::invalid_argument(
      "no movement-cost scale: pass --lambda, --lambda-from, or use an "
      "instance that carries one");
}

essp::Json result_file_json(const methods::MethodResult& result,
                            const essp::Instance& inst,
                            const std::string& instance_file,
                            const essp::CostParams& params,
                            const std::string& backend_name) {
  essp::Json j;
  j["instance_file"] = instance_file;
  j["instance_hash"] = essp::instance_digest(inst);
  j["lambda"] = params.lambda;
  j["alpha"] = params.alpha;
  j["backend"] = backend_name;
  j["result"] = methods::to_json(result);
  return j;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  bool hanshin = false;
  bool synthetic = false;
  std::string config_path;
  std::string seeds_text;
  std::string out_dir;
  essp::SyntheticParams synth;
  double synth_lambda = 0.0;
};

int cmd_generate(const GenerateArgs& args) {
  if (args.hanshin == args.synthetic) {
    throw std::invalid_argument("pick exactly one of --hanshin / --synthetic");
  }
  std::vector<std::uint64_t> seeds = parse_seeds(args.seeds_text);
  fs::create_directories(args.out_dir);

  essp::Json manifest;
  essp::Json files = essp::Json::array();
  std::string config_dump;

  essp::HanshinConfig hanshin_config;
  essp::SyntheticParams synth = args.synth;
  if (args.hanshin) {
    hanshin_config = args.config_path.empty()
                         ? essp::HanshinConfig::standard()
                         : essp::read_hanshin_config(args.config_path);
    hanshin_config.validate();
    config_dump = essp::to_json(hanshin_config).dump();
    manifest["kind"] = "hanshin";
  } else {
    if (args.synth_lambda > 0.0) synth.lambda = args.synth_lambda;
    essp::Json sj;
    sj["wards"] = synth.wards;
    sj["shelters_per_ward"] = synth.shelters_per_ward;
    sj["evacuees_per_ward"] = synth.evacuees_per_ward;
    sj["horizon"] = synth.horizon;
    sj["facility_type_count"] = synth.facility_type_count;
    sj["capacity_min"] = synth.capacity_min;
    sj["capacity_max"] = synth.capacity_max;
    sj["op_cost_min"] = synth.op_cost_min;
    sj["op_cost_max"] = synth.op_cost_max;
    sj["side_km"] = synth.side_km;
    sj["alpha"] = synth.alpha;
    sj["lambda"] = synth.lambda ? essp::Json(*synth.lambda) : essp::Json(nullptr);
    config_dump = sj.dump();
    manifest["kind"] = "synthetic";
  }
  manifest["config_hash"] = hex_digest(config_dump);
  manifest["seeds"] = seeds;

  for (std::uint64_t seed : seeds) {
    essp::Instance inst = args.hanshin
                              ? essp::generate_hanshin(hanshin_config, seed)
                              : essp::generate_synthetic(synth, seed);
    std::string name = "instance_" + std::to_string(seed) + ".json";
    fs::path path = fs::path(args.out_dir) / name;
    essp::write_instance(inst, path.string());
    essp::Json entry;
    entry["seed"] = seed;
    entry["file"] = name;
    entry["instance_hash"] = essp::instance_digest(inst);
    files.push_back(entry);
  }
  manifest["files"] = files;
  essp::save_json_file(manifest, (fs::path(args.out_dir) / "manifest.json").string());
  std::cout << "wrote " << seeds.size() << " instance files to " << args.out_dir
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string instance_path;
  std::string method;
  double lambda = 0.0;
  std::string lambda_from;
  double alpha = 0.0;
  std::string out_path;
  std::string export_lp_dir;
  std::string solutions_dir;
  BackendArgs backend;
};

// Manual file exchange, step 1: write one LP file per ward and stop. Only the
// full-horizon model has this mode; the other methods chain several solves
// whose inputs depend on earlier outputs, so a one-shot file exchange cannot
// represent them.
int export_lp_files(const SolveArgs& args, const essp::Instance& inst,
                    const essp::CostParams& params, const std::string& stem) {
  if (args.method != "opt") {
    throw std::invalid_argument("--export-lp supports only --method opt");
  }
  fs::create_directories(args.export_lp_dir);
  for (const essp::WardInstance& ward : inst.wards) {
    std::string name = stem + "_w" + std::to_string(ward.id) + "_opt.lp";
    fs::path path = fs::path(args.export_lp_dir) / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    if (args.backend.aggregated) {
      methods::AggregatedOptBuild build =
          methods::build_opt_aggregated(inst, ward, params);
      out << essp::milp::export_lp(build.model);
    } else {
      methods::OptBuild build = methods::build_opt(inst, ward, params);
      out << essp::milp::export_lp(build.model);
    }
    std::cout << "wrote " << path.string() << "\n";
  }
  std::cout << "solve each file, then rerun with --solutions <dir> (files "
            << "named <lp-stem>.sol)\n";
  return 0;
}

// Manual file exchange, step 2: import `<stem>_w<id>_opt.sol` per ward,
// verify each point against the model, and assemble the result. Optimality
// cannot be checked from a bare point, so ward statuses stay `feasible`.
methods::MethodResult import_solution_files(const SolveArgs& args,
                                            const essp::Instance& inst,
                                            const essp::CostParams& params,
                                            const std::string& stem) {
  if (args.method != "opt") {
    throw std::invalid_argument("--solutions supports only --method opt");
  }
  methods::MethodResult result;
  result.method = "opt";
  for (const essp::WardInstance& ward : inst.wards) {
    std::string name = stem + "_w" + std::to_string(ward.id) + "_opt.sol";
    fs::path path = fs::path(args.solutions_dir) / name;
    std::ifstream in(path);
    if (!in) {
      throw std::runtime_error("missing solution file " + path.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());

    essp::milp::MilpSolution sol;
    essp::Schedule ward_sched;
    if (args.backend.aggregated) {
      methods::AggregatedOptBuild build =
          methods::build_opt_aggregated(inst, ward, params);
      sol = essp::milp::import_solution(build.model, text);
      ward_sched = build.decode(sol.values, ward);
    } else {
      methods::OptBuild build = methods::build_opt(inst, ward, params);
      sol = essp::milp::import_solution(build.model, text);
      ward_sched = build.decode(sol.values, ward);
    }
    methods::WardSolveInfo info;
    info.ward = ward.id;
    info.step = "opt";
    info.status = sol.status;
    info.objective = sol.objective;
    info.best_bound = sol.best_bound;
    result.ward_info.push_back(info);
    result.solver_objective_sum += sol.objective;
    for (const auto& [n, path_vec] : ward_sched.positions) {
      result.schedule.positions[n] = path_vec;
    }
    for (const auto& [m, last] : ward_sched.open_until) {
      result.schedule.open_until[m] = last;
    }
  }
  result.costs = essp::evaluate_schedule(inst, result.schedule, params);
  return result;
}

int cmd_solve(const SolveArgs& args) {
  essp::Instance inst = essp::read_instance(args.instance_path);
  double lambda = resolve_lambda(inst, args.lambda, args.lambda_from);
  essp::CostParams params = essp::cost_params(inst, lambda);
  if (args.alpha > 0.0) {
    params.alpha = args.alpha;
    params.check();
  }
  std::string stem = fs::path(args.instance_path).stem().string();

  if (!args.export_lp_dir.empty()) {
    return export_lp_files(args, inst, params, stem);
  }

  methods::MethodResult result;
  std::string backend_name;
  bool ok = false;
  if (!args.solutions_dir.empty()) {
    result = import_solution_files(args, inst, params, stem);
    backend_name = "manual";
    ok = !result.ward_info.empty();
  } else {
    std::unique_ptr<essp::SolverBackend> backend = args.backend.make_backend();
    result = run_method(args.method, inst, params, *backend,
                        args.backend.run_options(stem));
    backend_name = backend->name();
    ok = reached_requested_status(result, args.backend.time_limited());
  }

  if (!args.out_path.empty()) {
    essp::save_json_file(
        result_file_json(result, inst, args.instance_path, params, backend_name),
        args.out_path);
  }
  std::cout << result.method << ": objective " << result.costs.objective
            << " (evacuation " << result.costs.evacuation_cost << ", relocation "
            << result.costs.relocation_cost << ", operation "
            << result.costs.operation_cost << ")\n";
  if (!ok) {
    std::cerr << "solve did not reach the requested status\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateArgs {
  std::vector<std::string> instance_files;
  std::string train_dir;
  std::string observed_path;
  std::string grid_text = "250:5000:250";
  bool step_days = false;
  bool anchors = false;
  std::string out_path;
  std::string csv_path;
  BackendArgs backend;
};

int cmd_estimate(const EstimateArgs& args) {
  std::vector<fs::path> paths =
      collect_instances(args.instance_files, args.train_dir);
  std::vector<essp::Instance> train;
  for (const fs::path& p : paths) train.push_back(essp::read_instance(p.string()));

  std::vector<double> observed;
  if (!args.observed_path.empty()) {
    observed = essp::load_json_file(args.observed_path).get<std::vector<double>>();
  } else {
    for (const essp::FacilityType& ft : train.front().facility_types) {
      observed.push_back(ft.real_occupied_days);
    }
  }

  essp::EstimationConfig config;
  config.apply_step_days = args.step_days;
  config.anchors = args.anchors;
  config.run = args.backend.run_options("estimate");

  std::unique_ptr<essp::SolverBackend> backend = args.backend.make_backend();
  essp::EstimationReport report = essp::estimate_lambda(
      train, observed, parse_grid(args.grid_text), config, *backend);

  essp::save_json_file(essp::to_json(report), args.out_path);
  std::string csv_path = args.csv_path;
  if (csv_path.empty()) {
    csv_path = (fs::path(args.out_path).parent_path() / "lambda_curve.csv").string();
  }
  essp::lambda_curve_csv(report).save(csv_path);
  std::cout << "selected lambda " << report.selected_lambda << " (mse "
            << report.selected_mse << ") over " << report.instance_count
            << " instances\n";
  return 0;
}

// ---------------------------------------------------------------------------
// compare

struct CompareArgs {
  std::vector<std::string> instance_files;
  std::string dir;
  std::string methods_text = "opt,seqflp,nomove,binpack";
  double lambda = 0.0;
  std::string lambda_from;
  double alpha = 0.0;
  std::string out_path;
  std::string results_dir;
  BackendArgs backend;
};

int cmd_compare(const CompareArgs& args) {
  std::vector<fs::path> paths = collect_instances(args.instance_files, args.dir);
  std::vector<std::string> method_names = split_list(args.methods_text);
  if (method_names.empty()) throw std::invalid_argument("no methods given");
  if (!args.results_dir.empty()) fs::create_directories(args.results_dir);

  std::unique_ptr<essp::SolverBackend> backend = args.backend.make_backend();
  bool any_failed = false;

  struct Acc {
    double objective = 0.0, evac = 0.0, reloc = 0.0, op = 0.0;
    double reloc_count = 0.0, op_scaled = 0.0, time_s = 0.0;
    int n = 0;
  };
  std::map<std::string, Acc> acc;

  for (const fs::path& path : paths) {
    essp::Instance inst = essp::read_instance(path.string());
    double lambda = resolve_lambda(inst, args.lambda, args.lambda_from);
    essp::CostParams params = essp::cost_params(inst, lambda);
    if (args.alpha > 0.0) {
      params.alpha = args.alpha;
      params.check();
    }
    std::string stem = path.stem().string();
    for (const std::string& method : method_names) {
      try {
        methods::MethodResult result = run_method(
            method, inst, params, *backend, args.backend.run_options(stem));
        if (!reached_requested_status(result, args.backend.time_limited())) {
          throw std::runtime_error("did not reach the requested status");
        }
        Acc& a = acc[method];
        a.objective += result.costs.objective;
        a.evac += result.costs.evacuation_cost;
        a.reloc += result.costs.relocation_cost;
        a.op += result.costs.operation_cost;
        a.reloc_count += static_cast<double>(result.costs.relocation_count);
        a.op_scaled += essp::scaled_operation_cost(result.schedule, inst);
        a.time_s += result.wall_time_s;
        a.n += 1;
        if (!args.results_dir.empty()) {
          fs::path out = fs::path(args.results_dir) /
                         (stem + "_" + method + ".json");
          essp::save_json_file(result_file_json(result, inst, path.string(),
                                                params, backend->name()),
                               out.string());
        }
      } catch (const std::exception& e) {
        any_failed = true;
        std::cerr << stem << " " << method << ": " << e.what() << "\n";
      }
    }
  }

  essp::csv::Table table({"method", "objective_k", "evac_k", "reloc_k",
                          "reloc_count", "op_k", "op_scaled_musd", "time_s"});
  for (const std::string& method : method_names) {
    auto it = acc.find(method);
    if (it == acc.end() || it->second.n == 0) {
      table.row({method, "nan", "nan", "nan", "nan", "nan", "nan", "nan"});
      continue;
    }
    const Acc& a = it->second;
    double n = a.n;
    table.row({method, essp::csv::num(a.objective / n / 1e3),
               essp::csv::num(a.evac / n / 1e3),
               essp::csv::num(a.reloc / n / 1e3),
               essp::csv::num(a.reloc_count / n),
               essp::csv::num(a.op / n / 1e3),
               essp::csv::num(a.op_scaled / n / 1e6),
               essp::csv::num(a.time_s / n)});
  }
  table.save(args.out_path);
  std::cout << "wrote " << args.out_path << " over " << paths.size()
            << " instances\n";
  return any_failed ? 1 : 0;
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
  std::string instance_path;
  std::vector<std::string> result_paths;
  std::string out_dir;
};

int cmd_report(const ReportArgs& args) {
  essp::Instance inst = essp::read_instance(args.instance_path);
  essp::InstanceIndex index(inst);
  std::string digest = essp::instance_digest(inst);

  struct Loaded {
    std::string method;
    essp::Schedule schedule;
  };
  std::vector<Loaded> results;
  for (const std::string& rp : args.result_paths) {
    essp::Json j = essp::load_json_file(rp);
    if (!j.contains("instance_hash") || !j.contains("result")) {
      throw std::invalid_argument(rp + " is not a solve result file");
    }
    if (j.at("instance_hash").get<std::string>() != digest) {
      throw std::invalid_argument(
          rp + " was computed from a different instance than " +
          args.instance_path);
    }
    Loaded loaded;
    loaded.method = j.at("result").at("method").get<std::string>();
    loaded.schedule = essp::schedule_from_json(j.at("result").at("schedule"));
    results.push_back(std::move(loaded));
  }
  if (results.empty()) throw std::invalid_argument("no result files given");
  fs::create_directories(args.out_dir);

  // Present evacuees per step; everyone sheltered at all counts from step 1.
  std::vector<std::string> header = {"t", "evacuees"};
  for (const Loaded& r : results) header.push_back("shelters_" + r.method);
  essp::csv::Table history(header);
  for (int t = 0; t < inst.horizon; ++t) {
    int present = 0;
    for (const essp::WardInstance& ward : inst.wards) {
      present += essp::present_count(ward, std::max(t, 1));
    }
    std::vector<std::string> row = {essp::csv::num(t), essp::csv::num(present)};
    for (const Loaded& r : results) {
      int open = 0;
      for (const auto& [m, last] : r.schedule.open_until) {
        if (last >= t) ++open;
      }
      row.push_back(essp::csv::num(open));
    }
    history.row(row);
  }
  history.save((fs::path(args.out_dir) / "history.csv").string());

  // Movement rows aggregated by (method, departure step, endpoints).
  essp::csv::Table traj({"method", "t", "from_x", "from_y", "to_x", "to_y",
                         "persons", "kind"});
  for (const Loaded& r : results) {
    std::map<std::tuple<int, int, int>, int> moves;  // (t, from, to) -> persons
    for (const essp::WardInstance& ward : inst.wards) {
      for (const essp::Evacuee& ev : ward.evacuees) {
        auto it = r.schedule.positions.find(ev.id);
        if (it == r.schedule.positions.end() || it->second.empty()) continue;
        const std::vector<int>& path = it->second;
        moves[{0, ev.origin, path[0]}] += 1;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          if (path[i] != path[i + 1]) {
            moves[{static_cast<int>(i) + 1, path[i], path[i + 1]}] += 1;
          }
        }
      }
    }
    for (const auto& [key, persons] : moves) {
      const auto& [t, from, to] = key;
      const essp::Location& a = index.location(from);
      const essp::Location& b = index.location(to);
      traj.row({r.method, essp::csv::num(t), essp::csv::num(a.coord[0]),
                essp::csv::num(a.coord[1]), essp::csv::num(b.coord[0]),
                essp::csv::num(b.coord[1]), essp::csv::num(persons),
                t == 0 ? "evacuation" : "relocation"});
    }
  }
  traj.save((fs::path(args.out_dir) / "trajectories.csv").string());
  std::cout << "wrote history.csv and trajectories.csv to " << args.out_dir
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evacuation shelter scheduling: generate, solve, estimate, "
               "compare, report"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "write instance files");
  generate->add_flag("--hanshin", gen.hanshin, "Kobe-area benchmark instances");
  generate->add_flag("--synthetic", gen.synthetic, "random test instances");
  generate->add_option("--config", gen.config_path,
                       "benchmark blueprint JSON (default: built-in)");
  generate->add_option("--seeds", gen.seeds_text, "seed list: 0..9 or 1,4,7")
      ->required();
  generate->add_option("--out", gen.out_dir, "output directory")->required();
  generate->add_option("--wards", gen.synth.wards, "synthetic: ward count");
  generate->add_option("--shelters", gen.synth.shelters_per_ward,
                       "synthetic: shelters per ward");
  generate->add_option("--evacuees", gen.synth.evacuees_per_ward,
                       "synthetic: evacuees per ward");
  generate->add_option("--horizon", gen.synth.horizon, "synthetic: steps");
  generate->add_option("--types", gen.synth.facility_type_count,
                       "synthetic: facility type count");
  generate->add_option("--cap-min", gen.synth.capacity_min,
                       "synthetic: smallest shelter capacity");
  generate->add_option("--cap-max", gen.synth.capacity_max,
                       "synthetic: largest shelter capacity");
  generate->add_option("--f-min", gen.synth.op_cost_min,
                       "synthetic: smallest per-step operation cost");
  generate->add_option("--f-max", gen.synth.op_cost_max,
                       "synthetic: largest per-step operation cost");
  generate->add_option("--side", gen.synth.side_km, "synthetic: ward side km");
  generate->add_option("--alpha", gen.synth.alpha,
                       "synthetic: evacuation cost multiplier");
  generate->add_option("--lambda", gen.synth_lambda,
                       "synthetic: movement cost scale stored in the instance");

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "run one method");
  solve_cmd->add_option("--instance", solve.instance_path, "instance JSON file")
      ->required();
  solve_cmd->add_option("--method", solve.method, "opt|seqflp|nomove|binpack")
      ->required()
      ->check(CLI::IsMember({"opt", "seqflp", "nomove", "binpack"}));
  solve_cmd->add_option("--lambda", solve.lambda, "movement cost scale");
  solve_cmd->add_option("--lambda-from", solve.lambda_from,
                        "estimation report JSON to take the scale from");
  solve_cmd->add_option("--alpha", solve.alpha, "evacuation multiplier override");
  solve_cmd->add_option("--out", solve.out_path, "result JSON path");
  solve_cmd->add_option("--export-lp", solve.export_lp_dir,
                        "write per-ward LP files to this directory and stop "
                        "(opt only)");
  solve_cmd->add_option("--solutions", solve.solutions_dir,
                        "import per-ward solution files from this directory "
                        "(opt only)");
  solve.backend.add_flags(solve_cmd);

  EstimateArgs est;
  CLI::App* est_cmd = app.add_subcommand("estimate", "grid-search the scale");
  est_cmd->add_option("--train", est.train_dir,
                      "directory of training instance_<seed>.json files");
  est_cmd->add_option("--instance", est.instance_files,
                      "explicit training instance file (repeatable)");
  est_cmd->add_option("--observed", est.observed_path,
                      "observed per-type occupied totals, JSON array "
                      "(default: the catalog's real occupied days)");
  est_cmd->add_option("--grid", est.grid_text,
                      "candidate scales: lo:hi:step or comma list");
  est_cmd->add_flag("--step-days", est.step_days,
                    "denominate estimated occupancy in days, not steps");
  est_cmd->add_flag("--anchors", est.anchors,
                    "also report baseline operation-cost anchors");
  est_cmd->add_option("--out", est.out_path, "report JSON path")->required();
  est_cmd->add_option("--csv", est.csv_path,
                      "curve CSV path (default: lambda_curve.csv next to the "
                      "report)");
  est.backend.add_flags(est_cmd);

  CompareArgs cmp;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "mean costs per method");
  cmp_cmd->add_option("--dir", cmp.dir,
                      "directory of instance_<seed>.json files");
  cmp_cmd->add_option("--instance", cmp.instance_files,
                      "explicit instance file (repeatable)");
  cmp_cmd->add_option("--methods", cmp.methods_text, "comma list of methods");
  cmp_cmd->add_option("--lambda", cmp.lambda, "movement cost scale");
  cmp_cmd->add_option("--lambda-from", cmp.lambda_from,
                      "estimation report JSON to take the scale from");
  cmp_cmd->add_option("--alpha", cmp.alpha, "evacuation multiplier override");
  cmp_cmd->add_option("--out", cmp.out_path, "comparison CSV path")->required();
  cmp_cmd->add_option("--results-dir", cmp.results_dir,
                      "also write per-run result JSON files here");
  cmp.backend.add_flags(cmp_cmd);

  ReportArgs rep;
  CLI::App* rep_cmd = app.add_subcommand("report", "history and trajectories");
  rep_cmd->add_option("--instance", rep.instance_path, "instance JSON file")
      ->required();
  rep_cmd->add_option("--result", rep.result_paths,
                      "solve result JSON file (repeatable)")
      ->required();
  rep_cmd->add_option("--out-dir", rep.out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return cmd_generate(gen);
    if (solve_cmd->parsed()) return cmd_solve(solve);
    if (est_cmd->parsed()) return cmd_estimate(est);
    if (cmp_cmd->parsed()) return cmd_compare(cmp);
    if (rep_cmd->parsed()) return cmd_report(rep);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
