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

#ifndef ESSP_BACKEND_HPP_
#define ESSP_BACKEND_HPP_

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef _WIN32
#include <sys/wait.h>
#endif

#include "essp/milp/branch_and_bound.hpp"
#include "essp/milp/lp_format.hpp"
#include "essp/milp/model.hpp"

namespace essp {

// One MILP solve. `label` identifies the subproblem (ward, method, step) and
// becomes part of file names when the backend exchanges files, so it must be
// stable across runs for reproducible artifacts.
class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual milp::MilpSolution solve(const milp::MilpModel& model,
                                   const milp::SolveLimits& limits,
                                   const std::string& label) = 0;
  virtual std::string name() const = 0;
};

class BuiltinBackend final : public SolverBackend {
 public:
  milp::MilpSolution solve(const milp::MilpModel& model,
                           const milp::SolveLimits& limits,
                           const std::string& /*label*/) override {
    return milp::solve_builtin(model, limits);
  }

  std::string name() const override { return "builtin"; }
};

// Runs an external MILP solver through LP-file exchange. The command template
// must contain `{lp}` and `{sol}` placeholders; `{time}` is replaced with the
// time limit in seconds when present. Exit-code contract:
//   0  solved to optimality, solution file written
//   2  proven infeasible
//   3  time limit hit, best incumbent written
//   4  time limit hit, no incumbent
// Imported points are re-validated against every constraint before being
// trusted, so a misbehaving solver cannot smuggle in an infeasible answer.
class ExternalCommandBackend final : public SolverBackend {
 public:
  ExternalCommandBackend(std::string command_template,
                         std::filesystem::path work_dir)
      : template_(std::move(command_template)), work_dir_(std::move(work_dir)) {
    if (template_.find("{lp}") == std::string::npos ||
        template_.find("{sol}") == std::string::npos) {
      throw std::invalid_argument(
          "solver command template must contain {lp} and {sol}");
    }
    std::filesystem::create_directories(work_dir_);
  }

  milp::MilpSolution solve(const milp::MilpModel& model,
                           const milp::SolveLimits& limits,
                           const std::string& label) override {
    std::string stem = sanitize(label);
    if (stem.empty()) stem = "model_" + std::to_string(counter_);
    ++counter_;
    std::filesystem::path lp_path = work_dir_ / (stem + ".lp");
    std::filesystem::path sol_path = work_dir_ / (stem + ".sol");

    {
      std::ofstream out(lp_path);
      if (!out) {
        throw std::runtime_error("cannot write " + lp_path.string());
      }
      out << milp::export_lp(model);
    }
    std::error_code ec;
    std::filesystem::remove(sol_path, ec);

    std::string cmd = template_;
    replace_all(&cmd, "{lp}", lp_path.string());
    replace_all(&cmd, "{sol}", sol_path.string());
    replace_all(&cmd, "{time}", time_arg(limits));

    int rc = std::system(cmd.c_str());
    int code = exit_code(rc);
    if (code == 2 || code == 4) {
      milp::MilpSolution out;
      out.status = code == 2 ? milp::SolveStatus::kInfeasible
                             : milp::SolveStatus::kTimedOut;
      out.message = code == 2 ? "external solver reports infeasible"
                              : "external solver hit its limit with no point";
      return out;
    }
    if (code != 0 && code != 3) {
      throw std::runtime_error("external solver failed (exit " +
                               std::to_string(code) + "): " + cmd);
    }
    std::ifstream in(sol_path);
    if (!in) {
      throw std::runtime_error("external solver wrote no solution file: " +
                               sol_path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    milp::MilpSolution out = milp::import_solution(model, text.str());
    if (code == 0) {
      out.status = milp::SolveStatus::kOptimal;
      out.best_bound = out.objective;
      out.message = "external solver optimum, feasibility verified locally";
    } else {
      out.status = milp::SolveStatus::kTimedOut;
      out.message = "external solver incumbent at time limit";
    }
    return out;
  }

  std::string name() const override { return "external"; }

 private:
  static std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s) {
      bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
      out += ok ? c : '_';
    }
    return out;
  }

  static void replace_all(std::string* s, const std::string& from,
                          const std::string& to) {
    std::size_t pos = 0;
    while ((pos = s->find(from, pos)) != std::string::npos) {
      s->replace(pos, from.size(), to);
      pos += to.size();
    }
  }

  static std::string time_arg(const milp::SolveLimits& limits) {
    if (!std::isfinite(limits.time_limit_s)) return "0";
    return milp::detail::format_number(limits.time_limit_s);
  }

  static int exit_code(int system_rc) {
#ifdef _WIN32
    return system_rc;
#else
    if (system_rc == -1) return -1;
    return WEXITSTATUS(system_rc);
#endif
  }

  std::string template_;
  std::filesystem::path work_dir_;
  long counter_ = 0;
};

}  // namespace essp

#endif  // ESSP_BACKEND_HPP_
