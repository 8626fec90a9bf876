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

#ifndef ESSP_MILP_LP_FORMAT_HPP_
#define ESSP_MILP_LP_FORMAT_HPP_

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "essp/milp/model.hpp"

namespace essp::milp {

namespace detail {

// Shortest round-trip decimal form, identical on every platform; this is
// what keeps exported files byte-stable.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) {
    throw std::runtime_error("number formatting failed");
  }
  return std::string(buf, ptr);
}

// Accumulates tokens into lines wrapped well below the 255-character limit
// some LP readers still enforce. Continuation lines begin with spaces.
class LineWriter {
 public:
  explicit LineWriter(std::string* out) : out_(out) {}

  void token(const std::string& tok) {
    if (width_ > 0 && width_ + 1 + tok.size() > 200) {
      *out_ += "\n ";
      width_ = 1;
    }
    if (width_ > 0) {
      *out_ += " ";
      ++width_;
    }
    *out_ += tok;
    width_ += tok.size();
  }

  void finish() {
    if (width_ > 0) {
      *out_ += "\n";
      width_ = 0;
    }
  }

 private:
  std::string* out_;
  std::size_t width_ = 0;
};

inline void write_expr(LineWriter& w, const std::vector<LinTerm>& terms,
                       const MilpModel& model) {
  bool first = true;
  for (const LinTerm& t : terms) {
    double c = t.coeff;
    if (c == 0.0) continue;
    if (first) {
      if (c < 0.0) w.token("-");
      first = false;
    } else {
      w.token(c < 0.0 ? "-" : "+");
    }
    double mag = std::fabs(c);
    if (mag != 1.0) w.token(format_number(mag));
    w.token(model.variables()[static_cast<std::size_t>(t.var)].name);
  }
  if (first) {
    // All-zero expression; emit an explicit zero times some variable so the
    // line stays grammatical.
    w.token("0");
    w.token(model.variables().front().name);
  }
}

}  // namespace detail

// Serializes a model as CPLEX LP text with Minimize / Subject To / Bounds /
// Binaries / Generals sections. Variable and constraint order follow the
// model, so output is byte-identical for identical models.
//
// Naming scheme used by the shipped formulations (documented here because the
// files are consumed by external tools):
//   x_<t>_<m>_<n>    evacuee n sheltered at location m at step t
//   y_<t>_<m>        location m open at step t
//   z_<t>_<m>_<mp>_<n>  evacuee n moves m -> mp between steps t and t+1
//   w_<t>_<m>_<mp>_<tau>  cohort flow of return-time tau between m and mp
inline std::string export_lp(const MilpModel& model) {
  if (model.num_variables() == 0) {
    throw std::invalid_argument("cannot export a model with no variables");
  }
  std::string out;
  out += "\\ essp MILP export\n";
  out += "Minimize\n";
  {
    detail::LineWriter w(&out);
    w.token("obj:");
    detail::write_expr(w, model.objective().merged_terms(), model);
    w.finish();
  }
  out += "Subject To\n";
  for (const Constraint& c : model.constraints()) {
    detail::LineWriter w(&out);
    w.token(c.name + ":");
    detail::write_expr(w, c.expr.merged_terms(), model);
    switch (c.sense) {
      case Sense::kLessEq: w.token("<="); break;
      case Sense::kEq: w.token("="); break;
      case Sense::kGreaterEq: w.token(">="); break;
    }
    w.token(detail::format_number(c.rhs));
    w.finish();
  }
  out += "Bounds\n";
  for (const Variable& v : model.variables()) {
    // Binaries are [0,1] via the Binaries section; only tightened ones (e.g.
    // fixed by an earlier phase) need an explicit bounds line.
    if (v.kind == VarKind::kBinary && v.lower == 0.0 && v.upper == 1.0) {
      continue;
    }
    detail::LineWriter w(&out);
    w.token(detail::format_number(v.lower));
    w.token("<=");
    w.token(v.name);
    w.token("<=");
    w.token(detail::format_number(v.upper));
    w.finish();
  }
  bool any_binary = false;
  for (const Variable& v : model.variables()) {
    any_binary = any_binary || v.kind == VarKind::kBinary;
  }
  if (any_binary) {
    out += "Binaries\n";
    detail::LineWriter w(&out);
    for (const Variable& v : model.variables()) {
      if (v.kind == VarKind::kBinary) w.token(v.name);
    }
    w.finish();
  }
  bool any_general = false;
  for (const Variable& v : model.variables()) {
    any_general = any_general || v.kind == VarKind::kInteger;
  }
  if (any_general) {
    out += "Generals\n";
    detail::LineWriter w(&out);
    for (const Variable& v : model.variables()) {
      if (v.kind == VarKind::kInteger) w.token(v.name);
    }
    w.finish();
  }
  out += "End\n";
  return out;
}

// Parses whitespace-separated `name value` lines. Lines that are empty or
// start with '#' or '\' are skipped. Variables not mentioned default to 0.
// The parsed point is validated: integrality (1e-6, then snapped), variable
// bounds, and every constraint within 1e-6 (scaled by the rhs magnitude).
// Violations throw with the offending line or constraint named.
inline MilpSolution import_solution(const MilpModel& model,
                                    const std::string& text) {
  std::vector<double> values(static_cast<std::size_t>(model.num_variables()),
                             0.0);
  std::vector<bool> seen(values.size(), false);

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) continue;
    if (name[0] == '#' || name[0] == '\\') continue;
    double value = 0.0;
    if (!(ls >> value)) {
      throw std::invalid_argument("solution line " + std::to_string(lineno) +
                                  ": missing numeric value for \"" + name +
                                  "\"");
    }
    std::string extra;
    if (ls >> extra) {
      throw std::invalid_argument("solution line " + std::to_string(lineno) +
                                  ": trailing token \"" + extra + "\"");
    }
    int idx = model.find_variable(name);
    if (idx < 0) {
      throw std::invalid_argument("solution line " + std::to_string(lineno) +
                                  ": unknown variable \"" + name + "\"");
    }
    if (seen[static_cast<std::size_t>(idx)]) {
      throw std::invalid_argument("solution line " + std::to_string(lineno) +
                                  ": duplicate assignment for \"" + name +
                                  "\"");
    }
    seen[static_cast<std::size_t>(idx)] = true;
    values[static_cast<std::size_t>(idx)] = value;
  }

  constexpr double kTol = 1e-6;
  for (int j = 0; j < model.num_variables(); ++j) {
    const Variable& v = model.variables()[static_cast<std::size_t>(j)];
    double& val = values[static_cast<std::size_t>(j)];
    if (std::fabs(val - std::round(val)) > kTol) {
      throw std::invalid_argument("variable " + v.name +
                                  " is not integral: " +
                                  detail::format_number(val));
    }
    val = std::round(val);
    if (val < v.lower - kTol || val > v.upper + kTol) {
      throw std::invalid_argument("variable " + v.name + " violates bounds [" +
                                  detail::format_number(v.lower) + ", " +
                                  detail::format_number(v.upper) + "]");
    }
  }
  for (const Constraint& c : model.constraints()) {
    double lhs = c.expr.evaluate(values);
    double tol = kTol * std::max(1.0, std::fabs(c.rhs));
    bool ok = true;
    switch (c.sense) {
      case Sense::kLessEq: ok = lhs <= c.rhs + tol; break;
      case Sense::kEq: ok = std::fabs(lhs - c.rhs) <= tol; break;
      case Sense::kGreaterEq: ok = lhs >= c.rhs - tol; break;
    }
    if (!ok) {
      throw std::invalid_argument(
          "constraint " + c.name + " violated: lhs " +
          detail::format_number(lhs) + " vs rhs " +
          detail::format_number(c.rhs));
    }
  }

  MilpSolution out;
  out.status = SolveStatus::kFeasible;
  out.values = std::move(values);
  out.objective = model.eval_objective(out.values);
  out.message = "imported and verified against all constraints";
  return out;
}

}  // namespace essp::milp

#endif  // ESSP_MILP_LP_FORMAT_HPP_
