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

#ifndef ESSP_CSV_HPP_
#define ESSP_CSV_HPP_

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace essp {
namespace csv {

// Numbers are written with 6 significant digits so that regenerated files
// diff cleanly even when low-order floating point bits move.
inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline std::string num(long long v) { return std::to_string(v); }
inline std::string num(int v) { return std::to_string(v); }

// Minimal CSV assembly: the formats written here never need quoting, so a
// cell containing a comma, quote, or newline is a caller bug and rejected.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : width_(header.size()) {
    append_row(header);
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) {
      throw std::invalid_argument("csv row has " + std::to_string(cells.size()) +
                                  " cells, expected " + std::to_string(width_));
    }
    append_row(cells);
  }

  const std::string& str() const { return out_; }

  void save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << out_;
  }

 private:
  void append_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      for (char c : cells[i]) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
          throw std::invalid_argument("csv cell needs quoting, refusing: " + cells[i]);
        }
      }
      if (i) out_ += ',';
      out_ += cells[i];
    }
    out_ += '\n';
  }

  std::size_t width_;
  std::string out_;
};

}  // namespace csv
}  // namespace essp

#endif  // ESSP_CSV_HPP_
