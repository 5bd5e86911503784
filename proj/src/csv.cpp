// cfmimo: joint AP-UE association and power control for uplink cell-free massive MIMO
// Copyright (C) 2026 The cfmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cfmimo/csv.hpp"

#include "cfmimo/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace cfmimo {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_matrix_csv(const std::string& path, const MatrixX<double>& matrix) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (Index r = 0; r < matrix.rows(); ++r) {
    for (Index c = 0; c < matrix.cols(); ++c) {
      if (c) out << ',';
      out << format_double(matrix(r, c));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

MatrixX<double> read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("non-numeric cell '" + cell + "' in " + path);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ConfigError("ragged matrix in " + path);
    rows.push_back(std::move(row));
  }
  MatrixX<double> m(static_cast<Index>(rows.size()),
                    rows.empty() ? 0 : static_cast<Index>(rows.front().size()));
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  return m;
}

}  // namespace cfmimo
