// Copyright 2026 The qlyap Authors
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


#ifndef QLYAP_OUTPUT_HPP
#define QLYAP_OUTPUT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "qlyap/simulator.hpp"

namespace qlyap {

/// Writes to a sibling temp file and renames it into place, so readers never
/// see a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string trajectory_csv_header(std::size_t num_controls);
/// `t,fidelity,V,u_1..u_m,T_1..T_m,mode,flags`; numbers with 17 significant digits.
std::string trajectory_csv(const Trajectory& traj, std::size_t num_controls);
std::string format_number(double x);

struct CsvRow {
  double t = 0.0;
  double fidelity = 0.0;
  double v = 0.0;
  std::vector<double> u;
  std::vector<double> tk;
  std::string mode;
  unsigned flags = 0;
};

/// Parses a trajectory CSV written by trajectory_csv; the header must match m.
std::vector<CsvRow> read_trajectory_csv(const std::string& text, std::size_t num_controls);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal static SVG line chart.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::vector<Series>& series);

}  // namespace qlyap

#endif  // QLYAP_OUTPUT_HPP
