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


#include "qlyap/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include <fmt/format.h>

namespace qlyap {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError(fmt::format("trajectory CSV line {}: '{}' is not a number", line, s));
  }
  return v;
}

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
    out << content;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw std::runtime_error(fmt::format("write to {} failed", tmp.string()));
    }
  }
  fs::rename(tmp, path);
}

std::string format_number(double x) { return fmt::format("{:.17g}", x); }

std::string trajectory_csv_header(std::size_t m) {
  std::string h = "t,fidelity,V";
  for (std::size_t k = 1; k <= m; ++k) h += fmt::format(",u_{}", k);
  for (std::size_t k = 1; k <= m; ++k) h += fmt::format(",T_{}", k);
  h += ",mode,flags";
  return h;
}

std::string trajectory_csv(const Trajectory& traj, std::size_t m) {
  std::string out = trajectory_csv_header(m) + "\n";
  for (const auto& s : traj.samples) {
    out += format_number(s.t);
    out += ',' + format_number(s.fidelity);
    out += ',' + format_number(s.v);
    for (std::size_t k = 0; k < m; ++k) out += ',' + format_number(s.u.at(k));
    for (std::size_t k = 0; k < m; ++k) out += ',' + format_number(s.tk.at(k));
    out += ',' + s.mode + ',' + flags_to_string(s.flags) + '\n';
  }
  return out;
}

std::vector<CsvRow> read_trajectory_csv(const std::string& text, std::size_t m) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("trajectory CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != trajectory_csv_header(m)) {
    throw ValidationError(fmt::format("trajectory CSV: header '{}' does not match '{}'", line,
                                      trajectory_csv_header(m)));
  }
  std::vector<CsvRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 5 + 2 * m) {
      throw ValidationError(fmt::format("trajectory CSV line {}: expected {} columns, got {}",
                                        lineno, 5 + 2 * m, cells.size()));
    }
    CsvRow r;
    r.t = parse_double(cells[0], lineno);
    r.fidelity = parse_double(cells[1], lineno);
    r.v = parse_double(cells[2], lineno);
    for (std::size_t k = 0; k < m; ++k) r.u.push_back(parse_double(cells[3 + k], lineno));
    for (std::size_t k = 0; k < m; ++k) r.tk.push_back(parse_double(cells[3 + m + k], lineno));
    r.mode = cells[3 + 2 * m];
    r.flags = parse_flags(cells[4 + 2 * m]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::vector<Series>& series) {
  constexpr double width = 720.0;
  constexpr double height = 360.0;
  constexpr double left = 70.0;
  constexpr double right = 150.0;
  constexpr double top = 40.0;
  constexpr double bottom = 50.0;
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -x0;
  double y0 = x0;
  double y1 = -x0;
  for (const auto& s : series) {
    for (double x : s.x) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
    }
    for (double y : s.y) {
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!std::isfinite(x0)) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      width, height);
  svg += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width, height);
  svg += fmt::format("<text x=\"{}\" y=\"22\" font-size=\"15\">{}</text>\n", left,
                     xml_escape(title));
  svg += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>\n", left,
      top, pw, ph);
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0;
    const double fy = y0 + (y1 - y0) * i / 4.0;
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.4g}</text>\n",
                       px(fx), top + ph + 16, fx);
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.4g}</text>\n",
                       left - 6, py(fy) + 4, fy);
  }
  svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
                     left + pw / 2, height - 12, xml_escape(x_label));
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    std::string pts;
    const std::size_t n = std::min(s.x.size(), s.y.size());
    // Thin long series to at most ~2000 vertices.
    const std::size_t stride = std::max<std::size_t>(1, n / 2000);
    for (std::size_t j = 0; j < n; j += stride) {
      pts += fmt::format("{:.2f},{:.2f} ", px(s.x[j]), py(s.y[j]));
    }
    if (n > 0 && (n - 1) % stride != 0) pts += fmt::format("{:.2f},{:.2f}", px(s.x[n - 1]), py(s.y[n - 1]));
    svg += fmt::format(
        "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color, pts);
    const double ly = top + 14.0 + 18.0 * static_cast<double>(i);
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" "
                       "stroke-width=\"2\"/>\n",
                       left + pw + 10, ly, left + pw + 30, color);
    svg += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", left + pw + 36, ly + 4,
                       xml_escape(s.name));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace qlyap
