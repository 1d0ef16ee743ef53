// Copyright 2026 The pushforge Authors
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


#ifndef PUSHFORGE_REPORT_HPP_
#define PUSHFORGE_REPORT_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace pushforge {

// A result table. Cells are kept as text so numeric formatting is fixed at
// insertion time and rows compare byte for byte across runs.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments;  // emitted as leading "# ..." lines

  void add_row(std::vector<std::string> row);
  std::size_t column(std::string_view name) const;  // throws if missing
  std::vector<double> numeric_column(std::string_view name) const;
};

std::string fmt(double v);  // shortest round-trip form
std::string fmt(long long v);
inline std::string fmt(int v) { return fmt(static_cast<long long>(v)); }
inline std::string fmt(std::size_t v) { return fmt(static_cast<long long>(v)); }

// RFC 4180 quoting: fields holding a comma, quote, CR or LF are quoted and
// inner quotes doubled.
std::string csv_field(std::string_view s);
std::string to_csv(const Table& t);
Table parse_csv(std::string_view text);

struct PlotSeries {
  std::string name;
  std::vector<double> x, y;
};

// Self-contained SVG with log-log axes. Non-positive points are skipped.
std::string svg_loglog(const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, const std::vector<PlotSeries>& series);

// Writes `content` to `path`, refusing to replace an existing file.
void write_new_file(const std::string& path, std::string_view content);

}  // namespace pushforge

#endif  // PUSHFORGE_REPORT_HPP_
