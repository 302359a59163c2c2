// Copyright 2026 The pqm-sim Authors
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

#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pqm/hysteresis.hpp"
#include "pqm/trace.hpp"

namespace pqm::io {

// Output file could not be opened or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest text that reads back to the same double; always '.' as decimal
// separator.
std::string format_double(double v);

// Column names present in the records, in the fixed schema order
// t,n_in,n_out,R,R_prime,c_l1_in,c_l1_out,conc_in,conc_out,p_meas. Throws
// std::invalid_argument for empty input or records that populate different
// fields.
std::vector<std::string> csv_columns(std::span<const TraceRecord> records);

// `comments` are written first, each prefixed with "# ".
void write_csv(std::ostream& out, std::span<const TraceRecord> records,
               std::span<const std::string> comments = {});

// Generic table form used for sweeps.
void write_table(std::ostream& out, std::span<const std::string> columns,
                 std::span<const std::vector<double>> rows, std::span<const std::string> comments = {});

// "-" writes to stdout. Throws IoError when the file cannot be written.
void write_file(const std::string& path, const std::string& contents);

struct SvgPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Point2> points;
  bool closed = false;   // draw as a closed polygon outline
  bool markers = false;  // circle at every point
  std::optional<double> form_factor;
  std::vector<std::string> comments;
};

// Static SVG with axes, ticks, title and polyline. Throws
// std::invalid_argument for fewer than two points or non-finite values.
std::string render_svg(const SvgPlot& plot);

}  // namespace pqm::io
