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

#include "pqm/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <locale>
#include <sstream>

namespace pqm::io {
namespace {

using Field = std::optional<double> TraceRecord::*;

struct Column {
  const char* name;
  Field field;  // nullptr for t
};

constexpr std::array<Column, 10> kSchema{{
    {"t", nullptr},
    {"n_in", &TraceRecord::n_in},
    {"n_out", &TraceRecord::n_out},
    {"R", &TraceRecord::R},
    {"R_prime", &TraceRecord::R_prime},
    {"c_l1_in", &TraceRecord::c_l1_in},
    {"c_l1_out", &TraceRecord::c_l1_out},
    {"conc_in", &TraceRecord::conc_in},
    {"conc_out", &TraceRecord::conc_out},
    {"p_meas", &TraceRecord::p_meas},
}};

std::vector<const Column*> present_columns(std::span<const TraceRecord> records) {
  if (records.empty()) throw std::invalid_argument("csv: no records");
  std::vector<const Column*> cols;
  for (const Column& c : kSchema) {
    if (c.field == nullptr || (records.front().*c.field).has_value()) cols.push_back(&c);
  }
  for (const TraceRecord& r : records) {
    for (const Column& c : kSchema) {
      if (c.field == nullptr) continue;
      const bool expected = std::find(cols.begin(), cols.end(), &c) != cols.end();
      if ((r.*c.field).has_value() != expected) {
        throw std::invalid_argument(std::string("csv: records disagree on column ") + c.name);
      }
    }
  }
  return cols;
}

void write_comments(std::ostream& out, std::span<const std::string> comments) {
  for (const std::string& c : comments) out << "# " << c << '\n';
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

// "--" may not appear inside an XML comment.
std::string comment_safe(std::string s) {
  for (std::size_t pos = s.find("--"); pos != std::string::npos; pos = s.find("--", pos)) {
    s.replace(pos, 2, "- -");
  }
  return s;
}

std::string fixed(double v, int digits) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, digits);
  return std::string(buf.data(), res.ptr);
}

std::string tick_label(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 4);
  return std::string(buf.data(), res.ptr);
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::vector<std::string> csv_columns(std::span<const TraceRecord> records) {
  std::vector<std::string> names;
  for (const Column* c : present_columns(records)) names.emplace_back(c->name);
  return names;
}

void write_csv(std::ostream& out, std::span<const TraceRecord> records, std::span<const std::string> comments) {
  const std::vector<const Column*> cols = present_columns(records);
  write_comments(out, comments);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i]->name;
  out << '\n';
  for (const TraceRecord& r : records) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const double v = cols[i]->field ? *(r.*(cols[i]->field)) : r.t;
      if (!std::isfinite(v)) throw std::invalid_argument("csv: non-finite value");
      out << (i ? "," : "") << format_double(v);
    }
    out << '\n';
  }
}

void write_table(std::ostream& out, std::span<const std::string> columns, std::span<const std::vector<double>> rows,
                 std::span<const std::string> comments) {
  if (rows.empty()) throw std::invalid_argument("table: no rows");
  write_comments(out, comments);
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw std::invalid_argument("table: row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

void write_file(const std::string& path, const std::string& contents) {
  if (path == "-") {
    std::cout << contents;
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to stdout");
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << contents;
  f.close();
  if (!f) throw IoError("failed writing " + path);
}

std::string render_svg(const SvgPlot& plot) {
  if (plot.points.size() < 2) throw std::invalid_argument("svg: need at least two points");
  double xmin = plot.points.front().x, xmax = xmin, ymin = plot.points.front().y, ymax = ymin;
  for (const Point2& p : plot.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw std::invalid_argument("svg: non-finite point");
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  if (xmax - xmin < 1e-12) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  constexpr double kWidth = 640, kHeight = 480;
  constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  for (const std::string& c : plot.comments) s << "<!-- " << comment_safe(c) << " -->\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  s << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "  <text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"16\">" << xml_escape(plot.title) << "</text>\n";

  // Axes box and ticks.
  s << "  <g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  s << "    <rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph << "\"/>\n";
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double fx = kLeft + pw * i / kTicks;
    const double fy = kTop + ph * i / kTicks;
    s << "    <line x1=\"" << fixed(fx, 2) << "\" y1=\"" << kTop + ph << "\" x2=\"" << fixed(fx, 2) << "\" y2=\""
      << kTop + ph + 5 << "\"/>\n";
    s << "    <line x1=\"" << kLeft - 5 << "\" y1=\"" << fixed(fy, 2) << "\" x2=\"" << kLeft << "\" y2=\""
      << fixed(fy, 2) << "\"/>\n";
  }
  s << "  </g>\n";
  s << "  <g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= kTicks; ++i) {
    const double vx = xmin + (xmax - xmin) * i / kTicks;
    const double vy = ymax - (ymax - ymin) * i / kTicks;
    s << "    <text x=\"" << fixed(kLeft + pw * i / kTicks, 2) << "\" y=\"" << kTop + ph + 18
      << "\" text-anchor=\"middle\">" << tick_label(vx) << "</text>\n";
    s << "    <text x=\"" << kLeft - 8 << "\" y=\"" << fixed(kTop + ph * i / kTicks + 4, 2)
      << "\" text-anchor=\"end\">" << tick_label(vy) << "</text>\n";
  }
  s << "  </g>\n";
  s << "  <text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(plot.x_label)
    << "</text>\n";
  s << "  <text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"13\" transform=\"rotate(-90 18 " << kTop + ph / 2 << ")\">" << xml_escape(plot.y_label)
    << "</text>\n";

  s << "  <" << (plot.closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" "
    << "points=\"";
  for (std::size_t i = 0; i < plot.points.size(); ++i) {
    s << (i ? " " : "") << fixed(sx(plot.points[i].x), 3) << ',' << fixed(sy(plot.points[i].y), 3);
  }
  s << "\"/>\n";
  if (plot.markers) {
    s << "  <g fill=\"#c0392b\">\n";
    for (const Point2& p : plot.points) {
      s << "    <circle cx=\"" << fixed(sx(p.x), 3) << "\" cy=\"" << fixed(sy(p.y), 3) << "\" r=\"3\"/>\n";
    }
    s << "  </g>\n";
  }
  if (plot.form_factor) {
    s << "  <text x=\"" << kLeft + pw - 6 << "\" y=\"" << kTop + 16
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"13\">F = " << fixed(*plot.form_factor, 4)
      << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace pqm::io
