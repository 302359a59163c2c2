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

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pqm/trace.hpp"

// Geometry of closed response curves: closing sampled loops, locating pinch
// points, splitting self-intersecting loops into simple lobes, and the form
// factor F = 4 pi A / P^2.

namespace pqm {

struct Point2 {
  double x;
  double y;
};

inline constexpr double kAnalyticClosureTol = 1e-9;
inline constexpr double kSampledClosureTol = 1e-3;
inline constexpr std::size_t kMinLoopPoints = 8;
inline constexpr std::size_t kMaxPinchPoints = 16;

// Pinch points closer than this fraction of the bounding-box diagonal are
// merged.
inline constexpr double kPinchMergeRelTol = 1e-9;

// A vertex whose two edges meet at less than this angle (degrees) is a cusp:
// the curve reverses onto itself there.
inline constexpr double kCuspAngleDeg = 30.0;

// Closed polyline stored as coordinate columns. The last point repeats the
// first exactly, so edge i runs from point i to point i + 1.
struct ParametricLoop {
  std::vector<double> x;
  std::vector<double> y;
  double closure_tol = kAnalyticClosureTol;

  std::size_t size() const { return x.size(); }
  std::size_t edge_count() const { return x.empty() ? 0 : x.size() - 1; }
  Point2 point(std::size_t i) const { return {x[i], y[i]}; }
  double diagonal() const;
};

// For traces whose final sample sits one period after the first. The final
// point is snapped onto the first. Throws std::invalid_argument for fewer
// than 8 points or an endpoint gap above closure_tol.
ParametricLoop close_loop(std::span<const Point2> points, double closure_tol = kAnalyticClosureTol);

// For samples covering one period without the endpoint: appends the first
// point. Throws std::invalid_argument for fewer than 8 points.
ParametricLoop close_periodic(std::span<const Point2> points,
                              double closure_tol = kSampledClosureTol);

// Width-3 moving average over a periodic sample sequence (no endpoint).
std::vector<Point2> smooth3_periodic(std::span<const Point2> points);

enum class PinchKind { crossing, touch, cusp };

struct PinchPoint {
  Point2 at;
  PinchKind kind;
};

// Transversal crossings of non-adjacent edges, points where the curve meets
// itself at a vertex (excluding stretches where it runs back over itself),
// and cusps. Merged within kPinchMergeRelTol of the bounding-box diagonal,
// ordered by first occurrence along the curve.
std::vector<PinchPoint> find_pinch_points(const ParametricLoop& loop);
std::vector<Point2> self_intersections(const ParametricLoop& loop);

struct Lobe {
  std::vector<Point2> points;  // open ring; the closing edge is implied
  double signed_area;
  double perimeter;
  int orientation;  // +1 counter-clockwise, -1 clockwise, 0 degenerate
};

// Splits the loop at its crossing and touch points into simple closed
// sub-loops. Cusps do not split. Throws std::domain_error when the loop has
// more than kMaxPinchPoints such points.
std::vector<Lobe> decompose_lobes(const ParametricLoop& loop);

struct LobeSummary {
  double area;
  double perimeter;
  int orientation;
};

struct FormFactorReport {
  double area;       // sum of absolute lobe areas
  double perimeter;  // arc length of the whole curve
  double form_factor;
  std::vector<LobeSummary> lobes;
  std::vector<Point2> pinch_points;
};

// Throws std::invalid_argument when the perimeter is zero.
FormFactorReport form_factor(const ParametricLoop& loop);

enum class TraceField { t, n_in, n_out, R, R_prime, c_l1_in, c_l1_out, conc_in, conc_out, p_meas };

// (x, y) pairs from two record fields. Throws std::invalid_argument when a
// record lacks either field.
std::vector<Point2> points_from_trace(std::span<const TraceRecord> records, TraceField x,
                                      TraceField y);

using LoopGenerator = std::function<ParametricLoop(double t_int)>;

struct SweepPoint {
  double t_int;
  FormFactorReport report;
};

// Evaluates the generator at every grid value, concurrently when `parallel`
// is set; results follow grid order. Grid values must lie in (0, 2 T_osc].
std::vector<SweepPoint> sweep_form_factor(const LoopGenerator& generator,
                                          std::span<const double> t_int_grid, double t_osc,
                                          bool parallel = true);

}  // namespace pqm
