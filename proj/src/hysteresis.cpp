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

#include "pqm/hysteresis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <thread>

#include "pqm/kernels.hpp"

namespace pqm {
namespace {

constexpr std::size_t kNoEdge = std::numeric_limits<std::size_t>::max();

// A vertex touches an edge when it lies within this fraction of the edge
// length from it.
constexpr double kTouchRelTol = 1e-9;
// Edges whose directions differ by less than this (radians) are parallel.
constexpr double kParallelTol = 1e-6;
// Edge parameters this close to 0 or 1 are snapped onto the vertex.
constexpr double kVertexSnap = 1e-12;

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

struct Hit {
  Point2 at;
  PinchKind kind;
  std::size_t edge_a;
  double ta;
  std::size_t edge_b;  // kNoEdge for cusps
  double tb;
};

struct Pinch {
  Point2 at;
  PinchKind kind;
  bool node = false;  // crossing or touch: the curve visits this point twice
  double first_seen = std::numeric_limits<double>::infinity();
};

struct PinchAnalysis {
  std::vector<Pinch> pinches;
  std::vector<std::size_t> hit_pinch;  // hit index -> pinch index
  std::vector<Hit> hits;
};

class LoopGeometry {
 public:
  // Endpoints closer than `side_tol` to the other edge's line count as on it,
  // so numerical noise along a doubled-back stretch is not a crossing.
  LoopGeometry(const ParametricLoop& loop, double side_tol)
      : loop_(loop), m_(loop.edge_count()), side_tol_(side_tol) {}

  std::size_t edges() const { return m_; }
  Point2 vertex(std::size_t v) const { return loop_.point(v % m_); }
  double dx(std::size_t e) const { return loop_.x[e + 1] - loop_.x[e]; }
  double dy(std::size_t e) const { return loop_.y[e + 1] - loop_.y[e]; }
  double length(std::size_t e) const { return std::hypot(dx(e), dy(e)); }

  bool adjacent(std::size_t a, std::size_t b) const {
    return a == b || (a + 1) % m_ == b || (b + 1) % m_ == a;
  }

  bool parallel(std::size_t a, std::size_t b) const {
    const double la = length(a);
    const double lb = length(b);
    if (la == 0.0 || lb == 0.0) return true;
    return std::abs(cross(dx(a), dy(a), dx(b), dy(b))) <= kParallelTol * la * lb;
  }

  void test_pair(std::size_t a, std::size_t b, std::vector<Hit>& out) const {
    const Point2 p = vertex(a);
    const Point2 r = vertex(b);
    const double ux = dx(a), uy = dy(a), vx = dx(b), vy = dy(b);
    const double eps_a = side_tol_ * length(b);
    const double eps_b = side_tol_ * length(a);

    const double d1 = cross(vx, vy, p.x - r.x, p.y - r.y);
    const double d2 = cross(vx, vy, p.x + ux - r.x, p.y + uy - r.y);
    const double d3 = cross(ux, uy, r.x - p.x, r.y - p.y);
    const double d4 = cross(ux, uy, r.x + vx - p.x, r.y + vy - p.y);
    const bool split_ab = (d1 > eps_a && d2 < -eps_a) || (d1 < -eps_a && d2 > eps_a);
    const bool split_ba = (d3 > eps_b && d4 < -eps_b) || (d3 < -eps_b && d4 > eps_b);
    if (split_ab && split_ba) {
      const double ta = d1 / (d1 - d2);
      const double tb = d3 / (d3 - d4);
      out.push_back({{p.x + ta * ux, p.y + ta * uy}, PinchKind::crossing, a, ta, b, tb});
      return;
    }
    test_touch(a, b, out);
    test_touch(a + 1, b, out);
    test_touch(b, a, out);
    test_touch(b + 1, a, out);
  }

  void test_touch(std::size_t v, std::size_t e, std::vector<Hit>& out) const {
    v %= m_;
    const Point2 at = vertex(v);
    const Point2 r = vertex(e);
    const double vx = dx(e), vy = dy(e);
    const double l2 = vx * vx + vy * vy;
    if (l2 == 0.0) return;
    double t = ((at.x - r.x) * vx + (at.y - r.y) * vy) / l2;
    t = std::clamp(t, 0.0, 1.0);
    const double dist = std::hypot(r.x + t * vx - at.x, r.y + t * vy - at.y);
    if (dist > kTouchRelTol * std::sqrt(l2)) return;
    // The curve running back over itself is not a pinch.
    const std::size_t prev = (v + m_ - 1) % m_;
    if (parallel(prev, e) || parallel(v, e)) return;
    out.push_back({at, PinchKind::touch, v, 0.0, e, t});
  }

  void test_cusp(std::size_t v, std::vector<Hit>& out) const {
    const std::size_t prev = (v + m_ - 1) % m_;
    const double ax = -dx(prev), ay = -dy(prev);
    const double bx = dx(v), by = dy(v);
    if ((ax == 0.0 && ay == 0.0) || (bx == 0.0 && by == 0.0)) return;
    const double angle = std::atan2(std::abs(cross(ax, ay, bx, by)), ax * bx + ay * by);
    if (angle < kCuspAngleDeg * std::numbers::pi / 180.0) {
      out.push_back({vertex(v), PinchKind::cusp, v, 0.0, kNoEdge, 0.0});
    }
  }

 private:
  const ParametricLoop& loop_;
  std::size_t m_;
  double side_tol_;
};

void check_closed(const ParametricLoop& loop) {
  if (loop.x.size() != loop.y.size()) throw std::invalid_argument("loop: coordinate columns differ in length");
  if (loop.size() < kMinLoopPoints) throw std::invalid_argument("loop: fewer than 8 points");
  if (loop.x.front() != loop.x.back() || loop.y.front() != loop.y.back()) {
    throw std::invalid_argument("loop: not closed");
  }
}

PinchAnalysis analyze(const ParametricLoop& loop) {
  check_closed(loop);
  const double pad = kPinchMergeRelTol * loop.diagonal();
  const LoopGeometry geo(loop, pad);
  const std::size_t m = geo.edges();

  // Sweep and prune over x extents.
  std::vector<std::size_t> order(m);
  std::vector<double> lo(m), hi(m), ylo(m), yhi(m);
  for (std::size_t e = 0; e < m; ++e) {
    order[e] = e;
    lo[e] = std::min(loop.x[e], loop.x[e + 1]);
    hi[e] = std::max(loop.x[e], loop.x[e + 1]);
    ylo[e] = std::min(loop.y[e], loop.y[e + 1]);
    yhi[e] = std::max(loop.y[e], loop.y[e + 1]);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lo[a] < lo[b]; });

  PinchAnalysis result;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t a = order[i];
    for (std::size_t k = i + 1; k < m && lo[order[k]] <= hi[a] + pad; ++k) {
      const std::size_t b = order[k];
      if (geo.adjacent(a, b)) continue;
      if (ylo[b] > yhi[a] + pad || ylo[a] > yhi[b] + pad) continue;
      geo.test_pair(std::min(a, b), std::max(a, b), result.hits);
    }
  }
  for (std::size_t v = 0; v < m; ++v) geo.test_cusp(v, result.hits);

  const double merge2 = pad * pad;
  for (const Hit& h : result.hits) {
    std::size_t id = result.pinches.size();
    for (std::size_t j = 0; j < result.pinches.size(); ++j) {
      const double ddx = result.pinches[j].at.x - h.at.x;
      const double ddy = result.pinches[j].at.y - h.at.y;
      if (ddx * ddx + ddy * ddy <= merge2) {
        id = j;
        break;
      }
    }
    if (id == result.pinches.size()) result.pinches.push_back({h.at, h.kind});
    Pinch& p = result.pinches[id];
    if (h.kind != PinchKind::cusp) {
      p.node = true;
      if (p.kind == PinchKind::cusp) p.kind = h.kind;
    }
    p.first_seen = std::min(p.first_seen, static_cast<double>(h.edge_a) + h.ta);
    if (h.edge_b != kNoEdge) p.first_seen = std::min(p.first_seen, static_cast<double>(h.edge_b) + h.tb);
    result.hit_pinch.push_back(id);
  }
  return result;
}

double ring_length(const std::vector<Point2>& ring) {
  double total = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point2& a = ring[i];
    const Point2& b = ring[(i + 1) % ring.size()];
    total += std::hypot(b.x - a.x, b.y - a.y);
  }
  return total;
}

Lobe make_lobe(std::vector<Point2> ring) {
  std::vector<double> xs(ring.size()), ys(ring.size());
  for (std::size_t i = 0; i < ring.size(); ++i) {
    xs[i] = ring[i].x;
    ys[i] = ring[i].y;
  }
  const double area = ring.size() >= 3 ? kernels::shoelace_area(xs, ys) : 0.0;
  const double perimeter = ring_length(ring);
  const int orientation = area > 0.0 ? 1 : (area < 0.0 ? -1 : 0);
  return Lobe{std::move(ring), area, perimeter, orientation};
}

std::vector<Lobe> split_lobes(const ParametricLoop& loop, const PinchAnalysis& analysis) {
  std::size_t nodes = 0;
  for (const Pinch& p : analysis.pinches) nodes += p.node ? 1 : 0;
  if (nodes > kMaxPinchPoints) {
    throw std::domain_error("decompose_lobes: more than 16 pinch points, loop is under-sampled");
  }

  const std::size_t m = loop.edge_count();
  constexpr long kPlain = -1;
  std::vector<long> vertex_id(m, kPlain);
  std::vector<std::vector<std::pair<double, long>>> inserted(m);
  auto place = [&](std::size_t edge, double t, long id) {
    if (t <= kVertexSnap) {
      if (vertex_id[edge] == kPlain) vertex_id[edge] = id;
    } else if (t >= 1.0 - kVertexSnap) {
      const std::size_t v = (edge + 1) % m;
      if (vertex_id[v] == kPlain) vertex_id[v] = id;
    } else {
      inserted[edge].emplace_back(t, id);
    }
  };
  for (std::size_t h = 0; h < analysis.hits.size(); ++h) {
    const Hit& hit = analysis.hits[h];
    if (hit.kind == PinchKind::cusp) continue;
    const long id = static_cast<long>(analysis.hit_pinch[h]);
    place(hit.edge_a, hit.ta, id);
    place(hit.edge_b, hit.tb, id);
  }

  struct Node {
    Point2 at;
    long id;
  };
  std::vector<Node> seq;
  seq.reserve(m + 2 * analysis.hits.size());
  for (std::size_t e = 0; e < m; ++e) {
    seq.push_back({loop.point(e), vertex_id[e]});
    auto& ins = inserted[e];
    std::sort(ins.begin(), ins.end());
    for (const auto& [t, id] : ins) seq.push_back({analysis.pinches[static_cast<std::size_t>(id)].at, id});
  }
  // Several hits can land on one pinch in a row; keep one visit.
  std::vector<Node> walk;
  walk.reserve(seq.size());
  for (const Node& n : seq) {
    if (!walk.empty() && n.id != kPlain && walk.back().id == n.id) continue;
    walk.push_back(n);
  }
  while (walk.size() > 1 && walk.back().id != kPlain && walk.back().id == walk.front().id) walk.pop_back();

  std::vector<Lobe> lobes;
  std::vector<Node> stack;
  std::vector<std::size_t> position(analysis.pinches.size(), kNoEdge);
  for (const Node& n : walk) {
    if (n.id != kPlain) {
      const std::size_t pos = position[static_cast<std::size_t>(n.id)];
      if (pos != kNoEdge && pos < stack.size() && stack[pos].id == n.id) {
        std::vector<Point2> ring;
        ring.reserve(stack.size() - pos);
        for (std::size_t i = pos; i < stack.size(); ++i) ring.push_back(stack[i].at);
        lobes.push_back(make_lobe(std::move(ring)));
        for (std::size_t i = pos + 1; i < stack.size(); ++i) {
          if (stack[i].id != kPlain) position[static_cast<std::size_t>(stack[i].id)] = kNoEdge;
        }
        stack.resize(pos + 1);
        continue;
      }
      position[static_cast<std::size_t>(n.id)] = stack.size();
    }
    stack.push_back(n);
  }
  if (stack.size() > 1) {
    std::vector<Point2> ring;
    ring.reserve(stack.size());
    for (const Node& n : stack) ring.push_back(n.at);
    lobes.push_back(make_lobe(std::move(ring)));
  }
  return lobes;
}

std::vector<Point2> drop_repeats(std::span<const Point2> points) {
  std::vector<Point2> out;
  out.reserve(points.size());
  for (const Point2& p : points) {
    if (!out.empty() && out.back().x == p.x && out.back().y == p.y) continue;
    out.push_back(p);
  }
  return out;
}

ParametricLoop from_points(const std::vector<Point2>& pts, double closure_tol) {
  ParametricLoop loop;
  loop.closure_tol = closure_tol;
  loop.x.reserve(pts.size());
  loop.y.reserve(pts.size());
  for (const Point2& p : pts) {
    loop.x.push_back(p.x);
    loop.y.push_back(p.y);
  }
  return loop;
}

std::optional<double> field_of(const TraceRecord& r, TraceField f) {
  switch (f) {
    case TraceField::t:
      return r.t;
    case TraceField::n_in:
      return r.n_in;
    case TraceField::n_out:
      return r.n_out;
    case TraceField::R:
      return r.R;
    case TraceField::R_prime:
      return r.R_prime;
    case TraceField::c_l1_in:
      return r.c_l1_in;
    case TraceField::c_l1_out:
      return r.c_l1_out;
    case TraceField::conc_in:
      return r.conc_in;
    case TraceField::conc_out:
      return r.conc_out;
    case TraceField::p_meas:
      return r.p_meas;
  }
  return std::nullopt;
}

}  // namespace

double ParametricLoop::diagonal() const {
  if (x.empty()) return 0.0;
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  return std::hypot(*xmax - *xmin, *ymax - *ymin);
}

ParametricLoop close_loop(std::span<const Point2> points, double closure_tol) {
  if (points.size() < kMinLoopPoints) throw std::invalid_argument("close_loop: fewer than 8 points");
  const Point2 first = points.front();
  const Point2 last = points.back();
  const double gap = std::hypot(last.x - first.x, last.y - first.y);
  if (!(gap <= closure_tol)) {
    throw std::invalid_argument("close_loop: endpoint gap exceeds closure tolerance, trace is not periodic");
  }
  std::vector<Point2> pts = drop_repeats(points.first(points.size() - 1));
  pts.push_back(first);
  return from_points(pts, closure_tol);
}

ParametricLoop close_periodic(std::span<const Point2> points, double closure_tol) {
  if (points.size() < kMinLoopPoints) throw std::invalid_argument("close_periodic: fewer than 8 points");
  std::vector<Point2> pts = drop_repeats(points);
  if (pts.size() > 1 && pts.back().x == pts.front().x && pts.back().y == pts.front().y) pts.pop_back();
  pts.push_back(pts.front());
  return from_points(pts, closure_tol);
}

std::vector<Point2> smooth3_periodic(std::span<const Point2> points) {
  const std::size_t n = points.size();
  std::vector<Point2> out(n);
  if (n < 3) {
    out.assign(points.begin(), points.end());
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = points[(i + n - 1) % n];
    const Point2& b = points[i];
    const Point2& c = points[(i + 1) % n];
    out[i] = {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
  }
  return out;
}

std::vector<PinchPoint> find_pinch_points(const ParametricLoop& loop) {
  PinchAnalysis analysis = analyze(loop);
  std::sort(analysis.pinches.begin(), analysis.pinches.end(),
            [](const Pinch& a, const Pinch& b) { return a.first_seen < b.first_seen; });
  std::vector<PinchPoint> out;
  out.reserve(analysis.pinches.size());
  for (const Pinch& p : analysis.pinches) out.push_back({p.at, p.kind});
  return out;
}

std::vector<Point2> self_intersections(const ParametricLoop& loop) {
  std::vector<Point2> out;
  for (const PinchPoint& p : find_pinch_points(loop)) out.push_back(p.at);
  return out;
}

std::vector<Lobe> decompose_lobes(const ParametricLoop& loop) { return split_lobes(loop, analyze(loop)); }

FormFactorReport form_factor(const ParametricLoop& loop) {
  PinchAnalysis analysis = analyze(loop);
  const std::vector<Lobe> lobes = split_lobes(loop, analysis);

  FormFactorReport report{};
  report.perimeter = kernels::polyline_length(loop.x, loop.y);
  if (!(report.perimeter > 0.0)) throw std::invalid_argument("form_factor: zero perimeter");
  report.area = 0.0;
  for (const Lobe& l : lobes) {
    report.area += std::abs(l.signed_area);
    report.lobes.push_back({std::abs(l.signed_area), l.perimeter, l.orientation});
  }
  report.form_factor = 4.0 * std::numbers::pi * report.area / (report.perimeter * report.perimeter);

  std::sort(analysis.pinches.begin(), analysis.pinches.end(),
            [](const Pinch& a, const Pinch& b) { return a.first_seen < b.first_seen; });
  for (const Pinch& p : analysis.pinches) report.pinch_points.push_back(p.at);
  return report;
}

std::vector<Point2> points_from_trace(std::span<const TraceRecord> records, TraceField x, TraceField y) {
  std::vector<Point2> out;
  out.reserve(records.size());
  for (const TraceRecord& r : records) {
    const auto px = field_of(r, x);
    const auto py = field_of(r, y);
    if (!px || !py) throw std::invalid_argument("points_from_trace: record lacks the requested field");
    out.push_back({*px, *py});
  }
  return out;
}

std::vector<SweepPoint> sweep_form_factor(const LoopGenerator& generator, std::span<const double> t_int_grid,
                                          double t_osc, bool parallel) {
  if (!(t_osc > 0.0)) throw std::invalid_argument("sweep_form_factor: T_osc must be positive");
  for (double v : t_int_grid) {
    if (!(v > 0.0 && v <= 2.0 * t_osc * (1.0 + 1e-12))) {
      throw std::invalid_argument("sweep_form_factor: grid value outside (0, 2 T_osc]");
    }
  }
  const std::size_t n = t_int_grid.size();
  std::vector<std::optional<SweepPoint>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  auto evaluate = [&](std::size_t i) {
    try {
      slots[i] = SweepPoint{t_int_grid[i], form_factor(generator(t_int_grid[i]))};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const std::size_t workers =
      parallel ? std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency())) : 1;
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) evaluate(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) evaluate(i);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  std::vector<SweepPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

}  // namespace pqm
