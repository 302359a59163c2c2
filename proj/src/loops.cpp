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

#include "pqm/loops.hpp"

#include <stdexcept>

#include "pqm/memristor.hpp"

namespace pqm {

std::string_view quantity_name(LoopQuantity q) {
  switch (q) {
    case LoopQuantity::photon:
      return "photon";
    case LoopQuantity::coherence:
      return "coherence";
    case LoopQuantity::concurrence:
      return "concurrence";
  }
  return "unknown";
}

std::optional<LoopQuantity> parse_quantity(std::string_view name) {
  for (LoopQuantity q : {LoopQuantity::photon, LoopQuantity::coherence, LoopQuantity::concurrence}) {
    if (quantity_name(q) == name) return q;
  }
  return std::nullopt;
}

double loop_period(const LoopSpec& spec) {
  if (spec.flavor && is_psi(*spec.flavor)) return 0.5 * spec.t_osc;
  return spec.t_osc;
}

TraceField loop_x_field(const LoopSpec& spec) {
  switch (spec.quantity) {
    case LoopQuantity::photon:
      return TraceField::n_in;
    case LoopQuantity::coherence:
      return TraceField::c_l1_in;
    case LoopQuantity::concurrence:
      return TraceField::conc_in;
  }
  return TraceField::n_in;
}

TraceField loop_y_field(const LoopSpec& spec) {
  switch (spec.quantity) {
    case LoopQuantity::photon:
      return TraceField::n_out;
    case LoopQuantity::coherence:
      return TraceField::c_l1_out;
    case LoopQuantity::concurrence:
      return TraceField::conc_out;
  }
  return TraceField::n_out;
}

ParametricLoop analytic_loop(const LoopSpec& spec, double t_int) {
  if (spec.quantity == LoopQuantity::concurrence && !spec.flavor) {
    throw std::invalid_argument("analytic_loop: concurrence needs a Bell flavor");
  }
  if (spec.quantity == LoopQuantity::photon && spec.flavor) {
    throw std::invalid_argument("analytic_loop: photon-number loops use the single memristor");
  }
  const double periods = loop_period(spec) / spec.t_osc;
  const std::vector<TraceRecord> records =
      spec.flavor ? run_pair_trace(*spec.flavor, t_int, spec.t_osc, spec.dt, periods)
                  : run_single_trace(t_int, spec.t_osc, spec.dt, periods);
  const std::vector<Point2> pts = points_from_trace(records, loop_x_field(spec), loop_y_field(spec));
  return close_loop(pts, kAnalyticClosureTol);
}

LoopGenerator make_loop_generator(const LoopSpec& spec) {
  return [spec](double t_int) { return analytic_loop(spec, t_int); };
}

}  // namespace pqm
