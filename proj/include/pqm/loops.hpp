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
#include <string_view>

#include "pqm/hysteresis.hpp"
#include "pqm/network.hpp"

namespace pqm {

enum class LoopQuantity { photon, coherence, concurrence };

std::string_view quantity_name(LoopQuantity q);
std::optional<LoopQuantity> parse_quantity(std::string_view name);

// Which response curve to build. Without a flavor the single memristor is
// used (photon number or coherence); with one, the Bell pair.
struct LoopSpec {
  LoopQuantity quantity = LoopQuantity::photon;
  std::optional<BellFlavor> flavor;
  double t_osc = 1.0;
  double dt = 1e-4;
};

// Drive period of the chosen curve. The Psi pair observables repeat every
// T_osc / 2; everything else every T_osc.
double loop_period(const LoopSpec& spec);

// Input/output fields plotted for the given loop.
TraceField loop_x_field(const LoopSpec& spec);
TraceField loop_y_field(const LoopSpec& spec);

// Analytic trace over one loop period, closed within kAnalyticClosureTol.
// Throws std::invalid_argument for concurrence without a flavor or photon
// with one.
ParametricLoop analytic_loop(const LoopSpec& spec, double t_int);

LoopGenerator make_loop_generator(const LoopSpec& spec);

}  // namespace pqm
