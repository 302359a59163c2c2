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

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "pqm/loops.hpp"

using namespace pqm;

namespace {

LoopSpec spec_for(LoopQuantity q, std::optional<BellFlavor> f, double dt = 1e-4) {
  LoopSpec s;
  s.quantity = q;
  s.flavor = f;
  s.dt = dt;
  return s;
}

}  // namespace

TEST_CASE("quantity names round-trip") {
  for (LoopQuantity q : {LoopQuantity::photon, LoopQuantity::coherence, LoopQuantity::concurrence}) {
    CHECK(parse_quantity(quantity_name(q)) == q);
  }
  CHECK_FALSE(parse_quantity("purity").has_value());
}

TEST_CASE("loop periods and fields") {
  CHECK(loop_period(spec_for(LoopQuantity::photon, std::nullopt)) == 1.0);
  CHECK(loop_period(spec_for(LoopQuantity::concurrence, BellFlavor::phi_plus)) == 1.0);
  CHECK(loop_period(spec_for(LoopQuantity::concurrence, BellFlavor::psi_minus)) == 0.5);
  CHECK(loop_x_field(spec_for(LoopQuantity::photon, std::nullopt)) == TraceField::n_in);
  CHECK(loop_y_field(spec_for(LoopQuantity::coherence, std::nullopt)) == TraceField::c_l1_out);
  CHECK(loop_y_field(spec_for(LoopQuantity::concurrence, BellFlavor::psi_plus)) == TraceField::conc_out);
}

TEST_CASE("invalid loop specs") {
  CHECK_THROWS_AS(analytic_loop(spec_for(LoopQuantity::concurrence, std::nullopt), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(analytic_loop(spec_for(LoopQuantity::photon, BellFlavor::psi_plus), 0.5), std::invalid_argument);
}

TEST_CASE("photon loop at T_int = T_osc has no area") {
  const FormFactorReport r = form_factor(analytic_loop(spec_for(LoopQuantity::photon, std::nullopt), 1.0));
  CHECK(r.form_factor <= 1e-3);
}

TEST_CASE("photon loop at T_int = T_osc / 2 is pinched with area") {
  const FormFactorReport r = form_factor(analytic_loop(spec_for(LoopQuantity::photon, std::nullopt), 0.5));
  CHECK(r.form_factor > 0.1);
  CHECK_FALSE(r.pinch_points.empty());
}

TEST_CASE("coherence loop at T_int = T_osc is the line C_out = C_in sqrt(0.5)") {
  const ParametricLoop loop = analytic_loop(spec_for(LoopQuantity::coherence, std::nullopt), 1.0);
  for (std::size_t i = 0; i < loop.size(); ++i) CHECK(std::abs(loop.y[i] - loop.x[i] * std::sqrt(0.5)) <= 1e-9);
  CHECK(form_factor(loop).form_factor <= 1e-3);
}

TEST_CASE("Psi concurrence sweep peaks near a quarter period") {
  std::vector<double> grid;
  for (int k = 1; k <= 20; ++k) grid.push_back(0.05 * k);
  const auto sweep =
      sweep_form_factor(make_loop_generator(spec_for(LoopQuantity::concurrence, BellFlavor::psi_plus, 2e-4)), grid, 1.0);
  const auto best = std::max_element(sweep.begin(), sweep.end(), [](const SweepPoint& a, const SweepPoint& b) {
    return a.report.form_factor < b.report.form_factor;
  });
  CHECK(std::abs(best->t_int - 0.25) <= 0.05 + 1e-12);
}

TEST_CASE("Phi concurrence loops have two lobes and more area at short windows") {
  const LoopSpec spec = spec_for(LoopQuantity::concurrence, BellFlavor::phi_minus, 2e-4);
  for (double t_int : {0.05, 0.25, 0.5, 1.0, 1.5}) {
    CAPTURE(t_int);
    CHECK(form_factor(analytic_loop(spec, t_int)).lobes.size() == 2);
  }
  CHECK(form_factor(analytic_loop(spec, 0.05)).form_factor > form_factor(analytic_loop(spec, 1.0)).form_factor);
}
