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

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "pqm/memristor.hpp"
#include "test_support.hpp"

using namespace pqm;
using pqm::testing::Gen;
using pqm::testing::kPi;
using pqm::testing::max_abs;

namespace {

const double kS = std::sqrt(0.5);

// Reflectivity of the moving window evaluated directly from the integral of
// cos^2 over [t - T_int, t].
double window_integral_oracle(double t, double t_int, double t_osc) {
  auto prim = [&](double s) { return 0.5 * s + t_osc / (4 * kPi) * std::sin(2 * kPi * s / t_osc); };
  const double mean_n = (prim(t) - prim(t - t_int)) / t_int;
  return 1.0 - mean_n;
}

}  // namespace

TEST_CASE("amplitudes_at examples") {
  const DriveSignal d(1.0);
  auto a0 = amplitudes_at(d, 0.0);
  CHECK(a0.alpha == doctest::Approx(1.0));
  CHECK(std::abs(a0.beta) < 1e-15);
  auto a1 = amplitudes_at(d, 0.5);
  CHECK(std::abs(a1.alpha) < 1e-15);
  CHECK(a1.beta == doctest::Approx(1.0));
  auto a2 = amplitudes_at(d, 0.25);
  CHECK(a2.alpha == doctest::Approx(kS));
  CHECK(a2.beta == doctest::Approx(kS));
  CHECK_THROWS_AS(DriveSignal(0.0), std::invalid_argument);
}

TEST_CASE("amplitudes are normalized for all t, including negative") {
  Gen g(31);
  for (int i = 0; i < 1000; ++i) {
    const DriveSignal d(g.uniform(0.1, 5.0));
    const auto a = d.amplitudes_at(g.uniform(-20.0, 20.0));
    CHECK(std::abs(a.alpha * a.alpha + a.beta * a.beta - 1.0) <= 1e-12);
  }
}

TEST_CASE("reflectivity_closed_form examples") {
  for (double t : {0.0, 0.13, 0.5, 2.7}) CHECK(std::abs(reflectivity_closed_form(t, 1.0, 1.0) - 0.5) < 1e-15);
  CHECK(std::abs(reflectivity_closed_form(0.25, 0.5, 1.0) - (0.5 - 1 / kPi)) < 1e-12);
  // Evaluating the formula at t = 0 gives sin(-pi) - sin(0) = 0, so R = 0.5;
  // the 0.5 + 1/pi maximum sits at t = 0.75.
  CHECK(std::abs(reflectivity_closed_form(0.0, 0.5, 1.0) - 0.5) < 1e-12);
  CHECK(std::abs(reflectivity_closed_form(0.75, 0.5, 1.0) - (0.5 + 1 / kPi)) < 1e-12);
  CHECK_THROWS_AS(reflectivity_closed_form(0.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(reflectivity_closed_form(0.0, 0.5, -1.0), std::invalid_argument);
}

TEST_CASE("closed form matches the direct window integral and stays in [0, 1]") {
  Gen g(32);
  for (int i = 0; i < 2000; ++i) {
    const double t_osc = g.uniform(0.2, 3.0);
    const double t_int = g.uniform(0.01, 1.0) * t_osc;
    const double t = g.uniform(-3.0, 3.0);
    const double r = reflectivity_closed_form(t, t_int, t_osc);
    CHECK(std::abs(r - window_integral_oracle(t, t_int, t_osc)) <= 1e-12);
    CHECK(r >= -1e-12);
    CHECK(r <= 1.0 + 1e-12);
  }
}

TEST_CASE("reflectivity_update examples") {
  const double dt = 1e-3, t_int = 0.2;
  for (double level : {0.5, 1.0}) {
    MemristorState m(t_int, dt);
    m.prefill([&](double) { return level; }, 0.0);
    for (int k = 0; k < 500; ++k) m = reflectivity_update(m, k * dt, level);
    CHECK(std::abs(m.reflectivity() - level) < 1e-12);
    CHECK(m.clamp_events() == 0);
  }
  MemristorState m(t_int, dt);
  m.prefill([](double) { return 0.5; }, 0.0);
  m.update(0.0, 0.5);
  CHECK_THROWS_AS(m.update(0.0, 0.5), std::invalid_argument);
}

TEST_CASE("window timestamps stay strictly increasing and within T_int + dt") {
  const double dt = 0.01, t_int = 0.13;
  MemristorState m(t_int, dt);
  const DriveSignal d(1.0);
  m.prefill([&](double t) { return d.mean_photon_at(t); }, 0.0);
  for (int k = 0; k < 300; ++k) {
    m.update(k * dt, d.mean_photon_at(k * dt));
    const WindowView w = m.window();
    REQUIRE(w.times.size() >= 2);
    for (std::size_t i = 1; i < w.times.size(); ++i) CHECK(w.times[i] > w.times[i - 1]);
    CHECK(w.times.back() - w.times.front() <= t_int + dt + 1e-12);
  }
}

TEST_CASE("an over-driven custom law clamps and counts") {
  MemristorState m(0.1, 0.01, WindowStart::prefilled, [](const WindowView&) { return 1.7; });
  m.prefill([](double) { return 0.5; }, 0.0);
  m.update(0.0, 1.0);
  m.update(0.01, 1.0);
  CHECK(m.reflectivity() == 1.0);
  CHECK(m.clamp_events() >= 2);
}

TEST_CASE("numeric window law tracks the closed form") {
  for (double ratio : {0.1, 0.25, 0.5, 1.0}) {
    CAPTURE(ratio);
    const auto fine = run_single_trace(ratio, 1.0, 1e-4, 1.0);
    double err_fine = 0.0;
    for (const auto& r : fine) err_fine = std::max(err_fine, std::abs(*r.R - reflectivity_closed_form(r.t, ratio, 1.0)));
    CHECK(err_fine <= 1e-6);
    if (ratio > 0.02) {
      const auto coarse = run_single_trace(ratio, 1.0, 1e-2, 1.0);
      double err_coarse = 0.0;
      for (const auto& r : coarse) {
        err_coarse = std::max(err_coarse, std::abs(*r.R - reflectivity_closed_form(r.t, ratio, 1.0)));
      }
      CHECK(err_coarse <= 1e-3);
    }
  }
}

TEST_CASE("pqm_unitary examples and unitarity") {
  CHECK(max_abs(pqm_unitary(0.0) - Eigen::Matrix4cd::Identity()) < 1e-15);
  const Eigen::Matrix4cd u1 = pqm_unitary(1.0);
  CHECK(std::abs(u1(1, 1)) < 1e-15);
  CHECK(std::abs(u1(1, 2) - cplx(0, 1)) < 1e-15);
  CHECK(std::abs(u1(2, 1) - cplx(0, 1)) < 1e-15);
  CHECK(std::abs(u1(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(u1(3, 3) - 1.0) < 1e-15);
  const Eigen::Matrix4cd uh = pqm_unitary(0.5);
  CHECK(std::abs(uh(1, 1) - kS) < 1e-15);
  CHECK(std::abs(uh(1, 2) - cplx(0, kS)) < 1e-15);
  CHECK_THROWS_AS(pqm_unitary(1.1), std::invalid_argument);
  CHECK_THROWS_AS(pqm_unitary(-0.1), std::invalid_argument);
  Gen g(33);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Matrix4cd u = pqm_unitary(g.uniform());
    CHECK((u.adjoint() * u - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  const auto rm = pqm_unitary_row_major(0.3);
  const Eigen::Matrix4cd u = pqm_unitary(0.3);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) CHECK(rm[4 * r + c] == u(r, c));
  }
}

TEST_CASE("theta_from_reflectivity reproduces the beamsplitter block") {
  CHECK(theta_from_reflectivity(0.0) == 0.0);
  CHECK(theta_from_reflectivity(1.0) == doctest::Approx(kPi / 2));
  CHECK(theta_from_reflectivity(0.5) == doctest::Approx(kPi / 4));
  CHECK_THROWS_AS(theta_from_reflectivity(1.5), std::invalid_argument);
  for (double R : {0.0, 0.1, 0.5, 0.77, 1.0}) {
    // Generator b^dag a + b a^dag restricted to {|10>, |01>} is sigma_x.
    Eigen::Matrix2cd gen;
    gen << 0, 1, 1, 0;
    const Eigen::Matrix2cd block = (cplx(0, theta_from_reflectivity(R)) * gen).exp();
    const Eigen::Matrix4cd u = pqm_unitary(R);
    CHECK((block - u.block<2, 2>(1, 1)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("step_single examples") {
  const StepOutput vac = step_single(1.0, 0.0, 0.37);
  CHECK(std::abs(vac.rho_out_C(0, 0) - 1.0) < 1e-15);
  CHECK(vac.p_meas_D == 0.0);
  const StepOutput full = step_single(0.0, 1.0, 1.0);
  CHECK(std::abs(full.rho_out_C(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(full.p_meas_D - 1.0) < 1e-12);
  const StepOutput half = step_single(kS, kS, 0.5);
  CHECK(std::abs(half.rho_out_C(0, 0) - 0.75) < 1e-12);
  CHECK(std::abs(std::abs(half.rho_out_C(0, 1)) - 0.5 * kS) < 1e-12);
  CHECK(std::abs(half.rho_out_C(1, 1) - 0.25) < 1e-12);
  CHECK_THROWS_AS(step_single(1.0, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("step_single photon bookkeeping and coherence relation") {
  Gen g(34);
  for (int i = 0; i < 2000; ++i) {
    const double th = g.uniform(0, 2 * kPi), R = g.uniform();
    const double a = std::cos(th), b = std::sin(th);
    const StepOutput s = step_single(a, b, R);
    const double n_in = b * b;
    CHECK(std::abs(s.n_out - (1 - R) * n_in) <= 1e-12);
    CHECK(std::abs(s.p_meas_D - R * n_in) <= 1e-12);
    CHECK(std::abs(s.n_out + s.p_meas_D - n_in) <= 1e-12);
    CHECK(std::abs(l1_coherence(s.rho_out_C) - output_coherence_closed_form(a, b, R)) <= 1e-12);
    // Purity of the hand-written reduced state.
    const double p00 = a * a + b * b * R, p11 = b * b * (1 - R), off = a * b * std::sqrt(1 - R);
    CHECK(std::abs(purity(s.rho_out_C) - (p00 * p00 + p11 * p11 + 2 * off * off)) <= 1e-12);
  }
}

TEST_CASE("output_coherence_closed_form examples") {
  CHECK(output_coherence_closed_form(1.0, 0.0, 0.3) == 0.0);
  CHECK(output_coherence_closed_form(kS, kS, 0.0) == doctest::Approx(1.0));
  CHECK(std::abs(output_coherence_closed_form(kS, kS, 0.5) - kS) < 1e-12);
  CHECK(std::abs(output_coherence_closed_form(kS, kS, 0.5) - l1_coherence(step_single(kS, kS, 0.5).rho_out_C)) <
        1e-12);
}

TEST_CASE("estimate_n_in examples") {
  const InputEstimate a = estimate_n_in(0.25, 0.5, 0.9);
  CHECK(a.n_in == doctest::Approx(0.5));
  CHECK_FALSE(a.degenerate);
  CHECK(estimate_n_in(0.0, 0.3, 0.9).n_in == 0.0);
  const InputEstimate held = estimate_n_in(0.3, 0.005, 0.42);
  CHECK(held.n_in == 0.42);
  CHECK(held.degenerate);
  CHECK(estimate_n_in(0.9, 0.5, 0.0).n_in == 1.0);
}

TEST_CASE("run_single_trace examples") {
  const auto flat = run_single_trace(1.0, 1.0, 1e-3, 1.0);
  for (const auto& r : flat) {
    CHECK(std::abs(*r.R - 0.5) <= 1e-9);
    CHECK(std::abs(*r.n_out - 0.5 * *r.n_in) <= 1e-9);
    CHECK(std::abs(*r.c_l1_out - *r.c_l1_in * kS) <= 1e-9);
  }
  CHECK(flat.size() == 1001);
  CHECK(flat.back().t == doctest::Approx(1.0));
  CHECK_THROWS_AS(run_single_trace(0.01, 1.0, 0.01, 1.0), std::invalid_argument);
}

TEST_CASE("single traces obey the step relations at every step") {
  Gen g(35);
  for (int trial = 0; trial < 10; ++trial) {
    const double t_int = g.uniform(0.05, 1.5);
    for (const auto& r : run_single_trace(t_int, 1.0, 1e-3, 2.0)) {
      CHECK(std::abs(*r.n_out - (1 - *r.R) * *r.n_in) <= 1e-12);
      CHECK(*r.R >= 0.0);
      CHECK(*r.R <= 1.0);
      const auto a = DriveSignal(1.0).amplitudes_at(r.t);
      CHECK(std::abs(*r.c_l1_out - 2 * std::abs(a.alpha * a.beta) * std::sqrt(1 - *r.R)) <= 1e-12);
    }
  }
}

TEST_CASE("cold start begins at 0.5 and converges to the prefilled trace") {
  const auto cold = run_single_trace(0.25, 1.0, 1e-3, 2.0, {WindowStart::cold});
  const auto warm = run_single_trace(0.25, 1.0, 1e-3, 2.0);
  CHECK(cold.front().R.value() == doctest::Approx(0.5).epsilon(0.2));
  REQUIRE(cold.size() == warm.size());
  double late = 0.0;
  for (std::size_t i = 0; i < cold.size(); ++i) {
    if (cold[i].t > 0.3) late = std::max(late, std::abs(*cold[i].R - *warm[i].R));
  }
  CHECK(late <= 1e-12);
}

TEST_CASE("steps_for") {
  CHECK(steps_for(1.0, 1e-4) == 10000);
  CHECK(steps_for(3.0, 0.5) == 6);
  CHECK_THROWS_AS(steps_for(1.0, 0.3), std::invalid_argument);
}
