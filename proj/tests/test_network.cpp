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
#include <array>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "doctest.h"
#include "pqm/network.hpp"
#include "test_support.hpp"

using namespace pqm;
using pqm::testing::Gen;
using pqm::testing::kPi;
using pqm::testing::max_abs;

namespace {

const double kS = std::sqrt(0.5);
constexpr std::array<BellFlavor, 4> kFlavors = {BellFlavor::psi_plus, BellFlavor::psi_minus, BellFlavor::phi_plus,
                                                BellFlavor::phi_minus};

// Factorized oracle: apply each 4x4 beamsplitter on its own (A, B) pair via an
// explicit Kronecker product, then trace out B and B' by hand.
CMatrix factorized_output(const PureState& in, double R, double Rp) {
  // Embed (A, A') -> (A, B, A', B') with vacuum ancillas.
  CVector psi = CVector::Zero(16);
  for (int a = 0; a < 2; ++a) {
    for (int ap = 0; ap < 2; ++ap) psi(8 * a + 2 * ap) = in[2 * a + ap];
  }
  Eigen::MatrixXcd u = Eigen::kroneckerProduct(Eigen::MatrixXcd(pqm_unitary(R)), Eigen::MatrixXcd(pqm_unitary(Rp)));
  const CVector out = u * psi;
  CMatrix rho = CMatrix::Zero(4, 4);
  for (int b = 0; b < 2; ++b) {
    for (int bp = 0; bp < 2; ++bp) {
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          const int ci = i >> 1, cpi = i & 1, cj = j >> 1, cpj = j & 1;
          rho(i, j) += out(8 * ci + 4 * b + 2 * cpi + bp) * std::conj(out(8 * cj + 4 * b + 2 * cpj + bp));
        }
      }
    }
  }
  return rho;
}

}  // namespace

TEST_CASE("flavor names round-trip") {
  for (BellFlavor f : kFlavors) CHECK(parse_flavor(flavor_name(f)) == f);
  CHECK_FALSE(parse_flavor("chi+").has_value());
  CHECK(is_psi(BellFlavor::psi_minus));
  CHECK_FALSE(is_psi(BellFlavor::phi_plus));
}

TEST_CASE("bell_state_at examples") {
  const PureState phi0 = bell_state_at(BellDrive(BellFlavor::phi_plus, 1.0), 0.0);
  CHECK(std::abs(std::abs(phi0[3]) - 1.0) < 1e-15);
  const PureState psi = bell_state_at(BellDrive(BellFlavor::psi_plus, 1.0), 0.25);
  CHECK(std::abs(psi[1] - kS) < 1e-15);
  CHECK(std::abs(psi[2] - kS) < 1e-15);
  Gen g(41);
  for (int i = 0; i < 500; ++i) {
    const double t = g.uniform(-2, 2);
    for (BellFlavor f : kFlavors) {
      CHECK(std::abs(concurrence_pure(bell_state_at(BellDrive(f, 1.0), t)) - std::abs(std::sin(2 * kPi * t))) <=
            1e-12);
    }
  }
}

TEST_CASE("input concurrence has period T_osc / 2") {
  for (int k = -3; k <= 3; ++k) {
    CHECK(concurrence_pure(bell_state_at(BellDrive(BellFlavor::phi_minus, 1.0), 0.5 * k)) <= 1e-15);
  }
  Gen g(42);
  for (int i = 0; i < 200; ++i) {
    const double t = g.uniform(0, 1);
    const BellDrive d(BellFlavor::psi_plus, 1.0);
    CHECK(std::abs(concurrence_pure(d.state_at(t)) - concurrence_pure(d.state_at(t + 0.5))) <= 1e-12);
  }
}

TEST_CASE("local_mean_photon examples") {
  Gen g(43);
  for (int i = 0; i < 200; ++i) {
    const double t = g.uniform(0, 1);
    for (BellFlavor f : kFlavors) {
      const BellDrive d(f, 1.0);
      const auto a = d.amplitudes_at(t);
      const auto n = local_mean_photon(d.state_at(t));
      CHECK(std::abs(n.n1 - a.beta * a.beta) <= 1e-12);
      CHECK(std::abs(n.n2 - (is_psi(f) ? a.alpha * a.alpha : a.beta * a.beta)) <= 1e-12);
    }
  }
  const auto vac = local_mean_photon(PureState::basis(2, 0));
  CHECK(vac.n1 == 0.0);
  CHECK(vac.n2 == 0.0);
}

TEST_CASE("step_pair examples") {
  Gen g(44);
  const PureState in = g.pure_state(2);
  CHECK(max_abs(step_pair(in, 0.0, 0.0).matrix() - in.projector().matrix()) <= 1e-12);
  const PureState psi_plus({0, kS, kS, 0});
  const DensityMatrix vac = step_pair(psi_plus, 1.0, 1.0);
  CHECK(std::abs(vac(0, 0) - 1.0) <= 1e-12);
  CHECK(std::abs(concurrence_mixed(step_pair(psi_plus, 0.5, 0.5)) - 0.5) <= 1e-9);
  CHECK_THROWS_AS(step_pair(psi_plus, 1.2, 0.5), std::invalid_argument);
}

TEST_CASE("full 16-dimensional evolution agrees with the factorized oracle") {
  Gen g(45);
  for (int i = 0; i < 300; ++i) {
    const PureState in = g.pure_state(2);
    const double R = g.uniform(), Rp = g.uniform();
    CHECK(max_abs(step_pair(in, R, Rp).matrix() - factorized_output(in, R, Rp)) <= 1e-12);
  }
}

TEST_CASE("the two local beamsplitters commute") {
  Gen g(46);
  for (int i = 0; i < 300; ++i) {
    const PureState in = g.pure_state(2);
    const double R = g.uniform(), Rp = g.uniform();
    const PureState a = evolve_pair(in, R, Rp, PairOrder::first_then_second);
    const PureState b = evolve_pair(in, R, Rp, PairOrder::second_then_first);
    CHECK((a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("closed forms: examples") {
  CHECK(std::abs(concurrence_out_closed_form(kS, kS, 0.5, 0.5, BellFlavor::psi_plus) - 0.5) <= 1e-12);
  const double phi = 2 * kS * 0.5 * (kS - kS * 0.5);
  CHECK(std::abs(concurrence_out_closed_form(kS, kS, 0.5, 0.5, BellFlavor::phi_minus) - phi) <= 1e-12);
  CHECK(std::abs(phi - 0.25) <= 1e-12);
  for (BellFlavor f : kFlavors) CHECK(concurrence_out_closed_form(0.3, 0.7, 1.0, 1.0, f) == 0.0);
  CHECK(coherence_out_closed_form(0.6, 0.8, 0.0, 0.0) == doctest::Approx(0.96));
  CHECK(std::abs(coherence_out_closed_form(kS, kS, 0.5, 0.5) - 0.5) <= 1e-12);
  // Negative raw Phi expression clamps to zero.
  CHECK(concurrence_out_closed_form(0.1, std::sqrt(0.99), 0.9, 0.9, BellFlavor::phi_plus) == 0.0);
}

TEST_CASE("step_pair matches the closed forms and never increases resources") {
  Gen g(47);
  for (int i = 0; i < 1000; ++i) {
    const double t = g.uniform(0, 1), R = g.uniform(), Rp = g.uniform();
    for (BellFlavor f : kFlavors) {
      const BellDrive d(f, 1.0);
      const auto a = d.amplitudes_at(t);
      const PureState in = d.state_at(t);
      const DensityMatrix out = step_pair(in, R, Rp);
      const double c = concurrence_mixed(out), l1 = l1_coherence(out);
      CHECK(std::abs(c - concurrence_out_closed_form(a.alpha, a.beta, R, Rp, f)) <= 1e-9);
      CHECK(std::abs(l1 - coherence_out_closed_form(a.alpha, a.beta, R, Rp)) <= 1e-9);
      CHECK(c <= concurrence_pure(in) + 1e-12);
      CHECK(l1 <= l1_coherence(in.projector()) + 1e-12);
    }
  }
}

TEST_CASE("coherence is flavor independent") {
  Gen g(48);
  for (int i = 0; i < 200; ++i) {
    const double t = g.uniform(0, 1), R = g.uniform(), Rp = g.uniform();
    const double psi = l1_coherence(step_pair(BellDrive(BellFlavor::psi_plus, 1.0).state_at(t), R, Rp));
    const double phi = l1_coherence(step_pair(BellDrive(BellFlavor::phi_plus, 1.0).state_at(t), R, Rp));
    CHECK(std::abs(psi - phi) <= 1e-12);
  }
}

TEST_CASE("pair traces: records, closed forms and sign invariance") {
  for (double t_int : {0.1, 0.25, 0.5, 1.0}) {
    CAPTURE(t_int);
    const auto pp = run_pair_trace(BellFlavor::psi_plus, t_int, 1.0, 1e-3, 1.0);
    const auto pm = run_pair_trace(BellFlavor::psi_minus, t_int, 1.0, 1e-3, 1.0);
    const auto fp = run_pair_trace(BellFlavor::phi_plus, t_int, 1.0, 1e-3, 1.0);
    const auto fm = run_pair_trace(BellFlavor::phi_minus, t_int, 1.0, 1e-3, 1.0);
    REQUIRE(pp.size() == 1001);
    for (std::size_t i = 0; i < pp.size(); ++i) {
      CHECK(std::abs(*pp[i].conc_out - *pm[i].conc_out) <= 1e-12);
      CHECK(std::abs(*pp[i].R_prime - *pm[i].R_prime) <= 1e-12);
      CHECK(std::abs(*fp[i].conc_out - *fm[i].conc_out) <= 1e-12);
      CHECK(std::abs(*fp[i].c_l1_out - *fm[i].c_l1_out) <= 1e-12);
      CHECK(std::abs(*pp[i].conc_in - *pp[i].c_l1_in) <= 1e-12);
      CHECK(*pp[i].conc_out <= *pp[i].conc_in + 1e-12);
      const auto a = BellDrive(BellFlavor::phi_plus, 1.0).amplitudes_at(fp[i].t);
      CHECK(std::abs(*fp[i].conc_out -
                     concurrence_out_closed_form(a.alpha, a.beta, *fp[i].R, *fp[i].R_prime, BellFlavor::phi_plus)) <=
            1e-9);
      // Phi drives both memristors with the same marginal.
      CHECK(std::abs(*fp[i].R - *fp[i].R_prime) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(run_pair_trace(BellFlavor::psi_plus, 0.001, 1.0, 0.001, 1.0), std::invalid_argument);
}

TEST_CASE("Psi reflectivities are mirror images of each other") {
  // n1 = sin^2 and n2 = cos^2, so R + R' = 1 with the window law.
  const auto tr = run_pair_trace(BellFlavor::psi_plus, 0.3, 1.0, 1e-3, 1.0);
  for (const auto& r : tr) CHECK(std::abs(*r.R + *r.R_prime - 1.0) <= 1e-9);
}
