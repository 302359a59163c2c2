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

#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "pqm/qstate.hpp"
#include "test_support.hpp"

using namespace pqm;
using pqm::testing::Gen;
using pqm::testing::max_abs;

namespace {

const double kS = std::sqrt(0.5);

// Post-beamsplitter reduced state of mode C written out by hand.
CMatrix traced_output_oracle(double a, double b, double R) {
  CMatrix m(2, 2);
  m << a * a + b * b * R, a * b * std::sqrt(1 - R), a * b * std::sqrt(1 - R), b * b * (1 - R);
  return m;
}

PureState post_beamsplitter(double a, double b, double R) {
  // (C, D) with C the more significant qubit.
  return PureState({cplx(a), cplx(0, b * std::sqrt(R)), cplx(b * std::sqrt(1 - R)), cplx(0)});
}

DensityMatrix werner(double p) {
  const PureState phi({kS, 0, 0, kS});
  return DensityMatrix(p * phi.projector().matrix() + (1 - p) * CMatrix::Identity(4, 4) / 4.0);
}

void check_valid(const DensityMatrix& rho) {
  const DensityDiagnostics d = diagnose(rho.matrix());
  CHECK(d.hermiticity_error <= 1e-12);
  CHECK(d.trace_error <= 1e-10);
  CHECK(d.min_eigenvalue >= -1e-10);
}

}  // namespace

TEST_CASE("state construction validates inputs") {
  CHECK_THROWS_AS(PureState({1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(PureState({1.0, 0.0, 0.0}), std::invalid_argument);
  CMatrix bad = CMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix{bad}, std::invalid_argument);
  CMatrix neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, std::invalid_argument);
  CMatrix nonherm(2, 2);
  nonherm << 0.5, 0.1, 0.2, 0.5;
  CHECK_THROWS_AS(DensityMatrix{nonherm}, std::invalid_argument);
}

TEST_CASE("tensor examples") {
  const PureState zero({1.0, 0.0});
  const PureState p00 = tensor(zero, zero);
  CHECK(p00.dim() == 4);
  CHECK(std::abs(p00[0] - 1.0) == 0.0);
  const double a = 0.6, b = 0.8;
  const PureState ab = tensor(PureState({a, b}), zero);
  CHECK(std::abs(ab[0] - a) < 1e-15);
  CHECK(std::abs(ab[1]) < 1e-15);
  CHECK(std::abs(ab[2] - b) < 1e-15);
  CHECK(std::abs(ab[3]) < 1e-15);
  const DensityMatrix mm = tensor(DensityMatrix::maximally_mixed(1), DensityMatrix::maximally_mixed(1));
  CHECK(max_abs(mm.matrix() - CMatrix::Identity(4, 4) / 4.0) < 1e-15);
}

TEST_CASE("partial_trace examples") {
  Gen g(21);
  const DensityMatrix ra = g.density(1), rb = g.density(2);
  const std::array<std::size_t, 1> keep_a{0};
  CHECK(max_abs(partial_trace(tensor(ra, rb), keep_a).matrix() - ra.matrix()) < 1e-12);

  const PureState phi({kS, 0, 0, kS});
  const std::array<std::size_t, 1> keep0{0}, keep1{1};
  CHECK(max_abs(partial_trace(phi.projector(), keep1).matrix() - CMatrix::Identity(2, 2) / 2.0) < 1e-15);

  const DensityMatrix traced = partial_trace(post_beamsplitter(kS, kS, 0.5), keep0);
  CHECK(max_abs(traced.matrix().cwiseAbs().cast<cplx>() - traced_output_oracle(kS, kS, 0.5)) < 1e-12);
  CHECK(std::abs(traced(0, 0) - 0.75) < 1e-12);
  CHECK(std::abs(std::abs(traced(0, 1)) - 0.5 * kS) < 1e-12);
}

TEST_CASE("partial_trace errors") {
  const DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  CHECK_THROWS_AS(partial_trace(rho, std::span<const std::size_t>()), std::invalid_argument);
  const std::array<std::size_t, 1> out_of_range{2};
  CHECK_THROWS_AS(partial_trace(rho, out_of_range), std::invalid_argument);
  const std::array<std::size_t, 2> repeated{1, 1};
  CHECK_THROWS_AS(partial_trace(rho, repeated), std::invalid_argument);
}

TEST_CASE("partial_trace keeps the requested qubit order") {
  Gen g(22);
  const DensityMatrix ra = g.density(1), rb = g.density(1);
  const std::array<std::size_t, 2> swapped{1, 0};
  CHECK(max_abs(partial_trace(tensor(ra, rb), swapped).matrix() - tensor(rb, ra).matrix()) < 1e-12);
}

TEST_CASE("hermitian_eig examples and reconstruction") {
  const EigenDecomposition id = hermitian_eig(CMatrix::Identity(4, 4));
  for (int i = 0; i < 4; ++i) CHECK(id.values(i) == doctest::Approx(1.0));
  CMatrix d(2, 2);
  d << 1, 0, 0, 3;
  const EigenDecomposition e = hermitian_eig(d);
  CHECK(e.values(0) == doctest::Approx(3.0));
  CHECK(e.values(1) == doctest::Approx(1.0));
  CHECK(std::abs(std::abs(e.vectors(1, 0)) - 1.0) < 1e-12);
  CHECK_THROWS_AS(hermitian_eig(CMatrix::Zero(2, 3)), std::invalid_argument);

  Gen g(23);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index dim = Eigen::Index(1) << g.integer(1, 4);
    const CMatrix h = g.hermitian(dim);
    const EigenDecomposition ed = hermitian_eig(h);
    const CMatrix rebuilt = ed.vectors * ed.values.cast<cplx>().asDiagonal() * ed.vectors.adjoint();
    CHECK(max_abs(rebuilt - h) <= 1e-10);
    CHECK(max_abs(ed.vectors.adjoint() * ed.vectors - CMatrix::Identity(dim, dim)) <= 1e-10);
    for (Eigen::Index i = 1; i < dim; ++i) CHECK(ed.values(i - 1) >= ed.values(i));
  }
}

TEST_CASE("matrix_sqrt_psd examples and squares") {
  CHECK(max_abs(matrix_sqrt_psd(CMatrix(CMatrix::Identity(4, 4))) - CMatrix::Identity(4, 4)) < 1e-14);
  CMatrix proj = CMatrix::Zero(4, 4);
  proj(0, 0) = 1.0;
  CHECK(max_abs(matrix_sqrt_psd(proj) - proj) < 1e-14);
  Gen g(24);
  for (int trial = 0; trial < 200; ++trial) {
    const DensityMatrix p = g.density(2, g.integer(1, 4));
    const CMatrix s = matrix_sqrt_psd(p);
    CHECK(max_abs(s * s - p.matrix()) <= 1e-9);
    CHECK(max_abs(s - s.adjoint()) <= 1e-12);
    CHECK(hermitian_eig(s).values.minCoeff() >= -1e-10);
  }
}

TEST_CASE("l1_coherence examples") {
  CMatrix diag = CMatrix::Zero(2, 2);
  diag(0, 0) = 0.3;
  diag(1, 1) = 0.7;
  CHECK(l1_coherence(DensityMatrix(diag)) == 0.0);
  CHECK(l1_coherence(PureState({kS, kS}).projector()) == doctest::Approx(1.0));
  const std::array<std::size_t, 1> keep0{0};
  const double c = l1_coherence(partial_trace(post_beamsplitter(kS, kS, 0.5), keep0));
  CHECK(std::abs(c - 2.0 * 0.5 * kS) < 1e-12);
}

TEST_CASE("l1_coherence is invariant under phase rotations") {
  Gen g(25);
  for (int trial = 0; trial < 200; ++trial) {
    const DensityMatrix rho = g.density(2);
    CVector phases(4);
    for (int i = 0; i < 4; ++i) phases(i) = std::polar(1.0, g.uniform(0, 2 * pqm::testing::kPi));
    const CMatrix u = phases.asDiagonal();
    const DensityMatrix rotated(u * rho.matrix() * u.adjoint());
    CHECK(std::abs(l1_coherence(rotated) - l1_coherence(rho)) <= 1e-12);
  }
}

TEST_CASE("concurrence_pure examples") {
  CHECK(concurrence_pure(PureState({kS, 0, 0, kS})) == doctest::Approx(1.0));
  CHECK(concurrence_pure(PureState::basis(2, 1)) == 0.0);
  CHECK(std::abs(concurrence_pure(PureState({0, 0.6, 0.8, 0})) - 0.96) < 1e-15);
  CHECK_THROWS_AS(concurrence_pure(PureState({1.0, 0.0})), std::invalid_argument);
}

TEST_CASE("concurrence_mixed examples") {
  CHECK(concurrence_mixed(DensityMatrix::maximally_mixed(2)) == doctest::Approx(0.0));
  CHECK(concurrence_mixed(PureState({kS, 0, 0, kS}).projector()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(concurrence_mixed(werner(0.9)) - 0.85) <= 1e-8);
  CHECK_THROWS_AS(concurrence_mixed(DensityMatrix::maximally_mixed(1)), std::invalid_argument);
}

TEST_CASE("Werner family against the closed form") {
  for (int k = 0; k <= 10; ++k) {
    const double p = 0.1 * k;
    const WoottersForms f = wootters_forms(werner(p));
    const double want = std::max(0.0, (3 * p - 1) / 2);
    CAPTURE(p);
    CHECK(std::abs(f.ordered_difference - want) <= 1e-8);
    CHECK(std::abs(f.max_minus_trace - want) <= 1e-8);
  }
}

TEST_CASE("the two Wootters forms agree on random states") {
  Gen g(26);
  for (int trial = 0; trial < 1000; ++trial) {
    const DensityMatrix rho = g.density(2, g.integer(1, 4));
    const WoottersForms f = wootters_forms(rho);
    CHECK(std::abs(f.ordered_difference - f.max_minus_trace) <= 1e-8);
    CHECK(std::abs(f.trace_m - f.sqrt_eigenvalues.sum()) <= 1e-8);
    const double c = concurrence_mixed(rho);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0 + 1e-12);
  }
}

TEST_CASE("mixed and pure concurrence agree on pure states") {
  Gen g(27);
  for (int trial = 0; trial < 1000; ++trial) {
    const PureState psi = g.pure_state(2);
    CHECK(std::abs(concurrence_mixed(psi.projector()) - concurrence_pure(psi)) <= 1e-8);
  }
}

TEST_CASE("concurrence equals coherence for real single-excitation states") {
  Gen g(28);
  for (int trial = 0; trial < 200; ++trial) {
    const double th = g.uniform(0, 2 * pqm::testing::kPi);
    const double a = std::cos(th), b = std::sin(th);
    for (double sign : {1.0, -1.0}) {
      const PureState psi({0, a, sign * b, 0});
      CHECK(std::abs(concurrence_pure(psi) - 2 * std::abs(a * b)) <= 1e-12);
      CHECK(std::abs(l1_coherence(psi.projector()) - 2 * std::abs(a * b)) <= 1e-12);
    }
  }
}

TEST_CASE("purity examples") {
  Gen g(29);
  CHECK(purity(g.pure_state(3).projector()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(purity(DensityMatrix::maximally_mixed(1)) == doctest::Approx(0.5));
  const std::array<std::size_t, 1> keep0{0};
  const DensityMatrix rho = partial_trace(post_beamsplitter(kS, kS, 0.5), keep0);
  const Eigen::VectorXd ev = hermitian_eig(rho.matrix()).values;
  CHECK(std::abs(purity(rho) - ev.squaredNorm()) <= 1e-12);
}

TEST_CASE("mean_photon_number examples") {
  CHECK(mean_photon_number(PureState({kS, kS}), 0) == doctest::Approx(0.5));
  const double a = 0.6, b = 0.8;
  const PureState psi({0, a, b, 0});
  CHECK(std::abs(mean_photon_number(psi, 0) - b * b) < 1e-15);
  CHECK(std::abs(mean_photon_number(psi, 1) - a * a) < 1e-15);
  const PureState phi({a, 0, 0, b});
  CHECK(std::abs(mean_photon_number(phi, 0) - b * b) < 1e-15);
  CHECK(std::abs(mean_photon_number(phi.projector(), 1) - b * b) < 1e-15);
  CHECK_THROWS_AS(mean_photon_number(psi, 2), std::invalid_argument);
}

TEST_CASE("operations return valid density matrices") {
  Gen g(30);
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix rho = g.density(3, g.integer(1, 8));
    const std::array<std::size_t, 2> keep{static_cast<std::size_t>(g.integer(0, 1)), 2};
    check_valid(partial_trace(rho, keep));
    check_valid(tensor(rho, g.density(1)));
  }
}
