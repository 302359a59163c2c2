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

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "pqm/hysteresis.hpp"
#include "pqm/qstate.hpp"

// Input generators shared by the property tests. They draw from the standard
// library engine so they stay independent of the simulator's own RNG.
namespace pqm::testing {

inline constexpr double kPi = 3.14159265358979323846;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

  cplx complex_normal() { return {normal(), normal()}; }

  PureState pure_state(std::size_t qubits) {
    CVector v(Eigen::Index(1) << qubits);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_normal();
    v.normalize();
    return PureState(v);
  }

  // Ginibre ensemble G G^dagger / Tr, optionally rank deficient.
  DensityMatrix density(std::size_t qubits, int rank = -1) {
    const Eigen::Index dim = Eigen::Index(1) << qubits;
    const Eigen::Index r = rank < 0 ? dim : rank;
    CMatrix g(dim, r);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < r; ++j) g(i, j) = complex_normal();
    }
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = (rho + rho.adjoint()).eval() / 2.0;
    return DensityMatrix(rho);
  }

  CMatrix hermitian(Eigen::Index dim) {
    CMatrix h(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) h(i, j) = complex_normal();
    }
    return (h + h.adjoint()) / 2.0;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline std::vector<Point2> circle(std::size_t n, double cx = 0.0, double cy = 0.0, double r = 1.0,
                                  double phase = 0.0) {
  std::vector<Point2> pts;
  for (std::size_t i = 0; i <= n; ++i) {
    const double a = phase + 2.0 * kPi * static_cast<double>(i % n) / static_cast<double>(n);
    pts.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
  }
  return pts;
}

// Two unit circles centred at (-1, 0) and (1, 0), traced as one curve that
// passes through the origin twice.
inline std::vector<Point2> double_circle(std::size_t n_per_circle) {
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < n_per_circle; ++i) {
    const double a = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n_per_circle);
    pts.push_back({1.0 - std::cos(a), std::sin(a)});
  }
  for (std::size_t i = 0; i < n_per_circle; ++i) {
    const double a = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n_per_circle);
    pts.push_back({-1.0 + std::cos(a), std::sin(a)});
  }
  pts.push_back(pts.front());
  return pts;
}

// Bernoulli lemniscate x = cos s / (1 + sin^2 s), y = sin s cos s / (1 + sin^2 s).
inline std::vector<Point2> lemniscate(std::size_t n, double phase = 0.0) {
  std::vector<Point2> pts;
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = phase + 2.0 * kPi * static_cast<double>(i % n) / static_cast<double>(n);
    const double d = 1.0 + std::sin(s) * std::sin(s);
    pts.push_back({std::cos(s) / d, std::sin(s) * std::cos(s) / d});
  }
  return pts;
}

}  // namespace pqm::testing
