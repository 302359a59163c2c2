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

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>

// Finite-dimensional quantum states over 1 to 4 qubits, in the single-photon
// encoding |0> = vacuum, |1> = one photon per mode.
//
// Qubit ordering: basis index i lists qubits most-significant first, so for
// modes (A, B) the index is 2*A + B and for (A, B, A', B') it is
// 8*A + 4*B + 2*A' + B'. Qubit q of an n-qubit register is bit (n - 1 - q).
// Density matrix entries follow entries(i, j) = <i|rho|j>.

namespace pqm {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr std::size_t kMaxQubits = 4;

inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

class DensityMatrix;

class PureState {
 public:
  // Throws std::invalid_argument unless the length is a power of two (2..16)
  // and the squared norm is 1 within kNormTol.
  explicit PureState(CVector amplitudes);
  PureState(std::initializer_list<cplx> amplitudes);

  static PureState basis(std::size_t n_qubits, std::size_t index);

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  std::size_t qubits() const;
  const CVector& amplitudes() const { return amps_; }
  cplx operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

  DensityMatrix projector() const;

 private:
  CVector amps_;
};

class DensityMatrix {
 public:
  // Validates Hermiticity (kHermitianTol), unit trace (kTraceTol) and
  // eigenvalues >= -kPsdTol. Throws std::invalid_argument otherwise.
  explicit DensityMatrix(CMatrix entries);

  static DensityMatrix maximally_mixed(std::size_t n_qubits);

  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  std::size_t qubits() const;
  const CMatrix& matrix() const { return rho_; }
  cplx operator()(std::size_t i, std::size_t j) const {
    return rho_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  struct Trusted {};
  DensityMatrix(CMatrix entries, Trusted) : rho_(std::move(entries)) {}
  friend DensityMatrix make_density_unchecked(CMatrix entries);

  CMatrix rho_;
};

// Builds a DensityMatrix from a matrix produced by this library's own exact
// operations (tensor products, unitary evolution, partial traces). The matrix
// is symmetrized but not re-validated.
DensityMatrix make_density_unchecked(CMatrix entries);

struct EigenDecomposition {
  Eigen::VectorXd values;  // descending
  CMatrix vectors;         // column k pairs with values(k)
};

// Kronecker product; the left operand is the more significant subsystem.
// Mixing a PureState with a DensityMatrix does not compile: convert with
// PureState::projector() first.
PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// Reduced state on the qubits in `keep`, in the listed order. Throws on an
// empty set, duplicate or out-of-range indices.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);
DensityMatrix partial_trace(const PureState& psi, std::span<const std::size_t> keep);

// Symmetrizes (H + H^dagger) / 2, then diagonalizes. Throws on non-square
// input or Hermiticity error above 1e-10.
EigenDecomposition hermitian_eig(const CMatrix& h);

// Principal square root of a positive semidefinite matrix. Eigenvalues in
// [-1e-10, 0) are clamped to zero; anything more negative throws.
CMatrix matrix_sqrt_psd(const CMatrix& p);
CMatrix matrix_sqrt_psd(const DensityMatrix& rho);

double l1_coherence(const DensityMatrix& rho);

// 2|ad - bc| for amplitudes ordered (00, 01, 10, 11).
double concurrence_pure(const PureState& psi);

// Both square-root-eigenvalue forms of the two-qubit concurrence.
// sqrt_eigenvalues are the eigenvalues of M = sqrt(sqrt(rho) rho_tilde
// sqrt(rho)) in descending order, obtained from a factorization of rho;
// trace_m and max_minus_trace come from forming M explicitly.
struct WoottersForms {
  Eigen::Vector4d sqrt_eigenvalues;
  double ordered_difference;  // max(0, l1 - l2 - l3 - l4)
  double trace_m;
  double max_minus_trace;     // max(0, 2 l_max - Tr M)
};
WoottersForms wootters_forms(const DensityMatrix& rho);

// Clamped concurrence of a two-qubit mixed state. Throws std::logic_error if
// the two Wootters forms disagree by more than 1e-8.
double concurrence_mixed(const DensityMatrix& rho);

double purity(const DensityMatrix& rho);

// Probability that qubit `mode` holds a photon.
double mean_photon_number(const PureState& psi, std::size_t mode);
double mean_photon_number(const DensityMatrix& rho, std::size_t mode);

// Hermiticity, trace and spectrum report used by tests and runtime checks.
struct DensityDiagnostics {
  double hermiticity_error;
  double trace_error;
  double min_eigenvalue;
};
DensityDiagnostics diagnose(const CMatrix& rho);

}  // namespace pqm
