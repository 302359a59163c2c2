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

#include "pqm/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/SVD>

namespace pqm {
namespace {

std::size_t qubits_for_dim(std::size_t dim) {
  for (std::size_t q = 1; q <= kMaxQubits; ++q) {
    if ((std::size_t{1} << q) == dim) return q;
  }
  std::ostringstream msg;
  msg << "dimension " << dim << " is not a power of two between 2 and " << (1u << kMaxQubits);
  throw std::invalid_argument(msg.str());
}

CMatrix symmetrized(const CMatrix& h) { return 0.5 * (h + h.adjoint()); }

double hermiticity_error(const CMatrix& h) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

// Maps (kept index, traced index) to the full basis index.
class SubsystemMap {
 public:
  SubsystemMap(std::size_t n_qubits, std::span<const std::size_t> keep) : n_(n_qubits) {
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
    std::vector<bool> seen(n_qubits, false);
    for (std::size_t q : keep) {
      if (q >= n_qubits) throw std::invalid_argument("partial_trace: qubit index out of range");
      if (seen[q]) throw std::invalid_argument("partial_trace: duplicate qubit index");
      seen[q] = true;
      kept_.push_back(q);
    }
    for (std::size_t q = 0; q < n_qubits; ++q) {
      if (!seen[q]) traced_.push_back(q);
    }
  }

  std::size_t kept_dim() const { return std::size_t{1} << kept_.size(); }
  std::size_t traced_dim() const { return std::size_t{1} << traced_.size(); }

  std::size_t full_index(std::size_t kept_index, std::size_t traced_index) const {
    return scatter(kept_, kept_index) | scatter(traced_, traced_index);
  }

 private:
  std::size_t scatter(const std::vector<std::size_t>& qubits, std::size_t local) const {
    std::size_t full = 0;
    const std::size_t m = qubits.size();
    for (std::size_t p = 0; p < m; ++p) {
      const std::size_t bit = (local >> (m - 1 - p)) & 1u;
      full |= bit << (n_ - 1 - qubits[p]);
    }
    return full;
  }

  std::size_t n_;
  std::vector<std::size_t> kept_;
  std::vector<std::size_t> traced_;
};

const CMatrix& sigma_y_sigma_y() {
  static const CMatrix yy = [] {
    CMatrix m = CMatrix::Zero(4, 4);
    m(0, 3) = -1.0;
    m(1, 2) = 1.0;
    m(2, 1) = 1.0;
    m(3, 0) = -1.0;
    return m;
  }();
  return yy;
}

}  // namespace

PureState::PureState(CVector amplitudes) : amps_(std::move(amplitudes)) {
  qubits_for_dim(dim());
  const double norm2 = amps_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kNormTol) {
    std::ostringstream msg;
    msg << "PureState: squared norm " << norm2 << " differs from 1";
    throw std::invalid_argument(msg.str());
  }
}

PureState::PureState(std::initializer_list<cplx> amplitudes)
    : PureState(CVector(Eigen::Map<const CVector>(amplitudes.begin(),
                                                  static_cast<Eigen::Index>(amplitudes.size())))) {}

PureState PureState::basis(std::size_t n_qubits, std::size_t index) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (n_qubits == 0 || n_qubits > kMaxQubits || index >= dim) {
    throw std::invalid_argument("PureState::basis: index out of range");
  }
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v));
}

std::size_t PureState::qubits() const { return qubits_for_dim(dim()); }

DensityMatrix PureState::projector() const {
  return make_density_unchecked(amps_ * amps_.adjoint());
}

DensityDiagnostics diagnose(const CMatrix& rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("diagnose: matrix is not square");
  DensityDiagnostics d{};
  d.hermiticity_error = hermiticity_error(rho);
  d.trace_error = std::abs(rho.trace() - cplx(1.0, 0.0));
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(symmetrized(rho), Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();
  return d;
}

DensityMatrix::DensityMatrix(CMatrix entries) : rho_(std::move(entries)) {
  if (rho_.rows() != rho_.cols()) throw std::invalid_argument("DensityMatrix: matrix is not square");
  qubits_for_dim(dim());
  const DensityDiagnostics d = diagnose(rho_);
  if (d.hermiticity_error > kHermitianTol) {
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
  }
  if (d.trace_error > kTraceTol) throw std::invalid_argument("DensityMatrix: trace differs from 1");
  if (d.min_eigenvalue < -kPsdTol) {
    throw std::invalid_argument("DensityMatrix: matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t n_qubits) {
  if (n_qubits == 0 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("maximally_mixed: qubit count out of range");
  }
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  return make_density_unchecked(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

std::size_t DensityMatrix::qubits() const { return qubits_for_dim(dim()); }

DensityMatrix make_density_unchecked(CMatrix entries) {
  return DensityMatrix(symmetrized(entries), DensityMatrix::Trusted{});
}

PureState tensor(const PureState& a, const PureState& b) {
  const Eigen::Index na = a.amplitudes().size();
  const Eigen::Index nb = b.amplitudes().size();
  if (a.qubits() + b.qubits() > kMaxQubits) throw std::invalid_argument("tensor: too many qubits");
  CVector out(na * nb);
  for (Eigen::Index i = 0; i < na; ++i) out.segment(i * nb, nb) = a.amplitudes()(i) * b.amplitudes();
  return PureState(std::move(out));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const Eigen::Index na = a.matrix().rows();
  const Eigen::Index nb = b.matrix().rows();
  if (a.qubits() + b.qubits() > kMaxQubits) throw std::invalid_argument("tensor: too many qubits");
  CMatrix out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j) out.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
  }
  return make_density_unchecked(std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const SubsystemMap map(rho.qubits(), keep);
  const auto kd = static_cast<Eigen::Index>(map.kept_dim());
  CMatrix out = CMatrix::Zero(kd, kd);
  for (std::size_t i = 0; i < map.kept_dim(); ++i) {
    for (std::size_t j = 0; j < map.kept_dim(); ++j) {
      cplx acc = 0.0;
      for (std::size_t e = 0; e < map.traced_dim(); ++e) acc += rho(map.full_index(i, e), map.full_index(j, e));
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  }
  return make_density_unchecked(std::move(out));
}

DensityMatrix partial_trace(const PureState& psi, std::span<const std::size_t> keep) {
  const SubsystemMap map(psi.qubits(), keep);
  const auto kd = static_cast<Eigen::Index>(map.kept_dim());
  CMatrix out = CMatrix::Zero(kd, kd);
  for (std::size_t i = 0; i < map.kept_dim(); ++i) {
    for (std::size_t j = 0; j < map.kept_dim(); ++j) {
      cplx acc = 0.0;
      for (std::size_t e = 0; e < map.traced_dim(); ++e) {
        acc += psi[map.full_index(i, e)] * std::conj(psi[map.full_index(j, e)]);
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  }
  return make_density_unchecked(std::move(out));
}

EigenDecomposition hermitian_eig(const CMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("hermitian_eig: matrix is not square");
  if (hermiticity_error(h) > 1e-10) throw std::invalid_argument("hermitian_eig: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(symmetrized(h));
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: solver did not converge");
  const Eigen::Index n = h.rows();
  EigenDecomposition out{Eigen::VectorXd(n), CMatrix(n, n)};
  // Eigen returns ascending order.
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

CMatrix matrix_sqrt_psd(const CMatrix& p) {
  const EigenDecomposition eig = hermitian_eig(p);
  Eigen::VectorXd roots(eig.values.size());
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    const double v = eig.values(k);
    if (v < -kPsdTol) throw std::invalid_argument("matrix_sqrt_psd: matrix is not positive semidefinite");
    roots(k) = v > 0.0 ? std::sqrt(v) : 0.0;
  }
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

CMatrix matrix_sqrt_psd(const DensityMatrix& rho) { return matrix_sqrt_psd(rho.matrix()); }

double l1_coherence(const DensityMatrix& rho) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    for (std::size_t j = 0; j < rho.dim(); ++j) {
      if (i != j) acc += std::abs(rho(i, j));
    }
  }
  return acc;
}

double concurrence_pure(const PureState& psi) {
  if (psi.dim() != 4) throw std::invalid_argument("concurrence_pure: state must have two qubits");
  return 2.0 * std::abs(psi[0] * psi[3] - psi[1] * psi[2]);
}

WoottersForms wootters_forms(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw std::invalid_argument("concurrence_mixed: state must have two qubits");
  const CMatrix& yy = sigma_y_sigma_y();

  // Square-root eigenvalues as singular values of tau = B^T (Y x Y) B with
  // rho = B B^dagger: no square root of a near-zero eigenvalue is taken, so
  // rank-deficient states keep full precision. Eigenvalues of rho below
  // kRankCut of the largest are treated as exact zeros.
  constexpr double kRankCut = 1e-14;
  const EigenDecomposition eig = hermitian_eig(rho.matrix());
  const double cut = kRankCut * std::max(eig.values(0), 0.0);
  Eigen::Index rank = 0;
  while (rank < 4 && eig.values(rank) > cut) ++rank;
  WoottersForms out{};
  out.sqrt_eigenvalues.setZero();
  if (rank > 0) {
    CMatrix b(4, rank);
    for (Eigen::Index k = 0; k < rank; ++k) b.col(k) = std::sqrt(eig.values(k)) * eig.vectors.col(k);
    const CMatrix tau = b.transpose() * yy * b;
    const Eigen::JacobiSVD<CMatrix> svd(tau);
    for (Eigen::Index k = 0; k < rank; ++k) out.sqrt_eigenvalues(k) = svd.singularValues()(k);
  }
  const Eigen::Vector4d& l = out.sqrt_eigenvalues;
  out.ordered_difference = std::max(0.0, l(0) - l(1) - l(2) - l(3));

  // The M = sqrt(sqrt(rho) rho_tilde sqrt(rho)) form, evaluated independently
  // in extended precision.
  using LMatrix = Eigen::Matrix<std::complex<long double>, 4, 4>;
  const LMatrix r = rho.matrix().cast<std::complex<long double>>();
  const LMatrix ly = yy.cast<std::complex<long double>>();
  Eigen::SelfAdjointEigenSolver<LMatrix> rho_eig(0.5L * (r + r.adjoint()));
  Eigen::Matrix<long double, 4, 1> roots;
  for (int k = 0; k < 4; ++k) roots(k) = std::sqrt(std::max(rho_eig.eigenvalues()(k), 0.0L));
  const LMatrix root = rho_eig.eigenvectors() * roots.asDiagonal() * rho_eig.eigenvectors().adjoint();
  const LMatrix inner = root * (ly * r.conjugate() * ly) * root;
  Eigen::SelfAdjointEigenSolver<LMatrix> inner_eig(0.5L * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  long double trace_m = 0.0L;
  long double max_m = 0.0L;
  for (int k = 0; k < 4; ++k) {
    const long double m = std::sqrt(std::max(inner_eig.eigenvalues()(k), 0.0L));
    trace_m += m;
    max_m = std::max(max_m, m);
  }
  out.trace_m = static_cast<double>(trace_m);
  out.max_minus_trace = std::max(0.0, static_cast<double>(2.0L * max_m - trace_m));
  return out;
}

double concurrence_mixed(const DensityMatrix& rho) {
  const WoottersForms forms = wootters_forms(rho);
  if (std::abs(forms.ordered_difference - forms.max_minus_trace) > 1e-8) {
    throw std::logic_error("concurrence_mixed: Wootters forms disagree");
  }
  return std::min(1.0, forms.ordered_difference);
}

double purity(const DensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

double mean_photon_number(const PureState& psi, std::size_t mode) {
  if (mode >= psi.qubits()) throw std::invalid_argument("mean_photon_number: mode index out of range");
  const std::size_t keep[] = {mode};
  return std::clamp(partial_trace(psi, keep)(1, 1).real(), 0.0, 1.0);
}

double mean_photon_number(const DensityMatrix& rho, std::size_t mode) {
  if (mode >= rho.qubits()) throw std::invalid_argument("mean_photon_number: mode index out of range");
  const std::size_t keep[] = {mode};
  return std::clamp(partial_trace(rho, keep)(1, 1).real(), 0.0, 1.0);
}

}  // namespace pqm
