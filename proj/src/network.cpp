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

#include "pqm/network.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pqm/kernels.hpp"

namespace pqm {

std::string_view flavor_name(BellFlavor f) {
  switch (f) {
    case BellFlavor::psi_plus:
      return "psi+";
    case BellFlavor::psi_minus:
      return "psi-";
    case BellFlavor::phi_plus:
      return "phi+";
    case BellFlavor::phi_minus:
      return "phi-";
  }
  return "unknown";
}

std::optional<BellFlavor> parse_flavor(std::string_view name) {
  for (BellFlavor f : {BellFlavor::psi_plus, BellFlavor::psi_minus, BellFlavor::phi_plus,
                       BellFlavor::phi_minus}) {
    if (flavor_name(f) == name) return f;
  }
  return std::nullopt;
}

bool is_psi(BellFlavor f) { return f == BellFlavor::psi_plus || f == BellFlavor::psi_minus; }

BellDrive::BellDrive(BellFlavor flavor, double t_osc) : flavor_(flavor), t_osc_(t_osc) {
  if (!(t_osc > 0.0)) throw std::invalid_argument("BellDrive: T_osc must be positive");
}

Amplitudes BellDrive::amplitudes_at(double t) const {
  const double phase = std::numbers::pi * t / t_osc_;
  return {std::sin(phase), std::cos(phase)};
}

PureState BellDrive::state_at(double t) const {
  const Amplitudes a = amplitudes_at(t);
  const double sign =
      (flavor_ == BellFlavor::psi_minus || flavor_ == BellFlavor::phi_minus) ? -1.0 : 1.0;
  CVector v = CVector::Zero(4);
  if (is_psi(flavor_)) {
    v(1) = a.alpha;
    v(2) = sign * a.beta;
  } else {
    v(0) = a.alpha;
    v(3) = sign * a.beta;
  }
  return PureState(std::move(v));
}

PureState bell_state_at(const BellDrive& drive, double t) { return drive.state_at(t); }

LocalPhotons local_mean_photon(const PureState& psi) {
  if (psi.dim() != 4) throw std::invalid_argument("local_mean_photon: state must have two qubits");
  return {mean_photon_number(psi, 0), mean_photon_number(psi, 1)};
}

PureState evolve_pair(const PureState& psi_in, double R, double R_prime, PairOrder order) {
  if (psi_in.dim() != 4) throw std::invalid_argument("evolve_pair: input must have two qubits");
  std::array<cplx, 16> amps{};
  // (a, a') -> 8a + 2a' with both ancillas empty.
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t ap = 0; ap < 2; ++ap) amps[8 * a + 2 * ap] = psi_in[2 * a + ap];
  }
  const auto u1 = pqm_unitary_row_major(R);
  const auto u2 = pqm_unitary_row_major(R_prime);
  if (order == PairOrder::first_then_second) {
    kernels::apply_two_qubit(amps, 3, 2, u1);
    kernels::apply_two_qubit(amps, 1, 0, u2);
  } else {
    kernels::apply_two_qubit(amps, 1, 0, u2);
    kernels::apply_two_qubit(amps, 3, 2, u1);
  }
  return PureState(CVector(Eigen::Map<const CVector>(amps.data(), 16)));
}

DensityMatrix step_pair(const PureState& psi_in, double R, double R_prime) {
  static constexpr std::size_t keep_outputs[] = {0, 2};
  return partial_trace(evolve_pair(psi_in, R, R_prime), keep_outputs);
}

double concurrence_out_closed_form(double alpha, double beta, double R, double R_prime,
                                   BellFlavor flavor) {
  const double transmit = std::sqrt(std::max(0.0, 1.0 - R)) * std::sqrt(std::max(0.0, 1.0 - R_prime));
  if (is_psi(flavor)) return 2.0 * std::abs(alpha) * std::abs(beta) * transmit;
  const double reflect = std::sqrt(std::max(0.0, R)) * std::sqrt(std::max(0.0, R_prime));
  const double c = 2.0 * std::abs(beta) * transmit * (std::abs(alpha) - std::abs(beta) * reflect);
  return std::max(0.0, c);
}

double coherence_out_closed_form(double alpha, double beta, double R, double R_prime) {
  const double transmit = std::sqrt(std::max(0.0, 1.0 - R)) * std::sqrt(std::max(0.0, 1.0 - R_prime));
  return 2.0 * std::abs(alpha * beta) * transmit;
}

std::vector<TraceRecord> run_pair_trace(BellFlavor flavor, double t_int, double t_osc, double dt,
                                        double n_periods, const PairTraceOptions& options) {
  const BellDrive drive(flavor, t_osc);
  if (!(n_periods > 0.0)) throw std::invalid_argument("run_pair_trace: n_periods must be positive");

  PairState state{MemristorState(t_int, dt, options.start), MemristorState(t_int, dt, options.start),
                  DensityMatrix::maximally_mixed(2)};
  if (options.start == WindowStart::prefilled) {
    state.mem1.prefill([&drive](double t) { return local_mean_photon(drive.state_at(t)).n1; }, 0.0);
    state.mem2.prefill([&drive](double t) { return local_mean_photon(drive.state_at(t)).n2; }, 0.0);
  }

  const std::size_t n_steps = steps_for(n_periods * t_osc, dt);
  std::vector<TraceRecord> records;
  records.reserve(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const PureState psi = drive.state_at(t);
    const LocalPhotons local = local_mean_photon(psi);
    state.mem1.update(t, local.n1);
    state.mem2.update(t, local.n2);
    const double R = state.mem1.reflectivity();
    const double R_prime = state.mem2.reflectivity();
    state.rho_out = step_pair(psi, R, R_prime);

    TraceRecord rec;
    rec.t = t;
    rec.n_in = local.n1;
    rec.n_out = mean_photon_number(state.rho_out, 0);
    rec.R = R;
    rec.R_prime = R_prime;
    rec.c_l1_in = l1_coherence(psi.projector());
    rec.c_l1_out = l1_coherence(state.rho_out);
    rec.conc_in = concurrence_pure(psi);
    rec.conc_out = concurrence_mixed(state.rho_out);
    records.push_back(rec);
  }
  return records;
}

}  // namespace pqm
