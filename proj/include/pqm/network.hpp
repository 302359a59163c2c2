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
#include <vector>

#include "pqm/memristor.hpp"
#include "pqm/qstate.hpp"
#include "pqm/trace.hpp"

// Two independent memristors fed by the two halves of a time-dependent Bell
// pair. The joint register is (A, B, A', B'): qubit 0 = A, 1 = B, 2 = A',
// 3 = B'. After the beamsplitters, qubits 0 and 2 are the outputs C and C',
// qubits 1 and 3 the measured modes D and D'.

namespace pqm {

enum class BellFlavor { psi_plus, psi_minus, phi_plus, phi_minus };

std::string_view flavor_name(BellFlavor f);
std::optional<BellFlavor> parse_flavor(std::string_view name);
bool is_psi(BellFlavor f);

// alpha = sin(pi t / T_osc), beta = cos(pi t / T_osc).
class BellDrive {
 public:
  BellDrive(BellFlavor flavor, double t_osc);

  BellFlavor flavor() const { return flavor_; }
  double t_osc() const { return t_osc_; }
  Amplitudes amplitudes_at(double t) const;

  // alpha|01> +- beta|10> (Psi) or alpha|00> +- beta|11> (Phi) on (A, A').
  PureState state_at(double t) const;

 private:
  BellFlavor flavor_;
  double t_osc_;
};

PureState bell_state_at(const BellDrive& drive, double t);

struct LocalPhotons {
  double n1;  // mode A
  double n2;  // mode A'
};

LocalPhotons local_mean_photon(const PureState& psi);

enum class PairOrder { first_then_second, second_then_first };

// Embeds psi_in with vacuum ancillas and applies both beamsplitters on the
// full 16-dimensional register.
PureState evolve_pair(const PureState& psi_in, double R, double R_prime,
                      PairOrder order = PairOrder::first_then_second);

// Reduced state on (C, C') after tracing out (D, D').
DensityMatrix step_pair(const PureState& psi_in, double R, double R_prime);

double concurrence_out_closed_form(double alpha, double beta, double R, double R_prime,
                                   BellFlavor flavor);
double coherence_out_closed_form(double alpha, double beta, double R, double R_prime);

struct PairState {
  MemristorState mem1;
  MemristorState mem2;
  DensityMatrix rho_out;
};

struct PairTraceOptions {
  WindowStart start = WindowStart::prefilled;
};

// Records at t_k = k dt for k = 0 .. round(n_periods T_osc / dt). Each
// memristor is fed only by its own local photon number. Throws
// std::invalid_argument when dt >= T_int.
std::vector<TraceRecord> run_pair_trace(BellFlavor flavor, double t_int, double t_osc, double dt,
                                        double n_periods, const PairTraceOptions& options = {});

}  // namespace pqm
