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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pqm/memristor.hpp"
#include "pqm/rng.hpp"
#include "pqm/trace.hpp"

// Gate-level emulation of the memristor as a sequence of two-qubit circuits:
// per time step, prepare the input qubit with a y-rotation, apply the
// beamsplitter unitary for the current reflectivity, measure the ancilla and
// feed the estimated input photon number back into the window. Each step uses
// a fresh qubit pair, so a run of n steps needs 2n qubits.

namespace pqm {

enum class FeedbackMode { exact_probability, sampled };

std::string_view feedback_mode_name(FeedbackMode m);
std::optional<FeedbackMode> parse_feedback_mode(std::string_view name);

struct StepCircuit {
  double prep_angle;  // radians in [0, 2 pi)
  Eigen::Matrix4cd unitary;
  std::size_t measured_qubit = 1;
};

struct ShotResult {
  std::uint64_t shots;
  std::uint64_t ones;
  double p_hat;
};

inline constexpr std::uint64_t kDefaultShots = 4092;

struct DigitalConfig {
  std::size_t n_steps = 14;
  std::uint64_t shots = kDefaultShots;
  std::uint64_t seed = 0;
  FeedbackMode feedback_mode = FeedbackMode::sampled;
  double t_int = 0.5;
  double t_osc = 1.0;
  double n_periods = 1.0;
  // Probability that a single ancilla readout is flipped. Off by default.
  double readout_flip = 0.0;
  double estimator_guard = kDefaultEstimatorGuard;
};

// Rotation angle such that Ry(angle)|0> = cos(pi t/T_osc)|0> + sin(pi t/T_osc)|1>
// up to a global sign, wrapped into [0, 2 pi).
double ry_angle_for_input(double t, double t_osc);

StepCircuit build_step_circuit(double t, double R, double t_osc);

// P(ancilla = 1) from an exact statevector run of the circuit.
double ancilla_probability(const StepCircuit& circuit);

// Binomial draw of `shots` ancilla readouts with success probability p.
ShotResult sample_counts(double p, std::uint64_t shots, PhiloxStream& rng);

struct DigitalRun {
  std::vector<TraceRecord> records;  // one per step, t_k = k dt for k < n_steps
  std::vector<double> applied_R;     // reflectivity each step's circuit was built with
  std::size_t qubit_budget = 0;
  std::size_t degenerate_steps = 0;
  std::size_t clamp_events = 0;
  double dt = 0.0;
};

// dt = n_periods T_osc / n_steps. Record R is the reflectivity after the step's
// estimate entered the window and n_out = (1 - R) n_in_estimate. Sampled steps
// draw from the stream (seed, step index). Throws std::invalid_argument when
// dt >= T_int or the config is otherwise invalid.
DigitalRun run_digital(const DigitalConfig& config);

}  // namespace pqm
