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

#include "pqm/digital.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "pqm/kernels.hpp"

namespace pqm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Ry(theta) on the more significant qubit, identity on the ancilla.
std::array<cplx, 16> ry_on_first(double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  std::array<cplx, 16> m{};
  m[0 * 4 + 0] = c;
  m[0 * 4 + 2] = -s;
  m[1 * 4 + 1] = c;
  m[1 * 4 + 3] = -s;
  m[2 * 4 + 0] = s;
  m[2 * 4 + 2] = c;
  m[3 * 4 + 1] = s;
  m[3 * 4 + 3] = c;
  return m;
}

}  // namespace

std::string_view feedback_mode_name(FeedbackMode m) {
  return m == FeedbackMode::sampled ? "sampled" : "exact_probability";
}

std::optional<FeedbackMode> parse_feedback_mode(std::string_view name) {
  if (name == "sampled") return FeedbackMode::sampled;
  if (name == "exact_probability" || name == "exact") return FeedbackMode::exact_probability;
  return std::nullopt;
}

double ry_angle_for_input(double t, double t_osc) {
  if (!(t_osc > 0.0)) throw std::invalid_argument("ry_angle_for_input: T_osc must be positive");
  double theta = std::fmod(kTwoPi * t / t_osc, kTwoPi);
  if (theta < 0.0) theta += kTwoPi;
  if (theta >= kTwoPi) theta = 0.0;
  return theta;
}

StepCircuit build_step_circuit(double t, double R, double t_osc) {
  return StepCircuit{ry_angle_for_input(t, t_osc), pqm_unitary(R), 1};
}

double ancilla_probability(const StepCircuit& circuit) {
  if (circuit.measured_qubit != 1) throw std::invalid_argument("ancilla_probability: ancilla must be qubit 1");
  std::array<cplx, 4> amps{1.0, 0.0, 0.0, 0.0};
  kernels::apply_two_qubit(amps, 1, 0, ry_on_first(circuit.prep_angle));
  std::array<cplx, 16> u{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) u[static_cast<std::size_t>(4 * r + c)] = circuit.unitary(r, c);
  }
  kernels::apply_two_qubit(amps, 1, 0, u);
  return std::norm(amps[1]) + std::norm(amps[3]);
}

ShotResult sample_counts(double p, std::uint64_t shots, PhiloxStream& rng) {
  if (shots == 0) throw std::invalid_argument("sample_counts: shots must be positive");
  if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) throw std::invalid_argument("sample_counts: p outside [0, 1]");
  std::uint64_t ones = 0;
  if (p >= 1.0) {
    ones = shots;
  } else if (p > 0.0) {
    std::binomial_distribution<std::uint64_t> draw(shots, p);
    ones = draw(rng);
  }
  return ShotResult{shots, ones, static_cast<double>(ones) / static_cast<double>(shots)};
}

DigitalRun run_digital(const DigitalConfig& config) {
  if (config.n_steps == 0) throw std::invalid_argument("run_digital: n_steps must be positive");
  if (config.shots == 0) throw std::invalid_argument("run_digital: shots must be positive");
  if (!(config.n_periods > 0.0)) throw std::invalid_argument("run_digital: n_periods must be positive");
  if (!(config.readout_flip >= 0.0 && config.readout_flip <= 0.5)) {
    throw std::invalid_argument("run_digital: readout_flip must lie in [0, 0.5]");
  }
  const DriveSignal drive(config.t_osc);
  const double dt = config.n_periods * config.t_osc / static_cast<double>(config.n_steps);
  if (dt >= config.t_int) {
    throw std::invalid_argument("run_digital: too few steps, dt must be smaller than T_int");
  }

  MemristorState mem(config.t_int, dt, WindowStart::prefilled);
  mem.prefill([&drive](double t) { return drive.mean_photon_at(t); }, 0.0);

  DigitalRun run;
  run.dt = dt;
  run.qubit_budget = 2 * config.n_steps;
  run.records.reserve(config.n_steps);
  run.applied_R.reserve(config.n_steps);

  double previous = drive.mean_photon_at(-dt);
  for (std::size_t k = 0; k < config.n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double applied = mem.reflectivity();
    const StepCircuit circuit = build_step_circuit(t, applied, config.t_osc);
    const double p_exact = ancilla_probability(circuit);

    double p_observed = p_exact;
    if (config.feedback_mode == FeedbackMode::sampled) {
      const double q = config.readout_flip;
      const double p_readout = p_exact * (1.0 - q) + (1.0 - p_exact) * q;
      PhiloxStream stream(config.seed, k);
      p_observed = sample_counts(p_readout, config.shots, stream).p_hat;
    }

    const InputEstimate estimate = estimate_n_in(p_observed, applied, previous, config.estimator_guard);
    if (estimate.degenerate) ++run.degenerate_steps;
    previous = estimate.n_in;
    mem.update(t, estimate.n_in);
    const double R = mem.reflectivity();

    TraceRecord rec;
    rec.t = t;
    rec.n_in = estimate.n_in;
    rec.n_out = (1.0 - R) * estimate.n_in;
    rec.R = R;
    rec.p_meas = p_observed;
    run.records.push_back(rec);
    run.applied_R.push_back(applied);
  }
  run.clamp_events = mem.clamp_events();
  return run;
}

}  // namespace pqm
