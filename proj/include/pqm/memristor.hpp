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

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pqm/qstate.hpp"
#include "pqm/trace.hpp"

// Single photonic quantum memristor: a beamsplitter whose reflectivity is the
// moving average of the input photon number over the last T_int time units.
// Mode A carries the input photon, mode B is a vacuum ancilla; after the
// beamsplitter, mode C (qubit 0) is the output and mode D (qubit 1) is
// measured to feed the reflectivity back.

namespace pqm {

struct Amplitudes {
  double alpha;
  double beta;
};

// Periodic single-mode input alpha = cos(pi t / T_osc), beta = sin(pi t / T_osc).
class DriveSignal {
 public:
  explicit DriveSignal(double t_osc);

  double t_osc() const { return t_osc_; }
  Amplitudes amplitudes_at(double t) const;
  double mean_photon_at(double t) const;

 private:
  double t_osc_;
};

Amplitudes amplitudes_at(const DriveSignal& drive, double t);

// Reflectivity of the window law driven by DriveSignal, integrated exactly.
// Throws std::invalid_argument for non-positive periods.
double reflectivity_closed_form(double t, double t_int, double t_osc);

enum class WindowStart {
  // History for t < start is supplied through prefill(); the first update
  // already sees a full window.
  prefilled,
  // Empty history and R = 0.5; the average is normalized by the elapsed span
  // until the window fills.
  cold,
};

// Read-only view of the buffered samples handed to an update law.
struct WindowView {
  std::span<const double> times;
  std::span<const double> samples;
  double now;
  double t_int;
  double dt;
  WindowStart start;
};

// Maps the buffered window to an unclamped reflectivity.
using UpdateLaw = std::function<double(const WindowView&)>;

// R = 0.5 + (1/T_int) * integral over [now - T_int, now] of (n - 0.5),
// trapezoidal over the buffered samples with linear interpolation at the
// lower window edge.
double window_average_law(const WindowView& window);

class MemristorState {
 public:
  // Throws std::invalid_argument unless 0 < dt < t_int.
  MemristorState(double t_int, double dt, WindowStart start = WindowStart::prefilled,
                 UpdateLaw law = window_average_law);

  // Fills the history for t in [t_start - T_int - dt, t_start) on the dt grid
  // and sets R from it. Only valid for prefilled states before any update.
  void prefill(const std::function<double(double)>& n_of_t, double t_start);

  // Pushes (t, n_sample), evicts samples that fell out of the window and
  // recomputes R, clamped to [0, 1]. Throws std::invalid_argument when t does
  // not advance by dt or the sample lies outside [0, 1].
  void update(double t, double n_sample);

  double reflectivity() const { return r_; }
  double t_int() const { return t_int_; }
  double dt() const { return dt_; }
  WindowStart start() const { return start_; }
  std::size_t clamp_events() const { return clamp_events_; }
  bool ready() const { return start_ == WindowStart::cold || prefilled_; }

  WindowView window() const;

 private:
  void push(double t, double n);
  void evict(double now);
  void recompute(double now);

  double t_int_;
  double dt_;
  WindowStart start_;
  UpdateLaw law_;
  std::vector<double> times_;
  std::vector<double> samples_;
  std::size_t head_ = 0;
  double r_ = 0.5;
  std::size_t clamp_events_ = 0;
  bool prefilled_ = false;
};

// Value-semantics form of MemristorState::update.
MemristorState reflectivity_update(MemristorState state, double t, double n_in_sample);

// Beamsplitter on (A, B) in the basis {|00>, |01>, |10>, |11>}, restricted
// to at most one photon. Throws when R lies outside [0, 1] by more than 1e-12.
Eigen::Matrix4cd pqm_unitary(double R);
std::array<cplx, 16> pqm_unitary_row_major(double R);

// Beamsplitter angle with sin^2(theta) = R.
double theta_from_reflectivity(double R);

struct StepOutput {
  DensityMatrix rho_out_C;
  double p_meas_D;
  double n_out;
};

// Evolves (alpha|0> + beta|1>) (x) |0> through the beamsplitter and traces out
// mode D. Throws when alpha^2 + beta^2 differs from 1 by more than 1e-12.
StepOutput step_single(double alpha, double beta, double R);

// 2|alpha beta| sqrt(1 - R).
double output_coherence_closed_form(double alpha, double beta, double R);

inline constexpr double kDefaultEstimatorGuard = 0.01;

struct InputEstimate {
  double n_in;
  bool degenerate;  // R fell below the guard; n_in is the previous estimate
};

// Recovers the input photon number from the click probability on mode D:
// p / R clamped to [0, 1].
InputEstimate estimate_n_in(double p_meas, double R, double previous_estimate,
                            double guard = kDefaultEstimatorGuard);

struct SingleTraceOptions {
  WindowStart start = WindowStart::prefilled;
};

// Records at t_k = k dt for k = 0 .. round(n_periods T_osc / dt), the last
// one sitting on the period boundary. R in each record already includes the
// sample at t_k. Throws std::invalid_argument when dt >= T_int.
std::vector<TraceRecord> run_single_trace(double t_int, double t_osc, double dt, double n_periods,
                                          const SingleTraceOptions& options = {});

// Number of dt steps spanning `duration`, rejecting grids that do not divide
// it to within 1e-9 relative.
std::size_t steps_for(double duration, double dt);

}  // namespace pqm
