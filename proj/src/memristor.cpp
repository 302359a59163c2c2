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

#include "pqm/memristor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pqm/fault_injection.hpp"
#include "pqm/kernels.hpp"

namespace pqm {
namespace {

constexpr double kPi = std::numbers::pi;

// Relative slack, in units of dt, for deciding that two grid times coincide.
constexpr double kGridSlack = 1e-6;

std::atomic<double> g_closed_form_scale{1.0};

}  // namespace

namespace fault_injection {

void set_closed_form_scale(double scale) { g_closed_form_scale.store(scale); }
double closed_form_scale() { return g_closed_form_scale.load(); }

}  // namespace fault_injection

DriveSignal::DriveSignal(double t_osc) : t_osc_(t_osc) {
  if (!(t_osc > 0.0)) throw std::invalid_argument("DriveSignal: T_osc must be positive");
}

Amplitudes DriveSignal::amplitudes_at(double t) const {
  const double phase = kPi * t / t_osc_;
  return {std::cos(phase), std::sin(phase)};
}

double DriveSignal::mean_photon_at(double t) const {
  const double s = std::sin(kPi * t / t_osc_);
  return s * s;
}

Amplitudes amplitudes_at(const DriveSignal& drive, double t) { return drive.amplitudes_at(t); }

double reflectivity_closed_form(double t, double t_int, double t_osc) {
  if (!(t_int > 0.0) || !(t_osc > 0.0)) {
    throw std::invalid_argument("reflectivity_closed_form: periods must be positive");
  }
  const double w = 2.0 * kPi / t_osc;
  const double four_pi = 4.0 * kPi * g_closed_form_scale.load(std::memory_order_relaxed);
  const double r = (t_osc / t_int) * (std::sin(w * (t - t_int)) - std::sin(w * t)) / four_pi + 0.5;
  if (t_int <= t_osc && (r < -1e-12 || r > 1.0 + 1e-12) &&
      g_closed_form_scale.load(std::memory_order_relaxed) == 1.0) {
    throw std::logic_error("reflectivity_closed_form: result left [0, 1]");
  }
  return r;
}

double window_average_law(const WindowView& w) {
  if (w.samples.empty()) return 0.5;
  const double eps = kGridSlack * w.dt;
  const double lower = w.now - w.t_int;
  const double first_time = w.times.front();

  double integral = 0.0;
  double span = 0.0;
  if (first_time < lower - eps && w.samples.size() >= 2) {
    // Boundary sample sits before the window edge: interpolate the edge value
    // and integrate the partial first interval by hand.
    const double t0 = w.times[0];
    const double t1 = w.times[1];
    const double n0 = w.samples[0];
    const double n1 = w.samples[1];
    const double edge = n0 + (n1 - n0) * (lower - t0) / (t1 - t0);
    integral = 0.5 * (t1 - lower) * (edge + n1) + w.dt * kernels::trapezoid(w.samples.subspan(1));
    span = w.t_int;
  } else {
    integral = w.dt * kernels::trapezoid(w.samples);
    span = w.now - first_time;
  }

  if (w.start == WindowStart::cold && span < w.t_int - eps) {
    if (span <= 0.0) return 0.5;
    return 0.5 + (integral - 0.5 * span) / span;
  }
  return 0.5 + (integral - 0.5 * span) / w.t_int;
}

MemristorState::MemristorState(double t_int, double dt, WindowStart start, UpdateLaw law)
    : t_int_(t_int), dt_(dt), start_(start), law_(std::move(law)) {
  if (!(dt > 0.0)) throw std::invalid_argument("MemristorState: dt must be positive");
  if (!(t_int > 0.0)) throw std::invalid_argument("MemristorState: T_int must be positive");
  if (dt >= t_int) throw std::invalid_argument("MemristorState: dt must be smaller than T_int");
  if (!law_) throw std::invalid_argument("MemristorState: update law is empty");
  const auto capacity = static_cast<std::size_t>(std::ceil(t_int / dt)) + 4;
  times_.reserve(2 * capacity);
  samples_.reserve(2 * capacity);
}

void MemristorState::prefill(const std::function<double(double)>& n_of_t, double t_start) {
  if (start_ != WindowStart::prefilled) throw std::logic_error("prefill: state uses a cold start");
  if (prefilled_ || head_ != times_.size()) throw std::logic_error("prefill: window already holds samples");
  const auto m = static_cast<long>(std::ceil(t_int_ / dt_ - 1e-9));
  for (long k = m + 1; k >= 1; --k) {
    const double t = t_start - static_cast<double>(k) * dt_;
    push(t, std::clamp(n_of_t(t), 0.0, 1.0));
  }
  prefilled_ = true;
  const double now = t_start - dt_;
  evict(now);
  recompute(now);
}

void MemristorState::update(double t, double n_sample) {
  if (!ready()) throw std::logic_error("MemristorState::update: prefilled state has no history");
  if (!(n_sample >= -1e-12 && n_sample <= 1.0 + 1e-12)) {
    throw std::invalid_argument("MemristorState::update: sample outside [0, 1]");
  }
  if (head_ < times_.size()) {
    const double expected = times_.back() + dt_;
    if (std::abs(t - expected) > kGridSlack * dt_) {
      throw std::invalid_argument("MemristorState::update: time must advance by exactly dt");
    }
  }
  push(t, std::clamp(n_sample, 0.0, 1.0));
  evict(t);
  recompute(t);
}

WindowView MemristorState::window() const {
  const std::size_t n = times_.size() - head_;
  const double now = n > 0 ? times_.back() : 0.0;
  return WindowView{std::span<const double>(times_.data() + head_, n),
                    std::span<const double>(samples_.data() + head_, n), now, t_int_, dt_, start_};
}

void MemristorState::push(double t, double n) {
  if (head_ > 0 && head_ * 2 > times_.size()) {
    times_.erase(times_.begin(), times_.begin() + static_cast<std::ptrdiff_t>(head_));
    samples_.erase(samples_.begin(), samples_.begin() + static_cast<std::ptrdiff_t>(head_));
    head_ = 0;
  }
  times_.push_back(t);
  samples_.push_back(n);
}

void MemristorState::evict(double now) {
  const double lower = now - t_int_ + kGridSlack * dt_;
  while (times_.size() - head_ >= 2 && times_[head_ + 1] <= lower) ++head_;
}

void MemristorState::recompute(double now) {
  WindowView view = window();
  view.now = now;
  const double r = law_(view);
  if (r < 0.0 || r > 1.0) {
    ++clamp_events_;
    r_ = std::clamp(r, 0.0, 1.0);
  } else {
    r_ = r;
  }
}

MemristorState reflectivity_update(MemristorState state, double t, double n_in_sample) {
  state.update(t, n_in_sample);
  return state;
}

Eigen::Matrix4cd pqm_unitary(double R) {
  if (!(R >= -1e-12 && R <= 1.0 + 1e-12)) throw std::invalid_argument("pqm_unitary: R outside [0, 1]");
  const double r = std::clamp(R, 0.0, 1.0);
  const double t = std::sqrt(1.0 - r);
  const cplx i_r(0.0, std::sqrt(r));
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  u(0, 0) = 1.0;
  u(1, 1) = t;
  u(1, 2) = i_r;
  u(2, 1) = i_r;
  u(2, 2) = t;
  u(3, 3) = 1.0;
  return u;
}

std::array<cplx, 16> pqm_unitary_row_major(double R) {
  const Eigen::Matrix4cd u = pqm_unitary(R);
  std::array<cplx, 16> out{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out[static_cast<std::size_t>(4 * r + c)] = u(r, c);
  }
  return out;
}

double theta_from_reflectivity(double R) {
  if (!(R >= 0.0 && R <= 1.0)) throw std::invalid_argument("theta_from_reflectivity: R outside [0, 1]");
  return std::asin(std::sqrt(R));
}

StepOutput step_single(double alpha, double beta, double R) {
  if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-12) {
    throw std::invalid_argument("step_single: amplitudes are not normalized");
  }
  const auto unitary = pqm_unitary_row_major(R);
  std::array<cplx, 4> amps{alpha, 0.0, beta, 0.0};
  kernels::apply_two_qubit(amps, 1, 0, unitary);
  const PureState out(CVector(Eigen::Map<const CVector>(amps.data(), 4)));

  static constexpr std::size_t keep_c[] = {0};
  static constexpr std::size_t keep_d[] = {1};
  DensityMatrix rho_c = partial_trace(out, keep_c);
  const double p_meas = partial_trace(out, keep_d)(1, 1).real();
  const double n_out = rho_c(1, 1).real();
  return StepOutput{std::move(rho_c), p_meas, n_out};
}

double output_coherence_closed_form(double alpha, double beta, double R) {
  return 2.0 * std::abs(alpha * beta) * std::sqrt(std::max(0.0, 1.0 - R));
}

InputEstimate estimate_n_in(double p_meas, double R, double previous_estimate, double guard) {
  if (R < guard) return {previous_estimate, true};
  return {std::clamp(p_meas / R, 0.0, 1.0), false};
}

std::size_t steps_for(double duration, double dt) {
  if (!(dt > 0.0) || !(duration >= 0.0)) throw std::invalid_argument("steps_for: invalid duration or step");
  const double n = std::round(duration / dt);
  if (std::abs(n * dt - duration) > 1e-9 * std::max(duration, dt)) {
    throw std::invalid_argument("steps_for: dt does not divide the duration");
  }
  return static_cast<std::size_t>(n);
}

std::vector<TraceRecord> run_single_trace(double t_int, double t_osc, double dt, double n_periods,
                                          const SingleTraceOptions& options) {
  const DriveSignal drive(t_osc);
  if (!(n_periods > 0.0)) throw std::invalid_argument("run_single_trace: n_periods must be positive");
  MemristorState mem(t_int, dt, options.start);
  if (options.start == WindowStart::prefilled) {
    mem.prefill([&drive](double t) { return drive.mean_photon_at(t); }, 0.0);
  }

  const std::size_t n_steps = steps_for(n_periods * t_osc, dt);
  std::vector<TraceRecord> records;
  records.reserve(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Amplitudes a = drive.amplitudes_at(t);
    const double n_in = a.beta * a.beta;
    mem.update(t, n_in);
    const double R = mem.reflectivity();
    const StepOutput step = step_single(a.alpha, a.beta, R);

    TraceRecord rec;
    rec.t = t;
    rec.n_in = n_in;
    rec.n_out = step.n_out;
    rec.R = R;
    rec.c_l1_in = 2.0 * std::abs(a.alpha * a.beta);
    rec.c_l1_out = l1_coherence(step.rho_out_C);
    records.push_back(rec);
  }
  return records;
}

}  // namespace pqm
