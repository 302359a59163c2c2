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

// AArch64 only; NEON is part of the base ISA there, so no runtime probe.

#if defined(PQM_HAVE_NEON)

#include <arm_neon.h>

#include <cmath>

#include "kernels_internal.hpp"
#include "pqm/kernels.hpp"

namespace pqm::kernels::detail {
namespace {

double sum_neon(const double* v, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vld1q_f64(v + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(v + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += v[i];
  return acc;
}

double shoelace_neon(const double* x, const double* y, std::size_t n) {
  if (n < 3) return 0.0;
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 3 <= n; i += 2) {
    const float64x2_t x0 = vld1q_f64(x + i);
    const float64x2_t y0 = vld1q_f64(y + i);
    const float64x2_t x1 = vld1q_f64(x + i + 1);
    const float64x2_t y1 = vld1q_f64(y + i + 1);
    acc = vfmaq_f64(acc, x0, y1);
    acc = vfmsq_f64(acc, x1, y0);
  }
  double tail = vaddvq_f64(acc);
  for (; i + 1 < n; ++i) tail += x[i] * y[i + 1] - x[i + 1] * y[i];
  tail += x[n - 1] * y[0] - x[0] * y[n - 1];
  return 0.5 * tail;
}

double length_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 3 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(x + i + 1), vld1q_f64(x + i));
    const float64x2_t dy = vsubq_f64(vld1q_f64(y + i + 1), vld1q_f64(y + i));
    acc = vaddq_f64(acc, vsqrtq_f64(vfmaq_f64(vmulq_f64(dy, dy), dx, dx)));
  }
  double tail = vaddvq_f64(acc);
  for (; i + 1 < n; ++i) {
    const double dx = x[i + 1] - x[i];
    const double dy = y[i + 1] - y[i];
    tail += std::sqrt(dx * dx + dy * dy);
  }
  return tail;
}

// Two lanes hold one complex amplitude; the 4x4 product is a short chain of
// complex FMAs per output row.
void apply_two_qubit_neon(std::complex<double>* state, std::size_t dim,
                          unsigned hi_bit, unsigned lo_bit,
                          const std::complex<double>* u) {
  auto* raw = reinterpret_cast<double*>(state);
  const std::size_t groups = dim / 4;
  for (std::size_t g = 0; g < groups; ++g) {
    const auto idx = quad_indices(g, hi_bit, lo_bit);
    float64x2_t in[4];
    for (int c = 0; c < 4; ++c) in[c] = vld1q_f64(raw + 2 * idx[c]);
    for (int r = 0; r < 4; ++r) {
      float64x2_t acc = vdupq_n_f64(0.0);
      for (int c = 0; c < 4; ++c) {
        const double ur = u[4 * r + c].real();
        const double ui = u[4 * r + c].imag();
        // (ur + i ui)(a + i b) = (ur a - ui b) + i (ur b + ui a)
        const float64x2_t swapped = vextq_f64(in[c], in[c], 1);
        const float64x2_t signs = {-ui, ui};
        acc = vfmaq_n_f64(acc, in[c], ur);
        acc = vfmaq_f64(acc, swapped, signs);
      }
      vst1q_f64(raw + 2 * idx[r], acc);
    }
  }
}

}  // namespace

const Table& neon_table() {
  static const Table table{sum_neon, shoelace_neon, length_neon, apply_two_qubit_neon};
  return table;
}

}  // namespace pqm::kernels::detail

#endif  // PQM_HAVE_NEON
