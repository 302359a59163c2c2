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

// Compiled with -mavx2 -mfma. Nothing in here may run before the dispatcher
// has confirmed CPU support.

#if defined(PQM_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

#include "kernels_internal.hpp"
#include "pqm/kernels.hpp"

namespace pqm::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum_avx2(const double* v, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(v + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(v + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(v + i));
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += v[i];
  return acc;
}

double shoelace_avx2(const double* x, const double* y, std::size_t n) {
  if (n < 3) return 0.0;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 5 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(x + i);
    const __m256d y0 = _mm256_loadu_pd(y + i);
    const __m256d x1 = _mm256_loadu_pd(x + i + 1);
    const __m256d y1 = _mm256_loadu_pd(y + i + 1);
    acc = _mm256_fmadd_pd(x0, y1, acc);
    acc = _mm256_fnmadd_pd(x1, y0, acc);
  }
  double tail = hsum(acc);
  for (; i + 1 < n; ++i) tail += x[i] * y[i + 1] - x[i + 1] * y[i];
  tail += x[n - 1] * y[0] - x[0] * y[n - 1];
  return 0.5 * tail;
}

double length_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 5 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x + i + 1), _mm256_loadu_pd(x + i));
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y + i + 1), _mm256_loadu_pd(y + i));
    const __m256d sq = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
    acc = _mm256_add_pd(acc, _mm256_sqrt_pd(sq));
  }
  double tail = hsum(acc);
  for (; i + 1 < n; ++i) {
    const double dx = x[i + 1] - x[i];
    const double dy = y[i + 1] - y[i];
    tail += std::sqrt(dx * dx + dy * dy);
  }
  return tail;
}

// Four amplitude groups per pass, split into real and imaginary lanes.
void apply_two_qubit_avx2(std::complex<double>* state, std::size_t dim,
                          unsigned hi_bit, unsigned lo_bit,
                          const std::complex<double>* u) {
  const std::size_t groups = dim / 4;
  auto* raw = reinterpret_cast<double*>(state);
  std::size_t g = 0;
  for (; g + 4 <= groups; g += 4) {
    std::array<std::array<std::size_t, 4>, 4> idx;
    for (int lane = 0; lane < 4; ++lane) idx[lane] = quad_indices(g + lane, hi_bit, lo_bit);

    __m256d re[4];
    __m256d im[4];
    for (int c = 0; c < 4; ++c) {
      re[c] = _mm256_set_pd(raw[2 * idx[3][c]], raw[2 * idx[2][c]],
                            raw[2 * idx[1][c]], raw[2 * idx[0][c]]);
      im[c] = _mm256_set_pd(raw[2 * idx[3][c] + 1], raw[2 * idx[2][c] + 1],
                            raw[2 * idx[1][c] + 1], raw[2 * idx[0][c] + 1]);
    }
    for (int r = 0; r < 4; ++r) {
      __m256d out_re = _mm256_setzero_pd();
      __m256d out_im = _mm256_setzero_pd();
      for (int c = 0; c < 4; ++c) {
        const __m256d ur = _mm256_set1_pd(u[4 * r + c].real());
        const __m256d ui = _mm256_set1_pd(u[4 * r + c].imag());
        out_re = _mm256_fmadd_pd(ur, re[c], out_re);
        out_re = _mm256_fnmadd_pd(ui, im[c], out_re);
        out_im = _mm256_fmadd_pd(ur, im[c], out_im);
        out_im = _mm256_fmadd_pd(ui, re[c], out_im);
      }
      alignas(32) double or_[4];
      alignas(32) double oi_[4];
      _mm256_store_pd(or_, out_re);
      _mm256_store_pd(oi_, out_im);
      for (int lane = 0; lane < 4; ++lane) state[idx[lane][r]] = {or_[lane], oi_[lane]};
    }
  }
  apply_two_qubit_scalar_range(state, g, groups, hi_bit, lo_bit, u);
}

}  // namespace

const Table& avx2_table() {
  static const Table table{sum_avx2, shoelace_avx2, length_avx2, apply_two_qubit_avx2};
  return table;
}

}  // namespace pqm::kernels::detail

#endif  // PQM_HAVE_AVX2
