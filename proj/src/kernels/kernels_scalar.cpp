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

#include <cmath>

#include "kernels_internal.hpp"
#include "pqm/kernels.hpp"

namespace pqm::kernels::detail {

void apply_two_qubit_scalar_range(std::complex<double>* state,
                                  std::size_t first_group,
                                  std::size_t last_group, unsigned hi_bit,
                                  unsigned lo_bit,
                                  const std::complex<double>* u) {
  for (std::size_t g = first_group; g < last_group; ++g) {
    const auto idx = quad_indices(g, hi_bit, lo_bit);
    const std::complex<double> in[4] = {state[idx[0]], state[idx[1]],
                                        state[idx[2]], state[idx[3]]};
    for (int r = 0; r < 4; ++r) {
      std::complex<double> acc = 0.0;
      for (int c = 0; c < 4; ++c) acc += u[4 * r + c] * in[c];
      state[idx[r]] = acc;
    }
  }
}

namespace {

double sum_scalar(const double* v, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += v[i];
  return acc;
}

double shoelace_scalar(const double* x, const double* y, std::size_t n) {
  if (n < 3) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) acc += x[i] * y[i + 1] - x[i + 1] * y[i];
  acc += x[n - 1] * y[0] - x[0] * y[n - 1];
  return 0.5 * acc;
}

double length_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dx = x[i + 1] - x[i];
    const double dy = y[i + 1] - y[i];
    acc += std::sqrt(dx * dx + dy * dy);
  }
  return acc;
}

void apply_two_qubit_scalar(std::complex<double>* state, std::size_t dim,
                            unsigned hi_bit, unsigned lo_bit,
                            const std::complex<double>* u) {
  apply_two_qubit_scalar_range(state, 0, dim / 4, hi_bit, lo_bit, u);
}

}  // namespace

const Table& scalar_table() {
  static const Table table{sum_scalar, shoelace_scalar, length_scalar,
                           apply_two_qubit_scalar};
  return table;
}

}  // namespace pqm::kernels::detail
