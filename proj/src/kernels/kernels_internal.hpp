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
#include <complex>
#include <cstddef>

namespace pqm::kernels::detail {

// Spreads group index g over the basis by inserting zero bits at the two gate
// positions, then returns the four indices in gate-basis order 00, 01, 10, 11
// (hi_bit is the more significant gate qubit).
inline std::array<std::size_t, 4> quad_indices(std::size_t g, unsigned hi_bit,
                                               unsigned lo_bit) {
  const unsigned low = hi_bit < lo_bit ? hi_bit : lo_bit;
  const unsigned high = hi_bit < lo_bit ? lo_bit : hi_bit;
  std::size_t base = g;
  base = ((base >> low) << (low + 1)) | (base & ((std::size_t{1} << low) - 1));
  base = ((base >> high) << (high + 1)) | (base & ((std::size_t{1} << high) - 1));
  const std::size_t hi_mask = std::size_t{1} << hi_bit;
  const std::size_t lo_mask = std::size_t{1} << lo_bit;
  return {base, base | lo_mask, base | hi_mask, base | hi_mask | lo_mask};
}

// Scalar gate application over groups [first_group, last_group); the vector
// backends use it for their remainder.
void apply_two_qubit_scalar_range(std::complex<double>* state,
                                  std::size_t first_group,
                                  std::size_t last_group, unsigned hi_bit,
                                  unsigned lo_bit,
                                  const std::complex<double>* u);

}  // namespace pqm::kernels::detail
