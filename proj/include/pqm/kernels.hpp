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

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops shared by the simulator. Every kernel has a
// scalar reference implementation; vector variants (AVX2+FMA on x86-64,
// NEON on AArch64) are selected once at startup from the CPU feature set.
// Setting PQM_SIMD=scalar in the environment pins the reference path.

namespace pqm::kernels {

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend b);

// True when the backend was compiled in and the running CPU supports it.
bool backend_available(Backend b);

Backend active_backend();

// Switches the process-wide dispatch table. Throws std::invalid_argument
// when the backend is unavailable. Intended for tests and benchmarks.
void set_backend(Backend b);

// Plain sum of a sequence.
double sum(std::span<const double> values);

// Composite trapezoid over unit-spaced samples: sum of (v[i] + v[i+1]) / 2.
// Returns 0 for fewer than two samples.
double trapezoid(std::span<const double> values);

// Signed area of the polygon traced by (x[i], y[i]); the closing edge from
// the last vertex back to the first is included. Counter-clockwise > 0.
double shoelace_area(std::span<const double> x, std::span<const double> y);

// Length of the open polyline through (x[i], y[i]).
double polyline_length(std::span<const double> x, std::span<const double> y);

// Applies a 4x4 row-major unitary to every amplitude quadruple of `state`
// selected by the bit positions `hi_bit` (more significant gate qubit) and
// `lo_bit`. Bit positions count from the least significant end of the
// basis index. state.size() must be a power of two >= 4.
void apply_two_qubit(std::span<std::complex<double>> state, unsigned hi_bit,
                     unsigned lo_bit,
                     std::span<const std::complex<double>, 16> unitary);

namespace detail {

struct Table {
  double (*sum)(const double*, std::size_t);
  double (*shoelace)(const double*, const double*, std::size_t);
  double (*length)(const double*, const double*, std::size_t);
  void (*apply_two_qubit)(std::complex<double>*, std::size_t, unsigned,
                          unsigned, const std::complex<double>*);
};

const Table& scalar_table();
#if defined(PQM_HAVE_AVX2)
const Table& avx2_table();
#endif
#if defined(PQM_HAVE_NEON)
const Table& neon_table();
#endif

}  // namespace detail
}  // namespace pqm::kernels
