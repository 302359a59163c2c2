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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "pqm/kernels.hpp"

namespace pqm::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(PQM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const detail::Table& table_for(Backend b) {
  switch (b) {
#if defined(PQM_HAVE_AVX2)
    case Backend::avx2:
      return detail::avx2_table();
#endif
#if defined(PQM_HAVE_NEON)
    case Backend::neon:
      return detail::neon_table();
#endif
    default:
      return detail::scalar_table();
  }
}

Backend detect() {
  if (const char* forced = std::getenv("PQM_SIMD"); forced && std::string(forced) == "scalar") {
    return Backend::scalar;
  }
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

struct Dispatch {
  std::atomic<Backend> backend;
  std::atomic<const detail::Table*> table;

  Dispatch() {
    const Backend b = detect();
    backend.store(b);
    table.store(&table_for(b));
  }
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

const detail::Table& active() { return *dispatch().table.load(std::memory_order_relaxed); }

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "unknown";
}

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return cpu_has_avx2();
    case Backend::neon:
#if defined(PQM_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() { return dispatch().backend.load(); }

void set_backend(Backend b) {
  if (!backend_available(b)) {
    throw std::invalid_argument("SIMD backend not available: " + std::string(backend_name(b)));
  }
  dispatch().table.store(&table_for(b));
  dispatch().backend.store(b);
}

double sum(std::span<const double> values) { return active().sum(values.data(), values.size()); }

double trapezoid(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  return active().sum(values.data(), values.size()) - 0.5 * (values.front() + values.back());
}

double shoelace_area(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("shoelace_area: coordinate length mismatch");
  return active().shoelace(x.data(), y.data(), x.size());
}

double polyline_length(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("polyline_length: coordinate length mismatch");
  return active().length(x.data(), y.data(), x.size());
}

void apply_two_qubit(std::span<std::complex<double>> state, unsigned hi_bit, unsigned lo_bit,
                     std::span<const std::complex<double>, 16> unitary) {
  const std::size_t dim = state.size();
  if (dim < 4 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("apply_two_qubit: state size must be a power of two >= 4");
  }
  if (hi_bit == lo_bit || (std::size_t{1} << hi_bit) >= dim || (std::size_t{1} << lo_bit) >= dim) {
    throw std::invalid_argument("apply_two_qubit: invalid qubit positions");
  }
  active().apply_two_qubit(state.data(), dim, hi_bit, lo_bit, unitary.data());
}

}  // namespace pqm::kernels
