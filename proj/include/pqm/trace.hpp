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

#include <optional>

namespace pqm {

// One time step of any simulation. Fields a command does not produce stay
// empty and are omitted from serialized output.
struct TraceRecord {
  double t = 0.0;
  std::optional<double> n_in;
  std::optional<double> n_out;
  std::optional<double> R;
  std::optional<double> R_prime;
  std::optional<double> c_l1_in;
  std::optional<double> c_l1_out;
  std::optional<double> conc_in;
  std::optional<double> conc_out;
  std::optional<double> p_meas;
};

}  // namespace pqm
