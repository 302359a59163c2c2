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

// Mutation hooks for checking that the self-test actually detects faults.
// Never touched by the simulation paths themselves.

namespace pqm::fault_injection {

// Multiplies the 4*pi denominator of reflectivity_closed_form. 1.0 = no fault.
void set_closed_form_scale(double scale);
double closed_form_scale();

}  // namespace pqm::fault_injection
