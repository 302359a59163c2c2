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

#include <functional>
#include <string>
#include <vector>

// End-to-end acceptance checks shared by the acceptance test binary and the
// `pqm selftest` command. Tolerances are identical at both resolutions; the
// reduced run only uses coarser grids and fewer repetitions.

namespace pqm::acceptance {

enum class Resolution { full, reduced };

struct CriterionResult {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};

inline constexpr int kCriterionCount = 12;

CriterionResult run_criterion(int id, Resolution res);

// Runs every criterion in order; `on_result` (if set) sees each result as
// soon as it is available.
std::vector<CriterionResult> run_all(Resolution res,
                                     const std::function<void(const CriterionResult&)>& on_result = {});

// One line: "PASS C01 <name>: <detail> (<time>)".
std::string format_result(const CriterionResult& r);

}  // namespace pqm::acceptance
