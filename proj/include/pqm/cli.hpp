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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "pqm/digital.hpp"
#include "pqm/loops.hpp"
#include "pqm/memristor.hpp"
#include "pqm/network.hpp"

namespace pqm::cli {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitIo = 3 };

enum class Command { single, pair, digital, sweep, selftest };

std::string_view command_name(Command c);
std::optional<Command> parse_command(std::string_view name);

// Invalid configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultStepsPerPeriod = 1e4;

// Every field maps to one config-file key and one flag (key with '_'
// replaced by '-').
struct RunConfig {
  Command command = Command::single;
  double t_int = 0.5;
  double t_osc = 1.0;
  std::optional<double> dt;            // default t_osc / 1e4
  std::optional<std::size_t> n_steps;  // alternative to dt
  double n_periods = 1.0;
  WindowStart window_start = WindowStart::prefilled;
  std::optional<BellFlavor> flavor;    // pair defaults to psi+
  std::uint64_t shots = kDefaultShots;
  std::uint64_t seed = 0;
  FeedbackMode feedback_mode = FeedbackMode::sampled;
  double readout_flip = 0.0;
  double estimator_guard = kDefaultEstimatorGuard;
  LoopQuantity quantity = LoopQuantity::concurrence;
  std::vector<double> grid;            // sweep T_int values; default 0.05 .. 1.0
  bool smooth = false;                 // width-3 smoothing of sampled loops
  bool full = false;                   // selftest at full resolution
  double fault_scale = 1.0;            // selftest mutation hook
  std::string output = "-";
  std::optional<std::string> svg;
};

// Environment variable that replaces the default seed.
inline constexpr const char* kSeedEnv = "PQM_SEED";

// Defaults with the seed taken from PQM_SEED when set. Throws ConfigError
// for an unparsable value.
RunConfig default_config();

nlohmann::json to_json(const RunConfig& cfg);

// Applies the keys of `j` on top of `base`. Throws ConfigError for unknown
// keys, wrong types and out-of-range values.
RunConfig apply_json(const nlohmann::json& j, RunConfig base);

// Semantic checks shared by every entry point; throws ConfigError.
void validate(const RunConfig& cfg);

double resolved_dt(const RunConfig& cfg);
std::size_t resolved_steps(const RunConfig& cfg);

// Parses argv into a config: defaults, then the file given by --config,
// then flags. Throws ConfigError on any usage problem. Returns nullopt when
// help was printed.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

struct CommandOutput {
  std::string csv;
  std::optional<std::string> svg;
  int exit_code = kExitOk;
};

// Runs the command and renders its outputs without touching the file system.
// The selftest command prints its report to `log`.
CommandOutput execute(const RunConfig& cfg, std::ostream* log = nullptr);

// Full program: parse, run, write outputs, map failures to exit codes.
int run_main(int argc, const char* const* argv);

}  // namespace pqm::cli
