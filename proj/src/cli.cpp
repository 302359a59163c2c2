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

#include "pqm/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "pqm/acceptance.hpp"
#include "pqm/fault_injection.hpp"
#include "pqm/hysteresis.hpp"
#include "pqm/io.hpp"

namespace pqm::cli {
namespace {

using nlohmann::json;

enum class Kind { real, count, text, flag, list };

struct KeySpec {
  const char* key;
  Kind kind;
  const char* help;
};

constexpr KeySpec kKeys[] = {
    {"t_int", Kind::real, "memory window T_int"},
    {"t_osc", Kind::real, "input oscillation period T_osc"},
    {"dt", Kind::real, "time step (default T_osc/1e4)"},
    {"n_steps", Kind::count, "number of time steps over the run (alternative to dt)"},
    {"n_periods", Kind::real, "run length in periods of T_osc"},
    {"window_start", Kind::text, "prefilled | cold"},
    {"flavor", Kind::text, "Bell flavor: psi+ | psi- | phi+ | phi-"},
    {"shots", Kind::count, "ancilla measurements per step"},
    {"seed", Kind::count, "random seed (default from PQM_SEED, else 0)"},
    {"feedback_mode", Kind::text, "sampled | exact_probability"},
    {"readout_flip", Kind::real, "probability of flipping each ancilla readout"},
    {"estimator_guard", Kind::real, "minimum R used to invert the click probability"},
    {"quantity", Kind::text, "sweep observable: photon | coherence | concurrence"},
    {"grid", Kind::list, "sweep T_int values, comma separated"},
    {"smooth", Kind::flag, "width-3 moving average before loop analysis (digital)"},
    {"full", Kind::flag, "selftest at full resolution"},
    {"fault_scale", Kind::real, "selftest mutation hook: scales the closed-form reflectivity denominator"},
    {"output", Kind::text, "CSV output path, '-' for stdout"},
    {"svg", Kind::text, "SVG output path"},
};

std::string dashed(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return key;
}

double parse_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError(key + ": not a number: '" + text + "'");
  }
  return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError(key + ": not a non-negative integer: '" + text + "'");
  }
  return v;
}

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key + ": wrong type");
  }
}

double get_real(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key + ": expected a number");
  return j.get<double>();
}

std::uint64_t get_count(const json& j, const std::string& key) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw ConfigError(key + ": expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::string get_text(const json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError(key + ": expected a string");
  return j.get<std::string>();
}

std::vector<double> default_grid(double t_osc) {
  std::vector<double> g;
  for (int k = 1; k <= 20; ++k) g.push_back(0.05 * k * t_osc);
  return g;
}

std::vector<std::string> header_comments(const RunConfig& cfg) {
  json j = to_json(cfg);
  j.erase("output");
  j.erase("svg");
  std::vector<std::string> lines;
  lines.push_back("pqm " + std::string(command_name(cfg.command)));
  lines.push_back("config: " + j.dump());
  if (cfg.command != Command::selftest) {
    lines.push_back("resolved: dt=" + io::format_double(resolved_dt(cfg)) +
                    " steps=" + std::to_string(resolved_steps(cfg)));
  }
  return lines;
}

std::string csv_text(const std::vector<TraceRecord>& records, const RunConfig& cfg) {
  std::ostringstream s;
  const std::vector<std::string> comments = header_comments(cfg);
  io::write_csv(s, records, comments);
  return s.str();
}

// Closes the curve when it is periodic and annotates the form factor.
io::SvgPlot loop_plot(const std::vector<Point2>& pts, bool analytic, const RunConfig& cfg, std::string title,
                      std::string x_label, std::string y_label) {
  io::SvgPlot plot;
  plot.title = std::move(title);
  plot.x_label = std::move(x_label);
  plot.y_label = std::move(y_label);
  plot.comments = header_comments(cfg);
  plot.points = pts;
  try {
    ParametricLoop loop;
    if (analytic) {
      loop = close_loop(pts, kAnalyticClosureTol);
    } else {
      loop = close_periodic(cfg.smooth ? smooth3_periodic(pts) : pts, kSampledClosureTol);
    }
    plot.form_factor = form_factor(loop).form_factor;
    plot.points.clear();
    for (std::size_t i = 0; i < loop.size(); ++i) plot.points.push_back(loop.point(i));
    plot.closed = true;
  } catch (const std::invalid_argument&) {
    // Not a single closed period; plot the raw curve.
  } catch (const std::domain_error&) {
  }
  return plot;
}

CommandOutput run_single(const RunConfig& cfg) {
  const std::vector<TraceRecord> records =
      run_single_trace(cfg.t_int, cfg.t_osc, resolved_dt(cfg), cfg.n_periods, {cfg.window_start});
  CommandOutput out{csv_text(records, cfg), std::nullopt};
  if (cfg.svg) {
    const auto pts = points_from_trace(records, TraceField::n_in, TraceField::n_out);
    out.svg = io::render_svg(loop_plot(pts, true, cfg, "Single PQM photon number", "n_in", "n_out"));
  }
  return out;
}

CommandOutput run_pair(const RunConfig& cfg) {
  const BellFlavor flavor = cfg.flavor.value_or(BellFlavor::psi_plus);
  const std::vector<TraceRecord> records =
      run_pair_trace(flavor, cfg.t_int, cfg.t_osc, resolved_dt(cfg), cfg.n_periods, {cfg.window_start});
  CommandOutput out{csv_text(records, cfg), std::nullopt};
  if (cfg.svg) {
    const auto pts = points_from_trace(records, TraceField::conc_in, TraceField::conc_out);
    out.svg = io::render_svg(loop_plot(pts, true, cfg, "Two PQMs, " + std::string(flavor_name(flavor)) +
                                                           " concurrence", "C_in", "C_out"));
  }
  return out;
}

CommandOutput run_digital_command(const RunConfig& cfg) {
  DigitalConfig dc;
  dc.n_steps = resolved_steps(cfg);
  dc.shots = cfg.shots;
  dc.seed = cfg.seed;
  dc.feedback_mode = cfg.feedback_mode;
  dc.t_int = cfg.t_int;
  dc.t_osc = cfg.t_osc;
  dc.n_periods = cfg.n_periods;
  dc.readout_flip = cfg.readout_flip;
  dc.estimator_guard = cfg.estimator_guard;
  const DigitalRun run = run_digital(dc);
  CommandOutput out{csv_text(run.records, cfg), std::nullopt};
  if (cfg.svg) {
    const auto pts = points_from_trace(run.records, TraceField::n_in, TraceField::n_out);
    io::SvgPlot plot = loop_plot(pts, false, cfg, "Digital PQM, " + std::to_string(dc.n_steps) + " steps, " +
                                                      std::to_string(dc.shots) + " shots", "n_in", "n_out");
    plot.markers = true;
    out.svg = io::render_svg(plot);
  }
  return out;
}

CommandOutput run_sweep(const RunConfig& cfg) {
  LoopSpec spec;
  spec.quantity = cfg.quantity;
  spec.flavor = cfg.flavor;
  if (spec.quantity == LoopQuantity::concurrence && !spec.flavor) spec.flavor = BellFlavor::psi_plus;
  if (spec.quantity == LoopQuantity::photon && spec.flavor) {
    throw ConfigError("flavor: photon-number sweeps use the single memristor, drop the flavor");
  }
  spec.t_osc = cfg.t_osc;
  spec.dt = resolved_dt(cfg);
  const std::vector<double> grid = cfg.grid.empty() ? default_grid(cfg.t_osc) : cfg.grid;
  const std::vector<SweepPoint> sweep = sweep_form_factor(make_loop_generator(spec), grid, cfg.t_osc);

  std::vector<std::vector<double>> rows;
  std::vector<Point2> curve;
  for (const SweepPoint& p : sweep) {
    rows.push_back({p.t_int, p.report.form_factor, p.report.area, p.report.perimeter,
                    static_cast<double>(p.report.lobes.size()), static_cast<double>(p.report.pinch_points.size())});
    curve.push_back({p.t_int / cfg.t_osc, p.report.form_factor});
  }
  std::vector<std::string> comments = header_comments(cfg);
  comments.push_back("loop period " + io::format_double(loop_period(spec)) +
                     "; area is the sum of absolute lobe areas over that period");
  const std::vector<std::string> columns = {"t_int", "form_factor", "area", "perimeter", "lobes", "pinch_points"};
  std::ostringstream s;
  io::write_table(s, columns, rows, comments);
  CommandOutput out{s.str(), std::nullopt};
  if (cfg.svg) {
    io::SvgPlot plot;
    plot.title = "Form factor sweep, " + std::string(quantity_name(spec.quantity)) +
                 (spec.flavor ? " " + std::string(flavor_name(*spec.flavor)) : std::string());
    plot.x_label = "T_int / T_osc";
    plot.y_label = "F";
    plot.points = curve;
    plot.markers = true;
    plot.comments = comments;
    out.svg = io::render_svg(plot);
  }
  return out;
}

CommandOutput run_selftest(const RunConfig& cfg, std::ostream* log) {
  fault_injection::set_closed_form_scale(cfg.fault_scale);
  const auto res = cfg.full ? acceptance::Resolution::full : acceptance::Resolution::reduced;
  int failures = 0;
  try {
    acceptance::run_all(res, [&](const acceptance::CriterionResult& r) {
      if (!r.pass) ++failures;
      if (log) *log << acceptance::format_result(r) << std::endl;
    });
  } catch (...) {
    fault_injection::set_closed_form_scale(1.0);
    throw;
  }
  fault_injection::set_closed_form_scale(1.0);
  CommandOutput out;
  out.exit_code = failures == 0 ? kExitOk : kExitFailure;
  return out;
}

}  // namespace

std::string_view command_name(Command c) {
  switch (c) {
    case Command::single:
      return "single";
    case Command::pair:
      return "pair";
    case Command::digital:
      return "digital";
    case Command::sweep:
      return "sweep";
    case Command::selftest:
      return "selftest";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::single, Command::pair, Command::digital, Command::sweep, Command::selftest}) {
    if (command_name(c) == name) return c;
  }
  return std::nullopt;
}

RunConfig default_config() {
  RunConfig cfg;
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    cfg.seed = parse_count(kSeedEnv, env);
  }
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json j;
  j["command"] = std::string(command_name(cfg.command));
  j["t_int"] = cfg.t_int;
  j["t_osc"] = cfg.t_osc;
  j["dt"] = cfg.dt ? json(*cfg.dt) : json(nullptr);
  j["n_steps"] = cfg.n_steps ? json(*cfg.n_steps) : json(nullptr);
  j["n_periods"] = cfg.n_periods;
  j["window_start"] = cfg.window_start == WindowStart::prefilled ? "prefilled" : "cold";
  j["flavor"] = cfg.flavor ? json(std::string(flavor_name(*cfg.flavor))) : json(nullptr);
  j["shots"] = cfg.shots;
  j["seed"] = cfg.seed;
  j["feedback_mode"] = std::string(feedback_mode_name(cfg.feedback_mode));
  j["readout_flip"] = cfg.readout_flip;
  j["estimator_guard"] = cfg.estimator_guard;
  j["quantity"] = std::string(quantity_name(cfg.quantity));
  j["grid"] = cfg.grid;
  j["smooth"] = cfg.smooth;
  j["full"] = cfg.full;
  j["fault_scale"] = cfg.fault_scale;
  j["output"] = cfg.output;
  j["svg"] = cfg.svg ? json(*cfg.svg) : json(nullptr);
  return j;
}

RunConfig apply_json(const json& j, RunConfig cfg) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, v] : j.items()) {
    if (key == "command") {
      const auto c = parse_command(get_text(v, key));
      if (!c) throw ConfigError("command: unknown command '" + v.get<std::string>() + "'");
      cfg.command = *c;
    } else if (key == "t_int") {
      cfg.t_int = get_real(v, key);
    } else if (key == "t_osc") {
      cfg.t_osc = get_real(v, key);
    } else if (key == "dt") {
      cfg.dt = v.is_null() ? std::nullopt : std::optional<double>(get_real(v, key));
    } else if (key == "n_steps") {
      cfg.n_steps = v.is_null() ? std::nullopt : std::optional<std::size_t>(get_count(v, key));
    } else if (key == "n_periods") {
      cfg.n_periods = get_real(v, key);
    } else if (key == "window_start") {
      const std::string s = get_text(v, key);
      if (s == "prefilled") {
        cfg.window_start = WindowStart::prefilled;
      } else if (s == "cold") {
        cfg.window_start = WindowStart::cold;
      } else {
        throw ConfigError("window_start: expected prefilled or cold, got '" + s + "'");
      }
    } else if (key == "flavor") {
      if (v.is_null()) {
        cfg.flavor.reset();
      } else {
        const auto f = parse_flavor(get_text(v, key));
        if (!f) throw ConfigError("flavor: unknown Bell flavor '" + v.get<std::string>() + "'");
        cfg.flavor = *f;
      }
    } else if (key == "shots") {
      cfg.shots = get_count(v, key);
    } else if (key == "seed") {
      cfg.seed = get_count(v, key);
    } else if (key == "feedback_mode") {
      const auto m = parse_feedback_mode(get_text(v, key));
      if (!m) throw ConfigError("feedback_mode: expected sampled or exact_probability");
      cfg.feedback_mode = *m;
    } else if (key == "readout_flip") {
      cfg.readout_flip = get_real(v, key);
    } else if (key == "estimator_guard") {
      cfg.estimator_guard = get_real(v, key);
    } else if (key == "quantity") {
      const auto q = parse_quantity(get_text(v, key));
      if (!q) throw ConfigError("quantity: expected photon, coherence or concurrence");
      cfg.quantity = *q;
    } else if (key == "grid") {
      if (!v.is_array()) throw ConfigError("grid: expected an array of numbers");
      cfg.grid.clear();
      for (const json& e : v) cfg.grid.push_back(get_real(e, key));
    } else if (key == "smooth") {
      cfg.smooth = get_as<bool>(v, key);
    } else if (key == "full") {
      cfg.full = get_as<bool>(v, key);
    } else if (key == "fault_scale") {
      cfg.fault_scale = get_real(v, key);
    } else if (key == "output") {
      cfg.output = get_text(v, key);
    } else if (key == "svg") {
      cfg.svg = v.is_null() ? std::nullopt : std::optional<std::string>(get_text(v, key));
    } else {
      throw ConfigError(key + ": unknown configuration key");
    }
  }
  return cfg;
}

void validate(const RunConfig& cfg) {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(key) + ": must be positive");
  };
  positive(cfg.t_int, "t_int");
  positive(cfg.t_osc, "t_osc");
  positive(cfg.n_periods, "n_periods");
  if (cfg.dt && cfg.n_steps) throw ConfigError("dt: conflicts with n_steps, give only one");
  if (cfg.dt) positive(*cfg.dt, "dt");
  if (cfg.n_steps && *cfg.n_steps == 0) throw ConfigError("n_steps: must be positive");
  if (cfg.shots == 0) throw ConfigError("shots: must be positive");
  if (!(cfg.readout_flip >= 0.0 && cfg.readout_flip <= 0.5)) throw ConfigError("readout_flip: must lie in [0, 0.5]");
  if (!(cfg.estimator_guard > 0.0 && cfg.estimator_guard < 1.0)) {
    throw ConfigError("estimator_guard: must lie in (0, 1)");
  }
  if (!(cfg.fault_scale > 0.0) || !std::isfinite(cfg.fault_scale)) throw ConfigError("fault_scale: must be positive");
  if (cfg.command == Command::selftest) return;
  if (!(resolved_dt(cfg) < cfg.t_int)) throw ConfigError("dt: time step must be smaller than t_int");
  if (cfg.command == Command::sweep) {
    for (double v : cfg.grid) {
      if (!(v > 0.0 && v <= 2.0 * cfg.t_osc)) throw ConfigError("grid: values must lie in (0, 2 t_osc]");
      if (!(resolved_dt(cfg) < v)) throw ConfigError("grid: every T_int must exceed dt");
    }
  }
  (void)resolved_steps(cfg);
}

double resolved_dt(const RunConfig& cfg) {
  if (cfg.n_steps) return cfg.n_periods * cfg.t_osc / static_cast<double>(*cfg.n_steps);
  if (cfg.dt) return *cfg.dt;
  return cfg.t_osc / kDefaultStepsPerPeriod;
}

std::size_t resolved_steps(const RunConfig& cfg) {
  if (cfg.n_steps) return *cfg.n_steps;
  try {
    return steps_for(cfg.n_periods * cfg.t_osc, resolved_dt(cfg));
  } catch (const std::invalid_argument&) {
    throw ConfigError("dt: must divide n_periods * t_osc into a whole number of steps");
  }
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Photonic quantum memristor simulator", "pqm"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  struct Bound {
    std::map<std::string, std::string> text;
    std::map<std::string, std::vector<std::string>> lists;
    std::map<std::string, bool> flags;
    std::map<std::string, CLI::Option*> options;
    std::string config_path;
    CLI::Option* config_opt = nullptr;
  };
  // std::map nodes are stable, so bound references survive later inserts.
  std::map<std::string, Bound> bound;
  const std::pair<const char*, const char*> commands[] = {
      {"single", "Analytic single-memristor trace"},
      {"pair", "Two memristors driven by a Bell pair"},
      {"digital", "Gate-level emulation with measurement feedback"},
      {"sweep", "Form factor against T_int"},
      {"selftest", "Run the acceptance checks; exit 1 on any failure"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    Bound& b = bound[name];
    b.config_opt = sub->add_option("--config", b.config_path, "JSON config file; flags override its values");
    for (const KeySpec& k : kKeys) {
      const std::string flag = "--" + dashed(k.key);
      switch (k.kind) {
        case Kind::flag:
          b.options[k.key] = sub->add_flag(flag, b.flags[k.key], k.help);
          break;
        case Kind::list:
          b.options[k.key] = sub->add_option(flag, b.lists[k.key], k.help)->delimiter(',');
          break;
        default:
          b.options[k.key] = sub->add_option(flag, b.text[k.key], k.help);
      }
    }
    b.options["dt"]->excludes(b.options["n_steps"]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  Bound& b = bound[name];

  RunConfig cfg = default_config();
  if (b.config_opt->count() > 0) {
    std::ifstream f(b.config_path);
    if (!f) throw ConfigError("config: cannot read " + b.config_path);
    json file;
    try {
      f >> file;
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    cfg = apply_json(file, cfg);
  }

  json patch = json::object();
  for (const KeySpec& k : kKeys) {
    if (b.options[k.key]->count() == 0) continue;
    switch (k.kind) {
      case Kind::real:
        patch[k.key] = parse_real(k.key, b.text[k.key]);
        break;
      case Kind::count:
        patch[k.key] = parse_count(k.key, b.text[k.key]);
        break;
      case Kind::text:
        patch[k.key] = b.text[k.key];
        break;
      case Kind::flag:
        patch[k.key] = b.flags[k.key];
        break;
      case Kind::list: {
        json arr = json::array();
        for (const std::string& s : b.lists[k.key]) arr.push_back(parse_real(k.key, s));
        patch[k.key] = arr;
        break;
      }
    }
  }
  // A step given on the command line replaces either step key from the file.
  if (patch.contains("dt")) cfg.n_steps.reset();
  if (patch.contains("n_steps")) cfg.dt.reset();
  cfg = apply_json(patch, cfg);
  cfg.command = *parse_command(name);
  validate(cfg);
  return cfg;
}

CommandOutput execute(const RunConfig& cfg, std::ostream* log) {
  validate(cfg);
  switch (cfg.command) {
    case Command::single:
      return run_single(cfg);
    case Command::pair:
      return run_pair(cfg);
    case Command::digital:
      return run_digital_command(cfg);
    case Command::sweep:
      return run_sweep(cfg);
    case Command::selftest:
      return run_selftest(cfg, log);
  }
  throw ConfigError("command: unknown");
}

int run_main(int argc, const char* const* argv) {
  try {
    const std::optional<RunConfig> cfg = parse_args(argc, argv, std::cout);
    if (!cfg) return kExitOk;
    const CommandOutput out = execute(*cfg, &std::cout);
    if (!out.csv.empty()) io::write_file(cfg->output, out.csv);
    if (out.svg) io::write_file(*cfg->svg, *out.svg);
    return out.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "pqm: error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const io::IoError& e) {
    std::cerr << "pqm: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "pqm: error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "pqm: failure: " << e.what() << '\n';
    return kExitFailure;
  } catch (...) {
    std::cerr << "pqm: failure: unknown error\n";
    return kExitFailure;
  }
}

}  // namespace pqm::cli
