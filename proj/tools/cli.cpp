// Copyright 2026 The quartit Authors
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

#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "quartit/dsl.hpp"
#include "quartit/dynamics.hpp"
#include "quartit/gates.hpp"
#include "quartit/io.hpp"
#include "quartit/tomography.hpp"

namespace quartit::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Failure : std::runtime_error {
  Failure(int code, const std::string& message) : std::runtime_error(message), code(code) {}
  int code;
};

[[noreturn]] void usage(const std::string& message) { throw Failure(kUsage, message); }

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "tabular";
  double tolerance = kEquivalenceTolerance;
};

class Output {
 public:
  Output(const GlobalOptions& g, std::ostream& stream) : path_(g.out), stream_(stream) {}

  // Fails before any computation when the destination cannot be created.
  void check_writable() const {
    if (path_.empty()) return;
    const auto parent = std::filesystem::path(path_).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent)) {
      throw Failure(kCannotCreate, "cannot write '" + path_ + "': no such directory");
    }
    if (std::filesystem::is_directory(path_)) {
      throw Failure(kCannotCreate, "cannot write '" + path_ + "': is a directory");
    }
  }

  void emit(const std::string& content) const {
    if (path_.empty()) {
      stream_ << content;
      return;
    }
    try {
      io::write_file(path_, content);
    } catch (const std::exception& e) {
      throw Failure(kCannotCreate, e.what());
    }
  }

 private:
  std::string path_;
  std::ostream& stream_;
};

std::string read_input(const std::string& path) {
  try {
    return io::read_file(path);
  } catch (const std::exception& e) {
    throw Failure(kNoInput, e.what());
  }
}

std::vector<double> parse_list(const std::string& text, std::size_t expected, const std::string& what) {
  std::vector<double> values;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      usage(what + ": '" + item + "' is not a number");
    }
  }
  if (values.size() != expected) {
    usage(what + " expects " + std::to_string(expected) + " comma-separated values");
  }
  return values;
}

dynamics::InitialPopulations parse_populations(const std::string& text) {
  const auto v = parse_list(text, 4, "--initial");
  try {
    return dynamics::InitialPopulations({v[0], v[1], v[2], v[3]});
  } catch (const std::invalid_argument& e) {
    usage(std::string("--initial: ") + e.what());
  }
}

LevelPair parse_pair(const std::string& text) {
  const auto v = parse_list(text, 2, "--pair");
  try {
    return LevelPair(static_cast<int>(v[0]), static_cast<int>(v[1]));
  } catch (const std::invalid_argument& e) {
    usage(std::string("--pair: ") + e.what());
  }
}

template <typename Fn>
void validated(Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    usage(e.what());
  }
}

std::string pulses_inline(const PulseSequence& s) {
  std::string out;
  for (std::size_t i = 0; i < s.pulses().size(); ++i) {
    out += (i ? ";" : "") + format_pulse(s.pulses()[i]);
  }
  return out;
}

// ---------------------------------------------------------------- verify-gates

struct VerifyOptions {
  std::vector<std::string> gates;
  std::string pinned;
};

int cmd_verify(const GlobalOptions& g, const VerifyOptions& o, const Output& output, std::ostream& err) {
  const auto format = io::format_from_string(g.format);
  std::vector<PinnedExpectation> pins = pinned_expectations();
  if (!o.pinned.empty()) {
    try {
      pins = parse_pinned(read_input(o.pinned));
    } catch (const std::invalid_argument& e) {
      throw Failure(kDataError, o.pinned + ": " + e.what());
    }
  }
  for (const auto& name : o.gates) {
    validated([&] { find_sequence(name); });
  }
  output.check_writable();

  std::vector<VerificationReport> reports;
  if (o.gates.empty()) {
    reports = verify_all(g.tolerance);
  } else {
    for (const auto& name : o.gates) reports.push_back(verify(name, g.tolerance));
    std::vector<PinnedExpectation> selected;
    for (const auto& pin : pins) {
      for (const auto& name : o.gates) {
        if (pin.name == name) selected.push_back(pin);
      }
    }
    pins = selected;
  }
  output.emit(io::write_reports(reports, format));
  const auto diffs = compare_with_pins(reports, pins);
  for (const auto& d : diffs) err << "MISMATCH " << d << '\n';
  return diffs.empty() ? kOk : kMismatch;
}

// ------------------------------------------------------------------ tomography

struct TomographyOptions {
  std::string set = "twelve";
  double noise = 0.0;
  int trials = 100;
  int parallel = 1;
  bool no_unrotated = false;
  std::string map_out;
};

tomography::RotationSet load_set(const std::string& name) {
  if (name == "twelve") return tomography::set_twelve();
  if (name == "six") return tomography::set_six();
  if (name.rfind("file:", 0) == 0) {
    const std::string path = name.substr(5);
    tomography::RotationSet set;
    set.name = std::filesystem::path(path).filename().string();
    try {
      set.rotations = parse_blocks(read_input(path));
    } catch (const ParseError& e) {
      throw Failure(kDataError, path + ": " + e.what());
    }
    return set;
  }
  usage("--set must be twelve, six or file:<path>");
}

int cmd_tomography(const GlobalOptions& g, const TomographyOptions& o, const Output& output,
                   std::ostream& err) {
  const auto format = io::format_from_string(g.format);
  if (!(o.noise >= 0.0) || !std::isfinite(o.noise)) usage("--noise must be non-negative");
  if (o.trials < 1) usage("--trials must be at least 1");
  if (o.parallel < 1) usage("--parallel must be at least 1");
  if (o.noise > 0.0 && !g.seed) usage("--seed is required when --noise is positive");
  auto set = load_set(o.set);
  if (o.no_unrotated) set.include_unrotated = false;
  output.check_writable();
  if (!o.map_out.empty()) Output({std::nullopt, o.map_out, "", 0.0}, err).check_writable();

  const auto map = tomography::measurement_map(set);
  const auto sens = tomography::sensitivity(map);
  const bool deficient = sens.rank < tomography::kParameterCount;
  const std::uint64_t seed = g.seed.value_or(0);
  const auto trials = tomography::run_trials(set, o.noise, o.trials, seed, o.parallel, deficient);

  std::vector<double> raw, physical;
  for (const auto& t : trials) {
    raw.push_back(t.frobenius_error_raw);
    physical.push_back(t.frobenius_error_physical);
  }
  io::Header summary = {
      {"set", set.name},
      {"rotations", std::to_string(set.rotations.size())},
      {"include_unrotated", set.include_unrotated ? "1" : "0"},
      {"rows", std::to_string(map.rows())},
      {"rank", std::to_string(sens.rank)},
      {"sigma_min", io::number(sens.sigma_min)},
      {"condition", io::number(sens.condition)},
      {"noise_sigma", io::number(o.noise)},
      {"trials", std::to_string(o.trials)},
      {"seed", std::to_string(seed)},
      {"median_error_raw", io::number(tomography::median(raw))},
      {"median_error_physical", io::number(tomography::median(physical))},
  };
  if (deficient) {
    const auto unresolved = tomography::unresolved_parameters(map);
    std::string names;
    for (std::size_t i = 0; i < unresolved.size(); ++i) names += (i ? " " : "") + unresolved[i];
    summary.push_back({"warning", "rank-deficient map, minimum-norm estimates"});
    summary.push_back({"unresolved", names});
  }

  std::string body;
  if (format == io::Format::structured) {
    nlohmann::json doc;
    for (const auto& [k, v] : summary) doc["summary"][k] = v;
    doc["trials"] = nlohmann::json::parse(io::write_trials(trials, format));
    body = doc.dump(2) + "\n";
  } else {
    std::ostringstream os;
    for (const auto& [k, v] : summary) os << "# " << k << '=' << v << '\n';
    os << io::write_trials(trials, format);
    body = os.str();
  }
  output.emit(body);
  if (!o.map_out.empty()) Output({std::nullopt, o.map_out, "", 0.0}, err).emit(io::write_map(map));
  if (deficient) {
    err << "WARNING: measurement map rank " << sens.rank << " < 16; the state is not fully "
        << "determined by set '" << set.name << "'\n";
    return kDegraded;
  }
  return kOk;
}

// --------------------------------------------------------------------- compile

int cmd_compile(const std::string& path, const Output& output) {
  PulseSequence sequence;
  try {
    sequence = parse(read_input(path));
  } catch (const ParseError& e) {
    throw Failure(kDataError, path + ": " + e.what());
  }
  output.check_writable();
  output.emit(io::write_matrix(compile(sequence).matrix()));
  return kOk;
}

// -------------------------------------------------------------------- dynamics

struct RabiOptions {
  std::string pair = "2,3";
  double rabi_hz = 10e3;
  double t1 = 100.0;
  double t2 = 0.6e-3;
  double duration = 3e-3;
  double dt = 1e-6;
  double k_rxx = 1.0;
  std::string initial = "0.1,0.2,0.3,0.4";
};

int cmd_rabi(const RabiOptions& o, const Output& output) {
  const auto pops = parse_populations(o.initial);
  const dynamics::Drive drive{parse_pair(o.pair), kTwoPi * o.rabi_hz, 0.0};
  const dynamics::RelaxationParams relax{o.t1, o.t2};
  validated([&] { relax.validate(); });
  if (!(o.duration > 0.0)) usage("--duration must be positive");
  if (!std::isfinite(o.k_rxx)) usage("--k-rxx must be finite");
  output.check_writable();
  dynamics::TimeSeries series;
  validated([&] { series = dynamics::rabi_trace(pops.density(), drive, relax, o.duration, o.dt, o.k_rxx); });
  const io::Header header = {
      {"command", "rabi"},
      {"pair", std::to_string(drive.pair.lower()) + "," + std::to_string(drive.pair.upper())},
      {"rabi_hz", io::number(o.rabi_hz)},
      {"t1", io::number(o.t1)},
      {"t2", io::number(o.t2)},
      {"duration", io::number(o.duration)},
      {"dt", io::number(o.dt)},
      {"k_rxx", io::number(o.k_rxx)},
      {"initial", o.initial},
  };
  output.emit(io::write_time_series(series, header));
  return kOk;
}

struct SpectrumOptions {
  double omega0_hz = 40e6;
  double splitting_hz = 25e3;
  double rabi_hz = 10e3;
  double pulse_length = 0.0;
  int points = 601;
  double k_rxx = 1.0;
  bool mirror = false;
  std::string initial = "0.1,0.2,0.3,0.4";
};

int cmd_spectrum(const SpectrumOptions& o, const Output& output) {
  const auto pops = parse_populations(o.initial);
  dynamics::SpectrumParams params;
  params.omega0 = kTwoPi * o.omega0_hz;
  params.delta_q = kTwoPi * o.splitting_hz / 2.0;
  params.k_rxx = o.k_rxx;
  params.lower_first = !o.mirror;
  validated([&] { params.validate(); });
  if (!(o.rabi_hz > 0.0)) usage("--rabi-hz must be positive");
  if (o.points < 3) usage("--points must be at least 3");
  if (o.pulse_length < 0.0) usage("--pulse-length must be positive");
  const double rabi = kTwoPi * o.rabi_hz;
  const double length = o.pulse_length > 0.0 ? o.pulse_length : std::numbers::pi / rabi;
  output.check_writable();
  std::vector<dynamics::SpectrumPoint> spectrum;
  validated([&] {
    const auto grid = dynamics::default_grid(params, o.points, 1.5 * rabi);
    spectrum = dynamics::spectrum_sweep(pops.density(), params, rabi, length, grid);
  });
  const io::Header header = {
      {"command", "spectrum"},
      {"omega0_hz", io::number(o.omega0_hz)},
      {"splitting_hz", io::number(o.splitting_hz)},
      {"rabi_hz", io::number(o.rabi_hz)},
      {"pulse_length", io::number(length)},
      {"points", std::to_string(o.points)},
      {"k_rxx", io::number(o.k_rxx)},
      {"lower_first", params.lower_first ? "1" : "0"},
      {"initial", o.initial},
      {"frequency_unit", "rad/s"},
  };
  output.emit(io::write_spectrum(spectrum, header));
  return kOk;
}

struct PrepareOptions {
  std::string target = "11";
  std::string initial = "0.1,0.2,0.3,0.4";
};

int cmd_prepare(const GlobalOptions& g, const PrepareOptions& o, const Output& output) {
  const auto format = io::format_from_string(g.format);
  if (o.target.size() != 2 || (o.target[0] != '0' && o.target[0] != '1') ||
      (o.target[1] != '0' && o.target[1] != '1')) {
    usage("--target must be one of 00, 01, 10, 11");
  }
  const auto pops = parse_populations(o.initial);
  output.check_writable();
  const auto result = dynamics::prepare_effective_pure(pops, o.target[0] - '0', o.target[1] - '0');

  std::ostringstream os;
  if (format == io::Format::structured) {
    nlohmann::json doc;
    doc["target"] = o.target;
    doc["sequence"] = pulses_inline(result.sequence);
    doc["epsilon"] = result.epsilon;
    doc["deviation"] = result.deviation;
    doc["decomposition_holds"] = result.decomposition_holds;
    doc["polarized"] = result.polarized;
    doc["populations"] = result.population_steps;
    os << doc.dump(2) << '\n';
  } else {
    os << "# command=prepare\n# target=" << o.target << "\n# initial=" << o.initial
       << "\n# sequence=" << pulses_inline(result.sequence) << "\n# epsilon=" << io::number(result.epsilon)
       << "\n# deviation=" << io::number(result.deviation)
       << "\n# decomposition_holds=" << (result.decomposition_holds ? 1 : 0)
       << "\n# polarized=" << (result.polarized ? 1 : 0) << '\n';
    if (!result.polarized) os << "# warning=no polarization available\n";
    os << "step,p0,p1,p2,p3\n";
    for (std::size_t s = 0; s < result.population_steps.size(); ++s) {
      os << s;
      for (double p : result.population_steps[s]) os << ',' << io::number(p);
      os << '\n';
    }
  }
  output.emit(os.str());
  return kOk;
}

int cmd_fitdecay(const GlobalOptions& g, const std::string& path, const std::string& column,
                 const Output& output, std::ostream& err) {
  const auto format = io::format_from_string(g.format);
  io::Table table;
  std::vector<double> t, y;
  try {
    table = io::read_table(read_input(path));
    t = table.column("t");
    y = table.column(column);
  } catch (const std::invalid_argument& e) {
    throw Failure(kDataError, path + ": " + e.what());
  }
  output.check_writable();
  dynamics::DecayFit fit;
  try {
    fit = dynamics::fit_decay(t, y);
  } catch (const dynamics::FitError& e) {
    err << "fit did not converge, rms residual " << io::number(e.rms_residual()) << '\n';
    return kDegraded;
  } catch (const std::invalid_argument& e) {
    throw Failure(kDataError, path + ": " + e.what());
  }
  std::ostringstream os;
  if (format == io::Format::structured) {
    nlohmann::json doc = {{"t2_estimate", fit.t2_estimate},         {"rabi_estimate", fit.rabi_estimate},
                          {"rabi_hz", fit.rabi_estimate / kTwoPi}, {"amplitude", fit.amplitude},
                          {"offset", fit.offset},                   {"rms_residual", fit.rms_residual},
                          {"decay_resolved", fit.decay_resolved}};
    if (std::isinf(fit.t2_estimate)) doc["t2_estimate"] = "inf";
    os << doc.dump(2) << '\n';
  } else {
    os << "t2_estimate=" << io::number(fit.t2_estimate) << '\n'
       << "rabi_estimate=" << io::number(fit.rabi_estimate) << '\n'
       << "rabi_hz=" << io::number(fit.rabi_estimate / kTwoPi) << '\n'
       << "amplitude=" << io::number(fit.amplitude) << '\n'
       << "offset=" << io::number(fit.offset) << '\n'
       << "rms_residual=" << io::number(fit.rms_residual) << '\n';
    if (!fit.decay_resolved) os << "note=no decay resolved\n";
  }
  output.emit(os.str());
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation and verification tools for a spin-3/2 quartit processor", "quartit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  GlobalOptions g;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Seed for stochastic commands");
  app.add_option("--out", g.out, "Output file (default: standard output)");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"tabular", "structured"}));
  app.add_option("--tolerance", g.tolerance, "Equivalence tolerance")->check(CLI::PositiveNumber);

  VerifyOptions verify_opts;
  auto* verify_cmd = app.add_subcommand("verify-gates", "Classify every gate sequence against its target");
  verify_cmd->add_option("--gate", verify_opts.gates, "Restrict to the named sequence(s)");
  verify_cmd->add_option("--pinned", verify_opts.pinned, "File of pinned expected classes");

  TomographyOptions tomo;
  auto* tomo_cmd = app.add_subcommand("tomography", "Simulated Mz tomography trials");
  tomo_cmd->add_option("--set", tomo.set, "twelve, six or file:<path>");
  tomo_cmd->add_option("--noise", tomo.noise, "Readout noise standard deviation");
  tomo_cmd->add_option("--trials", tomo.trials, "Number of random states");
  tomo_cmd->add_option("--parallel", tomo.parallel, "Worker threads");
  tomo_cmd->add_flag("--no-unrotated", tomo.no_unrotated, "Drop the unrotated readout");
  tomo_cmd->add_option("--map-out", tomo.map_out, "Also export the measurement map");

  std::string compile_path;
  auto* compile_cmd = app.add_subcommand("compile", "Compile a pulse program to its unitary");
  compile_cmd->add_option("program", compile_path, "Pulse program file")->required();

  RabiOptions rabi;
  auto* rabi_cmd = app.add_subcommand("rabi", "Damped Rabi oscillation on one transition");
  rabi_cmd->add_option("--pair", rabi.pair, "Driven levels n,m");
  rabi_cmd->add_option("--rabi-hz", rabi.rabi_hz, "Rabi frequency / 2pi in Hz");
  rabi_cmd->add_option("--t1", rabi.t1, "T1 in seconds");
  rabi_cmd->add_option("--t2", rabi.t2, "T2 in seconds");
  rabi_cmd->add_option("--duration", rabi.duration, "Trace length in seconds");
  rabi_cmd->add_option("--dt", rabi.dt, "Sampling step in seconds");
  rabi_cmd->add_option("--k-rxx", rabi.k_rxx, "Resistance change per unit Mz");
  rabi_cmd->add_option("--initial", rabi.initial, "Initial populations p0,p1,p2,p3");

  SpectrumOptions spectrum;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Single-pulse frequency sweep over the one-photon lines");
  spectrum_cmd->add_option("--omega0-hz", spectrum.omega0_hz, "Central line frequency in Hz");
  spectrum_cmd->add_option("--splitting-hz", spectrum.splitting_hz, "Spacing of adjacent one-photon lines in Hz");
  spectrum_cmd->add_option("--rabi-hz", spectrum.rabi_hz, "Rabi frequency / 2pi in Hz");
  spectrum_cmd->add_option("--pulse-length", spectrum.pulse_length, "Pulse length in seconds (default: pi pulse)");
  spectrum_cmd->add_option("--points", spectrum.points, "Grid points");
  spectrum_cmd->add_option("--k-rxx", spectrum.k_rxx, "Resistance change per unit Mz");
  spectrum_cmd->add_flag("--mirror", spectrum.mirror, "Put the (0,1) line on the high-frequency side");
  spectrum_cmd->add_option("--initial", spectrum.initial, "Initial populations p0,p1,p2,p3");

  PrepareOptions prep;
  auto* prep_cmd = app.add_subcommand("prepare", "Effective pure state preparation");
  prep_cmd->add_option("--target", prep.target, "Logical target state 00, 01, 10 or 11");
  prep_cmd->add_option("--initial", prep.initial, "Initial populations p0,p1,p2,p3");

  std::string fit_path;
  std::string fit_column = "mz";
  auto* fit_cmd = app.add_subcommand("fitdecay", "Fit a damped cosine to a time series");
  fit_cmd->add_option("series", fit_path, "Time-series file written by 'rabi'")->required();
  fit_cmd->add_option("--column", fit_column, "Column to fit");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  if (seed_opt->count() > 0) g.seed = seed_value;

  const Output output(g, out);
  try {
    if (*verify_cmd) return cmd_verify(g, verify_opts, output, err);
    if (*tomo_cmd) return cmd_tomography(g, tomo, output, err);
    if (*compile_cmd) return cmd_compile(compile_path, output);
    if (*rabi_cmd) return cmd_rabi(rabi, output);
    if (*spectrum_cmd) return cmd_spectrum(spectrum, output);
    if (*prep_cmd) return cmd_prepare(g, prep, output);
    if (*fit_cmd) return cmd_fitdecay(g, fit_path, fit_column, output, err);
  } catch (const Failure& f) {
    err << "error: " << f.what() << '\n';
    return f.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

}  // namespace quartit::cli
