// Copyright 2026 The geogate Authors
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

// geogate: command-line front end for gate reports, robustness scans, series
// fits, Bloch trajectories and transmon-level runs.
//
// Exit codes: 0 ok, 2 usage, 3 I/O, 4 series deviation above 5%, 5 resonance.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "geogate/harness.hpp"

namespace {

using namespace geogate;
using harness::json;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitFit = 4;
constexpr int kExitResonance = 5;

struct Flags {
  std::string config;
  std::string gate;
  std::string scheme;
  std::string shape;
  std::string encoding;
  double omega_max = 1.0;
  double eps = 0.0;
  double delta = 0.0;
  double gamma_ratio = 0.0;
  double gamma_khz = 0.0;
  std::string x_axis;
  std::string y_axis;
  std::string output;
  int threads = 0;
  int samples = 401;
  std::string initial = "axis";
  std::string model;
  std::string collapse;
  int steps_per_period = 40;
};

struct Registered {
  CLI::Option* gate = nullptr;
  CLI::Option* scheme = nullptr;
  CLI::Option* shape = nullptr;
  CLI::Option* encoding = nullptr;
  CLI::Option* omega_max = nullptr;
  CLI::Option* eps = nullptr;
  CLI::Option* delta = nullptr;
  CLI::Option* gamma_ratio = nullptr;
  CLI::Option* gamma_khz = nullptr;
  CLI::Option* x_axis = nullptr;
  CLI::Option* y_axis = nullptr;
  CLI::Option* output = nullptr;
  CLI::Option* threads = nullptr;
  CLI::Option* model = nullptr;
  CLI::Option* collapse = nullptr;
  CLI::Option* steps = nullptr;
};

bool given(const CLI::Option* o) { return o != nullptr && o->count() > 0; }

void add_gate_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config with gate/errors/device/scan sections");
  cmd->add_option("--name,--gate", f.gate, "Gate: H, S, T (CZ for transmon/scan)");
  cmd->add_option("--scheme", f.scheme, "single-loop or corrected");
  cmd->add_option("--shape", f.shape, "square or raised-cosine");
  cmd->add_option("--omega-max", f.omega_max, "Peak Rabi amplitude");
}

void add_error_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--eps", f.eps, "Fractional amplitude error");
  cmd->add_option("--delta", f.delta, "Detuning as a fraction of the peak amplitude");
  cmd->add_option("--gamma-ratio", f.gamma_ratio, "Decoherence rate over peak amplitude");
}

CLI::Option* find_option(CLI::App* app, const char* name) {
  try {
    return app->get_option(name);
  } catch (const CLI::OptionNotFound&) {
    return nullptr;
  }
}

Registered registered(CLI::App* app) {
  Registered r;
  r.gate = find_option(app, "--name");
  r.scheme = find_option(app, "--scheme");
  r.shape = find_option(app, "--shape");
  r.omega_max = find_option(app, "--omega-max");
  r.encoding = find_option(app, "--encoding");
  r.eps = find_option(app, "--eps");
  r.delta = find_option(app, "--delta");
  r.gamma_ratio = find_option(app, "--gamma-ratio");
  r.gamma_khz = find_option(app, "--gamma-khz");
  r.x_axis = find_option(app, "--x");
  r.y_axis = find_option(app, "--y");
  r.output = find_option(app, "--output");
  r.threads = find_option(app, "--threads");
  r.model = find_option(app, "--model");
  r.collapse = find_option(app, "--collapse");
  r.steps = find_option(app, "--steps-per-period");
  return r;
}

harness::RunConfig resolve(const Flags& f, const Registered& r) {
  harness::RunConfig c;
  if (!f.config.empty()) harness::apply_config(harness::load_json_file(f.config), c);
  if (given(r.gate)) c.gate = harness::parse_gate(f.gate);
  if (given(r.scheme)) c.scheme = harness::parse_scheme(f.scheme);
  if (given(r.shape)) c.shape.kind = harness::parse_shape(f.shape);
  if (given(r.omega_max)) c.shape.omega_max = f.omega_max;
  if (given(r.encoding)) c.encoding = harness::parse_encoding(f.encoding);
  if (given(r.eps)) c.errors.eps = f.eps;
  if (given(r.delta)) c.errors.delta = f.delta;
  if (given(r.gamma_ratio)) c.errors.gamma_ratio = f.gamma_ratio;
  if (given(r.gamma_khz)) c.errors.gamma_khz = f.gamma_khz;
  if (given(r.x_axis)) c.x = harness::parse_axis_spec(f.x_axis);
  if (given(r.y_axis)) c.y = harness::parse_axis_spec(f.y_axis);
  if (given(r.output)) c.output = f.output;
  if (given(r.threads)) c.threads = f.threads;
  if (given(r.model)) {
    if (f.model == "exact") c.device.model = transmon::CouplingModel::Exact;
    else if (f.model == "rotating-wave") c.device.model = transmon::CouplingModel::RotatingWave;
    else throw InvalidArgument("--model must be exact or rotating-wave");
  }
  if (given(r.collapse)) {
    if (f.collapse == "collective") c.device.collapse = transmon::CollapseMode::Collective;
    else if (f.collapse == "independent") c.device.collapse = transmon::CollapseMode::Independent;
    else throw InvalidArgument("--collapse must be collective or independent");
  }
  if (given(r.steps)) c.device.steps_per_period = f.steps_per_period;
  c.shape.validate();
  return c;
}

void require_qubit_gate(const harness::RunConfig& c) {
  if (c.gate == harness::GateName::CZ) {
    throw InvalidArgument("gate CZ is only available as 'transmon cz' or a transmon scan");
  }
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_gate(const Flags& f, const Registered& r) {
  auto c = resolve(f, r);
  require_qubit_gate(c);
  const auto spec = harness::named_gate(c.gate, c.scheme);
  const auto schedule = pulses::build_schedule(spec, c.shape);
  const ComplexMatrix target = pulses::target_unitary(spec);
  json report = {
      {"gate", harness::to_string(c.gate)},
      {"scheme", pulses::to_string(c.scheme)},
      {"shape", pulses::to_string(c.shape.kind)},
      {"encoding", harness::to_string(c.encoding)},
      {"spec", {{"gamma", spec.gamma}, {"theta", spec.theta}, {"phi", spec.phi}}},
      {"errors", {{"eps", c.errors.eps}, {"delta", c.errors.delta}, {"gamma_ratio", c.errors.gamma_ratio}}},
      {"target", harness::matrix_json(target)},
      {"schedule", harness::schedule_json(schedule)},
  };
  if (c.encoding == harness::Encoding::Transmon) {
    throw InvalidArgument("gate: use 'transmon single' for the transmon encoding");
  }
  if (c.encoding == harness::Encoding::DFS) {
    if (c.errors.gamma_ratio > 0.0) throw InvalidArgument("gate: dfs encoding has no decoherence model");
    const auto res = dfs::run_logical_gate(spec, {c.errors.eps, c.errors.delta, 0.0}, c.shape);
    report["fidelity"] = res.fidelity;
    report["leakage"] = res.leakage;
    report["achieved"] = harness::matrix_json(res.logical_unitary);
  } else {
    const ComplexMatrix u = pulses::propagate(schedule, c.errors.eps, c.errors.delta);
    report["fidelity"] = qcore::gate_fidelity(target, u);
    report["achieved"] = harness::matrix_json(u);
    if (c.errors.gamma_ratio > 0.0) {
      report["open_fidelity"] = noise::gate_fidelity_open(
          spec, c.shape, {c.errors.eps, c.errors.delta, c.errors.gamma_ratio * c.shape.omega_max});
    }
  }
  if (!c.output.empty()) harness::write_json(c.output, report);
  print(report);
  return 0;
}

int cmd_scan(const Flags& f, const Registered& r) {
  auto c = resolve(f, r);
  if (c.output.empty()) throw InvalidArgument("scan: --output is required");
  const auto result = harness::run_scan(c);
  harness::write_scan(result, c.output);
  print({{"output", c.output},
         {"rows", result.rows.size()},
         {"min_fidelity", result.min_fidelity()},
         {"config_hash", result.metadata["config_hash"]}});
  return 0;
}

int cmd_series(const Flags& f, const Registered& r) {
  auto c = resolve(f, r);
  require_qubit_gate(c);
  const auto spec = harness::named_gate(c.gate, c.scheme);
  const auto ref = harness::reference_series(c.gate, c.scheme);
  json report = {{"gate", harness::to_string(c.gate)},
                 {"scheme", pulses::to_string(c.scheme)},
                 {"shape", pulses::to_string(c.shape.kind)},
                 {"order", ref.order},
                 {"reference_coefficient", ref.coefficient}};
  int rc = 0;
  try {
    const auto fit = pulses::infidelity_series_coefficient(spec, c.shape, ref.order);
    const double deviation = std::abs(fit.coefficient - ref.coefficient) / ref.coefficient;
    report["fitted_exponent"] = fit.exponent;
    report["fitted_coefficient"] = fit.coefficient;
    report["c2"] = fit.c2;
    report["c4"] = fit.c4;
    report["relative_deviation"] = deviation;
    if (deviation > 0.05) rc = kExitFit;
  } catch (const FitError& e) {
    report["error"] = e.what();
    rc = kExitFit;
  }
  report["status"] = rc == 0 ? "ok" : "deviation";
  print(report);
  return rc;
}

int cmd_trajectory(const Flags& f, const Registered& r) {
  auto c = resolve(f, r);
  require_qubit_gate(c);
  if (c.output.empty()) throw InvalidArgument("trajectory: --output is required");
  const auto spec = harness::named_gate(c.gate, c.scheme);
  const auto schedule = pulses::build_schedule(spec, c.shape);
  const auto initial = harness::parse_initial(f.initial, spec);
  const auto path =
      pulses::bloch_trajectory(schedule, initial, f.samples, c.errors.eps, c.errors.delta);
  std::vector<std::vector<double>> rows;
  for (const auto& p : path) rows.push_back({p.t, p.x, p.y, p.z});
  harness::write_csv(c.output, "t,x,y,z", rows);
  const double defect = pulses::closure_defect(path);
  json meta = {{"gate", harness::to_string(c.gate)},
               {"scheme", pulses::to_string(c.scheme)},
               {"shape", pulses::to_string(c.shape.kind)},
               {"eps", c.errors.eps},
               {"delta", c.errors.delta},
               {"initial", f.initial},
               {"samples", f.samples},
               {"closure_defect", defect},
               {"config_hash", harness::config_hash(c)},
               {"timestamp", harness::utc_timestamp()},
               {"version", harness::kVersion}};
  harness::write_json(harness::sidecar_path(c.output), meta);
  print({{"output", c.output}, {"closure_defect", defect}});
  return 0;
}

int cmd_transmon(const std::string& which, const Flags& f, const Registered& r) {
  auto c = resolve(f, r);
  c.encoding = harness::Encoding::Transmon;
  const auto pair = c.device.pair();
  const auto opts = c.device.options();
  const noise::ErrorModel err{c.errors.eps, c.errors.delta, transmon::khz(c.errors.gamma_khz), true};
  transmon::PhysicalResult res;
  json report = {{"model", transmon::to_string(opts.model)},
                 {"collapse", opts.collapse == transmon::CollapseMode::Collective ? "collective" : "independent"},
                 {"device", harness::device_json(c.device)},
                 {"gamma_khz", c.errors.gamma_khz}};
  if (which == "cz") {
    const auto n = transmon::check_resonance(pair, transmon::Subspace::TwoExcB);
    res = transmon::run_physical_cz(pair, err, opts);
    report["gate"] = "CZ";
    report["resonance_order"] = n;
    const double zero_noise = qcore::gate_fidelity(transmon::ideal_cz(),
                                                   transmon::logical_cz_operator(pair, opts));
    report["logical_cz_fidelity"] = zero_noise;
  } else {
    require_qubit_gate(c);
    const auto n = transmon::check_resonance(pair, transmon::Subspace::SingleExc);
    const auto spec = harness::named_gate(c.gate, c.scheme);
    const std::string init =
        f.initial != "axis" ? f.initial : (c.gate == harness::GateName::H ? "0" : "+");
    res = transmon::run_physical_single_logical_gate(spec, pair, err,
                                                     harness::parse_initial(init, spec), opts);
    report["gate"] = harness::to_string(c.gate);
    report["scheme"] = pulses::to_string(c.scheme);
    report["initial"] = init;
    report["resonance_order"] = n;
  }
  report["fidelity"] = res.fidelity;
  report["leakage"] = res.leakage;
  report["duration_ns"] = res.duration * 1e9;
  report["g_eff_mhz"] = res.g_eff / transmon::mhz(1.0);
  report["config_hash"] = harness::config_hash(c);
  report["version"] = harness::kVersion;
  if (!c.output.empty()) {
    std::vector<std::vector<double>> rows;
    for (const auto& s : res.time_series) rows.push_back({s.t, s.fidelity});
    harness::write_csv(c.output, "t,F", rows);
    json meta = report;
    meta["timestamp"] = harness::utc_timestamp();
    harness::write_json(harness::sidecar_path(c.output), meta);
  }
  print(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonadiabatic geometric gate simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", geogate::harness::kVersion);

  Flags f;

  auto* gate = app.add_subcommand("gate", "Report one gate under systematic errors");
  add_gate_options(gate, f);
  add_error_options(gate, f);
  gate->add_option("--encoding", f.encoding, "bare or dfs");
  gate->add_option("--output", f.output, "Also write the JSON report here");

  auto* scan = app.add_subcommand("scan", "Fidelity over a two-axis grid");
  add_gate_options(scan, f);
  add_error_options(scan, f);
  scan->add_option("--encoding", f.encoding, "bare, dfs or transmon");
  scan->add_option("--x", f.x_axis, "Axis kind:min:max:points (eps, delta, gamma_ratio)");
  scan->add_option("--y", f.y_axis, "Axis kind:min:max:points");
  scan->add_option("--output", f.output, "CSV path; metadata goes to <output>.meta.json");
  scan->add_option("--threads", f.threads, "Worker threads (0 = hardware)");
  scan->add_option("--gamma-khz", f.gamma_khz, "Transmon decoherence rate, 2pi x kHz");

  auto* series = app.add_subcommand("series", "Fit the leading amplitude-error infidelity term");
  add_gate_options(series, f);

  auto* traj = app.add_subcommand("trajectory", "Export the Bloch trajectory as t,x,y,z CSV");
  add_gate_options(traj, f);
  add_error_options(traj, f);
  traj->add_option("--output", f.output, "CSV path")->required();
  traj->add_option("--samples", f.samples, "Number of samples")->check(CLI::PositiveNumber);
  traj->add_option("--initial", f.initial, "0, 1, +, -, +i, -i or axis");

  auto* tr = app.add_subcommand("transmon", "Physical-level run on two coupled transmons");
  tr->require_subcommand(1);
  auto* tr_single = tr->add_subcommand("single", "Single-logical-qubit gate");
  auto* tr_cz = tr->add_subcommand("cz", "DFS CZ gate via the auxiliary state");
  for (auto* sub : {tr_single, tr_cz}) {
    sub->add_option("--config", f.config, "Device config JSON");
    sub->add_option("--output", f.output, "t,F time-series CSV");
    sub->add_option("--eps", f.eps, "Fractional coupling error");
    sub->add_option("--delta", f.delta, "Collective detuning over 2 g_eff");
    sub->add_option("--gamma-khz", f.gamma_khz, "Decoherence rate, 2pi x kHz");
    sub->add_option("--model", f.model, "rotating-wave or exact");
    sub->add_option("--collapse", f.collapse, "collective or independent");
    sub->add_option("--steps-per-period", f.steps_per_period, "RK4 steps per drive period");
  }
  tr_single->add_option("--name,--gate", f.gate, "H, S or T");
  tr_single->add_option("--scheme", f.scheme, "single-loop or corrected");
  tr_single->add_option("--initial", f.initial, "Logical initial state (default 0 for H, + otherwise)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gate) return cmd_gate(f, registered(gate));
    if (*scan) return cmd_scan(f, registered(scan));
    if (*series) return cmd_series(f, registered(series));
    if (*traj) return cmd_trajectory(f, registered(traj));
    if (*tr_cz) return cmd_transmon("cz", f, registered(tr_cz));
    if (*tr_single) return cmd_transmon("single", f, registered(tr_single));
  } catch (const geogate::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const geogate::ResonanceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResonance;
  } catch (const geogate::FitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFit;
  } catch (const geogate::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const geogate::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
