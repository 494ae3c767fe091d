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

#pragma once

// Named gates, JSON configuration, parameter scans and CSV/JSON emission
// shared by the command-line tool and the tests.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "geogate/dfs.hpp"
#include "geogate/error.hpp"
#include "geogate/noise.hpp"
#include "geogate/pulses.hpp"
#include "geogate/transmon.hpp"
#include "json.hpp"

namespace geogate::harness {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.3.0";

enum class GateName { H, S, T, CZ };

inline const char* to_string(GateName g) {
  switch (g) {
    case GateName::H:
      return "H";
    case GateName::S:
      return "S";
    case GateName::T:
      return "T";
    case GateName::CZ:
      return "CZ";
  }
  return "";
}

inline GateName parse_gate(const std::string& s) {
  if (s == "H") return GateName::H;
  if (s == "S") return GateName::S;
  if (s == "T") return GateName::T;
  if (s == "CZ") return GateName::CZ;
  throw InvalidArgument("unknown gate '" + s + "' (expected H, S, T or CZ)");
}

inline pulses::Scheme parse_scheme(const std::string& s) {
  if (s == "single-loop") return pulses::Scheme::SingleLoop;
  if (s == "corrected") return pulses::Scheme::Corrected;
  throw InvalidArgument("unknown scheme '" + s + "' (expected single-loop or corrected)");
}

inline pulses::ShapeKind parse_shape(const std::string& s) {
  if (s == "square") return pulses::ShapeKind::Square;
  if (s == "raised-cosine") return pulses::ShapeKind::RaisedCosine;
  throw InvalidArgument("unknown shape '" + s + "' (expected square or raised-cosine)");
}

/// (γ, θ, φ): H = (π/2, π/4, 0), S = (π/4, 0, 0), T = (π/8, 0, 0), CZ = (π, 0, 0)
/// on its auxiliary transition.
inline pulses::GateSpec named_gate(GateName g, pulses::Scheme scheme) {
  constexpr double pi = std::numbers::pi;
  switch (g) {
    case GateName::H:
      return {pi / 2, pi / 4, 0.0, scheme};
    case GateName::S:
      return {pi / 4, 0.0, 0.0, scheme};
    case GateName::T:
      return {pi / 8, 0.0, 0.0, scheme};
    case GateName::CZ:
      return {pi, 0.0, 0.0, scheme};
  }
  return {};
}

struct ReferenceSeries {
  int order;
  double coefficient;
};

/// Closed-form leading-order targets for 1 − F ≈ c ε^order.
inline ReferenceSeries reference_series(GateName g, pulses::Scheme scheme) {
  constexpr double pi = std::numbers::pi, r2 = std::numbers::sqrt2;
  const double pi2 = pi * pi, pi4 = pi2 * pi2;
  if (scheme == pulses::Scheme::SingleLoop) {
    switch (g) {
      case GateName::H:
        return {2, 5.0 * pi2 / 32.0};
      case GateName::S:
        return {2, pi2 / 4.0};
      case GateName::T:
        return {2, (r2 + 1.0) * pi2 / (4.0 * r2)};
      default:
        break;
    }
  } else {
    switch (g) {
      case GateName::H:
        return {2, pi2 / 32.0};
      case GateName::S:
        return {4, pi4 / 16.0};
      case GateName::T:
        return {4, (r2 + 1.0) * pi4 / (16.0 * r2)};
      default:
        break;
    }
  }
  throw InvalidArgument("no series reference for gate " + std::string(to_string(g)));
}

enum class Encoding { Bare, DFS, Transmon };

inline const char* to_string(Encoding e) {
  switch (e) {
    case Encoding::Bare:
      return "bare";
    case Encoding::DFS:
      return "dfs";
    case Encoding::Transmon:
      return "transmon";
  }
  return "";
}

inline Encoding parse_encoding(const std::string& s) {
  if (s == "bare") return Encoding::Bare;
  if (s == "dfs") return Encoding::DFS;
  if (s == "transmon") return Encoding::Transmon;
  throw InvalidArgument("unknown encoding '" + s + "' (expected bare, dfs or transmon)");
}

enum class AxisKind { Eps, Delta, GammaRatio };

inline const char* to_string(AxisKind a) {
  switch (a) {
    case AxisKind::Eps:
      return "eps";
    case AxisKind::Delta:
      return "delta";
    case AxisKind::GammaRatio:
      return "gamma_ratio";
  }
  return "";
}

inline AxisKind parse_axis(const std::string& s) {
  if (s == "eps") return AxisKind::Eps;
  if (s == "delta") return AxisKind::Delta;
  if (s == "gamma_ratio") return AxisKind::GammaRatio;
  throw InvalidArgument("unknown axis '" + s + "' (expected eps, delta or gamma_ratio)");
}

struct Axis {
  AxisKind kind = AxisKind::Eps;
  double min = -0.1;
  double max = 0.1;
  int points = 41;

  double value(int i) const {
    if (points == 1) return min;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(points - 1);
  }

  void validate() const {
    if (points < 2) throw InvalidArgument("axis " + std::string(to_string(kind)) + ": points must be >= 2");
    if (!std::isfinite(min) || !std::isfinite(max) || max < min) {
      throw InvalidArgument("axis " + std::string(to_string(kind)) + ": invalid range");
    }
    if (kind == AxisKind::GammaRatio && min < 0.0) {
      throw InvalidArgument("axis gamma_ratio: range must be non-negative");
    }
  }
};

/// "kind:min:max:points", e.g. "eps:-0.1:0.1:41".
inline Axis parse_axis_spec(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 4) throw InvalidArgument("axis spec '" + text + "' must be kind:min:max:points");
  Axis a;
  a.kind = parse_axis(parts[0]);
  try {
    a.min = std::stod(parts[1]);
    a.max = std::stod(parts[2]);
    a.points = std::stoi(parts[3]);
  } catch (const std::exception&) {
    throw InvalidArgument("axis spec '" + text + "' has a non-numeric field");
  }
  return a;
}

/// Error values applied where no axis overrides them. Qubit-level decoherence is
/// given relative to Ωₘ; transmon decoherence is absolute (2π × kHz).
struct ErrorSettings {
  double eps = 0.0;
  double delta = 0.0;
  double gamma_ratio = 0.0;
  double gamma_khz = 0.0;
};

struct DeviceSettings {
  double alpha_a_mhz = 220.0;
  double alpha_b_mhz = 245.0;
  double omega_a_mhz = 700.0;
  double omega_b_mhz = 0.0;
  double g_mhz = 20.0;
  double omega_d_mhz = 700.0;
  double beta = 1.8;
  double phi_d = 0.0;
  transmon::CouplingModel model = transmon::CouplingModel::RotatingWave;
  transmon::CollapseMode collapse = transmon::CollapseMode::Collective;
  int steps_per_period = 40;
  int samples = 201;

  transmon::CoupledPair pair() const {
    transmon::CoupledPair p;
    p.qubit_a = {transmon::mhz(omega_a_mhz), transmon::mhz(alpha_a_mhz)};
    p.qubit_b = {transmon::mhz(omega_b_mhz), transmon::mhz(alpha_b_mhz)};
    p.g_fixed = transmon::mhz(g_mhz);
    p.drive = transmon::ParametricDrive::from_beta(beta, transmon::mhz(omega_d_mhz), phi_d);
    p.validate();
    return p;
  }

  transmon::PhysicalOptions options() const {
    transmon::PhysicalOptions o;
    o.model = model;
    o.collapse = collapse;
    o.steps_per_period = steps_per_period;
    o.samples = samples;
    return o;
  }
};

struct RunConfig {
  GateName gate = GateName::H;
  pulses::Scheme scheme = pulses::Scheme::Corrected;
  pulses::PulseShape shape;
  Encoding encoding = Encoding::Bare;
  ErrorSettings errors;
  DeviceSettings device;
  Axis x{AxisKind::Eps, -0.1, 0.1, 41};
  Axis y{AxisKind::Delta, -0.1, 0.1, 41};
  std::string output;
  int threads = 0;
};

namespace detail {

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config field '") + key + "': " + e.what());
  }
}

inline Axis read_axis(const json& j, Axis a) {
  std::string kind = to_string(a.kind);
  read(j, "axis", kind);
  a.kind = parse_axis(kind);
  read(j, "min", a.min);
  read(j, "max", a.max);
  read(j, "points", a.points);
  return a;
}

}  // namespace detail

/// Applies a config document with optional sections `gate`, `errors`, `device`, `scan`.
inline void apply_config(const json& doc, RunConfig& cfg) {
  if (!doc.is_object()) throw InvalidArgument("config: top level must be an object");
  using detail::read;
  if (doc.contains("gate")) {
    const json& g = doc["gate"];
    if (g.contains("name")) cfg.gate = parse_gate(g["name"].get<std::string>());
    if (g.contains("scheme")) cfg.scheme = parse_scheme(g["scheme"].get<std::string>());
    if (g.contains("shape")) cfg.shape.kind = parse_shape(g["shape"].get<std::string>());
    read(g, "omega_max", cfg.shape.omega_max);
  }
  if (doc.contains("errors")) {
    const json& e = doc["errors"];
    read(e, "eps", cfg.errors.eps);
    read(e, "delta", cfg.errors.delta);
    read(e, "gamma_ratio", cfg.errors.gamma_ratio);
    read(e, "gamma_khz", cfg.errors.gamma_khz);
  }
  if (doc.contains("device")) {
    const json& d = doc["device"];
    auto& dv = cfg.device;
    read(d, "alpha_a_mhz", dv.alpha_a_mhz);
    read(d, "alpha_b_mhz", dv.alpha_b_mhz);
    if (d.contains("delta_mhz")) {
      if (d.contains("omega_a_mhz") || d.contains("omega_b_mhz")) {
        throw InvalidArgument("config device: give either delta_mhz or omega_a_mhz/omega_b_mhz");
      }
      dv.omega_b_mhz = 0.0;
      read(d, "delta_mhz", dv.omega_a_mhz);
    }
    read(d, "omega_a_mhz", dv.omega_a_mhz);
    read(d, "omega_b_mhz", dv.omega_b_mhz);
    read(d, "g_mhz", dv.g_mhz);
    read(d, "omega_d_mhz", dv.omega_d_mhz);
    read(d, "beta", dv.beta);
    read(d, "phi_d", dv.phi_d);
    if (d.contains("model")) {
      const auto m = d["model"].get<std::string>();
      if (m == "exact") dv.model = transmon::CouplingModel::Exact;
      else if (m == "rotating-wave") dv.model = transmon::CouplingModel::RotatingWave;
      else throw InvalidArgument("config device.model must be exact or rotating-wave");
    }
    if (d.contains("collapse")) {
      const auto m = d["collapse"].get<std::string>();
      if (m == "collective") dv.collapse = transmon::CollapseMode::Collective;
      else if (m == "independent") dv.collapse = transmon::CollapseMode::Independent;
      else throw InvalidArgument("config device.collapse must be collective or independent");
    }
    read(d, "steps_per_period", dv.steps_per_period);
    read(d, "samples", dv.samples);
  }
  if (doc.contains("scan")) {
    const json& s = doc["scan"];
    if (s.contains("encoding")) cfg.encoding = parse_encoding(s["encoding"].get<std::string>());
    if (s.contains("x")) cfg.x = detail::read_axis(s["x"], cfg.x);
    if (s.contains("y")) cfg.y = detail::read_axis(s["y"], cfg.y);
    read(s, "output", cfg.output);
    read(s, "threads", cfg.threads);
  }
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("config '" + path + "': " + e.what());
  }
}

inline json axis_json(const Axis& a) {
  return {{"axis", to_string(a.kind)}, {"min", a.min}, {"max", a.max}, {"points", a.points}};
}

inline json device_json(const DeviceSettings& d) {
  return {{"alpha_a_mhz", d.alpha_a_mhz},
          {"alpha_b_mhz", d.alpha_b_mhz},
          {"omega_a_mhz", d.omega_a_mhz},
          {"omega_b_mhz", d.omega_b_mhz},
          {"g_mhz", d.g_mhz},
          {"omega_d_mhz", d.omega_d_mhz},
          {"beta", d.beta},
          {"phi_d", d.phi_d},
          {"model", transmon::to_string(d.model)},
          {"collapse", d.collapse == transmon::CollapseMode::Collective ? "collective" : "independent"},
          {"steps_per_period", d.steps_per_period}};
}

/// Physics-relevant fields only; output paths, thread counts and sampling are excluded.
inline json physics_json(const RunConfig& c) {
  json j = {
      {"gate", {{"name", to_string(c.gate)},
                {"scheme", pulses::to_string(c.scheme)},
                {"shape", pulses::to_string(c.shape.kind)},
                {"omega_max", c.shape.omega_max}}},
      {"errors", {{"eps", c.errors.eps},
                  {"delta", c.errors.delta},
                  {"gamma_ratio", c.errors.gamma_ratio},
                  {"gamma_khz", c.errors.gamma_khz}}},
      {"scan", {{"encoding", to_string(c.encoding)}, {"x", axis_json(c.x)}, {"y", axis_json(c.y)}}},
  };
  if (c.encoding == Encoding::Transmon) j["device"] = device_json(c.device);
  return j;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string config_hash(const RunConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(physics_json(c).dump())));
  return buf;
}

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Writes a header line and rows of numbers with 12 significant digits and '\n' endings.
inline void write_csv(const std::string& path, const std::string& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << header << '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ',';
      out << format_number(row[k]);
    }
    out << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline std::string sidecar_path(const std::string& output) { return output + ".meta.json"; }

inline bool axis_used(const RunConfig& c, AxisKind k) { return c.x.kind == k || c.y.kind == k; }

/// Decoherence present anywhere in the scan selects the open-system metric for every point.
inline bool scan_is_open(const RunConfig& c) {
  return axis_used(c, AxisKind::GammaRatio) || c.errors.gamma_ratio > 0.0 ||
         (c.encoding == Encoding::Transmon && c.errors.gamma_khz > 0.0);
}

inline void validate_scan(const RunConfig& c) {
  c.x.validate();
  c.y.validate();
  c.shape.validate();
  if (c.x.kind == c.y.kind) throw InvalidArgument("scan: x and y axes must differ");
  if (c.encoding == Encoding::DFS && scan_is_open(c)) {
    throw InvalidArgument("scan: the dfs encoding has no decoherence model; use bare or transmon");
  }
  if (c.gate == GateName::CZ && c.encoding != Encoding::Transmon) {
    throw InvalidArgument("scan: CZ is only available with the transmon encoding");
  }
}

/// Fidelity at one scan point.
///
/// Bare closed systems report |Tr(U†V)|/2, open systems the six-state average.
/// DFS reports the logical gate fidelity. Transmon reports the six-state logical
/// average for H, S, T and the state fidelity for CZ; its Γ axis is relative to 2g_eff.
inline double evaluate_point(const RunConfig& c, double x, double y) {
  ErrorSettings e = c.errors;
  auto assign = [&](AxisKind k, double v) {
    if (k == AxisKind::Eps) e.eps = v;
    else if (k == AxisKind::Delta) e.delta = v;
    else e.gamma_ratio = v;
  };
  assign(c.x.kind, x);
  assign(c.y.kind, y);
  const pulses::GateSpec spec = named_gate(c.gate, c.scheme);
  switch (c.encoding) {
    case Encoding::Bare: {
      if (scan_is_open(c)) {
        return noise::gate_fidelity_open(spec, c.shape,
                                         {e.eps, e.delta, e.gamma_ratio * c.shape.omega_max});
      }
      const auto schedule = pulses::build_schedule(spec, c.shape);
      return qcore::gate_fidelity(pulses::target_unitary(spec),
                                  pulses::propagate(schedule, e.eps, e.delta));
    }
    case Encoding::DFS:
      return dfs::run_logical_gate(spec, {e.eps, e.delta, 0.0}, c.shape).fidelity;
    case Encoding::Transmon: {
      const auto pair = c.device.pair();
      auto opts = c.device.options();
      opts.samples = 2;
      if (c.gate == GateName::CZ) {
        const double g_eff = transmon::effective_cz_coupling(pair).g_eff;
        const double gamma = axis_used(c, AxisKind::GammaRatio) ? e.gamma_ratio * 2.0 * g_eff
                                                                : transmon::khz(e.gamma_khz);
        return transmon::run_physical_cz(pair, {e.eps, e.delta, gamma, true}, opts).fidelity;
      }
      const double g_eff = transmon::effective_single_logical_coupling(pair).g_eff;
      const double gamma = axis_used(c, AxisKind::GammaRatio) ? e.gamma_ratio * 2.0 * g_eff
                                                              : transmon::khz(e.gamma_khz);
      double total = 0.0;
      const auto states = qcore::axial_states();
      for (const auto& psi : states) {
        total += transmon::run_physical_single_logical_gate(spec, pair,
                                                            {e.eps, e.delta, gamma, true}, psi, opts)
                     .fidelity;
      }
      return total / static_cast<double>(states.size());
    }
  }
  return 0.0;
}

struct ScanRow {
  double x = 0.0;
  double y = 0.0;
  double fidelity = 0.0;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  json metadata;

  double min_fidelity() const {
    double m = 1.0;
    for (const auto& r : rows) m = std::min(m, r.fidelity);
    return m;
  }
};

/// Evaluates the full grid on a worker pool; rows come back sorted by (x, y).
inline ScanResult run_scan(const RunConfig& c) {
  validate_scan(c);
  if (c.encoding == Encoding::Transmon) {
    const auto pair = c.device.pair();
    if (c.gate == GateName::CZ) transmon::effective_cz_coupling(pair);
    else transmon::effective_single_logical_coupling(pair);
  }
  const int nx = c.x.points, ny = c.y.points;
  const std::size_t total = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  std::vector<ScanRow> rows(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const int i = static_cast<int>(k / static_cast<std::size_t>(ny));
      const int j = static_cast<int>(k % static_cast<std::size_t>(ny));
      try {
        const double x = c.x.value(i), y = c.y.value(j);
        rows[k] = {x, y, std::clamp(evaluate_point(c, x, y), 0.0, 1.0)};
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = total;
      }
    }
  };
  unsigned threads = c.threads > 0 ? static_cast<unsigned>(c.threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::sort(rows.begin(), rows.end(), [](const ScanRow& a, const ScanRow& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  ScanResult r;
  r.rows = std::move(rows);
  r.metadata = {
      {"gate", to_string(c.gate)},
      {"scheme", pulses::to_string(c.scheme)},
      {"encoding", to_string(c.encoding)},
      {"metric", scan_is_open(c) ? "six-state average" : "unitary gate fidelity"},
      {"rows", r.rows.size()},
      {"min_fidelity", r.min_fidelity()},
      {"timestamp", utc_timestamp()},
      {"config_hash", config_hash(c)},
      {"config", physics_json(c)},
      {"version", kVersion},
  };
  return r;
}

inline void write_scan(const ScanResult& r, const std::string& path) {
  std::vector<std::vector<double>> rows;
  rows.reserve(r.rows.size());
  for (const auto& row : r.rows) rows.push_back({row.x, row.y, row.fidelity});
  write_csv(path, "x,y,fidelity", rows);
  write_json(sidecar_path(path), r.metadata);
}

inline json matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

inline json schedule_json(const pulses::Schedule& s) {
  json segs = json::array();
  for (std::size_t i = 0; i < s.segments.size(); ++i) {
    const auto& seg = s.segments[i];
    segs.push_back({{"area", seg.area},
                    {"phase", seg.phase},
                    {"duration", seg.duration()},
                    {"end", s.boundary_times[i]},
                    {"inserted", seg.role == pulses::SegmentRole::InsertedPi}});
  }
  return {{"segments", segs}, {"total_duration", s.total_duration}};
}

/// "0", "1", "+", "-", "+i", "-i" or "axis" (the rotation-axis eigenstate).
inline qcore::StateVector parse_initial(const std::string& s, const pulses::GateSpec& spec) {
  const auto axial = qcore::axial_states();
  if (s == "axis") return pulses::axis_state(spec);
  if (s == "0") return axial[0];
  if (s == "1") return axial[1];
  if (s == "+") return axial[2];
  if (s == "-") return axial[3];
  if (s == "+i") return axial[4];
  if (s == "-i") return axial[5];
  throw InvalidArgument("unknown initial state '" + s + "' (expected 0, 1, +, -, +i, -i or axis)");
}

}  // namespace geogate::harness
