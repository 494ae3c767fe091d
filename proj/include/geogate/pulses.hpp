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

// Single-loop and dynamically corrected pulse schedules for a resonantly
// driven qubit, H(t) = (Ω(t)/2)(cos φ σx + sin φ σy), together with their
// propagation under systematic amplitude (ε) and detuning (δ) errors.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "geogate/error.hpp"
#include "geogate/qcore.hpp"

namespace geogate::pulses {

using qcore::StateVector;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps an angle into [0, 2π).
inline double wrap_phase(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a >= kTwoPi ? 0.0 : a;
}

/// Maps an angle into (−π, π].
inline double wrap_symmetric(double angle) {
  double a = std::remainder(angle, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  return a;
}

enum class ShapeKind { Square, RaisedCosine };

inline const char* to_string(ShapeKind kind) {
  return kind == ShapeKind::Square ? "square" : "raised-cosine";
}

/// Envelope family with peak Rabi amplitude `omega_max` (Ωₘ).
struct PulseShape {
  ShapeKind kind = ShapeKind::Square;
  double omega_max = 1.0;

  void validate() const {
    if (!(omega_max > 0.0) || !std::isfinite(omega_max)) {
      throw InvalidArgument("PulseShape: omega_max must be positive and finite");
    }
  }

  /// Segment duration that delivers the given pulse area.
  double duration_for_area(double area) const {
    return kind == ShapeKind::Square ? area / omega_max : 2.0 * area / omega_max;
  }

  /// Ω(t) at local time t of a segment of length `duration`.
  double envelope(double t, double duration) const {
    if (kind == ShapeKind::Square) return omega_max;
    return 0.5 * omega_max * (1.0 - std::cos(kTwoPi * t / duration));
  }
};

enum class Scheme { SingleLoop, Corrected };

inline const char* to_string(Scheme scheme) {
  return scheme == Scheme::SingleLoop ? "single-loop" : "corrected";
}

/// Geometric gate e^{iγ n·σ}, n = (sin θ cos φ, sin θ sin φ, cos θ).
///
/// φ is stored in [0, 2π) and γ in (−π, π]; θ must lie in [0, π].
struct GateSpec {
  double gamma = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  Scheme scheme = Scheme::Corrected;

  GateSpec() = default;
  GateSpec(double gamma_, double theta_, double phi_, Scheme scheme_ = Scheme::Corrected)
      : gamma(wrap_symmetric(gamma_)), theta(theta_), phi(wrap_phase(phi_)), scheme(scheme_) {
    if (!std::isfinite(gamma_) || !std::isfinite(theta_) || !std::isfinite(phi_)) {
      throw InvalidArgument("GateSpec: angles must be finite");
    }
    constexpr double kSlack = 1e-12;
    if (theta < -kSlack || theta > kPi + kSlack) {
      throw InvalidArgument("GateSpec: theta must lie in [0, pi]");
    }
    theta = std::clamp(theta, 0.0, kPi);
  }

  GateSpec with_scheme(Scheme s) const {
    GateSpec copy = *this;
    copy.scheme = s;
    return copy;
  }
};

/// Bloch-sphere rotation axis n of the gate.
inline std::array<double, 3> rotation_axis(const GateSpec& spec) {
  return {std::sin(spec.theta) * std::cos(spec.phi), std::sin(spec.theta) * std::sin(spec.phi),
          std::cos(spec.theta)};
}

/// cos γ I + i sin γ (n·σ).
inline ComplexMatrix target_unitary(const GateSpec& spec) {
  const auto n = rotation_axis(spec);
  const ComplexMatrix n_sigma =
      n[0] * qcore::pauli_x() + n[1] * qcore::pauli_y() + n[2] * qcore::pauli_z();
  return std::cos(spec.gamma) * qcore::identity(2) + kI * std::sin(spec.gamma) * n_sigma;
}

/// Eigenstate of n·σ with eigenvalue +1, i.e. the starting point of the
/// cyclic path: cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩.
inline StateVector axis_state(const GateSpec& spec) {
  return StateVector{Complex(std::cos(0.5 * spec.theta)),
                     std::polar(std::sin(0.5 * spec.theta), spec.phi)};
}

enum class SegmentRole { Geometric, InsertedPi };

struct PulseSegment {
  double area = 0.0;   // ∫Ω dt, rad
  double phase = 0.0;  // drive phase, rad in [0, 2π)
  PulseShape shape;
  SegmentRole role = SegmentRole::Geometric;

  double duration() const { return shape.duration_for_area(area); }
  double amplitude(double t) const { return shape.envelope(t, duration()); }
};

struct Schedule {
  std::vector<PulseSegment> segments;
  std::vector<double> boundary_times;  // end time of each segment
  double total_duration = 0.0;

  double start_time(std::size_t index) const {
    return index == 0 ? 0.0 : boundary_times[index - 1];
  }

  double total_area() const {
    double sum = 0.0;
    for (const auto& s : segments) sum += s.area;
    return sum;
  }

  std::size_t active_segments() const {
    return static_cast<std::size_t>(std::count_if(
        segments.begin(), segments.end(), [](const PulseSegment& s) { return s.area > 0.0; }));
  }

  /// Segment active at time t; boundaries belong to the later segment.
  std::size_t segment_at(double t) const {
    const auto it = std::upper_bound(boundary_times.begin(), boundary_times.end(), t);
    const auto idx = static_cast<std::size_t>(it - boundary_times.begin());
    return std::min(idx, segments.size() - 1);
  }
};

inline Schedule make_schedule(std::vector<PulseSegment> segments) {
  Schedule s;
  s.segments = std::move(segments);
  double t = 0.0;
  for (const auto& seg : s.segments) {
    if (seg.area < 0.0) throw InvalidArgument("Schedule: negative pulse area");
    seg.shape.validate();
    t += seg.duration();
    s.boundary_times.push_back(t);
  }
  s.total_duration = t;
  return s;
}

/// Three-segment single-loop path or seven-segment corrected path.
///
/// Zero-area segments (θ = 0) are kept as zero-duration no-ops.
inline Schedule build_schedule(const GateSpec& spec, const PulseShape& shape) {
  shape.validate();
  const double th = spec.theta, ph = spec.phi, g = spec.gamma;
  auto seg = [&](double area, double phase, SegmentRole role = SegmentRole::Geometric) {
    return PulseSegment{std::max(area, 0.0), wrap_phase(phase), shape, role};
  };
  if (spec.scheme == Scheme::SingleLoop) {
    return make_schedule({
        seg(th, ph - kPi / 2),
        seg(kPi, ph + g + kPi / 2),
        seg(kPi - th, ph - kPi / 2),
    });
  }
  if (th > kPi / 2 + 1e-12) throw InvalidArgument("theta out of corrected-scheme range");
  return make_schedule({
      seg(th, ph - kPi / 2),
      seg(kPi / 2, ph + g + kPi / 2),
      seg(kPi, ph + g + kPi, SegmentRole::InsertedPi),
      seg(kPi / 2, ph + g + kPi / 2),
      seg(kPi / 2, ph - kPi / 2),
      seg(kPi, ph, SegmentRole::InsertedPi),
      seg(kPi / 2 - th, ph - kPi / 2),
  });
}

/// (1+ε)(Ω(t)/2)(cos φ σx + sin φ σy) − δΩₘ|1⟩⟨1| at local time t.
inline ComplexMatrix segment_hamiltonian(const PulseSegment& seg, double t, double eps,
                                         double delta) {
  const double half_rabi = 0.5 * (1.0 + eps) * seg.amplitude(t);
  ComplexMatrix h(2, 2);
  h(0, 0) = 0.0;
  h(0, 1) = half_rabi * std::polar(1.0, -seg.phase);
  h(1, 0) = half_rabi * std::polar(1.0, seg.phase);
  h(1, 1) = -delta * seg.shape.omega_max;
  return h;
}

inline constexpr int kDefaultSubsteps = 200;

/// Propagator of one segment between local times t0 ≤ t1.
///
/// Square envelopes give a constant Hamiltonian and are exponentiated in one
/// step. Other envelopes use fourth-order Magnus sub-steps, `steps` per full
/// segment length.
inline ComplexMatrix segment_propagator(const PulseSegment& seg, double t0, double t1, double eps,
                                        double delta, int steps = kDefaultSubsteps) {
  if (t1 <= t0) return qcore::identity(2);
  if (seg.shape.kind == ShapeKind::Square) {
    return qcore::expm_hermitian(segment_hamiltonian(seg, t0, eps, delta), t1 - t0);
  }
  const double tau = seg.duration();
  const int n = std::max(1, static_cast<int>(std::ceil(steps * (t1 - t0) / tau - 1e-9)));
  const double h = (t1 - t0) / n;
  auto ham = [&](double t) { return segment_hamiltonian(seg, t, eps, delta); };
  ComplexMatrix u = qcore::identity(2);
  for (int k = 0; k < n; ++k) u = qcore::magnus4_step(ham, t0 + k * h, h) * u;
  return u;
}

/// Time-ordered propagator of the schedule between absolute times.
inline ComplexMatrix propagator_between(const Schedule& schedule, double t_from, double t_to,
                                        double eps, double delta,
                                        int steps = kDefaultSubsteps) {
  ComplexMatrix u = qcore::identity(2);
  for (std::size_t i = 0; i < schedule.segments.size(); ++i) {
    const double start = schedule.start_time(i);
    const double end = schedule.boundary_times[i];
    const double a = std::max(start, t_from);
    const double b = std::min(end, t_to);
    if (b <= a) continue;
    u = segment_propagator(schedule.segments[i], a - start, b - start, eps, delta, steps) * u;
  }
  return u;
}

/// Full-schedule unitary under amplitude error ε and detuning δ (in units of Ωₘ).
inline ComplexMatrix propagate(const Schedule& schedule, double eps, double delta,
                               int steps_per_segment = kDefaultSubsteps) {
  if (steps_per_segment < 1) throw InvalidArgument("propagate: steps_per_segment must be >= 1");
  return propagator_between(schedule, 0.0, schedule.total_duration, eps, delta,
                            steps_per_segment);
}

/// −∫⟨ψ(t)|H(t)|ψ(t)⟩dt over one segment of the error-free path started from `initial`.
///
/// Within a segment H(t) is a fixed operator times Ω(t), so ⟨H⟩/Ω is conserved and the
/// integral reduces to −(area/2) r·(cos φ, sin φ, 0) with r the Bloch vector at segment start.
inline double dynamical_phase(const Schedule& schedule, std::size_t index,
                              const StateVector& initial) {
  if (index >= schedule.segments.size()) throw InvalidArgument("dynamical_phase: bad index");
  if (initial.dim() != 2) throw DimensionError("dynamical_phase: expected a qubit state");
  const auto& seg = schedule.segments[index];
  const ComplexVector psi =
      propagator_between(schedule, 0.0, schedule.start_time(index), 0.0, 0.0) *
      initial.amplitudes();
  const auto r = qcore::bloch_vector(psi);
  return -0.5 * seg.area * (r.x * std::cos(seg.phase) + r.y * std::sin(seg.phase));
}

struct TrajectoryPoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Bloch coordinates at `samples` uniformly spaced times over [0, T].
inline std::vector<TrajectoryPoint> bloch_trajectory(const Schedule& schedule,
                                                     const StateVector& initial, int samples,
                                                     double eps = 0.0, double delta = 0.0,
                                                     int steps = kDefaultSubsteps) {
  if (initial.dim() != 2) throw DimensionError("bloch_trajectory: expected a qubit state");
  if (samples < 1) throw InvalidArgument("bloch_trajectory: samples must be positive");
  std::vector<TrajectoryPoint> out;
  out.reserve(static_cast<std::size_t>(samples));
  ComplexVector psi = initial.amplitudes();
  const double total = schedule.total_duration;
  double t_prev = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = samples == 1 ? 0.0 : total * k / (samples - 1);
    psi = propagator_between(schedule, t_prev, t, eps, delta, steps) * psi;
    psi.normalize();
    const auto r = qcore::bloch_vector(psi);
    out.push_back({t, r.x, r.y, r.z});
    t_prev = t;
  }
  return out;
}

/// Distance between first and last trajectory points.
inline double closure_defect(const std::vector<TrajectoryPoint>& path) {
  if (path.empty()) return 0.0;
  const auto& a = path.front();
  const auto& b = path.back();
  return qcore::BlochVector{a.x, a.y, a.z}.distance({b.x, b.y, b.z});
}

struct SeriesFit {
  int order = 2;
  double exponent = 0.0;     // log–log slope of 1 − F against ε
  double coefficient = 0.0;  // lim (1 − F)/ε^order
  double c2 = 0.0;           // polynomial-fit ε² coefficient
  double c4 = 0.0;           // polynomial-fit ε⁴ coefficient
  std::vector<double> eps;
  std::vector<double> infidelity;
};

inline constexpr double kSeriesEpsMin = 1e-3;
inline constexpr double kSeriesEpsMax = 1e-2;
inline constexpr int kSeriesPoints = 8;

/// Leading-order fit of the amplitude-error infidelity 1 − F(ε).
///
/// ε runs over 8 log-spaced points in [1e−3, 1e−2]. The exponent is the
/// least-squares log–log slope. The coefficient is the ε → 0 intercept of a
/// straight-line fit of (1 − F)/ε^order against ε. c2 and c4 come from a joint
/// fit on {ε², ε³, ε⁴, ε⁵}.
inline SeriesFit infidelity_series_coefficient(const GateSpec& spec, const PulseShape& shape,
                                               int order) {
  if (order != 2 && order != 4) {
    throw InvalidArgument("infidelity_series_coefficient: order must be 2 or 4");
  }
  const Schedule schedule = build_schedule(spec, shape);
  const ComplexMatrix target = target_unitary(spec);
  SeriesFit fit;
  fit.order = order;
  for (int k = 0; k < kSeriesPoints; ++k) {
    const double e = kSeriesEpsMin *
                     std::pow(kSeriesEpsMax / kSeriesEpsMin, double(k) / (kSeriesPoints - 1));
    const double f = qcore::gate_fidelity(target, propagate(schedule, e, 0.0));
    fit.eps.push_back(e);
    fit.infidelity.push_back(1.0 - f);
  }
  for (double v : fit.infidelity) {
    if (!(v > 0.0)) throw FitError("wrong leading order: infidelity vanishes within the fit range");
  }

  const Eigen::Index n = kSeriesPoints;
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    design(k, 0) = 1.0;
    design(k, 1) = std::log(fit.eps[k]);
    rhs(k) = std::log(fit.infidelity[k]);
  }
  fit.exponent = design.colPivHouseholderQr().solve(rhs)(1);
  if (std::abs(fit.exponent - order) > 0.2) {
    throw FitError("wrong leading order: fitted exponent " + std::to_string(fit.exponent) +
                   " vs requested " + std::to_string(order));
  }

  for (Eigen::Index k = 0; k < n; ++k) {
    design(k, 0) = 1.0;
    design(k, 1) = fit.eps[k];
    rhs(k) = fit.infidelity[k] / std::pow(fit.eps[k], order);
  }
  fit.coefficient = design.colPivHouseholderQr().solve(rhs)(0);

  // Columns scaled by ε_max^p for conditioning.
  Eigen::MatrixXd poly(n, 4);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double u = fit.eps[k] / kSeriesEpsMax;
    for (int p = 0; p < 4; ++p) poly(k, p) = std::pow(u, p + 2);
    rhs(k) = fit.infidelity[k];
  }
  const Eigen::VectorXd c = poly.colPivHouseholderQr().solve(rhs);
  fit.c2 = c(0) / std::pow(kSeriesEpsMax, 2);
  fit.c4 = c(2) / std::pow(kSeriesEpsMax, 4);
  return fit;
}

}  // namespace geogate::pulses
