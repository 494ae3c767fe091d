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

// Lindblad master-equation integration and the open-system gate benchmarks.

#include <cmath>
#include <functional>
#include <vector>

#include "geogate/error.hpp"
#include "geogate/pulses.hpp"
#include "geogate/qcore.hpp"

namespace geogate::noise {

using qcore::DensityMatrix;
using qcore::StateVector;

/// Systematic and incoherent error parameters.
///
/// `delta` multiplies Ωₘ; `gamma` is an absolute rate in the same units as Ωₘ.
struct ErrorModel {
  double eps = 0.0;
  double delta = 0.0;
  double gamma = 0.0;
  bool leakage = false;

  void validate() const {
    if (!std::isfinite(eps) || !std::isfinite(delta) || !std::isfinite(gamma)) {
      throw InvalidArgument("ErrorModel: parameters must be finite");
    }
    if (gamma < 0.0) throw InvalidArgument("ErrorModel: gamma must be non-negative");
  }
};

struct CollapseSet {
  std::vector<ComplexMatrix> operators;
  std::vector<double> rates;

  void add(ComplexMatrix op, double rate) {
    if (rate < 0.0) throw InvalidArgument("CollapseSet: negative rate");
    operators.push_back(std::move(op));
    rates.push_back(rate);
  }

  bool empty() const { return operators.empty(); }

  void validate(Eigen::Index dim) const {
    if (operators.size() != rates.size()) {
      throw InvalidArgument("CollapseSet: operators and rates are not aligned");
    }
    for (std::size_t k = 0; k < operators.size(); ++k) {
      if (operators[k].rows() != dim || operators[k].cols() != dim) {
        throw DimensionError("CollapseSet: operator " + std::to_string(k) + " is " +
                             qcore::shape_string(operators[k]) + ", expected dim " +
                             std::to_string(dim));
      }
      if (rates[k] < 0.0) throw InvalidArgument("CollapseSet: negative rate");
    }
  }
};

/// σ₁ = |0⟩⟨1| and σ₂ = |1⟩⟨1| − |0⟩⟨0|, both at rate Γ.
inline CollapseSet qubit_collapse(double gamma) {
  CollapseSet c;
  ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
  lower(0, 1) = 1.0;
  c.add(lower, gamma);
  c.add(-qcore::pauli_z(), gamma);
  return c;
}

/// i[ρ, H] + ½ Σ Γₙ (2σₙρσₙ† − σₙ†σₙρ − ρσₙ†σₙ).
inline ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h,
                                  const CollapseSet& c) {
  if (rho.rows() != h.rows() || rho.cols() != h.cols()) {
    throw DimensionError("lindblad_rhs: rho " + qcore::shape_string(rho) + " vs H " +
                         qcore::shape_string(h));
  }
  ComplexMatrix out = kI * (rho * h - h * rho);
  for (std::size_t k = 0; k < c.operators.size(); ++k) {
    if (c.rates[k] == 0.0) continue;
    const ComplexMatrix& s = c.operators[k];
    if (s.rows() != rho.rows()) throw DimensionError("lindblad_rhs: collapse operator dim");
    const ComplexMatrix sd = s.adjoint();
    const ComplexMatrix sds = sd * s;
    out += (0.5 * c.rates[k]) * (2.0 * s * rho * sd - sds * rho - rho * sds);
  }
  return out;
}

inline ComplexMatrix lindblad_rhs(const DensityMatrix& rho, const ComplexMatrix& h,
                                  const CollapseSet& c) {
  return lindblad_rhs(rho.matrix(), h, c);
}

using TimeHamiltonian = std::function<ComplexMatrix(double)>;
using MasterObserver = std::function<void(double, const ComplexMatrix&)>;

struct MasterOptions {
  double t0 = 0.0;
  MasterObserver observer;  // called at t0 and after every step
};

struct MasterResult {
  ComplexMatrix rho;
  double max_trace_drift = 0.0;  // largest |Tr ρ − 1| before renormalization
  long steps = 0;

  DensityMatrix state() const { return DensityMatrix(rho); }
};

/// Fixed-step RK4 over [t0, t0 + T] with ⌈T/dt⌉ equal steps.
///
/// After every step ρ is replaced by (ρ + ρ†)/2 and rescaled to unit trace.
inline MasterResult evolve_master(const ComplexMatrix& rho0, const TimeHamiltonian& hamiltonian,
                                  const CollapseSet& c, double total_time, double dt,
                                  const MasterOptions& options = {}) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("evolve_master: dt must be positive");
  if (total_time < 0.0) throw InvalidArgument("evolve_master: negative duration");
  qcore::require_square(rho0, "evolve_master");
  c.validate(rho0.rows());

  MasterResult result;
  result.rho = rho0;
  if (options.observer) options.observer(options.t0, result.rho);
  if (total_time == 0.0) return result;

  const long n = std::max(1L, static_cast<long>(std::ceil(total_time / dt - 1e-9)));
  const double h = total_time / static_cast<double>(n);
  ComplexMatrix& rho = result.rho;
  for (long k = 0; k < n; ++k) {
    const double t = options.t0 + static_cast<double>(k) * h;
    const ComplexMatrix h0 = hamiltonian(t);
    const ComplexMatrix hm = hamiltonian(t + 0.5 * h);
    const ComplexMatrix h1 = hamiltonian(t + h);
    const ComplexMatrix k1 = lindblad_rhs(rho, h0, c);
    const ComplexMatrix k2 = lindblad_rhs(rho + (0.5 * h) * k1, hm, c);
    const ComplexMatrix k3 = lindblad_rhs(rho + (0.5 * h) * k2, hm, c);
    const ComplexMatrix k4 = lindblad_rhs(rho + h * k3, h1, c);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = (0.5 * (rho + rho.adjoint())).eval();
    const double trace = rho.trace().real();
    result.max_trace_drift = std::max(result.max_trace_drift, std::abs(trace - 1.0));
    if (!(trace > 0.0)) throw Error("evolve_master: trace collapsed");
    rho /= trace;
    if (options.observer) options.observer(t + h, rho);
  }
  result.steps = n;
  return result;
}

inline MasterResult evolve_master(const DensityMatrix& rho0, const TimeHamiltonian& hamiltonian,
                                  const CollapseSet& c, double total_time, double dt,
                                  const MasterOptions& options = {}) {
  return evolve_master(rho0.matrix(), hamiltonian, c, total_time, dt, options);
}

inline constexpr int kStepsPerSegment = 400;

/// Master evolution through every segment of a qubit schedule with the
/// (1+ε) amplitude error and −δΩₘ|1⟩⟨1| detuning, `steps_per_segment` RK4 steps each.
inline MasterResult evolve_schedule(const ComplexMatrix& rho0, const pulses::Schedule& schedule,
                                    const ErrorModel& err, const CollapseSet& c,
                                    int steps_per_segment = kStepsPerSegment,
                                    const MasterObserver& observer = {}) {
  err.validate();
  if (steps_per_segment < 1) throw InvalidArgument("evolve_schedule: steps_per_segment < 1");
  MasterResult total;
  total.rho = rho0;
  if (observer) observer(0.0, rho0);
  for (std::size_t i = 0; i < schedule.segments.size(); ++i) {
    const auto& seg = schedule.segments[i];
    const double tau = seg.duration();
    if (tau <= 0.0) continue;
    const double start = schedule.start_time(i);
    auto ham = [&](double t) {
      return pulses::segment_hamiltonian(seg, t - start, err.eps, err.delta);
    };
    MasterOptions opts;
    opts.t0 = start;
    if (observer) {
      opts.observer = [&](double t, const ComplexMatrix& rho) {
        if (t > start) observer(t, rho);
      };
    }
    const MasterResult part =
        evolve_master(total.rho, ham, c, tau, tau / steps_per_segment, opts);
    total.rho = part.rho;
    total.steps += part.steps;
    total.max_trace_drift = std::max(total.max_trace_drift, part.max_trace_drift);
  }
  return total;
}

/// Fidelity ⟨ψ_f|ρ(T)|ψ_f⟩ for one initial state, ψ_f its ideal image.
inline double final_state_fidelity(const pulses::GateSpec& spec, const pulses::PulseShape& shape,
                                   const ErrorModel& err, const StateVector& initial,
                                   int steps_per_segment = kStepsPerSegment) {
  const auto schedule = pulses::build_schedule(spec, shape);
  const auto c = qubit_collapse(err.gamma);
  const auto out = evolve_schedule(DensityMatrix::pure(initial).matrix(), schedule, err, c,
                                   steps_per_segment);
  const StateVector ideal(pulses::target_unitary(spec) * initial.amplitudes());
  return qcore::state_fidelity(out.state(), ideal);
}

/// Mean state fidelity over the six axial states under Γ, ε and δ.
inline double gate_fidelity_open(const pulses::GateSpec& spec, const pulses::PulseShape& shape,
                                 const ErrorModel& err, int steps_per_segment = kStepsPerSegment) {
  const auto schedule = pulses::build_schedule(spec, shape);
  const auto c = qubit_collapse(err.gamma);
  const ComplexMatrix target = pulses::target_unitary(spec);
  std::vector<qcore::ChannelSample> samples;
  std::vector<StateVector> targets;
  for (const auto& psi : qcore::axial_states()) {
    const auto out = evolve_schedule(DensityMatrix::pure(psi).matrix(), schedule, err, c,
                                     steps_per_segment);
    samples.push_back({psi, out.state()});
    targets.emplace_back(target * psi.amplitudes());
  }
  return qcore::avg_gate_fidelity_open(samples, targets);
}

}  // namespace geogate::noise
