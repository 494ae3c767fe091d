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

// One logical qubit in the single-excitation subspace of two physical qubits:
// |0⟩_L = |10⟩, |1⟩_L = |01⟩. Physical index of |ab⟩ is 2a + b.

#include <cmath>

#include "geogate/error.hpp"
#include "geogate/noise.hpp"
#include "geogate/pulses.hpp"
#include "geogate/qcore.hpp"

namespace geogate::dfs {

using qcore::StateVector;

inline constexpr Eigen::Index kPhysicalDim = 4;
inline constexpr Eigen::Index kLogicalZero = 2;  // |10⟩
inline constexpr Eigen::Index kLogicalOne = 1;   // |01⟩

struct LogicalEncoding {
  /// 4×2 isometry whose columns are |0⟩_L and |1⟩_L.
  static ComplexMatrix isometry() {
    ComplexMatrix v = ComplexMatrix::Zero(kPhysicalDim, 2);
    v(kLogicalZero, 0) = 1.0;
    v(kLogicalOne, 1) = 1.0;
    return v;
  }

  /// Projector onto span{|10⟩, |01⟩}.
  static ComplexMatrix code_projector() {
    const ComplexMatrix v = isometry();
    return v * v.adjoint();
  }

  /// n_A + n_B.
  static ComplexMatrix excitation_number() {
    ComplexMatrix n = ComplexMatrix::Zero(kPhysicalDim, kPhysicalDim);
    n(1, 1) = 1.0;
    n(2, 2) = 1.0;
    n(3, 3) = 2.0;
    return n;
  }
};

inline StateVector encode(const StateVector& logical) {
  if (logical.dim() != 2) throw DimensionError("encode: expected a 2-dim logical state");
  return StateVector(LogicalEncoding::isometry() * logical.amplitudes());
}

/// g e^{iφ₀}|0⟩_L⟨1| + h.c.
struct LogicalHamiltonian {
  double g = 0.0;
  double phi0 = 0.0;

  /// Matches a bare drive segment: g = Ω/2, φ₀ = −φ.
  static LogicalHamiltonian from_drive(double rabi, double phase) {
    return {0.5 * rabi, -phase};
  }

  ComplexMatrix logical() const {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 1) = g * std::polar(1.0, phi0);
    h(1, 0) = std::conj(h(0, 1));
    return h;
  }

  /// Exchange term g e^{iφ₀}|10⟩⟨01| + h.c. on the two physical qubits.
  ComplexMatrix physical() const {
    ComplexMatrix h = ComplexMatrix::Zero(kPhysicalDim, kPhysicalDim);
    h(kLogicalZero, kLogicalOne) = g * std::polar(1.0, phi0);
    h(kLogicalOne, kLogicalZero) = std::conj(h(kLogicalZero, kLogicalOne));
    return h;
  }
};

/// (1+ε)H_L − δΩₘ I_L.
inline ComplexMatrix logical_error_hamiltonian(const LogicalHamiltonian& h, double eps,
                                               double delta, double omega_m) {
  return (1.0 + eps) * h.logical() - delta * omega_m * qcore::identity(2);
}

/// Physical Hamiltonian of one schedule segment with collective detuning −δΩₘ(n_A + n_B).
inline ComplexMatrix physical_segment_hamiltonian(const pulses::PulseSegment& seg, double t,
                                                  double eps, double delta) {
  const auto lh = LogicalHamiltonian::from_drive(seg.amplitude(t), seg.phase);
  return (1.0 + eps) * lh.physical() -
         delta * seg.shape.omega_max * LogicalEncoding::excitation_number();
}

struct LogicalGateResult {
  double fidelity = 0.0;
  ComplexMatrix logical_unitary;  // V†UV
  double leakage = 0.0;           // worst population lost from the code space
};

/// Runs the gate on the encoded pair and compares V†UV with the target.
inline LogicalGateResult run_logical_gate(const pulses::GateSpec& spec,
                                          const noise::ErrorModel& err,
                                          const pulses::PulseShape& shape = {},
                                          int steps_per_segment = pulses::kDefaultSubsteps) {
  err.validate();
  if (err.gamma != 0.0) throw InvalidArgument("run_logical_gate: decoherence is not modelled");
  const auto schedule = pulses::build_schedule(spec, shape);
  ComplexMatrix u = qcore::identity(kPhysicalDim);
  for (const auto& seg : schedule.segments) {
    const double tau = seg.duration();
    if (tau <= 0.0) continue;
    auto ham = [&](double t) { return physical_segment_hamiltonian(seg, t, err.eps, err.delta); };
    if (seg.shape.kind == pulses::ShapeKind::Square) {
      u = qcore::expm_hermitian(ham(0.0), tau) * u;
    } else {
      const double h = tau / steps_per_segment;
      for (int k = 0; k < steps_per_segment; ++k) u = qcore::magnus4_step(ham, k * h, h) * u;
    }
  }
  const ComplexMatrix v = LogicalEncoding::isometry();
  LogicalGateResult r;
  r.logical_unitary = v.adjoint() * u * v;
  r.fidelity = qcore::gate_fidelity(pulses::target_unitary(spec), r.logical_unitary);
  for (Eigen::Index k = 0; k < 2; ++k) {
    r.leakage = std::max(r.leakage, 1.0 - r.logical_unitary.col(k).squaredNorm());
  }
  return r;
}

}  // namespace geogate::dfs
