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

// Dense complex linear algebra, quantum states and fidelity measures shared by
// every other module. Matrices are small (2 to 81 dimensional) and dense.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geogate/error.hpp"

namespace geogate {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

}  // namespace geogate

namespace geogate::qcore {

/// Default tolerance for analytic identities.
inline constexpr double kDefaultTol = 1e-10;

inline std::string shape_string(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         shape_string(m));
  }
}

/// Largest absolute entry.
inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix& h, double tol = kDefaultTol) {
  return h.rows() == h.cols() && max_abs(h - h.adjoint()) <= tol;
}

/// ‖U†U − I‖_max ≤ tol.
inline bool is_unitary(const ComplexMatrix& u, double tol = kDefaultTol) {
  if (u.rows() != u.cols()) return false;
  const auto n = u.rows();
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(n, n)) <= tol;
}

inline ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Checked square-matrix product.
inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "matmul");
  require_square(b, "matmul");
  if (a.rows() != b.rows()) {
    throw DimensionError("matmul: dimension mismatch " + shape_string(a) + " vs " +
                         shape_string(b));
  }
  return a * b;
}

/// e^{−iHt} for Hermitian H.
///
/// Two-level Hamiltonians use the Pauli closed form: with H = h₀I + h·σ,
/// e^{−iHt} = e^{−ih₀t}[cos(|h|t) I − i sin(|h|t) ĥ·σ]. Larger ones go through
/// a Hermitian eigendecomposition.
inline ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t) {
  require_square(h, "expm_hermitian");
  if (!is_hermitian(h, kDefaultTol)) {
    throw InvalidArgument("expm_hermitian: Hamiltonian is not Hermitian within 1e-10");
  }
  if (h.rows() == 2) {
    const double h0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double hx = h(0, 1).real();
    const double hy = -h(0, 1).imag();
    const double hz = 0.5 * (h(0, 0).real() - h(1, 1).real());
    const double norm = std::sqrt(hx * hx + hy * hy + hz * hz);
    const double c = std::cos(norm * t);
    // sin(|h|t)/|h| stays finite as |h| → 0.
    const double s_over = norm > 0.0 ? std::sin(norm * t) / norm : t;
    const Complex phase = std::exp(Complex(0.0, -h0 * t));
    ComplexMatrix u(2, 2);
    u(0, 0) = phase * Complex(c, -s_over * hz);
    u(1, 1) = phase * Complex(c, s_over * hz);
    u(0, 1) = phase * (-kI * s_over * Complex(hx, -hy));
    u(1, 0) = phase * (-kI * s_over * Complex(hx, hy));
    return u;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
  if (eig.info() != Eigen::Success) {
    throw Error("expm_hermitian: eigendecomposition failed");
  }
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  ComplexVector phases(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    phases(k) = std::exp(Complex(0.0, -lambda(k) * t));
  }
  const ComplexMatrix& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

/// One fourth-order Magnus step of U' = −iH(t)U over [t, t + h], using the
/// two Gauss–Legendre nodes. The step exponent is Hermitian, so the result is
/// exactly unitary.
template <class HamiltonianFn>
ComplexMatrix magnus4_step(const HamiltonianFn& hamiltonian, double t, double h) {
  constexpr double kNode = 0.28867513459481288225;  // 1/(2√3)
  const double mid = t + 0.5 * h;
  const ComplexMatrix h1 = hamiltonian(mid - kNode * h);
  const ComplexMatrix h2 = hamiltonian(mid + kNode * h);
  const ComplexMatrix commutator = h2 * h1 - h1 * h2;
  ComplexMatrix effective = 0.5 * (h1 + h2) - kI * (std::numbers::sqrt3 * h / 12.0) * commutator;
  effective = 0.5 * (effective + effective.adjoint()).eval();
  return expm_hermitian(effective, h);
}

/// Normalized pure state.
class StateVector {
 public:
  explicit StateVector(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) throw DimensionError("StateVector: empty amplitude vector");
    const double norm = amplitudes_.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw InvalidArgument("StateVector: amplitudes must have finite non-zero norm");
    }
    amplitudes_ /= norm;
  }

  StateVector(std::initializer_list<Complex> amplitudes)
      : StateVector(to_vector(amplitudes)) {}

  static StateVector basis(Eigen::Index dim, Eigen::Index k) {
    if (k < 0 || k >= dim) throw InvalidArgument("StateVector::basis: index out of range");
    ComplexVector v = ComplexVector::Zero(dim);
    v(k) = 1.0;
    return StateVector(std::move(v));
  }

  Eigen::Index dim() const { return amplitudes_.size(); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex operator[](Eigen::Index k) const { return amplitudes_(k); }

 private:
  static ComplexVector to_vector(std::initializer_list<Complex> values) {
    ComplexVector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index k = 0;
    for (const Complex& c : values) v(k++) = c;
    return v;
  }

  ComplexVector amplitudes_;
};

/// Validated density matrix: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {
    require_square(entries_, "DensityMatrix");
    if (!is_hermitian(entries_, 1e-12)) {
      throw InvalidArgument("DensityMatrix: not Hermitian within 1e-12");
    }
    if (std::abs(entries_.trace() - Complex(1.0)) > 1e-10) {
      throw InvalidArgument("DensityMatrix: trace differs from 1 by more than 1e-10");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(entries_, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) {
      throw InvalidArgument("DensityMatrix: negative eigenvalue below -1e-10");
    }
  }

  static DensityMatrix pure(const StateVector& psi) {
    return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
  }

  static DensityMatrix maximally_mixed(Eigen::Index dim) {
    return DensityMatrix(identity(dim) / static_cast<double>(dim));
  }

  Eigen::Index dim() const { return entries_.rows(); }
  const ComplexMatrix& matrix() const { return entries_; }

 private:
  ComplexMatrix entries_;
};

/// |Tr(U_ideal† U_actual)| / d. Insensitive to global phases.
inline double gate_fidelity(const ComplexMatrix& ideal, const ComplexMatrix& actual) {
  require_square(ideal, "gate_fidelity");
  require_square(actual, "gate_fidelity");
  if (ideal.rows() != actual.rows()) {
    throw DimensionError("gate_fidelity: dimension mismatch " + shape_string(ideal) + " vs " +
                         shape_string(actual));
  }
  const Complex overlap = (ideal.adjoint() * actual).trace();
  return std::min(1.0, std::abs(overlap) / static_cast<double>(ideal.rows()));
}

/// ⟨ψ|ρ|ψ⟩.
inline double state_fidelity(const DensityMatrix& rho, const StateVector& psi) {
  if (rho.dim() != psi.dim()) {
    throw DimensionError("state_fidelity: density matrix is " + std::to_string(rho.dim()) +
                         "-dim, state is " + std::to_string(psi.dim()) + "-dim");
  }
  const Complex value = psi.amplitudes().dot(rho.matrix() * psi.amplitudes());
  return std::clamp(value.real(), 0.0, 1.0);
}

struct ChannelSample {
  StateVector input;
  DensityMatrix output;
};

/// Mean state fidelity of channel outputs against their ideal images.
inline double avg_gate_fidelity_open(std::span<const ChannelSample> samples,
                                     std::span<const StateVector> targets) {
  if (samples.empty()) throw InvalidArgument("avg_gate_fidelity_open: no channel samples");
  if (samples.size() != targets.size()) {
    throw DimensionError("avg_gate_fidelity_open: " + std::to_string(samples.size()) +
                         " samples vs " + std::to_string(targets.size()) + " targets");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    total += state_fidelity(samples[k].output, targets[k]);
  }
  return total / static_cast<double>(samples.size());
}

/// The six axial Bloch states |0⟩, |1⟩, |+⟩, |−⟩, |+i⟩, |−i⟩.
inline std::vector<StateVector> axial_states() {
  const double r = std::numbers::sqrt2 / 2.0;
  return {
      StateVector{1.0, 0.0},       StateVector{0.0, 1.0},
      StateVector{r, r},           StateVector{r, -r},
      StateVector{Complex(r), kI * r}, StateVector{Complex(r), -kI * r},
  };
}

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double distance(const BlochVector& other) const {
    const double dx = x - other.x, dy = y - other.y, dz = z - other.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  }
};

/// (⟨σx⟩, ⟨σy⟩, ⟨σz⟩) of a two-level pure state.
inline BlochVector bloch_vector(const ComplexVector& psi) {
  if (psi.size() != 2) throw DimensionError("bloch_vector: expected a 2-dim state");
  const Complex a = psi(0), b = psi(1);
  const Complex coherence = std::conj(a) * b;
  return {2.0 * coherence.real(), 2.0 * coherence.imag(), std::norm(a) - std::norm(b)};
}

}  // namespace geogate::qcore
