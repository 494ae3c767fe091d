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

// Two parametrically coupled three-level transmons in the interaction picture.
//
// Two-transmon kets |ab⟩ use index 3a + b, where a is the frequency-modulated
// transmon. All frequencies are angular (rad/s) and times are in seconds.

#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <vector>

#include "geogate/error.hpp"
#include "geogate/noise.hpp"
#include "geogate/pulses.hpp"
#include "geogate/qcore.hpp"

namespace geogate::transmon {

using qcore::StateVector;

inline constexpr int kLevels = 3;
inline constexpr Eigen::Index kPairDim = kLevels * kLevels;

/// 2π × f[MHz] in rad/s.
inline constexpr double mhz(double f) { return 2.0 * std::numbers::pi * f * 1e6; }
/// 2π × f[kHz] in rad/s.
inline constexpr double khz(double f) { return 2.0 * std::numbers::pi * f * 1e3; }

inline constexpr Eigen::Index ket_index(int a, int b) { return kLevels * a + b; }

struct TransmonParams {
  double omega = 0.0;  // only differences matter
  double alpha = 0.0;

  void validate() const {
    if (!std::isfinite(omega) || !(alpha > 0.0) || !std::isfinite(alpha)) {
      throw InvalidArgument("TransmonParams: anharmonicity must be positive and finite");
    }
  }
};

/// ω_a(t) = ω_a + ε_d sin(ω_d t + φ_d).
struct ParametricDrive {
  double eps_d = 0.0;
  double omega_d = 1.0;
  double phi_d = 0.0;

  static ParametricDrive from_beta(double beta, double omega_d, double phi_d = 0.0) {
    return {beta * omega_d, omega_d, phi_d};
  }

  double beta() const { return eps_d / omega_d; }

  void validate() const {
    if (!(omega_d > 0.0) || !std::isfinite(omega_d) || !std::isfinite(eps_d) ||
        !std::isfinite(phi_d)) {
      throw InvalidArgument("ParametricDrive: omega_d must be positive, all fields finite");
    }
  }
};

struct CoupledPair {
  TransmonParams qubit_a;  // modulated
  TransmonParams qubit_b;
  double g_fixed = 0.0;
  ParametricDrive drive;

  double delta() const { return qubit_a.omega - qubit_b.omega; }

  void validate() const {
    qubit_a.validate();
    qubit_b.validate();
    drive.validate();
    if (!std::isfinite(g_fixed) || g_fixed < 0.0) {
      throw InvalidArgument("CoupledPair: g_fixed must be non-negative and finite");
    }
  }

  CoupledPair with_phase(double phi_d) const {
    CoupledPair copy = *this;
    copy.drive.phi_d = phi_d;
    return copy;
  }
};

/// Bessel function of the first kind Jₙ(x), n ≥ 0, |x| ≤ 20, by its power series.
inline double bessel_j(int n, double x) {
  if (n < 0) throw InvalidArgument("bessel_j: order must be non-negative");
  if (!(std::abs(x) <= 20.0)) throw InvalidArgument("bessel_j: |x| must not exceed 20");
  const long double half = 0.5L * static_cast<long double>(x);
  long double term = 1.0L;
  for (int k = 1; k <= n; ++k) term *= half / k;
  long double sum = term;
  const long double q = -half * half;
  for (int m = 1; m < 200; ++m) {
    term *= q / (static_cast<long double>(m) * (m + n));
    sum += term;
    if (m >= 25 && std::abs(term) < 1e-22L * std::max(1.0L, std::abs(sum))) break;
  }
  return static_cast<double>(sum);
}

/// Jₙ(x) for any integer n, using J₋ₙ = (−1)ⁿ Jₙ.
inline double bessel_j_signed(int n, double x) {
  const double v = bessel_j(std::abs(n), x);
  return (n < 0 && (std::abs(n) % 2 == 1)) ? -v : v;
}

/// One block c |ket⟩⟨bra| e^{iωt} of the coupling Hamiltonian.
struct CouplingTerm {
  Eigen::Index ket;
  Eigen::Index bra;
  double factor;
  double frequency;
};

inline std::array<CouplingTerm, 4> coupling_terms(const CoupledPair& pair) {
  const double d = pair.delta(), aa = pair.qubit_a.alpha, ab = pair.qubit_b.alpha;
  const double r2 = std::numbers::sqrt2;
  return {{
      {ket_index(0, 1), ket_index(1, 0), 1.0, d},
      {ket_index(1, 1), ket_index(2, 0), r2, d + aa},
      {ket_index(0, 2), ket_index(1, 1), r2, d - ab},
      {ket_index(1, 2), ket_index(2, 1), 2.0, d + aa - ab},
  }};
}

/// g e^{iβ cos(ω_d t + φ_d)} Σ c |ket⟩⟨bra| e^{iωt} + h.c., without any rotating-wave step.
inline ComplexMatrix interaction_hamiltonian(const CoupledPair& pair, double t) {
  const auto& d = pair.drive;
  const Complex mod =
      pair.g_fixed * std::polar(1.0, d.beta() * std::cos(d.omega_d * t + d.phi_d));
  ComplexMatrix h = ComplexMatrix::Zero(kPairDim, kPairDim);
  for (const auto& term : coupling_terms(pair)) {
    const Complex v = mod * term.factor * std::polar(1.0, term.frequency * t);
    h(term.ket, term.bra) += v;
    h(term.bra, term.ket) += std::conj(v);
  }
  return h;
}

inline constexpr double kResonanceTol = 1e-6;
inline constexpr int kMaxHarmonic = 5;

/// Keeps only the Jacobi–Anger components iⁿJₙ(β)e^{in(ω_d t+φ_d)} that cancel a
/// block frequency, |ω + nω_d| ≤ tol·ω_d.
inline ComplexMatrix rotating_wave_hamiltonian(const CoupledPair& pair, double t,
                                               double tol = kResonanceTol) {
  const auto& d = pair.drive;
  ComplexMatrix h = ComplexMatrix::Zero(kPairDim, kPairDim);
  for (const auto& term : coupling_terms(pair)) {
    for (int n = -kMaxHarmonic; n <= kMaxHarmonic; ++n) {
      const double residual = term.frequency + n * d.omega_d;
      if (std::abs(residual) > tol * d.omega_d) continue;
      const Complex in = std::pow(kI, n);
      const Complex v = pair.g_fixed * term.factor * in * bessel_j_signed(n, d.beta()) *
                        std::polar(1.0, n * d.phi_d + residual * t);
      h(term.ket, term.bra) += v;
      h(term.bra, term.ket) += std::conj(v);
    }
  }
  return h;
}

enum class Subspace { SingleExc, TwoExcA, TwoExcB };

inline const char* condition_name(Subspace s) {
  switch (s) {
    case Subspace::SingleExc:
      return "Delta = n*omega_d";
    case Subspace::TwoExcA:
      return "Delta + alpha_a = n*omega_d";
    case Subspace::TwoExcB:
      return "Delta - alpha_b = n*omega_d";
  }
  return "";
}

inline double resonance_frequency(const CoupledPair& pair, Subspace s) {
  switch (s) {
    case Subspace::SingleExc:
      return pair.delta();
    case Subspace::TwoExcA:
      return pair.delta() + pair.qubit_a.alpha;
    case Subspace::TwoExcB:
      return pair.delta() - pair.qubit_b.alpha;
  }
  return 0.0;
}

/// Integer n with f = nω_d to relative tolerance 1e−6, 1 ≤ |n| ≤ 5.
inline int check_resonance(const CoupledPair& pair, Subspace s) {
  pair.drive.validate();
  const double f = resonance_frequency(pair, s);
  const double ratio = f / pair.drive.omega_d;
  const long n = std::lround(ratio);
  if (n == 0 || std::abs(n) > kMaxHarmonic ||
      std::abs(f - static_cast<double>(n) * pair.drive.omega_d) > kResonanceTol * std::abs(f)) {
    throw ResonanceError("not on resonance: " + std::string(condition_name(s)) + " fails (ratio " +
                         std::to_string(ratio) + ")");
  }
  return static_cast<int>(n);
}

struct EffectiveCoupling {
  double g_eff = 0.0;
  double phi0 = 0.0;
};

/// J₁(β)g and π/2 − φ_d for the first-sideband single-excitation exchange.
inline EffectiveCoupling effective_single_logical_coupling(const CoupledPair& pair) {
  if (check_resonance(pair, Subspace::SingleExc) != 1) {
    throw ResonanceError("not on resonance: Delta = omega_d requires n = 1");
  }
  return {bessel_j(1, pair.drive.beta()) * pair.g_fixed,
          pulses::wrap_phase(std::numbers::pi / 2 - pair.drive.phi_d)};
}

/// √2 J₁(β)g and π/2 − φ_d for the |11⟩ ↔ |02⟩ exchange.
inline EffectiveCoupling effective_cz_coupling(const CoupledPair& pair) {
  if (check_resonance(pair, Subspace::TwoExcB) != 1) {
    throw ResonanceError("not on resonance: Delta - alpha_b = omega_d requires n = 1");
  }
  return {std::numbers::sqrt2 * bessel_j(1, pair.drive.beta()) * pair.g_fixed,
          pulses::wrap_phase(std::numbers::pi / 2 - pair.drive.phi_d)};
}

/// Lowering Σ√k|k−1⟩⟨k| and weighted number |1⟩⟨1| + 2|2⟩⟨2| of one transmon.
inline ComplexMatrix transmon_lowering() {
  ComplexMatrix l = ComplexMatrix::Zero(kLevels, kLevels);
  l(0, 1) = 1.0;
  l(1, 2) = std::numbers::sqrt2;
  return l;
}

inline ComplexMatrix transmon_number() {
  ComplexMatrix n = ComplexMatrix::Zero(kLevels, kLevels);
  n(1, 1) = 1.0;
  n(2, 2) = 2.0;
  return n;
}

/// n_a + n_b on the pair.
inline ComplexMatrix pair_number() {
  const ComplexMatrix n = transmon_number();
  const ComplexMatrix i3 = qcore::identity(kLevels);
  return qcore::kron(n, i3) + qcore::kron(i3, n);
}

enum class CollapseMode { Collective, Independent };

/// Collective: one summed operator per channel. Independent: one per transmon.
inline noise::CollapseSet pair_collapse(double gamma, CollapseMode mode) {
  const ComplexMatrix i3 = qcore::identity(kLevels);
  const ComplexMatrix l = transmon_lowering(), n = transmon_number();
  noise::CollapseSet c;
  if (mode == CollapseMode::Collective) {
    c.add(qcore::kron(l, i3) + qcore::kron(i3, l), gamma);
    c.add(qcore::kron(n, i3) + qcore::kron(i3, n), gamma);
  } else {
    c.add(qcore::kron(l, i3), gamma);
    c.add(qcore::kron(i3, l), gamma);
    c.add(qcore::kron(n, i3), gamma);
    c.add(qcore::kron(i3, n), gamma);
  }
  return c;
}

enum class CouplingModel { Exact, RotatingWave };

inline const char* to_string(CouplingModel m) {
  return m == CouplingModel::Exact ? "exact" : "rotating-wave";
}

struct PhysicalOptions {
  CouplingModel model = CouplingModel::RotatingWave;
  CollapseMode collapse = CollapseMode::Collective;
  int steps_per_period = 40;  // RK4 steps per drive period 2π/ω_d
  int samples = 201;          // time-series points
};

struct TimeSample {
  double t = 0.0;
  double fidelity = 0.0;
};

struct PhysicalResult {
  double fidelity = 0.0;
  std::vector<TimeSample> time_series;
  double leakage = 0.0;  // population outside the kept levels at the end
  double duration = 0.0;
  double g_eff = 0.0;
  long steps = 0;
};

/// Effective two-level problem realized on a pair: which kets carry |0⟩ and
/// |1⟩ of the driven transition, which kets are left alone, and which count
/// as in-model at the end.
struct TwoLevelEmbedding {
  Eigen::Index zero;
  Eigen::Index one;
  std::vector<Eigen::Index> kept;
};

inline TwoLevelEmbedding single_logical_embedding() {
  return {ket_index(1, 0), ket_index(0, 1),
          {ket_index(0, 0), ket_index(0, 1), ket_index(1, 0), ket_index(1, 1)}};
}

inline TwoLevelEmbedding cz_embedding() {
  return {ket_index(1, 1), ket_index(0, 2),
          {ket_index(0, 0), ket_index(0, 1), ket_index(1, 0), ket_index(1, 1), ket_index(0, 2)}};
}

namespace detail {

inline ComplexMatrix coupling(const CoupledPair& pair, double t, CouplingModel model) {
  return model == CouplingModel::Exact ? interaction_hamiltonian(pair, t)
                                       : rotating_wave_hamiltonian(pair, t);
}

/// Square schedule at Ωₘ = 2g_eff; segment drive phase φ_d = π/2 − φ.
struct PhysicalPlan {
  pulses::Schedule schedule;
  std::vector<CoupledPair> segment_pairs;
  double dt = 0.0;
};

inline PhysicalPlan plan(const pulses::GateSpec& spec, const CoupledPair& pair, double g_eff,
                         const PhysicalOptions& options) {
  if (!(g_eff > 0.0)) throw InvalidArgument("transmon: effective coupling must be positive");
  if (options.steps_per_period < 1) throw InvalidArgument("transmon: steps_per_period < 1");
  PhysicalPlan p;
  p.schedule = pulses::build_schedule(spec, {pulses::ShapeKind::Square, 2.0 * g_eff});
  for (const auto& seg : p.schedule.segments) {
    p.segment_pairs.push_back(
        pair.with_phase(pulses::wrap_phase(std::numbers::pi / 2 - seg.phase)));
  }
  p.dt = 2.0 * std::numbers::pi / (options.steps_per_period * pair.drive.omega_d);
  return p;
}

inline ComplexVector embed(const TwoLevelEmbedding& e, const ComplexVector& two_level,
                           const ComplexVector& spectator) {
  ComplexVector v = spectator;
  v(e.zero) += two_level(0);
  v(e.one) += two_level(1);
  return v;
}

inline PhysicalResult run(const pulses::GateSpec& spec, const CoupledPair& pair, double g_eff,
                          const noise::ErrorModel& err, const TwoLevelEmbedding& e,
                          const ComplexVector& two_level_initial,
                          const ComplexVector& spectator, const PhysicalOptions& options) {
  err.validate();
  const PhysicalPlan p = plan(spec, pair, g_eff, options);
  const ComplexMatrix detuning = -err.delta * 2.0 * g_eff * pair_number();
  const auto c = pair_collapse(err.gamma, options.collapse);

  const ComplexVector psi0 = embed(e, two_level_initial, spectator);
  ComplexMatrix rho = psi0 * psi0.adjoint();
  rho /= rho.trace().real();

  std::vector<TimeSample> series;
  auto ideal_at = [&](double t) {
    const ComplexVector v =
        pulses::propagator_between(p.schedule, 0.0, t, 0.0, 0.0) * two_level_initial;
    ComplexVector full = embed(e, v, spectator);
    return full / full.norm();
  };
  auto record = [&](double t, const ComplexMatrix& r) {
    const ComplexVector ideal = ideal_at(t);
    series.push_back({t, std::clamp(ideal.dot(r * ideal).real(), 0.0, 1.0)});
  };

  PhysicalResult out;
  out.g_eff = g_eff;
  record(0.0, rho);
  for (std::size_t i = 0; i < p.schedule.segments.size(); ++i) {
    const double tau = p.schedule.segments[i].duration();
    if (tau <= 0.0) continue;
    const CoupledPair& seg_pair = p.segment_pairs[i];
    const double scale = 1.0 + err.eps;
    noise::TimeHamiltonian ham;
    if (options.model == CouplingModel::RotatingWave) {
      const ComplexMatrix fixed = scale * rotating_wave_hamiltonian(seg_pair, 0.0) + detuning;
      ham = [fixed](double) { return fixed; };
    } else {
      ham = [&seg_pair, &detuning, scale](double t) -> ComplexMatrix {
        return scale * interaction_hamiltonian(seg_pair, t) + detuning;
      };
    }
    noise::MasterOptions mo;
    mo.t0 = p.schedule.start_time(i);
    mo.observer = [&](double t, const ComplexMatrix& r) {
      if (t > mo.t0) record(t, r);
    };
    const auto part = noise::evolve_master(rho, ham, c, tau, p.dt, mo);
    rho = part.rho;
    out.steps += part.steps;
  }

  out.duration = p.schedule.total_duration;
  const ComplexVector target =
      embed(e, pulses::target_unitary(spec) * two_level_initial, spectator);
  const ComplexVector tn = target / target.norm();
  out.fidelity = std::clamp(tn.dot(rho * tn).real(), 0.0, 1.0);
  double kept = 0.0;
  for (auto k : e.kept) kept += rho(k, k).real();
  out.leakage = std::max(0.0, 1.0 - kept);

  const std::size_t want = static_cast<std::size_t>(std::max(2, options.samples));
  if (series.size() > want) {
    std::vector<TimeSample> thin;
    const double stride = static_cast<double>(series.size() - 1) / static_cast<double>(want - 1);
    for (std::size_t k = 0; k < want; ++k) {
      thin.push_back(series[static_cast<std::size_t>(std::llround(k * stride))]);
    }
    series = std::move(thin);
  }
  out.time_series = std::move(series);
  return out;
}

}  // namespace detail

/// Single-logical-qubit geometric gate on the encoded pair |0⟩_L = |10⟩, |1⟩_L = |01⟩.
///
/// `initial` is a 2-dim logical state; the fidelity is against the ideal
/// logical image embedded in the pair.
inline PhysicalResult run_physical_single_logical_gate(const pulses::GateSpec& spec,
                                                       const CoupledPair& pair,
                                                       const noise::ErrorModel& err,
                                                       const StateVector& initial,
                                                       const PhysicalOptions& options = {}) {
  pair.validate();
  if (initial.dim() != 2) throw DimensionError("transmon: expected a 2-dim logical state");
  const auto coupling = effective_single_logical_coupling(pair);
  return detail::run(spec, pair, coupling.g_eff, err, single_logical_embedding(),
                     initial.amplitudes(), ComplexVector::Zero(kPairDim), options);
}

/// Corrected-scheme cyclic path (γ = π, θ = 0, φ = 0) on {|11⟩, |02⟩} of the
/// B–D pair, started from (|10⟩ + |11⟩)/√2 with the CZ target (|10⟩ − |11⟩)/√2.
inline PhysicalResult run_physical_cz(const CoupledPair& pair, const noise::ErrorModel& err,
                                      const PhysicalOptions& options = {}) {
  pair.validate();
  const auto coupling = effective_cz_coupling(pair);
  const double r = std::numbers::sqrt2 / 2.0;
  ComplexVector spectator = ComplexVector::Zero(kPairDim);
  spectator(ket_index(1, 0)) = r;
  ComplexVector two_level(2);
  two_level << r, 0.0;
  const pulses::GateSpec spec(std::numbers::pi, 0.0, 0.0, pulses::Scheme::Corrected);
  return detail::run(spec, pair, coupling.g_eff, err, cz_embedding(), two_level, spectator,
                     options);
}

/// Closed-system 9×9 propagator of the CZ schedule.
///
/// The rotating-wave model is exponentiated segment by segment; the exact model
/// uses fourth-order Magnus steps of length 2π/(steps_per_period·ω_d).
inline ComplexMatrix cz_pair_unitary(const CoupledPair& pair, const PhysicalOptions& options = {}) {
  pair.validate();
  const auto coupling = effective_cz_coupling(pair);
  const pulses::GateSpec spec(std::numbers::pi, 0.0, 0.0, pulses::Scheme::Corrected);
  const auto p = detail::plan(spec, pair, coupling.g_eff, options);
  ComplexMatrix u = qcore::identity(kPairDim);
  for (std::size_t i = 0; i < p.schedule.segments.size(); ++i) {
    const double tau = p.schedule.segments[i].duration();
    if (tau <= 0.0) continue;
    const CoupledPair& sp = p.segment_pairs[i];
    if (options.model == CouplingModel::RotatingWave) {
      u = qcore::expm_hermitian(rotating_wave_hamiltonian(sp, 0.0), tau) * u;
    } else {
      const long n = std::max(1L, static_cast<long>(std::ceil(tau / p.dt - 1e-9)));
      const double h = tau / static_cast<double>(n);
      const double t0 = p.schedule.start_time(i);
      auto ham = [&sp](double t) { return interaction_hamiltonian(sp, t); };
      for (long k = 0; k < n; ++k) u = qcore::magnus4_step(ham, t0 + k * h, h) * u;
    }
  }
  return u;
}

/// Four-qubit DFS code for two logical qubits (A,B) and (C,D), kets |abcd⟩ with
/// index 27a + 9b + 3c + d. |00⟩_L = |1010⟩, |01⟩_L = |1001⟩, |10⟩_L = |0110⟩,
/// |11⟩_L = |0101⟩; auxiliary |A⟩_L = |0002⟩.
struct DfsTwoQubitBasis {
  static constexpr Eigen::Index kDim = 81;

  static constexpr Eigen::Index index(int a, int b, int c, int d) {
    return 27 * a + 9 * b + 3 * c + d;
  }

  static constexpr std::array<std::array<int, 4>, 4> kLogical{
      {{1, 0, 1, 0}, {1, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, 0, 1}}};

  static StateVector logical(int k) {
    if (k < 0 || k > 3) throw InvalidArgument("DfsTwoQubitBasis: logical index must be 0..3");
    const auto& q = kLogical[static_cast<std::size_t>(k)];
    return StateVector::basis(kDim, index(q[0], q[1], q[2], q[3]));
  }

  static StateVector auxiliary() { return StateVector::basis(kDim, index(0, 0, 0, 2)); }

  /// B–D pair ket carrying logical state k (spectators A, C frozen).
  static Eigen::Index bd_index(int k) {
    const auto& q = kLogical[static_cast<std::size_t>(k)];
    return ket_index(q[1], q[3]);
  }
};

/// Logical 4×4 block of the CZ propagator on the S₂ states; diag(1, 1, 1, −1) ideally.
inline ComplexMatrix logical_cz_operator(const CoupledPair& pair,
                                         const PhysicalOptions& options = {}) {
  const ComplexMatrix u = cz_pair_unitary(pair, options);
  ComplexMatrix out(4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      out(r, c) = u(DfsTwoQubitBasis::bd_index(r), DfsTwoQubitBasis::bd_index(c));
    }
  }
  return out;
}

inline ComplexMatrix ideal_cz() {
  ComplexMatrix cz = qcore::identity(4);
  cz(3, 3) = -1.0;
  return cz;
}

/// Reference device, frequencies relative to qubit b: A–B pair for single-logical-qubit gates.
inline CoupledPair reference_single_pair() {
  CoupledPair p;
  p.qubit_b = {0.0, mhz(245.0)};
  p.qubit_a = {mhz(700.0), mhz(220.0)};
  p.g_fixed = mhz(20.0);
  p.drive = ParametricDrive::from_beta(1.8, mhz(700.0));
  return p;
}

/// Reference device, frequencies relative to qubit b: B–D pair for the CZ gate, Δ′ − α_D = ω_d.
inline CoupledPair reference_cz_pair() {
  CoupledPair p;
  p.qubit_b = {0.0, mhz(245.0)};
  p.qubit_a = {mhz(945.0), mhz(245.0)};
  p.g_fixed = mhz(20.0);
  p.drive = ParametricDrive::from_beta(2.1, mhz(700.0));
  return p;
}

inline constexpr double kReferenceGamma = khz(4.0);

}  // namespace geogate::transmon
