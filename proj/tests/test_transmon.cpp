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

#include <gtest/gtest.h>

#include <random>

#include "geogate/transmon.hpp"
#include "oracles.hpp"

namespace {

using namespace geogate;
using namespace geogate::transmon;
using oracle::pi;
using pulses::GateSpec;

const GateSpec kH(pi / 2, pi / 4, 0.0);
const GateSpec kS(pi / 4, 0.0, 0.0);
const GateSpec kT(pi / 8, 0.0, 0.0);
const qcore::StateVector kZero{1.0, 0.0};
const qcore::StateVector kPlus{1.0, 1.0};

noise::ErrorModel decoherence() { return {0.0, 0.0, kReferenceGamma, true}; }

TEST(InteractionHamiltonian, MatrixElements) {
  auto pair = reference_single_pair().with_phase(pi / 2);
  const double g = pair.g_fixed;
  const ComplexMatrix h0 = interaction_hamiltonian(pair, 0.0);
  EXPECT_LT(std::abs(h0(ket_index(0, 1), ket_index(1, 0)) - g), 1e-12 * g);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ut(0.0, 1e-7);
  for (int k = 0; k < 10; ++k) {
    const double t = ut(rng);
    const ComplexMatrix h = interaction_hamiltonian(pair, t);
    EXPECT_NEAR(std::abs(h(ket_index(1, 1), ket_index(2, 0))), std::sqrt(2.0) * g, 1e-9 * g);
    EXPECT_NEAR(std::abs(h(ket_index(0, 2), ket_index(1, 1))), std::sqrt(2.0) * g, 1e-9 * g);
    EXPECT_NEAR(std::abs(h(ket_index(1, 2), ket_index(2, 1))), 2.0 * g, 1e-9 * g);
    EXPECT_TRUE(qcore::is_hermitian(h, 1e-12 * g));
    EXPECT_EQ(h(ket_index(0, 0), ket_index(0, 0)), Complex(0.0));
  }
}

TEST(RotatingWave, ResonantElementIsPeriodAverage) {
  for (double phi_d : {0.0, 0.4, 2.5}) {
    const auto pair = reference_single_pair().with_phase(phi_d);
    const double period = 2 * pi / pair.drive.omega_d;
    const int n = 4096;
    Complex avg = 0.0;
    for (int k = 0; k < n; ++k) {
      avg += interaction_hamiltonian(pair, period * k / n)(ket_index(0, 1), ket_index(1, 0));
    }
    avg /= static_cast<double>(n);
    const ComplexMatrix rwa = rotating_wave_hamiltonian(pair, 0.0);
    const Complex elem = rwa(ket_index(0, 1), ket_index(1, 0));
    EXPECT_LT(std::abs(elem - avg), 1e-10 * pair.g_fixed);
    const double j1 = oracle::bessel_quadrature(1, pair.drive.beta());
    EXPECT_LT(std::abs(elem - pair.g_fixed * j1 * std::polar(1.0, pi / 2 - phi_d)), 1e-10 * pair.g_fixed);
    EXPECT_LT(std::abs(rwa(ket_index(1, 1), ket_index(2, 0))), 1e-15);
  }
}

TEST(RotatingWave, CzPairKeepsOnlyTheAuxiliaryTransition) {
  const auto pair = reference_cz_pair();
  const ComplexMatrix h = rotating_wave_hamiltonian(pair, 0.0);
  const double big = std::abs(h(ket_index(0, 2), ket_index(1, 1)));
  EXPECT_NEAR(big, effective_cz_coupling(pair).g_eff, 1e-9 * big);
  ComplexMatrix rest = h;
  rest(ket_index(0, 2), ket_index(1, 1)) = 0.0;
  rest(ket_index(1, 1), ket_index(0, 2)) = 0.0;
  EXPECT_LT(qcore::max_abs(rest), 1e-15);
}

TEST(CheckResonance, Examples) {
  EXPECT_EQ(check_resonance(reference_single_pair(), Subspace::SingleExc), 1);
  EXPECT_EQ(check_resonance(reference_cz_pair(), Subspace::TwoExcB), 1);
  auto off = reference_single_pair();
  off.drive = ParametricDrive::from_beta(1.8, mhz(650.0));
  try {
    check_resonance(off, Subspace::SingleExc);
    FAIL() << "expected ResonanceError";
  } catch (const ResonanceError& e) {
    EXPECT_NE(std::string(e.what()).find("not on resonance"), std::string::npos);
  }
  auto second = reference_single_pair();
  second.drive = ParametricDrive::from_beta(1.8, mhz(350.0));
  EXPECT_EQ(check_resonance(second, Subspace::SingleExc), 2);
  EXPECT_THROW(effective_single_logical_coupling(second), ResonanceError);
  EXPECT_THROW(check_resonance(reference_single_pair(), Subspace::TwoExcA), ResonanceError);
}

TEST(Bessel, MatchesIndependentOracles) {
  for (int n : {0, 1, 2, 5}) {
    for (double x : {0.0, 0.3, 1.8, 1.841, 2.1, 7.5, 15.0, 20.0, -3.2}) {
      EXPECT_NEAR(bessel_j(n, x), oracle::bessel_quadrature(n, x), 1e-12) << n << " " << x;
      EXPECT_NEAR(bessel_j(n, x), oracle::bessel_recurrence(n, x), 1e-12) << n << " " << x;
    }
  }
}

TEST(Bessel, ReferenceValues) {
  EXPECT_EQ(bessel_j(1, 0.0), 0.0);
  EXPECT_NEAR(bessel_j(1, 1.8), 0.581517, 1e-6);
  EXPECT_NEAR(bessel_j(1, 2.1), 0.568292, 1e-6);
  EXPECT_THROW(bessel_j(1, 20.5), InvalidArgument);
  EXPECT_THROW(bessel_j(-1, 1.0), InvalidArgument);
  EXPECT_NEAR(bessel_j_signed(-1, 1.3), -bessel_j(1, 1.3), 1e-16);
  EXPECT_NEAR(bessel_j_signed(-2, 1.3), bessel_j(2, 1.3), 1e-16);
}

TEST(Bessel, DriveStrengthSitsNearTheFirstMaximum) {
  double best = 0.0, arg = 0.0;
  for (int k = 0; k <= 4000; ++k) {
    const double x = 1.5 + 0.0001 * k;
    if (bessel_j(1, x) > best) best = bessel_j(1, x), arg = x;
  }
  EXPECT_NEAR(arg, 1.8412, 1e-3);
  EXPECT_NEAR(best, 0.5819, 1e-4);
  EXPECT_LT((best - bessel_j(1, 1.8)) / best, 1e-3);
}

TEST(EffectiveCoupling, Values) {
  const auto single = effective_single_logical_coupling(reference_single_pair());
  EXPECT_NEAR(single.g_eff / mhz(1.0), 20.0 * oracle::bessel_quadrature(1, 1.8), 1e-10);
  EXPECT_NEAR(single.g_eff / mhz(1.0), 11.63, 0.01);
  EXPECT_NEAR(single.phi0, pi / 2, 1e-15);
  const auto cz = effective_cz_coupling(reference_cz_pair());
  EXPECT_NEAR(cz.g_eff / mhz(1.0), std::sqrt(2.0) * 20.0 * oracle::bessel_quadrature(1, 2.1), 1e-10);
  EXPECT_NEAR(cz.g_eff / mhz(1.0), 16.07, 0.01);
  auto off = reference_single_pair();
  off.drive.eps_d = 0.0;
  EXPECT_EQ(effective_single_logical_coupling(off).g_eff, 0.0);
  EXPECT_THROW(run_physical_single_logical_gate(kH, off, {}, kZero), InvalidArgument);
}

TEST(Collapse, Operators) {
  const auto coll = pair_collapse(1.0, CollapseMode::Collective);
  const auto ind = pair_collapse(1.0, CollapseMode::Independent);
  EXPECT_EQ(coll.operators.size(), 2u);
  EXPECT_EQ(ind.operators.size(), 4u);
  EXPECT_EQ(coll.operators[0](ket_index(1, 0), ket_index(2, 0)), Complex(std::sqrt(2.0)));
  EXPECT_EQ(coll.operators[1](ket_index(2, 1), ket_index(2, 1)), Complex(3.0));
}

TEST(PhysicalGate, RotatingWaveWithoutNoiseIsExact) {
  for (const auto& [spec, init] : {std::pair{kH, kZero}, std::pair{kS, kPlus}, std::pair{kT, kPlus}}) {
    const auto r = run_physical_single_logical_gate(spec, reference_single_pair(), {}, init);
    EXPECT_NEAR(r.fidelity, 1.0, 1e-9);
    EXPECT_LT(r.leakage, 1e-12);
  }
}

TEST(PhysicalGate, ReferenceDeviceWithDecoherence) {
  const auto pair = reference_single_pair();
  EXPECT_NEAR(run_physical_single_logical_gate(kH, pair, decoherence(), kZero).fidelity, 0.9970, 3e-3);
  EXPECT_NEAR(run_physical_single_logical_gate(kS, pair, decoherence(), kPlus).fidelity, 0.9977, 3e-3);
  EXPECT_NEAR(run_physical_single_logical_gate(kT, pair, decoherence(), kPlus).fidelity, 0.9973, 3e-3);
}

TEST(PhysicalGate, TimeSeries) {
  PhysicalOptions opts;
  opts.samples = 50;
  const auto r = run_physical_single_logical_gate(kH, reference_single_pair(), decoherence(), kZero, opts);
  ASSERT_EQ(r.time_series.size(), 50u);
  EXPECT_NEAR(r.time_series.front().fidelity, 1.0, 1e-12);
  EXPECT_NEAR(r.time_series.back().t, r.duration, 1e-15);
  EXPECT_NEAR(r.time_series.back().fidelity, r.fidelity, 1e-12);
  for (std::size_t k = 1; k < r.time_series.size(); ++k) {
    EXPECT_GT(r.time_series[k].t, r.time_series[k - 1].t);
  }
  EXPECT_NEAR(r.duration * 1e9, 86.0, 0.5);
}

TEST(PhysicalGate, ExactModelConvergesAsCouplingShrinks) {
  PhysicalOptions opts;
  opts.model = CouplingModel::Exact;
  std::vector<double> fid;
  for (double g : {20.0, 10.0, 5.0}) {
    auto pair = reference_single_pair();
    pair.g_fixed = mhz(g);
    fid.push_back(run_physical_single_logical_gate(kH, pair, {}, kZero, opts).fidelity);
  }
  EXPECT_GE(fid[1], fid[0] - 1e-4);
  EXPECT_GE(fid[2], fid[1] - 1e-4);
  EXPECT_LT(1.0 - fid[0], 1e-2);
  auto weak = reference_single_pair();
  weak.g_fixed = mhz(2.0);
  EXPECT_GE(run_physical_single_logical_gate(kH, weak, {}, kZero, opts).fidelity, 0.9999);
  EXPECT_GE(run_physical_single_logical_gate(kS, weak, {}, kPlus, opts).fidelity, 0.9999);
}

TEST(PhysicalGate, ExactModelStepHalving) {
  PhysicalOptions a, b;
  a.model = b.model = CouplingModel::Exact;
  b.steps_per_period = 80;
  const auto pair = reference_single_pair();
  const double fa = run_physical_single_logical_gate(kS, pair, decoherence(), kPlus, a).fidelity;
  const double fb = run_physical_single_logical_gate(kS, pair, decoherence(), kPlus, b).fidelity;
  EXPECT_LT(std::abs(fa - fb), 1e-5);
}

TEST(PhysicalGate, LeakageStaysSmall) {
  const auto pair = reference_single_pair();
  PhysicalOptions exact;
  exact.model = CouplingModel::Exact;
  EXPECT_LT(run_physical_single_logical_gate(kH, pair, decoherence(), kZero).leakage, 5e-3);
  EXPECT_LT(run_physical_single_logical_gate(kH, pair, decoherence(), kZero, exact).leakage, 5e-3);
  EXPECT_LT(run_physical_cz(reference_cz_pair(), decoherence()).leakage, 5e-3);
}

TEST(PhysicalCz, ReferenceDevice) {
  const auto r = run_physical_cz(reference_cz_pair(), decoherence());
  EXPECT_NEAR(r.fidelity, 0.9956, 4e-3);
  PhysicalOptions ind;
  ind.collapse = CollapseMode::Independent;
  EXPECT_NEAR(run_physical_cz(reference_cz_pair(), decoherence(), ind).fidelity, 0.9956, 4e-3);
}

TEST(PhysicalCz, LogicalOperatorIsControlledZ) {
  const ComplexMatrix cz = logical_cz_operator(reference_cz_pair());
  EXPECT_NEAR(qcore::gate_fidelity(ideal_cz(), cz), 1.0, 1e-9);
  const Complex phase = cz(0, 0);
  EXPECT_LT(qcore::max_abs(cz - phase * ideal_cz()), 1e-9);
}

TEST(PhysicalCz, ScheduleHasSixActiveSegments) {
  const GateSpec spec(pi, 0.0, 0.0);
  const auto s = pulses::build_schedule(spec, {pulses::ShapeKind::Square, 1.0});
  EXPECT_EQ(s.segments.size(), 7u);
  EXPECT_EQ(s.active_segments(), 6u);
  EXPECT_EQ(s.segments[0].duration(), 0.0);
}

TEST(PhysicalCz, DetunedDriveIsRejected) {
  auto pair = reference_cz_pair();
  pair.drive = ParametricDrive::from_beta(2.1, mhz(707.0));
  EXPECT_THROW(run_physical_cz(pair, decoherence()), ResonanceError);
}

TEST(DfsTwoQubitBasis, Orthonormal) {
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const Complex ip = DfsTwoQubitBasis::logical(a).amplitudes().dot(DfsTwoQubitBasis::logical(b).amplitudes());
      EXPECT_EQ(ip, Complex(a == b ? 1.0 : 0.0));
    }
    EXPECT_EQ(DfsTwoQubitBasis::logical(a).amplitudes().dot(DfsTwoQubitBasis::auxiliary().amplitudes()),
              Complex(0.0));
  }
  EXPECT_EQ(DfsTwoQubitBasis::bd_index(3), ket_index(1, 1));
  EXPECT_EQ(DfsTwoQubitBasis::bd_index(0), ket_index(0, 0));
  EXPECT_THROW(DfsTwoQubitBasis::logical(4), InvalidArgument);
}

}  // namespace
