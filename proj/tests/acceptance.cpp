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

// Acceptance runner. Usage: acceptance <criterion> | all
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "geogate/dfs.hpp"
#include "geogate/harness.hpp"
#include "geogate/noise.hpp"
#include "geogate/pulses.hpp"
#include "geogate/transmon.hpp"
#include "oracles.hpp"

namespace {

using namespace geogate;
using harness::GateName;
using qcore::DensityMatrix;
using qcore::StateVector;
using pulses::Scheme;
using pulses::ShapeKind;

struct Verdict {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [miss]");
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void series_for(Verdict& v, Scheme scheme, GateName g, double tol, bool check_c2) {
  const auto ref = harness::reference_series(g, scheme);
  const auto spec = harness::named_gate(g, scheme);
  const std::string name = harness::to_string(g);
  try {
    const auto fit = pulses::infidelity_series_coefficient(spec, {}, ref.order);
    const double rel = std::abs(fit.coefficient - ref.coefficient) / ref.coefficient;
    v.check(rel <= tol && std::abs(fit.exponent - ref.order) <= 0.05,
            fmt("%s order %d coef %.6g vs %.6g (rel %.2e) exp %.4f", name.c_str(), ref.order,
                fit.coefficient, ref.coefficient, rel, fit.exponent));
    if (check_c2) {
      const double bound = 1e-4 * std::pow(std::numbers::pi, 2) / 4.0;
      v.check(std::abs(fit.c2) < bound, fmt("%s |c2| %.2e", name.c_str(), std::abs(fit.c2)));
    }
  } catch (const FitError& e) {
    v.check(false, name + " fit: " + e.what());
  }
}

Verdict series_single_loop() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  for (auto g : {GateName::H, GateName::S, GateName::T}) series_for(v, Scheme::SingleLoop, g, 0.01, false);
  const double s = seconds_since(t0);
  v.check(s < 10.0, fmt("%.2f s", s));
  return v;
}

Verdict series_corrected() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  series_for(v, Scheme::Corrected, GateName::H, 0.01, false);
  series_for(v, Scheme::Corrected, GateName::S, 0.02, true);
  series_for(v, Scheme::Corrected, GateName::T, 0.02, true);
  const double s = seconds_since(t0);
  v.check(s < 10.0, fmt("%.2f s", s));
  return v;
}

Verdict exact_gate_identity() {
  Verdict v;
  std::mt19937 rng(20260415);
  std::uniform_real_distribution<double> gamma(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> theta(0.0, std::numbers::pi / 2);
  std::uniform_real_distribution<double> phi(0.0, 2 * std::numbers::pi);
  for (auto kind : {ShapeKind::Square, ShapeKind::RaisedCosine}) {
    for (auto scheme : {Scheme::SingleLoop, Scheme::Corrected}) {
      double worst = 1.0;
      for (int i = 0; i < 100; ++i) {
        const pulses::GateSpec spec(gamma(rng), theta(rng), phi(rng), scheme);
        const auto schedule = pulses::build_schedule(spec, {kind, 1.0});
        worst = std::min(worst, qcore::gate_fidelity(pulses::target_unitary(spec),
                                                     pulses::propagate(schedule, 0.0, 0.0)));
      }
      v.check(1.0 - worst <= 1e-9, fmt("%s/%s 1-F %.1e", pulses::to_string(kind),
                                       pulses::to_string(scheme), 1.0 - worst));
    }
  }
  return v;
}

Verdict decoherence_benchmark() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const std::map<GateName, double> quoted{{GateName::H, 0.9973}, {GateName::S, 0.9978},
                                          {GateName::T, 0.9979}};
  for (const auto& [g, expected] : quoted) {
    const auto spec = harness::named_gate(g, Scheme::Corrected);
    const StateVector psi = g == GateName::H ? StateVector::basis(2, 0)
                                             : StateVector{std::sqrt(0.5), std::sqrt(0.5)};
    const double fs = noise::final_state_fidelity(spec, {}, {0.0, 0.0, 2e-4}, psi);
    v.check(std::abs(fs - expected) <= 0.0010,
            fmt("%s %.4f%% vs %.2f%%", harness::to_string(g), 100 * fs, 100 * expected));
  }
  const double s = seconds_since(t0);
  v.check(s < 30.0, fmt("%.2f s", s));
  return v;
}

Verdict master_equation_oracles() {
  Verdict v;
  const double rate = 0.3, total = 2.0;
  auto zero = [](double) { return ComplexMatrix::Zero(2, 2).eval(); };

  noise::CollapseSet relax;
  ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
  lower(0, 1) = 1.0;
  relax.add(lower, rate);
  double worst_relax = 0.0;
  noise::MasterOptions ro;
  ro.observer = [&](double t, const ComplexMatrix& rho) {
    worst_relax = std::max(worst_relax, std::abs(rho(1, 1).real() - std::exp(-rate * t)));
  };
  noise::evolve_master(DensityMatrix::pure(StateVector::basis(2, 1)), zero, relax, total, 1e-3, ro);
  v.check(worst_relax <= 1e-8, fmt("relaxation max err %.1e", worst_relax));

  noise::CollapseSet dephase;
  dephase.add(-qcore::pauli_z(), rate);
  double worst_dephase = 0.0;
  noise::MasterOptions dopt;
  dopt.observer = [&](double t, const ComplexMatrix& rho) {
    worst_dephase = std::max(worst_dephase, std::abs(rho(0, 1) - 0.5 * std::exp(-2 * rate * t)));
  };
  noise::evolve_master(DensityMatrix::pure(StateVector{std::sqrt(0.5), std::sqrt(0.5)}), zero,
                       dephase, total, 1e-3, dopt);
  v.check(worst_dephase <= 1e-8, fmt("dephasing max err %.1e", worst_dephase));
  return v;
}

Verdict dfs_delta_immunity() {
  Verdict v;
  for (auto g : {GateName::H, GateName::S}) {
    const auto spec = harness::named_gate(g, Scheme::Corrected);
    for (double eps : {0.0, 0.05}) {
      const double base = dfs::run_logical_gate(spec, {eps, 0.0}).fidelity;
      double spread = 0.0;
      for (int i = 0; i <= 40; ++i) {
        const double delta = -0.2 + 0.01 * i;
        spread = std::max(spread, std::abs(dfs::run_logical_gate(spec, {eps, delta}).fidelity - base));
      }
      v.check(spread <= 1e-9, fmt("%s eps=%.2f spread %.1e", harness::to_string(g), eps, spread));
    }
  }
  return v;
}

std::vector<double> grid41() {
  std::vector<double> out;
  for (int i = 0; i < 41; ++i) out.push_back(-0.1 + 0.2 * i / 40.0);
  return out;
}

double bare_fidelity(const pulses::GateSpec& spec, double eps, double delta) {
  const auto schedule = pulses::build_schedule(spec, {});
  return qcore::gate_fidelity(pulses::target_unitary(spec), pulses::propagate(schedule, eps, delta));
}

Verdict robustness_dominance() {
  Verdict v;
  const auto grid = grid41();
  for (auto g : {GateName::H, GateName::S}) {
    const auto corrected = harness::named_gate(g, Scheme::Corrected);
    const auto single = harness::named_gate(g, Scheme::SingleLoop);
    int vs_bare = 0, vs_dfs = 0;
    double worst_gap = 0.0;
    for (double eps : grid) {
      for (double delta : grid) {
        const double fc = dfs::run_logical_gate(corrected, {eps, delta}).fidelity;
        const double fb = bare_fidelity(single, eps, delta);
        const double fd = dfs::run_logical_gate(single, {eps, delta}).fidelity;
        if (fc < fb - 1e-12) {
          ++vs_bare;
          worst_gap = std::max(worst_gap, fb - fc);
        }
        if (fc < fd - 1e-12) ++vs_dfs;
      }
    }
    const std::string name = harness::to_string(g);
    v.check(vs_bare == 0, fmt("%s corrected+dfs < single-loop bare at %d/1681 points (max gap %.2e)",
                              name.c_str(), vs_bare, worst_gap));
    std::printf("INFO %s corrected+dfs < single-loop+dfs at %d/1681 points\n", name.c_str(), vs_dfs);
    int vs_eps = 0;
    for (double eps : grid) {
      if (bare_fidelity(corrected, eps, 0.0) < bare_fidelity(single, eps, 0.0) - 1e-12) ++vs_eps;
    }
    v.check(vs_eps == 0, fmt("%s corrected < single-loop at %d/41 eps values (delta=0)", name.c_str(), vs_eps));
  }
  return v;
}

Verdict transmon_physical() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const noise::ErrorModel err{0.0, 0.0, transmon::kReferenceGamma, true};
  const auto single = transmon::reference_single_pair();
  const std::map<GateName, double> quoted{{GateName::H, 0.9970}, {GateName::S, 0.9977},
                                          {GateName::T, 0.9973}};
  auto initial = [](GateName g) {
    return g == GateName::H ? StateVector::basis(2, 0) : StateVector{std::sqrt(0.5), std::sqrt(0.5)};
  };
  for (const auto& [g, expected] : quoted) {
    const auto spec = harness::named_gate(g, Scheme::Corrected);
    const double f = transmon::run_physical_single_logical_gate(spec, single, err, initial(g)).fidelity;
    v.check(std::abs(f - expected) <= 0.003,
            fmt("%s %.3f%% vs %.2f%%", harness::to_string(g), 100 * f, 100 * expected));
  }
  const double fcz = transmon::run_physical_cz(transmon::reference_cz_pair(), err).fidelity;
  v.check(std::abs(fcz - 0.9956) <= 0.004, fmt("CZ %.3f%% vs 99.56%%", 100 * fcz));
  const double s = seconds_since(t0);
  v.check(s < 300.0, fmt("%.1f s", s));

  transmon::PhysicalOptions exact;
  exact.model = transmon::CouplingModel::Exact;
  exact.samples = 2;
  for (const auto& [g, expected] : quoted) {
    const auto spec = harness::named_gate(g, Scheme::Corrected);
    const double f = transmon::run_physical_single_logical_gate(spec, single, err, initial(g), exact).fidelity;
    std::printf("INFO exact coupling %s %.3f%%\n", harness::to_string(g), 100 * f);
  }
  std::printf("INFO exact coupling CZ %.3f%%\n",
              100 * transmon::run_physical_cz(transmon::reference_cz_pair(), err, exact).fidelity);
  return v;
}

Verdict bessel_oracle() {
  Verdict v;
  double worst = 0.0;
  for (double x : {0.0, 1.8, 1.841, 2.1}) {
    const double j = transmon::bessel_j(1, x);
    worst = std::max({worst, std::abs(j - oracle::bessel_recurrence(1, x)),
                      std::abs(j - oracle::bessel_quadrature(1, x))});
  }
  v.check(worst <= 1e-10, fmt("J1 max err %.1e", worst));
  const auto single = transmon::reference_single_pair();
  const auto cz = transmon::reference_cz_pair();
  const double r1 = std::abs(transmon::effective_single_logical_coupling(single).g_eff /
                                 (oracle::bessel_recurrence(1, 1.8) * single.g_fixed) - 1.0);
  const double r2 = std::abs(transmon::effective_cz_coupling(cz).g_eff /
                                 (std::sqrt(2.0) * oracle::bessel_recurrence(1, 2.1) * cz.g_fixed) - 1.0);
  v.check(std::max(r1, r2) <= 1e-10, fmt("g_eff rel err %.1e / %.1e", r1, r2));
  return v;
}

Verdict trajectory_closure() {
  Verdict v;
  auto defect = [](Scheme scheme, double eps) {
    const auto spec = harness::named_gate(GateName::H, scheme);
    const auto schedule = pulses::build_schedule(spec, {});
    return pulses::closure_defect(pulses::bloch_trajectory(schedule, pulses::axis_state(spec), 401, eps));
  };
  const double closed = defect(Scheme::Corrected, 0.0);
  const double corrected = defect(Scheme::Corrected, 0.1);
  const double single = defect(Scheme::SingleLoop, 0.1);
  v.check(closed < 1e-8, fmt("corrected eps=0 defect %.1e", closed));
  v.check(corrected < single, fmt("eps=0.1 corrected %.3e vs single-loop %.3e", corrected, single));
  return v;
}

const std::map<std::string, std::function<Verdict()>>& criteria() {
  static const std::map<std::string, std::function<Verdict()>> table{
      {"series_single_loop", series_single_loop},
      {"series_corrected", series_corrected},
      {"exact_gate_identity", exact_gate_identity},
      {"decoherence_benchmark", decoherence_benchmark},
      {"master_equation_oracles", master_equation_oracles},
      {"dfs_delta_immunity", dfs_delta_immunity},
      {"robustness_dominance", robustness_dominance},
      {"transmon_physical", transmon_physical},
      {"bessel_oracle", bessel_oracle},
      {"trajectory_closure", trajectory_closure},
  };
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion>|all\n");
    return 2;
  }
  const std::string which = argv[1];
  std::vector<std::string> names;
  if (which == "all") {
    for (const auto& [name, fn] : criteria()) names.push_back(name);
  } else if (criteria().count(which)) {
    names.push_back(which);
  } else {
    std::fprintf(stderr, "unknown criterion '%s'\n", which.c_str());
    return 2;
  }
  int failed = 0;
  for (const auto& name : names) {
    Verdict v;
    try {
      v = criteria().at(name)();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
