// Copyright 2026 The dfsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Each criterion also has a wall-clock budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "dfsim/dfsim.hpp"

namespace {

using namespace dfsim;

struct Outcome {
  bool passed = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    passed = passed && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [violated]");
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = a + (b - a) * double(i) / double(n - 1);
  return t;
}

BathSpec standard_bath(std::size_t num_qubits) {
  return {{{1.0, 6}}, std::vector<std::vector<double>>(num_qubits, std::vector<double>{0.3})};
}

const SystemLayout kTwoPairs(4, {6}, {{0, 1}, {2, 3}});
const std::vector<AxisVector> kZAxes{AxisVector::z(), AxisVector::z()};

Ket bell_logical() { return (basis_ket(4, 0) + basis_ket(4, 3)) / std::sqrt(2.0); }

EvolutionTrace run_pairs(double eps, const std::vector<double>& times) {
  const auto model = build_dephasing_model(kTwoPairs, kZAxes, standard_bath(4), eps);
  const auto code = code_space(make_pair_operators(kZAxes, 0.0), kTwoPairs);
  const Ket logical = bell_logical();
  return metrics(times, evolve(model, joint_state(kTwoPairs, encode(logical, code)), times), kTwoPairs, code, logical);
}

Outcome dfs_immunity() {
  Outcome o;
  const auto trace = run_pairs(0.0, linspace(0, 10, 101));
  const double fmin = *std::min_element(trace.fidelities.begin(), trace.fidelities.end());
  const double lmax = *std::max_element(trace.leakages.begin(), trace.leakages.end());
  o.check(fmin >= 1.0 - 1e-9, "min fidelity " + num(fmin));
  o.check(lmax <= 1e-9, "max leakage " + num(lmax));
  return o;
}

Outcome mismatch_fragility() {
  Outcome o;
  const auto decay = [](double eps) { return 1.0 - run_pairs(eps, {1.0}).fidelities.front(); };
  const double ratio = decay(0.02) / decay(0.01);
  o.check(ratio >= 3.6 && ratio <= 4.4, "R(0.02)/R(0.01) " + num(ratio));
  bool raised = false;
  std::size_t kernel = 99;
  try {
    code_space(make_pair_operators(kZAxes, 0.05), kTwoPairs);
  } catch (const CodeConstructionError& e) {
    raised = true;
    kernel = e.kernel_dim();
  }
  o.check(raised && kernel == 0, "eps=0.05 code construction kernel dim " + std::to_string(kernel));
  return o;
}

Outcome constraint_certificate() {
  Outcome o;
  double worst = 0.0;
  std::size_t accepted = 0;
  std::size_t claims = 0;
  const std::vector<Complex> ns{2e-10, -2e-10, Complex(0, 1e-9), 1e-6, 1.0, Complex(0.5, -0.5), -3.0};
  for (Index d : {2, 4, 8, 16}) {
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
      auto rng = make_rng(1000 + static_cast<std::uint64_t>(d), trial);
      const CMat x = random_hermitian(d, rng);
      const CMat h = random_hermitian(d, rng);
      worst = std::max(worst, std::abs(solve_shift_constraint(x).residual - std::sqrt(double(d))));
      for (const Complex n : ns) {
        ++claims;
        if (trace_certificate(x, h, n).verdict == Verdict::kAccept) ++accepted;
        if (trace_certificate(x, CMat::Zero(d, d), n).verdict == Verdict::kAccept) ++accepted;
      }
    }
  }
  o.check(worst <= 1e-8, "max |residual - sqrt(d)| " + num(worst));
  o.check(accepted == 0, std::to_string(accepted) + " of " + std::to_string(2 * claims) + " nonzero-n claims accepted");
  return o;
}

Outcome commutant_gates() {
  Outcome o;
  const SystemLayout layout(2, {}, {{0, 1}});
  const auto ops = make_pair_operators({AxisVector::z()}, 0.0);
  const auto code = code_space(ops, layout);
  const auto basis = commutant_basis(embedded_pair_operators(ops, layout));
  o.check(basis.dimension == 6, "commutant dim " + std::to_string(basis.dimension));
  auto rng = make_rng(17);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    CMat h = CMat::Zero(4, 4);
    for (const auto& g : basis.generators) h += normal(rng) * g;
    for (double t : {0.1, 1.0, 10.0}) worst = std::max(worst, gate_preserves_code(h, code, t));
  }
  o.check(worst <= 1e-10, "max commutant gate defect " + num(worst));
  const double breaker = gate_preserves_code(kron(pauli_x(), identity(2)), code, 1.0);
  o.check(breaker > 0.1, "sigma_x (x) I defect " + num(breaker));
  return o;
}

Outcome general_noise() {
  Outcome o;
  const SystemLayout layout(2, {6}, {{0, 1}});
  const BathSpec bath = standard_bath(2);
  auto rng = make_rng(42);
  std::normal_distribution<double> normal;
  GeneralCouplingSpec generic(2, 1);
  for (std::size_t l = 0; l < 2; ++l) {
    for (Generator a : {Generator::kX, Generator::kY, Generator::kZ}) {
      const double re = normal(rng);
      generic.at(l, a, 0) = 0.3 * Complex(re, normal(rng));
    }
  }
  const auto dim = conserved_observable_space(build_general_model(layout, generic, bath)).dimension;
  o.check(dim == 1, "generic conserved dim " + std::to_string(dim));

  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const AxisVector axis(random_unit_vector(rng), 0.5 + trial);
    GeneralCouplingSpec restricted(2, 1);
    for (std::size_t l = 0; l < 2; ++l) {
      for (int a = 0; a < 3; ++a) restricted.at(l, Generator(a), 0) = axis.strength() * axis.direction()(a) * 0.3;
    }
    const CMat general = build_general_model(layout, restricted, bath).total();
    const CMat dephasing = build_dephasing_model(layout, {axis}, bath, 0.0).total();
    worst = std::max(worst, max_abs(general - dephasing));
  }
  o.check(worst <= 1e-12, "restricted vs dephasing max entry diff " + num(worst));
  return o;
}

std::vector<double> coherence_ratio(double g, double omega, std::size_t n_max, const std::vector<double>& times) {
  const SystemLayout layout(1, {n_max});
  GeneralCouplingSpec spec(1, 1);
  spec.at(0, Generator::kZ, 0) = g;
  const auto model = build_general_model(layout, spec, {{{omega, n_max}}, {{g}}});
  const Ket plus = Ket::Constant(2, 1.0 / std::sqrt(2.0));
  std::vector<double> out;
  for (const auto& psi : evolve(model, joint_state(layout, plus), times)) {
    out.push_back(std::abs(reduced_qubit_state(psi, layout)(0, 1)) / 0.5);
  }
  return out;
}

Outcome dephasing_oracle() {
  Outcome o;
  const double g = 0.2;
  const double omega = 1.0;
  const auto times = linspace(0, 4 * std::numbers::pi / omega, 81);
  const auto c20 = coherence_ratio(g, omega, 20, times);
  const auto c40 = coherence_ratio(g, omega, 40, times);
  double oracle_dev = 0.0;
  double trunc_dev = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    oracle_dev = std::max(oracle_dev, std::abs(c20[i] - decoherence_factor_oracle(g, omega, times[i])));
    trunc_dev = std::max(trunc_dev, std::abs(c20[i] - c40[i]));
  }
  o.check(oracle_dev <= 1e-4, "max oracle dev " + num(oracle_dev));
  o.check(trunc_dev < 1e-8, "n_max 20 vs 40 max diff " + num(trunc_dev));
  return o;
}

double fhe_fidelity(double w1, double w2, double delta, double t) {
  const SystemLayout layout(2, {6}, {{0, 1}});
  const std::vector<AxisVector> axes{AxisVector::z()};
  const auto h_sys = build_free_qubit_model(layout, {w1, w2});
  const auto model = h_sys + build_fhe_drive(h_sys, delta) + build_dephasing_model(layout, axes, standard_bath(2), 0.0);
  const auto code = code_space(make_pair_operators(axes, 0.0), layout);
  const Ket plus = Ket::Constant(2, 1.0 / std::sqrt(2.0));
  const std::vector<double> times{t};
  return metrics(times, evolve(model, joint_state(layout, encode(plus, code)), times), layout, code, plus)
      .fidelities.front();
}

Outcome fhe_mistuning() {
  Outcome o;
  const double t = std::numbers::pi;
  const double f = fhe_fidelity(1.5, 0.5, 0.1, t);
  const double expected = fhe_mistuning_fidelity(0.1, 1.0, t);
  o.check(std::abs(f - expected) <= 1e-6, "fidelity " + num(f) + " vs " + num(expected));
  const double ideal_delta = fhe_fidelity(1.5, 0.5, 0.0, t);
  const double ideal_omega = fhe_fidelity(1.0, 1.0, 0.1, t);
  o.check(ideal_delta >= 1.0 - 1e-10, "delta=0 fidelity " + num(ideal_delta));
  o.check(ideal_omega >= 1.0 - 1e-10, "d_omega=0 fidelity " + num(ideal_omega));
  return o;
}

Outcome singlet_code() {
  Outcome o;
  const auto code = singlet_code_4qubit();
  o.check(code.logical_dim == 2, "singlet code dim " + std::to_string(code.logical_dim));
  if (code.logical_dim != 2) return o;
  const Ket plus = Ket::Constant(2, 1.0 / std::sqrt(2.0));
  const auto times = linspace(0, 10, 101);
  const Ket psi0 = joint_state(kTwoPairs, encode(plus, code));
  double worst = 1.0;
  for (std::uint64_t i = 0; i < 5; ++i) {
    auto rng = make_rng(5, i);
    const Eigen::Vector3d n = random_unit_vector(rng);
    GeneralCouplingSpec spec(4, 1);
    for (std::size_t q = 0; q < 4; ++q) {
      for (int a = 0; a < 3; ++a) spec.at(q, Generator(a), 0) = 0.3 * n(a);
    }
    const auto model = build_general_model(kTwoPairs, spec, standard_bath(4));
    const auto trace = metrics(times, evolve(model, psi0, times), kTwoPairs, code, plus);
    worst = std::min(worst, *std::min_element(trace.fidelities.begin(), trace.fidelities.end()));
  }
  o.check(worst >= 1.0 - 1e-9, "min fidelity over 5 axes " + num(worst));
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "dfs immunity", 10.0, dfs_immunity},
      {2, "mismatch fragility", 20.0, mismatch_fragility},
      {3, "constraint certificate", 30.0, constraint_certificate},
      {4, "commutant and gate preservation", 10.0, commutant_gates},
      {5, "general coupling conserves nothing", 10.0, general_noise},
      {6, "dephasing oracle", 10.0, dephasing_oracle},
      {7, "fhe mistuning", 5.0, fhe_mistuning},
      {8, "four-qubit singlet code", 20.0, singlet_code},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.check(elapsed < c.budget_s, "runtime " + num(elapsed) + " s < " + num(c.budget_s) + " s");
    if (!o.passed) ++failures;
    std::printf("[%s] criterion %d (%s): %s\n", o.passed ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
