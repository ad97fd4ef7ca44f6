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

#pragma once

// Dispatches a validated ScenarioConfig to the library operations, writes the
// CSV traces and report.txt into the output directory, and returns the
// per-claim verdicts. Every threshold below is fixed; --tol-scale multiplies
// the tolerances (not the separation thresholds) for debugging only.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dfsim/dfs_codec.hpp"
#include "dfsim/dynamics.hpp"
#include "dfsim/gate_analysis.hpp"
#include "dfsim/model_builder.hpp"
#include "dfsim/random.hpp"
#include "dfsim/scenario/config.hpp"
#include "dfsim/scenario/report.hpp"

namespace dfsim::scenario {

namespace thresholds {
inline constexpr double kImmunityFidelity = 1e-9;
inline constexpr double kImmunityLeakage = 1e-9;
inline constexpr double kMismatchRatioBand = 0.1;  // relative, 4 +- 0.4 for a halving
inline constexpr double kFheOracle = 1e-6;
inline constexpr double kFheIdeal = 1e-10;
inline constexpr double kReduction = 1e-12;
inline constexpr double kGeneralNoiseLoss = 1e-6;
inline constexpr double kGateDefect = 1e-10;
inline constexpr double kGateBreak = 0.1;
inline constexpr double kConstraintResidual = 1e-8;
inline constexpr double kCertificate = 1e-10;
inline constexpr double kDephasingOracle = 1e-4;
inline constexpr double kTruncation = 1e-8;
inline constexpr double kSingletFidelity = 1e-9;
}  // namespace thresholds

struct RunOptions {
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;  // overrides params.seed
  double tol_scale = 1.0;
};

/// Logical ket from its config form.
inline Ket logical_state_from_json(const json& j, Index dim) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "zero") return basis_ket(dim, 0);
    if (name == "plus") return Ket::Constant(dim, 1.0 / std::sqrt(double(dim)));
    if (name == "cat" || name == "bell") {
      if (dim < 2) throw ConfigError("bad field \"params.logical_state\": cat state needs dimension >= 2");
      return (basis_ket(dim, 0) + basis_ket(dim, dim - 1)) / std::sqrt(2.0);
    }
    throw ConfigError("bad field \"params.logical_state\": unknown state \"" + name + "\"");
  }
  if (!j.is_array() || static_cast<Index>(j.size()) != dim) {
    throw ConfigError("bad field \"params.logical_state\": expected " + std::to_string(dim) + " amplitudes");
  }
  Ket v(dim);
  for (Index i = 0; i < dim; ++i) {
    const auto& a = j[static_cast<std::size_t>(i)];
    if (!a.is_array() || a.size() != 2) throw ConfigError("bad field \"params.logical_state\": amplitudes are [re, im]");
    v(i) = Complex(a[0].get<double>(), a[1].get<double>());
  }
  if (std::abs(v.norm() - 1.0) > 1e-10) throw ConfigError("bad field \"params.logical_state\": state is not normalized");
  return v;
}

namespace detail {

struct Context {
  const ScenarioConfig& config;
  RunOptions options;
  RunReport& report;

  double tol(double base) const { return base * options.tol_scale; }

  std::filesystem::path csv(const std::string& name) const {
    const auto p = options.out_dir / name;
    report.csv_paths.push_back(p.string());
    return p;
  }

  std::uint64_t seed() const { return options.seed ? *options.seed : config.params.seed.value_or(0); }

  void add(std::string name, Comparison cmp, double measured, double expected, double tolerance) {
    report.verdicts.push_back(make_verdict(std::move(name), cmp, measured, expected, tolerance));
  }
};

inline double hermiticity_defect(const CMat& h) { return max_abs(h - h.adjoint()) / (1.0 + max_abs(h)); }

inline double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }
inline double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

inline std::string indexed(const std::string& stem, std::size_t i) { return stem + std::to_string(i) + ".csv"; }

inline std::string value_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

/// Encoded logical state with the bath in vacuum.
inline Ket initial_joint_state(const SystemLayout& layout, const CodeSpace& code, const Ket& logical) {
  return joint_state(layout, encode(logical, code));
}

inline void run_dfs_immunity(Context& ctx) {
  const auto& c = ctx.config;
  const auto layout = c.layout();
  const auto axes = c.system->axis_vectors();
  const auto model = build_dephasing_model(layout, axes, *c.bath, *c.params.epsilon);
  const auto code = code_space(make_pair_operators(axes, 0.0), layout, c.tolerances.kernel_tol);
  const Ket logical = logical_state_from_json(*c.params.logical_state, static_cast<Index>(code.logical_dim));
  const auto traj = evolve(model, initial_joint_state(layout, code, logical), c.times);
  const auto trace = metrics(c.times, traj, layout, code, logical, coherence_frame(layout, axes));
  write_trace_csv(trace, ctx.csv("trace.csv"));

  ctx.add("model_hermitian", Comparison::kAtMost, hermiticity_defect(model.total()), 0.0, c.tolerances.hermitian_tol);
  ctx.add("fidelity_min", Comparison::kAtLeast, min_of(trace.fidelities), 1.0, ctx.tol(thresholds::kImmunityFidelity));
  ctx.add("leakage_max", Comparison::kAtMost, max_of(trace.leakages), 0.0, ctx.tol(thresholds::kImmunityLeakage));
}

inline void run_mismatch_sweep(Context& ctx) {
  const auto& c = ctx.config;
  const auto& p = c.params;
  const auto layout = c.layout();
  const auto axes = c.system->axis_vectors();
  const auto code = code_space(make_pair_operators(axes, 0.0), layout, c.tolerances.kernel_tol);
  const Ket logical = logical_state_from_json(*p.logical_state, static_cast<Index>(code.logical_dim));
  const Ket psi0 = initial_joint_state(layout, code, logical);
  const CMat frame = coherence_frame(layout, axes);

  std::vector<double> decay;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < p.epsilons.size(); ++i) {
    const auto model = build_dephasing_model(layout, axes, *c.bath, p.epsilons[i]);
    const SpectralPropagator u(model.total());
    const Ket at_star = u.apply(psi0, *p.t_star);
    const double f = metrics({*p.t_star}, {at_star}, layout, code, logical).fidelities.front();
    decay.push_back(1.0 - f);
    rows.push_back({p.epsilons[i], 1.0 - f});

    std::vector<Ket> traj;
    for (double t : c.times) traj.push_back(u.apply(psi0, t));
    write_trace_csv(metrics(c.times, traj, layout, code, logical, frame), ctx.csv(indexed("trace_eps", i)));
  }
  write_csv(ctx.csv("sweep.csv"), "epsilon,decay", rows);

  for (std::size_t i = 0; i + 1 < decay.size(); ++i) {
    const double expected = std::pow(p.epsilons[i] / p.epsilons[i + 1], 2);
    ctx.add("decay_ratio[" + value_label(p.epsilons[i]) + "/" + value_label(p.epsilons[i + 1]) + "]",
            Comparison::kWithin, decay[i] / decay[i + 1], expected, thresholds::kMismatchRatioBand * expected);
  }

  double kernel_dim = 2.0;
  try {
    (void)code_space(make_pair_operators(axes, *p.code_epsilon), layout, c.tolerances.kernel_tol);
  } catch (const CodeConstructionError& e) {
    kernel_dim = double(e.kernel_dim());
  }
  ctx.add("mismatched_code_kernel_dim[eps=" + value_label(*p.code_epsilon) + "]", Comparison::kWithin, kernel_dim, 0.0,
          0.0);
}

inline void run_fhe_mistuning(Context& ctx) {
  const auto& c = ctx.config;
  const auto layout = c.layout();
  const auto axes = c.system->axis_vectors();
  const auto& pair = layout.pairing().front();
  const double d_omega = c.system->frequencies[pair.first] - c.system->frequencies[pair.second];

  const auto h_sys = build_free_qubit_model(layout, c.system->frequencies);
  const auto coupling = build_dephasing_model(layout, axes, *c.bath, 0.0);
  const auto code = code_space(make_pair_operators(axes, 0.0), layout, c.tolerances.kernel_tol);
  const Ket logical = Ket::Constant(2, 1.0 / std::sqrt(2.0));
  const Ket psi0 = initial_joint_state(layout, code, logical);
  ctx.report.notes.push_back("fhe oracle cos^2(delta*d_omega*t/2) is a minimal model of drive mistuning");

  for (std::size_t i = 0; i < c.params.deltas.size(); ++i) {
    const double delta = c.params.deltas[i];
    const auto model = h_sys + build_fhe_drive(h_sys, delta) + coupling;
    const auto trace = metrics(c.times, evolve(model, psi0, c.times), layout, code, logical);
    write_trace_csv(trace, ctx.csv(indexed("trace_delta", i)));
    double dev = 0.0;
    for (std::size_t k = 0; k < c.times.size(); ++k) {
      dev = std::max(dev, std::abs(trace.fidelities[k] - fhe_mistuning_fidelity(delta, d_omega, c.times[k])));
    }
    const std::string tag = "[delta=" + value_label(delta) + "]";
    ctx.add("fhe_oracle_max_dev" + tag, Comparison::kAtMost, dev, 0.0, ctx.tol(thresholds::kFheOracle));
    if (delta == 0.0 || d_omega == 0.0) {
      ctx.add("fhe_ideal_fidelity_min" + tag, Comparison::kAtLeast, min_of(trace.fidelities), 1.0,
              ctx.tol(thresholds::kFheIdeal));
    }
  }
}

/// c[l][alpha][k] = s * n_alpha * g[l][k]: the general coupling restricted to
/// Hermitian generators with generator-independent bath operators.
inline GeneralCouplingSpec restricted_spec(const SystemLayout& layout, const std::vector<AxisVector>& axes,
                                           const BathSpec& bath) {
  GeneralCouplingSpec spec(layout.num_qubits(), bath.modes.size());
  for (std::size_t p = 0; p < axes.size(); ++p) {
    for (std::size_t q : {layout.pairing()[p].first, layout.pairing()[p].second}) {
      for (int a = 0; a < 3; ++a) {
        for (std::size_t k = 0; k < bath.modes.size(); ++k) {
          spec.at(q, Generator(a), k) = axes[p].strength() * axes[p].direction()(a) * bath.couplings[q][k];
        }
      }
    }
  }
  return spec;
}

/// Generic complex amplitudes g[l][k] * (x + i y), x, y ~ N(0, 1).
inline GeneralCouplingSpec random_general_spec(const BathSpec& bath, std::size_t num_qubits, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  GeneralCouplingSpec spec(num_qubits, bath.modes.size());
  for (std::size_t l = 0; l < num_qubits; ++l) {
    for (int a = 0; a < 3; ++a) {
      for (std::size_t k = 0; k < bath.modes.size(); ++k) {
        const double re = normal(rng);
        const double im = normal(rng);
        spec.at(l, Generator(a), k) = bath.couplings[l][k] * Complex(re, im);
      }
    }
  }
  return spec;
}

inline void run_general_noise(Context& ctx) {
  const auto& c = ctx.config;
  const auto layout = c.layout();
  const auto axes = c.system->axis_vectors();
  auto rng = make_rng(ctx.seed());
  const auto generic = build_general_model(layout, random_general_spec(*c.bath, layout.num_qubits(), rng), *c.bath);
  const auto conserved = conserved_observable_space(generic, c.tolerances.kernel_tol);
  ctx.add("generic_conserved_dim", Comparison::kWithin, double(conserved.dimension), 1.0, 0.0);

  const auto reduced = build_general_model(layout, restricted_spec(layout, axes, *c.bath), *c.bath);
  const auto dephasing = build_dephasing_model(layout, axes, *c.bath, 0.0);
  ctx.add("restricted_matches_dephasing", Comparison::kAtMost, max_abs(reduced.total() - dephasing.total()), 0.0,
          ctx.tol(thresholds::kReduction));
  ctx.add("dephasing_conserved_dim", Comparison::kAtLeast,
          double(conserved_observable_space(dephasing, c.tolerances.kernel_tol).dimension), 2.0, 0.0);

  const auto code = code_space(make_pair_operators(axes, 0.0), layout, c.tolerances.kernel_tol);
  const Ket logical = logical_state_from_json(*c.params.logical_state, static_cast<Index>(code.logical_dim));
  const auto trace = metrics(c.times, evolve(generic, initial_joint_state(layout, code, logical), c.times), layout,
                             code, logical, coherence_frame(layout, axes));
  write_trace_csv(trace, ctx.csv("trace.csv"));
  ctx.add("generic_fidelity_loss", Comparison::kAbove, 1.0 - min_of(trace.fidelities), thresholds::kGeneralNoiseLoss,
          0.0);
}

/// Unit direction perpendicular to n, closest to x (or z when n ~ x).
inline Eigen::Vector3d perpendicular(const Eigen::Vector3d& n) {
  Eigen::Vector3d ref = std::abs(n.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitZ();
  return (ref - n.dot(ref) * n).normalized();
}

inline void run_gate_check(Context& ctx) {
  const auto& c = ctx.config;
  const SystemLayout layout(c.system->num_qubits, {}, c.system->pairs);
  const auto axes = c.system->axis_vectors();
  const auto pair_ops = make_pair_operators(axes, 0.0);
  const auto code = code_space(pair_ops, layout, c.tolerances.kernel_tol);
  const auto xs = embedded_pair_operators(pair_ops, layout);
  const auto comm = commutant_basis(xs, c.tolerances.kernel_tol);

  std::size_t expected = 0;
  for (auto m : joint_eigenspace_multiplicities(xs)) expected += m * m;
  ctx.add("commutant_dim", Comparison::kWithin, double(comm.dimension), double(expected), 0.0);

  double worst = 0.0;
  std::vector<std::vector<double>> rows;
  for (std::size_t s = 0; s < *c.params.samples; ++s) {
    auto rng = make_rng(ctx.seed(), s);
    std::normal_distribution<double> normal(0.0, 1.0);
    CMat h = CMat::Zero(layout.qubit_dim(), layout.qubit_dim());
    for (const auto& g : comm.generators) h += normal(rng) * g;
    for (double t : c.params.gate_times) {
      const double defect = gate_preserves_code(h, code, t);
      worst = std::max(worst, defect);
      rows.push_back({double(s), t, defect});
    }
  }
  write_csv(ctx.csv("gate_defects.csv"), "sample,time,defect", rows);
  ctx.add("commutant_gate_defect_max", Comparison::kAtMost, worst, 0.0, ctx.tol(thresholds::kGateDefect));

  const auto& first = layout.pairing().front();
  const CMat breaker = embed_qubit_op(pauli_axis_op(AxisVector(perpendicular(axes.front().direction()))), first.first,
                                      layout.num_qubits());
  ctx.add("noncommuting_gate_defect", Comparison::kAbove, gate_preserves_code(breaker, code, 1.0),
          thresholds::kGateBreak, 0.0);
}

inline void run_constraint_cert(Context& ctx) {
  const auto& p = ctx.config.params;
  std::vector<std::vector<double>> rows;
  std::size_t point = 0;
  std::size_t accepted = 0;
  std::size_t claims = 0;
  const std::vector<Complex> claimed{Complex(1.0, 0.0), Complex(0.0, 1.0), Complex(1e-6, -1e-6), Complex(0.0, 2e-10)};
  for (std::size_t d : p.dims) {
    double worst = 0.0;
    for (std::size_t trial = 0; trial < *p.trials; ++trial, ++point) {
      auto rng = make_rng(ctx.seed(), point);
      const CMat x = random_hermitian(static_cast<Index>(d), rng);
      const auto rep = solve_shift_constraint(x, thresholds::kConstraintResidual);
      worst = std::max(worst, std::abs(rep.residual - std::sqrt(double(d))));
      rows.push_back({double(d), double(trial), rep.residual, rep.analytic_residual, std::abs(rep.certified_n)});
      const CMat h_random = random_hermitian(static_cast<Index>(d), rng);
      for (const CMat* h : {&rep.solution, &h_random}) {
        for (Complex n : claimed) {
          ++claims;
          if (trace_certificate(x, *h, n, thresholds::kCertificate).verdict == Verdict::kAccept) ++accepted;
        }
      }
    }
    ctx.add("residual_minus_sqrt_d_max[d=" + std::to_string(d) + "]", Comparison::kAtMost, worst, 0.0,
            ctx.tol(thresholds::kConstraintResidual));
  }
  write_csv(ctx.csv("constraint.csv"), "dim,trial,residual,analytic_residual,certified_n_abs", rows);
  ctx.report.notes.push_back("trace certificates evaluated: " + std::to_string(claims));
  ctx.add("certificate_accepts_nonzero_n", Comparison::kWithin, double(accepted), 0.0, 0.0);
}

/// |rho_01(t)| / |rho_01(0)| for one qubit in |+> coupled through sigma_z.
inline std::vector<double> single_qubit_coherence(double g, double omega, std::size_t n_max,
                                                  const std::vector<double>& times, EvolutionTrace* trace_out) {
  const SystemLayout layout(1, {n_max});
  const BathSpec bath{{{omega, n_max}}, {{g}}};
  GeneralCouplingSpec spec(1, 1);
  spec.at(0, Generator::kZ, 0) = g;
  const auto model = build_general_model(layout, spec, bath);
  const auto code = identity_code(1);
  const Ket plus = Ket::Constant(2, 1.0 / std::sqrt(2.0));
  auto trace = metrics(times, evolve(model, joint_state(layout, plus), times), layout, code, plus);
  std::vector<double> ratio = trace.coherences;  // l1 coherence of |+><+| is 1
  if (trace_out) *trace_out = std::move(trace);
  return ratio;
}

inline void run_dephasing_oracle(Context& ctx) {
  const auto& c = ctx.config;
  const double g = *c.params.g;
  const double omega = *c.params.omega;
  EvolutionTrace trace;
  const auto coarse = single_qubit_coherence(g, omega, c.params.n_max_levels[0], c.times, &trace);
  const auto fine = single_qubit_coherence(g, omega, c.params.n_max_levels[1], c.times, nullptr);
  write_trace_csv(trace, ctx.csv("trace.csv"));

  double oracle_dev = 0.0;
  double truncation_dev = 0.0;
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < c.times.size(); ++k) {
    const double oracle = decoherence_factor_oracle(g, omega, c.times[k]);
    oracle_dev = std::max(oracle_dev, std::abs(coarse[k] - oracle));
    truncation_dev = std::max(truncation_dev, std::abs(coarse[k] - fine[k]));
    rows.push_back({c.times[k], coarse[k], fine[k], oracle});
  }
  write_csv(ctx.csv("oracle.csv"), "time,coherence,coherence_refined,oracle", rows);
  ctx.add("oracle_max_dev", Comparison::kAtMost, oracle_dev, 0.0, ctx.tol(thresholds::kDephasingOracle));
  ctx.add("truncation_max_dev", Comparison::kAtMost, truncation_dev, 0.0, ctx.tol(thresholds::kTruncation));
}

inline void run_singlet_code(Context& ctx) {
  const auto& c = ctx.config;
  const auto code = singlet_code_4qubit(c.tolerances.kernel_tol);
  ctx.add("singlet_code_dim", Comparison::kWithin, double(code.logical_dim), 2.0, 0.0);
  if (code.logical_dim != 2) return;

  const SystemLayout layout(4, c.bath->mode_dims(), {{0, 1}, {2, 3}});
  const Ket logical = logical_state_from_json(*c.params.logical_state, 2);
  const Ket psi0 = initial_joint_state(layout, code, logical);
  double worst_fidelity = 1.0;
  double worst_leakage = 0.0;
  for (std::size_t i = 0; i < *c.params.num_axes; ++i) {
    auto rng = make_rng(ctx.seed(), i);
    const Eigen::Vector3d n = random_unit_vector(rng);
    GeneralCouplingSpec spec(4, c.bath->modes.size());
    for (std::size_t q = 0; q < 4; ++q) {
      for (int a = 0; a < 3; ++a) {
        for (std::size_t k = 0; k < c.bath->modes.size(); ++k) spec.at(q, Generator(a), k) = n(a) * c.bath->couplings[q][k];
      }
    }
    const auto model = build_general_model(layout, spec, *c.bath);
    const auto trace = metrics(c.times, evolve(model, psi0, c.times), layout, code, logical);
    write_trace_csv(trace, ctx.csv(indexed("trace_axis", i)));
    worst_fidelity = std::min(worst_fidelity, min_of(trace.fidelities));
    worst_leakage = std::max(worst_leakage, max_of(trace.leakages));
  }
  ctx.add("collective_fidelity_min", Comparison::kAtLeast, worst_fidelity, 1.0, ctx.tol(thresholds::kSingletFidelity));
  ctx.add("collective_leakage_max", Comparison::kAtMost, worst_leakage, 0.0, ctx.tol(thresholds::kSingletFidelity));
}

}  // namespace detail

/// Runs one scenario; writes CSVs and report.txt under options.out_dir.
inline RunReport run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.scenario = to_string(config.scenario);

  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec || !std::filesystem::is_directory(options.out_dir)) {
    throw IoError("cannot create output directory " + options.out_dir.string());
  }

  detail::Context ctx{config, options, report};
  const bool seeded = options.seed || config.params.seed;
  report.echoed.emplace_back("seed", seeded ? std::to_string(ctx.seed()) : "none");
  report.echoed.emplace_back("kernel_tol", format_double(config.tolerances.kernel_tol));
  report.echoed.emplace_back("hermitian_tol", format_double(config.tolerances.hermitian_tol));
  report.echoed.emplace_back("tol_scale", format_double(options.tol_scale) +
                                              (options.tol_scale != 1.0 ? " (DEBUG: tolerances scaled)" : ""));
  report.echoed.emplace_back("time_points", std::to_string(config.times.size()));

  switch (config.scenario) {
    case Scenario::kDfsImmunity:
      detail::run_dfs_immunity(ctx);
      break;
    case Scenario::kMismatchSweep:
      detail::run_mismatch_sweep(ctx);
      break;
    case Scenario::kFheMistuning:
      detail::run_fhe_mistuning(ctx);
      break;
    case Scenario::kGeneralNoise:
      detail::run_general_noise(ctx);
      break;
    case Scenario::kGateCheck:
      detail::run_gate_check(ctx);
      break;
    case Scenario::kConstraintCert:
      detail::run_constraint_cert(ctx);
      break;
    case Scenario::kDephasingOracle:
      detail::run_dephasing_oracle(ctx);
      break;
    case Scenario::kSingletCode:
      detail::run_singlet_code(ctx);
      break;
  }

  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto report_path = options.out_dir / "report.txt";
  std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + report_path.string());
  out << render(report);
  return report;
}

}  // namespace dfsim::scenario
