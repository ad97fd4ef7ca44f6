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

// Finite-dimensional analysis of the shift constraint [H, X] = n I.
//
// Every commutator is traceless and I is not, so ||[H, X] - I||_F >= sqrt(d)
// for all H; only n = 0 is attainable. The routines here measure that bound,
// certify claimed shifts against the trace identity, and compute the commutant
// of a family of operators (the admissible gate Hamiltonians) together with
// the code-preservation defect of the gates it generates.

#include <Eigen/SVD>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "dfsim/dfs_codec.hpp"
#include "dfsim/model_builder.hpp"
#include "dfsim/operator_core.hpp"

namespace dfsim {

/// Frobenius-orthonormal basis of the d x d Hermitian matrices (d^2 elements):
/// E_ii, then for i < j (E_ij + E_ji)/sqrt2 and (-i E_ij + i E_ji)/sqrt2.
inline std::vector<CMat> hermitian_operator_basis(Index d) {
  std::vector<CMat> basis;
  basis.reserve(static_cast<std::size_t>(d * d));
  const double r = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < d; ++i) {
    CMat e = CMat::Zero(d, d);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      CMat sx = CMat::Zero(d, d);
      sx(i, j) = sx(j, i) = r;
      basis.push_back(std::move(sx));
      CMat sy = CMat::Zero(d, d);
      sy(i, j) = -kI * r;
      sy(j, i) = kI * r;
      basis.push_back(std::move(sy));
    }
  }
  return basis;
}

namespace detail {

/// Real matrix of a real-linear map from Hermitian coefficients to complex
/// outputs: column j stacks (Re, Im) of map(basis[j]).
inline Eigen::MatrixXd realify_map(const std::vector<CMat>& basis, const std::function<CMat(const CMat&)>& map) {
  Eigen::MatrixXd m;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const CMat image = map(basis[j]);
    const Index n = image.size();
    if (j == 0) m.resize(2 * n, static_cast<Index>(basis.size()));
    const Eigen::Map<const Eigen::VectorXcd> v(image.data(), n);
    m.col(static_cast<Index>(j)).head(n) = v.real();
    m.col(static_cast<Index>(j)).tail(n) = v.imag();
  }
  return m;
}

inline Eigen::VectorXd realify(const CMat& a) {
  const Eigen::Map<const Eigen::VectorXcd> v(a.data(), a.size());
  Eigen::VectorXd out(2 * a.size());
  out.head(a.size()) = v.real();
  out.tail(a.size()) = v.imag();
  return out;
}

inline CMat combine(const std::vector<CMat>& basis, const Eigen::VectorXd& coeffs) {
  CMat out = CMat::Zero(basis.front().rows(), basis.front().cols());
  for (std::size_t j = 0; j < basis.size(); ++j) out += coeffs(static_cast<Index>(j)) * basis[j];
  return out;
}

/// Orthonormal Hermitian basis of the kernel of the realified map.
inline std::vector<CMat> hermitian_kernel(const std::vector<CMat>& basis, const Eigen::MatrixXd& m, double tol) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double top = sv.size() == 0 ? 0.0 : sv(0);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (top > 0.0 && sv(i) > tol * top) ++rank;
  }
  const Index cols = m.cols();
  const CMat null = svd.matrixV().rightCols(cols - rank).cast<Complex>();
  const Eigen::MatrixXd canon = canonical_subspace_basis(null).real();
  std::vector<CMat> out;
  for (Index c = 0; c < canon.cols(); ++c) out.push_back(combine(basis, canon.col(c)));
  return out;
}

}  // namespace detail

struct ConstraintReport {
  Index dim = 0;
  double residual = 0.0;            // min over Hermitian H of ||[H, x] - target||_F
  Complex certified_n{0.0};         // tr([H*, x]) / d for the minimizer H*
  double analytic_residual = 0.0;   // |tr(target)| / sqrt(d), the trace bound
  double solver_tol = 1e-8;
  bool exact_solution = false;      // residual <= solver_tol
  CMat solution;                    // minimum-norm minimizer H*
};

/// Least-squares solve of [H, x] = target over Hermitian H.
inline ConstraintReport solve_shift_constraint(const CMat& x, const CMat& target, double solver_tol = 1e-8) {
  if (!is_hermitian(x)) throw ValidationError("solve_shift_constraint: x is not Hermitian");
  if (target.rows() != x.rows() || target.cols() != x.cols()) {
    throw ShapeError("solve_shift_constraint: target dimension mismatch");
  }
  const Index d = x.rows();
  const auto basis = hermitian_operator_basis(d);
  const Eigen::MatrixXd m = detail::realify_map(basis, [&](const CMat& h) { return CMat(h * x - x * h); });
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  const Eigen::VectorXd coeffs = svd.solve(detail::realify(target));

  ConstraintReport report;
  report.dim = d;
  report.solver_tol = solver_tol;
  report.solution = detail::combine(basis, coeffs);
  const CMat achieved = commutator(report.solution, x);
  report.residual = (achieved - target).norm();
  report.certified_n = achieved.trace() / double(d);
  report.analytic_residual = std::abs(target.trace()) / std::sqrt(double(d));
  report.exact_solution = report.residual <= solver_tol;
  return report;
}

inline ConstraintReport solve_shift_constraint(const CMat& x, double solver_tol = 1e-8) {
  return solve_shift_constraint(x, identity(x.rows()), solver_tol);
}

enum class Verdict { kAccept, kReject };

inline const char* to_string(Verdict v) { return v == Verdict::kAccept ? "ACCEPT" : "REJECT"; }

struct TraceCertificate {
  Complex commutator_trace{0.0};  // tr([h, x]), always ~0
  Complex target_trace{0.0};      // tr(n I) = n d
  double trace_mismatch = 0.0;    // |tr([h, x]) - n d|
  double antihermitian_defect = 0.0;  // ||[h, x] + [h, x]^dag||_F, always ~0
  double relation_residual = 0.0;     // ||[h, x] - n I||_F
  bool n_consistent = false;          // |n| <= tol: the only value the trace allows
  bool relation_holds = false;
  Verdict verdict = Verdict::kReject;
};

/// Checks a claimed [h, x] = n I. ACCEPT requires n = 0 (within tol) and the
/// relation itself to hold; any |n| > tol is rejected by the trace identity.
inline TraceCertificate trace_certificate(const CMat& x, const CMat& h, Complex n, double tol = 1e-10) {
  require_hermitian(x, "trace_certificate");
  require_hermitian(h, "trace_certificate");
  const CMat c = commutator(h, x);
  const double d = double(x.rows());
  TraceCertificate cert;
  cert.commutator_trace = c.trace();
  cert.target_trace = n * d;
  cert.trace_mismatch = std::abs(cert.commutator_trace - cert.target_trace);
  cert.antihermitian_defect = (c + c.adjoint()).norm();
  cert.relation_residual = (c - n * identity(x.rows())).norm();
  cert.n_consistent = std::abs(n) <= tol;
  cert.relation_holds = cert.relation_residual <= tol * (1.0 + h.norm() * x.norm());
  cert.verdict = cert.n_consistent && cert.relation_holds ? Verdict::kAccept : Verdict::kReject;
  return cert;
}

struct ShiftReport {
  CMat delta;               // U x U^dag - x, U = exp(-i h t)
  double norm = 0.0;
  Complex trace{0.0};
  Complex best_fit_shift{0.0};  // argmin_c ||delta - c I||_F = tr(delta) / d
};

inline ShiftReport shift_evolution_check(const CMat& h_g, const CMat& x, double t) {
  require_hermitian(x, "shift_evolution_check");
  if (h_g.rows() != x.rows()) throw ShapeError("shift_evolution_check: dimension mismatch");
  const CMat u = propagator(h_g, t);
  ShiftReport r;
  r.delta = u * x * u.adjoint() - x;
  r.norm = r.delta.norm();
  r.trace = r.delta.trace();
  r.best_fit_shift = r.trace / double(x.rows());
  return r;
}

struct CommutantBasis {
  std::vector<CMat> generators;  // Hermitian, Frobenius-orthonormal
  std::size_t dimension = 0;
};

/// {A Hermitian : [A, x] = 0 for all x in xs}.
inline CommutantBasis commutant_basis(const std::vector<CMat>& xs, double tol = kKernelTol) {
  if (xs.empty()) throw ValidationError("commutant_basis: empty operator list");
  const Index d = xs.front().rows();
  for (const auto& x : xs) {
    require_hermitian(x, "commutant_basis");
    if (x.rows() != d) throw ShapeError("commutant_basis: operators have different dimensions");
  }
  const auto basis = hermitian_operator_basis(d);
  const Eigen::MatrixXd m = detail::realify_map(basis, [&](const CMat& a) {
    CMat stacked(d, d * static_cast<Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) stacked.middleCols(static_cast<Index>(i) * d, d) = a * xs[i] - xs[i] * a;
    return stacked;
  });
  CommutantBasis out{detail::hermitian_kernel(basis, m, tol), 0};
  out.dimension = out.generators.size();
  return out;
}

/// Multiplicities of the joint eigenspaces of a commuting family, read off the
/// spectrum of sum_i sqrt(p_i) x_i with distinct primes p_i. The sum of their
/// squares is the commutant dimension.
inline std::vector<std::size_t> joint_eigenspace_multiplicities(const std::vector<CMat>& xs, double tol = 1e-8) {
  if (xs.empty()) throw ValidationError("joint_eigenspace_multiplicities: empty operator list");
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  if (xs.size() > std::size(kPrimes)) throw ValidationError("joint_eigenspace_multiplicities: too many operators");
  CMat combo = CMat::Zero(xs.front().rows(), xs.front().cols());
  for (std::size_t i = 0; i < xs.size(); ++i) combo += std::sqrt(double(kPrimes[i])) * xs[i];
  const Eigen::VectorXd ev = hermitian_eig(combo).eigenvalues;
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  std::vector<std::size_t> mult;
  for (Index i = 0; i < ev.size(); ++i) {
    if (i > 0 && ev(i) - ev(i - 1) <= tol * scale) {
      ++mult.back();
    } else {
      mult.push_back(1);
    }
  }
  return mult;
}

/// ||(I - P) exp(-i h t) P||_F for the code projector P.
inline double gate_preserves_code(const CMat& h_g, const CodeSpace& code, double t) {
  require_hermitian(h_g, "gate_preserves_code");
  if (h_g.rows() != code.physical_dim()) throw ShapeError("gate_preserves_code: dimension mismatch");
  const CMat p = code.projector();
  return ((identity(p.rows()) - p) * propagator(h_g, t) * p).norm();
}

/// Qubit operators A with [H_total, A (x) I_bath] = 0. Always contains I.
inline CommutantBasis conserved_observable_space(const HamiltonianModel& model, double tol = kKernelTol) {
  const Index dq = model.layout().qubit_dim();
  const CMat bath_id = identity(model.layout().bath_dim());
  const CMat& h = model.total();
  const auto basis = hermitian_operator_basis(dq);
  const Eigen::MatrixXd m = detail::realify_map(basis, [&](const CMat& a) {
    const CMat full = kron(a, bath_id);
    return CMat(h * full - full * h);
  });
  CommutantBasis out{detail::hermitian_kernel(basis, m, tol), 0};
  out.dimension = out.generators.size();
  return out;
}

}  // namespace dfsim
