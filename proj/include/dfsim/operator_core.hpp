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

// Dense complex linear algebra shared by every other module: tensor products,
// commutators, Hermitian spectral decomposition, spectral propagators, partial
// traces and kernel extraction.
//
// Tensor-factor convention: factor 0 is the leftmost (most significant) slot,
// so a product basis index is big-endian in factor order.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dfsim/errors.hpp"

namespace dfsim {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using Ket = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kKernelTol = 1e-9;
inline constexpr Complex kI{0.0, 1.0};

inline CMat identity(Index d) { return CMat::Identity(d, d); }

inline CMat pauli_x() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline CMat pauli_y() {
  CMat m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

inline CMat pauli_z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

/// Computational basis ket |index> in dimension d.
inline Ket basis_ket(Index d, Index index) {
  Ket v = Ket::Zero(d);
  v(index) = 1.0;
  return v;
}

/// Largest entry magnitude.
inline double max_abs(const CMat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const CMat& a, double tol = kHermitianTol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint()) <= tol * (1.0 + max_abs(a));
}

inline void require_square(const CMat& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw ShapeError(std::string(what) + ": expected a square matrix, got " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()));
  }
}

inline void require_hermitian(const CMat& a, const char* what, double tol = kHermitianTol) {
  require_square(a, what);
  if (!is_hermitian(a, tol)) {
    throw ContractViolation(std::string(what) + ": operator is not Hermitian");
  }
}

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Ket kron(const Ket& a, const Ket& b) {
  Ket out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Tensor product of an ordered list of factors (factor 0 leftmost).
inline CMat kron_all(std::span<const CMat> factors) {
  CMat out = CMat::Ones(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

inline CMat commutator(const CMat& a, const CMat& b) {
  require_square(a, "commutator");
  require_square(b, "commutator");
  if (a.rows() != b.rows()) {
    throw ShapeError("commutator: dimension mismatch " + std::to_string(a.rows()) + " vs " + std::to_string(b.rows()));
  }
  return a * b - b * a;
}

/// Ordered tensor factors plus the qubit pairing used by the codec.
struct QubitPair {
  std::size_t first = 0;
  std::size_t second = 0;

  friend bool operator==(const QubitPair&, const QubitPair&) = default;
};

class SystemLayout {
 public:
  SystemLayout() = default;

  /// `num_qubits` two-level factors followed by one factor per bath mode.
  SystemLayout(std::size_t num_qubits, std::vector<std::size_t> mode_dims, std::vector<QubitPair> pairing = {})
      : num_qubits_(num_qubits), pairing_(std::move(pairing)) {
    factor_dims_.assign(num_qubits, 2);
    for (auto d : mode_dims) {
      if (d == 0) throw ValidationError("SystemLayout: mode dimension must be positive");
      factor_dims_.push_back(d);
    }
    std::vector<bool> used(num_qubits, false);
    for (const auto& p : pairing_) {
      if (p.first >= num_qubits || p.second >= num_qubits) {
        throw ValidationError("SystemLayout: pair (" + std::to_string(p.first) + ", " + std::to_string(p.second) +
                              ") references a qubit outside 0.." + std::to_string(num_qubits));
      }
      if (p.first == p.second || used[p.first] || used[p.second]) {
        throw ValidationError("SystemLayout: qubit " + std::to_string(used[p.first] ? p.first : p.second) +
                              " appears in more than one pair slot");
      }
      used[p.first] = used[p.second] = true;
    }
  }

  const std::vector<std::size_t>& factor_dims() const { return factor_dims_; }
  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t num_modes() const { return factor_dims_.size() - num_qubits_; }
  const std::vector<QubitPair>& pairing() const { return pairing_; }

  std::vector<std::size_t> mode_dims() const {
    return {factor_dims_.begin() + static_cast<std::ptrdiff_t>(num_qubits_), factor_dims_.end()};
  }

  Index qubit_dim() const { return Index{1} << num_qubits_; }

  Index bath_dim() const {
    Index d = 1;
    for (std::size_t k = num_qubits_; k < factor_dims_.size(); ++k) d *= static_cast<Index>(factor_dims_[k]);
    return d;
  }

  Index total_dim() const { return qubit_dim() * bath_dim(); }

  /// True when every qubit belongs to exactly one pair.
  bool fully_paired() const { return 2 * pairing_.size() == num_qubits_; }

 private:
  std::size_t num_qubits_ = 0;
  std::vector<std::size_t> factor_dims_;
  std::vector<QubitPair> pairing_;
};

/// Orthonormal basis of span(q) chosen without reference to the input basis.
///
/// Columns of q must be orthonormal. Pivoted Gram-Schmidt over the projected
/// canonical basis vectors P e_i: each step takes the largest remaining
/// projection (lowest index on ties), fixes its phase so the pivot component is
/// real positive, and deflates. Output columns are sorted by pivot index.
inline CMat canonical_subspace_basis(const CMat& q) {
  const Index n = q.rows();
  const Index m = q.cols();
  if (m == 0) return q;
  CMat residual = q * q.adjoint();
  std::vector<std::pair<Index, Ket>> picked;
  picked.reserve(static_cast<std::size_t>(m));
  for (Index k = 0; k < m; ++k) {
    Eigen::VectorXd norms = residual.colwise().norm().transpose();
    const double best = norms.maxCoeff();
    Index pivot = 0;
    while (norms(pivot) < best * (1.0 - 1e-8)) ++pivot;
    Ket v = residual.col(pivot);
    // Re-orthogonalize against accepted vectors before normalizing.
    for (const auto& [_, w] : picked) v -= w * w.dot(v);
    v /= v.norm();
    const Complex c = v(pivot);
    v *= std::conj(c) / std::abs(c);
    residual -= v * v.adjoint();
    picked.emplace_back(pivot, std::move(v));
  }
  std::stable_sort(picked.begin(), picked.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  CMat out(n, m);
  for (Index k = 0; k < m; ++k) out.col(k) = picked[static_cast<std::size_t>(k)].second;
  return out;
}

struct SpectralDecomp {
  Eigen::VectorXd eigenvalues;  // ascending
  CMat vectors;                 // unitary, columns are eigenvectors

  CMat reconstruct() const { return vectors * eigenvalues.cast<Complex>().asDiagonal() * vectors.adjoint(); }
};

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues closer than 1e-10 times the spectral radius are treated as one
/// degenerate cluster whose basis is fixed by canonical_subspace_basis, so the
/// result does not depend on the LAPACK-level rotation inside the cluster.
inline SpectralDecomp hermitian_eig(const CMat& a, double hermitian_tol = kHermitianTol) {
  require_hermitian(a, "hermitian_eig", hermitian_tol);
  const CMat h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> solver(h);
  if (solver.info() != Eigen::Success) throw ContractViolation("hermitian_eig: eigensolver did not converge");
  SpectralDecomp out{solver.eigenvalues(), solver.eigenvectors()};

  const Index n = out.eigenvalues.size();
  if (n == 0) return out;
  const double scale = std::max(1.0, out.eigenvalues.cwiseAbs().maxCoeff());
  const double cluster_tol = 1e-10 * scale;
  Index start = 0;
  for (Index i = 1; i <= n; ++i) {
    if (i == n || out.eigenvalues(i) - out.eigenvalues(i - 1) > cluster_tol) {
      if (i - start > 1) {
        out.vectors.middleCols(start, i - start) = canonical_subspace_basis(out.vectors.middleCols(start, i - start));
      }
      start = i;
    }
  }
  return out;
}

/// exp(-i h t) for many t from a single decomposition.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const CMat& h) : decomp_(hermitian_eig(h)) {}
  explicit SpectralPropagator(SpectralDecomp decomp) : decomp_(std::move(decomp)) {}

  Index dim() const { return decomp_.eigenvalues.size(); }
  const SpectralDecomp& decomposition() const { return decomp_; }

  CMat at(double t) const { return decomp_.vectors * phases(t).asDiagonal() * decomp_.vectors.adjoint(); }

  Ket apply(const Ket& psi, double t) const {
    if (psi.size() != dim()) {
      throw ShapeError("propagator: ket dimension " + std::to_string(psi.size()) + " vs operator " +
                       std::to_string(dim()));
    }
    Ket coeffs = decomp_.vectors.adjoint() * psi;
    coeffs = phases(t).cwiseProduct(coeffs);
    return decomp_.vectors * coeffs;
  }

 private:
  Ket phases(double t) const {
    Ket p(dim());
    for (Index i = 0; i < dim(); ++i) p(i) = std::exp(-kI * decomp_.eigenvalues(i) * t);
    return p;
  }

  SpectralDecomp decomp_;
};

inline CMat propagator(const CMat& h, double t) { return SpectralPropagator(h).at(t); }

/// Reduced operator on the factors listed in `keep` (in ascending factor order).
inline CMat partial_trace(const CMat& rho, std::span<const std::size_t> dims, std::span<const std::size_t> keep) {
  require_square(rho, "partial_trace");
  const std::size_t nf = dims.size();
  Index total = 1;
  for (auto d : dims) total *= static_cast<Index>(d);
  if (rho.rows() != total) {
    throw ShapeError("partial_trace: operator dimension " + std::to_string(rho.rows()) + " vs layout " +
                     std::to_string(total));
  }
  std::vector<bool> kept(nf, false);
  for (auto k : keep) {
    if (k >= nf || kept[k]) throw ShapeError("partial_trace: bad keep index " + std::to_string(k));
    kept[k] = true;
  }

  // Split every full index into (kept index, traced index).
  Index keep_dim = 1;
  Index trace_dim = 1;
  for (std::size_t f = 0; f < nf; ++f) (kept[f] ? keep_dim : trace_dim) *= static_cast<Index>(dims[f]);
  std::vector<std::vector<Index>> by_traced(static_cast<std::size_t>(trace_dim),
                                            std::vector<Index>(static_cast<std::size_t>(keep_dim)));
  std::vector<std::size_t> digits(nf, 0);
  for (Index full = 0; full < total; ++full) {
    Index ik = 0;
    Index it = 0;
    for (std::size_t f = 0; f < nf; ++f) {
      if (kept[f]) {
        ik = ik * static_cast<Index>(dims[f]) + static_cast<Index>(digits[f]);
      } else {
        it = it * static_cast<Index>(dims[f]) + static_cast<Index>(digits[f]);
      }
    }
    by_traced[static_cast<std::size_t>(it)][static_cast<std::size_t>(ik)] = full;
    for (std::size_t f = nf; f-- > 0;) {
      if (++digits[f] < dims[f]) break;
      digits[f] = 0;
    }
  }

  CMat out = CMat::Zero(keep_dim, keep_dim);
  for (const auto& idx : by_traced) {
    for (Index i = 0; i < keep_dim; ++i) {
      for (Index j = 0; j < keep_dim; ++j) {
        out(i, j) += rho(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
      }
    }
  }
  return out;
}

inline CMat partial_trace(const CMat& rho, const SystemLayout& layout, std::span<const std::size_t> keep) {
  return partial_trace(rho, layout.factor_dims(), keep);
}

/// Orthonormal basis of {v : |Av| <= tol |A| |v|}, with |A| the spectral norm.
/// An empty kernel yields a matrix with zero columns.
inline CMat kernel_basis(const CMat& a, double tol = kKernelTol) {
  const SpectralDecomp eig = hermitian_eig(a);
  const Index n = eig.eigenvalues.size();
  const double norm = n == 0 ? 0.0 : eig.eigenvalues.cwiseAbs().maxCoeff();
  std::vector<Index> cols;
  for (Index i = 0; i < n; ++i) {
    if (std::abs(eig.eigenvalues(i)) <= tol * norm || norm == 0.0) cols.push_back(i);
  }
  CMat k(n, static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) k.col(static_cast<Index>(c)) = eig.vectors.col(cols[c]);
  return canonical_subspace_basis(k);
}

/// Operator acting as `op` on qubit `q` of an n-qubit register.
inline CMat embed_qubit_op(const CMat& op, std::size_t q, std::size_t num_qubits) {
  if (op.rows() != 2 || op.cols() != 2) throw ShapeError("embed_qubit_op: expected a 2x2 operator");
  if (q >= num_qubits) throw ShapeError("embed_qubit_op: qubit index out of range");
  const Index left = Index{1} << q;
  const Index right = Index{1} << (num_qubits - q - 1);
  return kron(kron(identity(left), op), identity(right));
}

/// Operator acting as the 4x4 `op` on qubits (a, b) of an n-qubit register;
/// `a` is the more significant slot of `op`.
inline CMat embed_two_qubit_op(const CMat& op, std::size_t a, std::size_t b, std::size_t num_qubits) {
  if (op.rows() != 4 || op.cols() != 4) throw ShapeError("embed_two_qubit_op: expected a 4x4 operator");
  if (a >= num_qubits || b >= num_qubits || a == b) throw ShapeError("embed_two_qubit_op: bad qubit indices");
  const Index d = Index{1} << num_qubits;
  const auto bit = [&](Index i, std::size_t q) { return (i >> (num_qubits - 1 - q)) & 1; };
  const Index mask = (Index{1} << (num_qubits - 1 - a)) | (Index{1} << (num_qubits - 1 - b));
  CMat out = CMat::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      if ((i & ~mask) != (j & ~mask)) continue;
      out(i, j) = op(2 * bit(i, a) + bit(i, b), 2 * bit(j, a) + bit(j, b));
    }
  }
  return out;
}

}  // namespace dfsim
