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

// Hamiltonian families over a qubits (x) truncated-boson layout:
//   * dephasing coupling   sum_pairs (S_l + (1+eps) S_l') (x) sum_k g_k (a_k + a_k^dag)
//   * general coupling     sum_{l,alpha,k} sigma_l^alpha (x) (c a_k + conj(c) a_k^dag)
//   * free qubit terms     sum_l (omega_l / 2) sigma_z^l
//   * FHE drive            -(1 - delta) H_sys
// plus the free bath term sum_k omega_k a_k^dag a_k. Units: hbar = 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "dfsim/operator_core.hpp"

namespace dfsim {

/// Direction and strength of a traceless one-qubit operator s * (n . sigma).
class AxisVector {
 public:
  AxisVector(double nx, double ny, double nz, double strength = 1.0)
      : AxisVector(Eigen::Vector3d(nx, ny, nz), strength) {}

  explicit AxisVector(const Eigen::Vector3d& direction, double strength = 1.0) : strength_(strength) {
    const double norm = direction.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw ValidationError("AxisVector: zero or non-finite direction");
    if (!(strength >= 0.0)) throw ValidationError("AxisVector: strength must be >= 0");
    direction_ = direction / norm;
  }

  static AxisVector x(double s = 1.0) { return {1, 0, 0, s}; }
  static AxisVector y(double s = 1.0) { return {0, 1, 0, s}; }
  static AxisVector z(double s = 1.0) { return {0, 0, 1, s}; }

  const Eigen::Vector3d& direction() const { return direction_; }
  double strength() const { return strength_; }

 private:
  Eigen::Vector3d direction_;
  double strength_;
};

inline CMat pauli_axis_op(const AxisVector& axis) {
  const auto& n = axis.direction();
  return axis.strength() * (n.x() * pauli_x() + n.y() * pauli_y() + n.z() * pauli_z());
}

struct Su2Frame {
  CMat u;           // special unitary with u * S * u^dag = strength * sigma_z
  double strength;  // positive eigenvalue of S
};

/// Rotates a traceless Hermitian one-qubit operator onto the z axis.
inline Su2Frame su2_canonicalize(const CMat& s_op) {
  if (s_op.rows() != 2 || s_op.cols() != 2) throw ValidationError("su2_canonicalize: expected a 2x2 operator");
  if (!is_hermitian(s_op)) throw ValidationError("su2_canonicalize: operator is not Hermitian");
  const double scale = 1.0 + max_abs(s_op);
  if (std::abs(s_op.trace()) > kHermitianTol * scale) throw ValidationError("su2_canonicalize: operator is not traceless");
  if (max_abs(s_op) <= kHermitianTol) throw ValidationError("su2_canonicalize: operator is zero");

  const SpectralDecomp eig = hermitian_eig(s_op);
  CMat u(2, 2);
  u.row(0) = eig.vectors.col(1).adjoint();  // +s eigenvector -> |0>
  u.row(1) = eig.vectors.col(0).adjoint();  // -s eigenvector -> |1>
  const Complex det = u.determinant();
  u *= std::exp(-0.5 * kI * std::arg(det));
  return {u, eig.eigenvalues(1)};
}

struct BosonMode {
  double frequency = 1.0;
  std::size_t n_max = 2;
};

/// Bath modes and the real qubit-mode coupling table g[l][k].
struct BathSpec {
  std::vector<BosonMode> modes;
  std::vector<std::vector<double>> couplings;

  std::vector<std::size_t> mode_dims() const {
    std::vector<std::size_t> dims;
    for (const auto& m : modes) dims.push_back(m.n_max);
    return dims;
  }

  void validate(std::size_t num_qubits) const {
    for (const auto& m : modes) {
      if (m.n_max < 2) throw ValidationError("BathSpec: n_max must be >= 2");
      if (!(m.frequency > 0.0)) throw ValidationError("BathSpec: mode frequency must be > 0");
    }
    if (couplings.size() != num_qubits) {
      throw ValidationError("BathSpec: coupling table has " + std::to_string(couplings.size()) + " rows, expected " +
                            std::to_string(num_qubits));
    }
    for (const auto& row : couplings) {
      if (row.size() != modes.size()) {
        throw ValidationError("BathSpec: coupling row has " + std::to_string(row.size()) + " entries, expected " +
                              std::to_string(modes.size()));
      }
    }
  }
};

/// Truncated annihilation operator, a|n> = sqrt(n)|n-1>.
inline CMat annihilation(std::size_t n_max) {
  CMat a = CMat::Zero(static_cast<Index>(n_max), static_cast<Index>(n_max));
  for (std::size_t n = 1; n < n_max; ++n) a(static_cast<Index>(n - 1), static_cast<Index>(n)) = std::sqrt(double(n));
  return a;
}

/// `op` on mode k of the bath, identity elsewhere.
inline CMat embed_mode_op(const CMat& op, std::size_t k, std::span<const std::size_t> mode_dims) {
  CMat out = CMat::Ones(1, 1);
  for (std::size_t j = 0; j < mode_dims.size(); ++j) {
    out = kron(out, j == k ? op : identity(static_cast<Index>(mode_dims[j])));
  }
  return out;
}

inline Index bath_dim_of(std::span<const std::size_t> mode_dims) {
  Index d = 1;
  for (auto m : mode_dims) d *= static_cast<Index>(m);
  return d;
}

/// sum_k (c_k a_k + conj(c_k) a_k^dag).
inline CMat bath_quadrature(const BathSpec& bath, std::span<const Complex> amplitudes) {
  const auto dims = bath.mode_dims();
  CMat out = CMat::Zero(bath_dim_of(dims), bath_dim_of(dims));
  for (std::size_t k = 0; k < bath.modes.size(); ++k) {
    if (amplitudes[k] == Complex(0.0)) continue;
    const CMat a = embed_mode_op(annihilation(bath.modes[k].n_max), k, dims);
    out += amplitudes[k] * a + std::conj(amplitudes[k]) * a.adjoint();
  }
  return out;
}

/// sum_k g_k (a_k + a_k^dag).
inline CMat bath_position(const BathSpec& bath, std::span<const double> g) {
  std::vector<Complex> c(g.begin(), g.end());
  return bath_quadrature(bath, c);
}

inline CMat bath_free_hamiltonian(const BathSpec& bath) {
  const auto dims = bath.mode_dims();
  CMat out = CMat::Zero(bath_dim_of(dims), bath_dim_of(dims));
  for (std::size_t k = 0; k < bath.modes.size(); ++k) {
    const CMat a = embed_mode_op(annihilation(bath.modes[k].n_max), k, dims);
    out += bath.modes[k].frequency * (a.adjoint() * a);
  }
  return out;
}

enum class Generator { kX = 0, kY = 1, kZ = 2 };

inline CMat pauli(Generator g) {
  switch (g) {
    case Generator::kX:
      return pauli_x();
    case Generator::kY:
      return pauli_y();
    case Generator::kZ:
      break;
  }
  return pauli_z();
}

/// Complex amplitudes c[l][alpha][k] of the general qubit-boson coupling.
class GeneralCouplingSpec {
 public:
  GeneralCouplingSpec(std::size_t num_qubits, std::size_t num_modes)
      : num_qubits_(num_qubits), num_modes_(num_modes), amps_(num_qubits * 3 * num_modes, Complex(0.0)) {}

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t num_modes() const { return num_modes_; }

  Complex& at(std::size_t l, Generator alpha, std::size_t k) { return amps_[offset(l, alpha, k)]; }
  Complex at(std::size_t l, Generator alpha, std::size_t k) const { return amps_[offset(l, alpha, k)]; }

  std::span<const Complex> row(std::size_t l, Generator alpha) const {
    return std::span<const Complex>(amps_).subspan(offset(l, alpha, 0), num_modes_);
  }

 private:
  std::size_t offset(std::size_t l, Generator alpha, std::size_t k) const {
    if (l >= num_qubits_ || k >= num_modes_) throw ShapeError("GeneralCouplingSpec: index out of range");
    return (l * 3 + static_cast<std::size_t>(alpha)) * num_modes_ + k;
  }

  std::size_t num_qubits_;
  std::size_t num_modes_;
  std::vector<Complex> amps_;
};

struct CouplingTerm {
  CMat system_op;  // on the qubit register
  CMat bath_op;    // on the bath modes
  double coefficient = 1.0;
};

/// H = sum_terms coefficient * system_op (x) bath_op, with the total cached.
class HamiltonianModel {
 public:
  HamiltonianModel(SystemLayout layout, std::vector<CouplingTerm> terms)
      : layout_(std::move(layout)), terms_(std::move(terms)) {
    const Index dq = layout_.qubit_dim();
    const Index db = layout_.bath_dim();
    total_ = CMat::Zero(dq * db, dq * db);
    for (const auto& t : terms_) {
      if (t.system_op.rows() != dq || t.system_op.cols() != dq || t.bath_op.rows() != db || t.bath_op.cols() != db) {
        throw ShapeError("HamiltonianModel: term dimensions do not match the layout");
      }
      total_ += t.coefficient * kron(t.system_op, t.bath_op);
    }
    if (!is_hermitian(total_)) throw ContractViolation("HamiltonianModel: total is not Hermitian");
  }

  const SystemLayout& layout() const { return layout_; }
  const std::vector<CouplingTerm>& terms() const { return terms_; }
  const CMat& total() const { return total_; }

  friend HamiltonianModel operator+(const HamiltonianModel& a, const HamiltonianModel& b) {
    if (a.layout_.factor_dims() != b.layout_.factor_dims()) throw ShapeError("HamiltonianModel: layouts differ");
    std::vector<CouplingTerm> terms = a.terms_;
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    return {a.layout_, std::move(terms)};
  }

 private:
  SystemLayout layout_;
  std::vector<CouplingTerm> terms_;
  CMat total_;
};

namespace detail {

inline void check_bath_matches(const SystemLayout& layout, const BathSpec& bath) {
  bath.validate(layout.num_qubits());
  if (layout.mode_dims() != bath.mode_dims()) throw ValidationError("bath modes do not match the layout");
}

inline CouplingTerm free_bath_term(const SystemLayout& layout, const BathSpec& bath) {
  return {identity(layout.qubit_dim()), bath_free_hamiltonian(bath), 1.0};
}

}  // namespace detail

/// Paired dephasing coupling; pair member l' carries strength (1 + mismatch).
inline HamiltonianModel build_dephasing_model(const SystemLayout& layout, const std::vector<AxisVector>& axes,
                                              const BathSpec& bath, double mismatch) {
  detail::check_bath_matches(layout, bath);
  const auto& pairs = layout.pairing();
  if (axes.size() != pairs.size()) {
    throw ValidationError("build_dephasing_model: " + std::to_string(axes.size()) + " axes for " +
                          std::to_string(pairs.size()) + " pairs");
  }
  std::vector<bool> paired(layout.num_qubits(), false);
  for (const auto& p : pairs) paired[p.first] = paired[p.second] = true;
  for (std::size_t l = 0; l < layout.num_qubits(); ++l) {
    const auto& row = bath.couplings[l];
    const bool coupled = std::any_of(row.begin(), row.end(), [](double g) { return g != 0.0; });
    if (coupled && !paired[l]) {
      throw ValidationError("build_dephasing_model: unpaired qubit " + std::to_string(l) + " referenced by the bath");
    }
  }

  const std::size_t n = layout.num_qubits();
  std::vector<CouplingTerm> terms;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [l, lp] = pairs[p];
    if (bath.couplings[l] != bath.couplings[lp]) {
      throw ValidationError("build_dephasing_model: pair " + std::to_string(p) +
                            " members have different coupling rows; use the mismatch parameter instead");
    }
    const CMat s = pauli_axis_op(axes[p]);
    CMat x = embed_qubit_op(s, l, n) + (1.0 + mismatch) * embed_qubit_op(s, lp, n);
    terms.push_back({std::move(x), bath_position(bath, bath.couplings[l]), 1.0});
  }
  if (!bath.modes.empty()) terms.push_back(detail::free_bath_term(layout, bath));
  return {layout, std::move(terms)};
}

inline HamiltonianModel build_general_model(const SystemLayout& layout, const GeneralCouplingSpec& spec,
                                            const BathSpec& bath) {
  detail::check_bath_matches(layout, bath);
  if (spec.num_qubits() != layout.num_qubits() || spec.num_modes() != bath.modes.size()) {
    throw ValidationError("build_general_model: coupling table dimensions do not match the layout");
  }
  std::vector<CouplingTerm> terms;
  for (std::size_t l = 0; l < spec.num_qubits(); ++l) {
    for (Generator alpha : {Generator::kX, Generator::kY, Generator::kZ}) {
      const auto amps = spec.row(l, alpha);
      if (std::all_of(amps.begin(), amps.end(), [](Complex c) { return c == Complex(0.0); })) continue;
      terms.push_back({embed_qubit_op(pauli(alpha), l, layout.num_qubits()), bath_quadrature(bath, amps), 1.0});
    }
  }
  if (!bath.modes.empty()) terms.push_back(detail::free_bath_term(layout, bath));
  return {layout, std::move(terms)};
}

/// H_S = sum_l (omega_l / 2) sigma_z^l, acting trivially on the bath.
inline HamiltonianModel build_free_qubit_model(const SystemLayout& layout, const std::vector<double>& omegas) {
  if (omegas.size() != layout.num_qubits()) {
    throw ValidationError("build_free_qubit_model: " + std::to_string(omegas.size()) + " frequencies for " +
                          std::to_string(layout.num_qubits()) + " qubits");
  }
  CMat hs = CMat::Zero(layout.qubit_dim(), layout.qubit_dim());
  for (std::size_t l = 0; l < omegas.size(); ++l) hs += 0.5 * omegas[l] * embed_qubit_op(pauli_z(), l, omegas.size());
  return {layout, {{std::move(hs), identity(layout.bath_dim()), 1.0}}};
}

/// H_drv = -(1 - mistune) * h_sys. h_sys must act trivially on the bath.
inline HamiltonianModel build_fhe_drive(const HamiltonianModel& h_sys, double mistune) {
  const Index db = h_sys.layout().bath_dim();
  std::vector<CouplingTerm> terms;
  for (const auto& t : h_sys.terms()) {
    const Complex mean = t.bath_op.trace() / double(db);
    if (max_abs(t.bath_op - mean * identity(db)) > kHermitianTol * (1.0 + max_abs(t.bath_op))) {
      throw ValidationError("build_fhe_drive: system Hamiltonian acts nontrivially on the bath");
    }
    terms.push_back({t.system_op, t.bath_op, -(1.0 - mistune) * t.coefficient});
  }
  return {h_sys.layout(), std::move(terms)};
}

}  // namespace dfsim
