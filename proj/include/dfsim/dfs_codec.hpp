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

#include <optional>
#include <string>
#include <vector>

#include "dfsim/model_builder.hpp"
#include "dfsim/operator_core.hpp"

namespace dfsim {

/// X = S (x) I + (1 + mismatch) I (x) S on one qubit pair.
inline CMat pair_operator(const AxisVector& axis, double mismatch) {
  const CMat s = pauli_axis_op(axis);
  return kron(s, identity(2)) + (1.0 + mismatch) * kron(identity(2), s);
}

struct PairOperatorSet {
  std::vector<CMat> operators;  // 4x4, one per pair
  double mismatch = 0.0;
  std::vector<AxisVector> axes;
};

inline PairOperatorSet make_pair_operators(const std::vector<AxisVector>& axes, double mismatch) {
  PairOperatorSet set{{}, mismatch, axes};
  for (const auto& a : axes) set.operators.push_back(pair_operator(a, mismatch));
  return set;
}

/// Pair operators embedded on the full qubit register of `layout`.
inline std::vector<CMat> embedded_pair_operators(const PairOperatorSet& set, const SystemLayout& layout) {
  if (set.operators.size() != layout.pairing().size()) throw ShapeError("pair operator count does not match pairing");
  std::vector<CMat> out;
  for (std::size_t p = 0; p < set.operators.size(); ++p) {
    const auto& pair = layout.pairing()[p];
    out.push_back(embed_two_qubit_op(set.operators[p], pair.first, pair.second, layout.num_qubits()));
  }
  return out;
}

/// Isometry from the logical register into the physical qubit register.
struct CodeSpace {
  CMat isometry;  // physical_dim x logical_dim
  std::size_t logical_dim = 0;
  std::vector<std::string> basis_labels;

  Index physical_dim() const { return isometry.rows(); }
  CMat projector() const { return isometry * isometry.adjoint(); }
};

namespace detail {

inline std::vector<std::string> binary_labels(std::size_t num_bits) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < (std::size_t{1} << num_bits); ++i) {
    std::string s = "|";
    for (std::size_t b = num_bits; b-- > 0;) s += ((i >> b) & 1) ? '1' : '0';
    labels.push_back(s + ">_L");
  }
  return labels;
}

}  // namespace detail

/// Tensor product of the per-pair kernels. Logical index bits follow the
/// pairing order, most significant first; within a pair the kernel basis
/// is the canonical one from kernel_basis (|0_L> = |01>, |1_L> = |10> for z).
inline CodeSpace code_space(const PairOperatorSet& pair_ops, const SystemLayout& layout,
                            double kernel_tol = kKernelTol) {
  if (!layout.fully_paired()) throw ValidationError("code_space: every qubit must belong to a pair");
  if (pair_ops.operators.size() != layout.pairing().size()) {
    throw ShapeError("code_space: pair operator count does not match pairing");
  }
  std::vector<CMat> kernels;
  for (std::size_t p = 0; p < pair_ops.operators.size(); ++p) {
    CMat k = kernel_basis(pair_ops.operators[p], kernel_tol);
    if (k.cols() != 2) throw CodeConstructionError(p, static_cast<std::size_t>(k.cols()));
    kernels.push_back(std::move(k));
  }

  const std::size_t n = layout.num_qubits();
  const std::size_t num_pairs = kernels.size();
  const Index phys = layout.qubit_dim();
  const Index logical = Index{1} << num_pairs;
  const auto bit = [n](Index i, std::size_t q) { return (i >> (n - 1 - q)) & 1; };

  CodeSpace code{CMat::Zero(phys, logical), static_cast<std::size_t>(logical), detail::binary_labels(num_pairs)};
  for (Index j = 0; j < logical; ++j) {
    for (Index i = 0; i < phys; ++i) {
      Complex amp = 1.0;
      for (std::size_t p = 0; p < num_pairs && amp != Complex(0.0); ++p) {
        const auto& pair = layout.pairing()[p];
        const Index local = 2 * bit(i, pair.first) + bit(i, pair.second);
        const Index logical_bit = (j >> (num_pairs - 1 - p)) & 1;
        amp *= kernels[p](local, logical_bit);
      }
      code.isometry(i, j) = amp;
    }
  }
  return code;
}

/// Trivial code on `num_qubits` qubits (isometry = identity).
inline CodeSpace identity_code(std::size_t num_qubits) {
  const Index d = Index{1} << num_qubits;
  auto labels = detail::binary_labels(num_qubits);
  return {identity(d), static_cast<std::size_t>(d), std::move(labels)};
}

inline Ket encode(const Ket& logical, const CodeSpace& code) {
  if (logical.size() != static_cast<Index>(code.logical_dim)) {
    throw ShapeError("encode: logical ket has dimension " + std::to_string(logical.size()) + ", code expects " +
                     std::to_string(code.logical_dim));
  }
  return code.isometry * logical;
}

struct DecodeResult {
  std::optional<Ket> logical;  // empty when the state lies outside the code
  double leakage = 0.0;
};

inline DecodeResult decode(const Ket& physical, const CodeSpace& code) {
  if (physical.size() != code.physical_dim()) {
    throw ShapeError("decode: physical ket has dimension " + std::to_string(physical.size()) + ", code expects " +
                     std::to_string(code.physical_dim()));
  }
  Ket logical = code.isometry.adjoint() * physical;
  const double kept = logical.squaredNorm();
  const double leakage = std::clamp(1.0 - kept, 0.0, 1.0);
  if (leakage >= 1.0 - 1e-14) return {std::nullopt, leakage};
  return {logical / std::sqrt(kept), leakage};
}

/// Collective spin J_alpha = sum_i sigma_alpha^(i) on n qubits.
inline CMat collective_spin(Generator alpha, std::size_t num_qubits) {
  const Index d = Index{1} << num_qubits;
  CMat j = CMat::Zero(d, d);
  for (std::size_t q = 0; q < num_qubits; ++q) j += embed_qubit_op(pauli(alpha), q, num_qubits);
  return j;
}

/// Total-spin-zero subspace of four qubits: the simultaneous kernel of
/// J_x, J_y, J_z, extracted as the kernel of J_x^2 + J_y^2 + J_z^2.
inline CodeSpace singlet_code_4qubit(double kernel_tol = kKernelTol) {
  CMat casimir = CMat::Zero(16, 16);
  for (Generator alpha : {Generator::kX, Generator::kY, Generator::kZ}) {
    const CMat j = collective_spin(alpha, 4);
    casimir += j * j;
  }
  CMat k = kernel_basis(casimir, kernel_tol);
  const auto dim = static_cast<std::size_t>(k.cols());
  return {std::move(k), dim, detail::binary_labels(1)};
}

}  // namespace dfsim
