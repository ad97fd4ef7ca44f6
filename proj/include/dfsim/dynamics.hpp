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

// Closed joint unitary evolution of qubits + bath from the bath vacuum, the
// reduced register metrics, and the closed-form oracles used to check them.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dfsim/dfs_codec.hpp"
#include "dfsim/model_builder.hpp"
#include "dfsim/operator_core.hpp"

namespace dfsim {

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> fidelities;
  std::vector<double> coherences;
  std::vector<double> purities;
  std::vector<double> leakages;

  std::size_t size() const { return times.size(); }
};

/// qubit_ket (x) |0...0>_bath.
inline Ket joint_state(const SystemLayout& layout, const Ket& qubit_ket) {
  if (qubit_ket.size() != layout.qubit_dim()) throw ShapeError("joint_state: qubit ket dimension mismatch");
  return kron(qubit_ket, basis_ket(layout.bath_dim(), 0));
}

/// Reduced qubit density matrix of a joint ket (bath traced out).
inline CMat reduced_qubit_state(const Ket& psi, const SystemLayout& layout) {
  const Index dq = layout.qubit_dim();
  const Index db = layout.bath_dim();
  if (psi.size() != dq * db) throw ShapeError("reduced_qubit_state: ket dimension mismatch");
  // Column q of `m` holds the bath amplitudes of qubit basis state q.
  const Eigen::Map<const CMat> m(psi.data(), db, dq);
  return m.transpose() * m.conjugate();
}

inline std::vector<Ket> evolve(const HamiltonianModel& model, const Ket& psi0, const std::vector<double>& times) {
  if (psi0.size() != model.total().rows()) {
    throw ShapeError("evolve: initial ket has dimension " + std::to_string(psi0.size()) + ", model has " +
                     std::to_string(model.total().rows()));
  }
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw ContractViolation("evolve: initial ket is not normalized");
  const SpectralPropagator u(model.total());
  std::vector<Ket> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(u.apply(psi0, t));
  return out;
}

/// Product of the per-qubit frames that rotate each pair's coupling axis onto
/// sigma_z; qubits outside any pair keep the computational basis.
inline CMat coherence_frame(const SystemLayout& layout, const std::vector<AxisVector>& axes) {
  if (axes.size() != layout.pairing().size()) throw ShapeError("coherence_frame: axes count does not match pairing");
  std::vector<CMat> factors(layout.num_qubits(), identity(2));
  for (std::size_t p = 0; p < axes.size(); ++p) {
    const CMat u = su2_canonicalize(pauli_axis_op(axes[p])).u;
    factors[layout.pairing()[p].first] = u;
    factors[layout.pairing()[p].second] = u;
  }
  return kron_all(factors);
}

/// Sum of off-diagonal magnitudes.
inline double l1_coherence(const CMat& rho) {
  double c = 0.0;
  for (Index i = 0; i < rho.rows(); ++i) {
    for (Index j = 0; j < rho.cols(); ++j) {
      if (i != j) c += std::abs(rho(i, j));
    }
  }
  return c;
}

/// Fidelity, coherence, purity and leakage of the reduced register along a
/// trajectory. Coherence is measured after conjugating by `frame` (defaults to
/// the computational basis).
inline EvolutionTrace metrics(const std::vector<double>& times, const std::vector<Ket>& trajectory,
                              const SystemLayout& layout, const CodeSpace& code, const Ket& psi_logical,
                              const std::optional<CMat>& frame = std::nullopt) {
  if (times.size() != trajectory.size()) throw ShapeError("metrics: times and trajectory lengths differ");
  if (code.physical_dim() != layout.qubit_dim()) throw ShapeError("metrics: code does not match the layout");
  if (frame && (frame->rows() != layout.qubit_dim() || frame->cols() != layout.qubit_dim())) {
    throw ShapeError("metrics: coherence frame does not match the layout");
  }
  if (std::abs(psi_logical.norm() - 1.0) > 1e-10) throw ContractViolation("metrics: logical state is not normalized");
  const Ket target = encode(psi_logical, code);
  const CMat projector = code.projector();

  EvolutionTrace trace;
  trace.times = times;
  for (const auto& psi : trajectory) {
    const CMat rho = reduced_qubit_state(psi, layout);
    trace.fidelities.push_back(std::real(target.dot(rho * target)));
    trace.coherences.push_back(l1_coherence(frame ? CMat(*frame * rho * frame->adjoint()) : rho));
    trace.purities.push_back(rho.squaredNorm());
    trace.leakages.push_back(1.0 - std::real((projector * rho).trace()));
  }
  return trace;
}

/// |rho_01(t)| / |rho_01(0)| for H = sigma_z (x) g (a + a^dag) + omega a^dag a
/// with the mode starting in vacuum: exp(-(4 g^2 / omega^2)(1 - cos omega t)).
inline double decoherence_factor_oracle(double g, double omega, double t) {
  if (!(omega > 0.0)) throw ValidationError("decoherence_factor_oracle: omega must be > 0");
  return std::exp(-(4.0 * g * g / (omega * omega)) * (1.0 - std::cos(omega * t)));
}

/// Logical fidelity of (|0_L> + |1_L>)/sqrt(2) on the z-pair code under the
/// residual free Hamiltonian delta (omega_1 sz1 + omega_2 sz2) / 2:
/// cos^2(delta * d_omega * t / 2), with d_omega = omega_1 - omega_2.
inline double fhe_mistuning_fidelity(double delta, double d_omega, double t) {
  const double c = std::cos(0.5 * delta * d_omega * t);
  return c * c;
}

}  // namespace dfsim
