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

#include <cmath>
#include <cstdint>
#include <random>

#include "dfsim/operator_core.hpp"

namespace dfsim {

/// Seeded generators shared by scenarios and tests. Every draw goes through
/// std::mt19937_64 so a (seed, stream) pair fixes the result.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

inline CMat random_complex_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMat m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

inline CMat random_hermitian(Index d, std::mt19937_64& rng) {
  const CMat g = random_complex_matrix(d, d, rng);
  return 0.5 * (g + g.adjoint());
}

inline Ket random_ket(Index d, std::mt19937_64& rng) {
  Ket v = random_complex_matrix(d, 1, rng);
  return v / v.norm();
}

inline Eigen::Vector3d random_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Vector3d v;
  do {
    for (int i = 0; i < 3; ++i) v(i) = normal(rng);
  } while (v.norm() < 1e-6);
  return v.normalized();
}

}  // namespace dfsim
