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

#include <gtest/gtest.h>

#include <vector>

#include "dfsim/dfs_codec.hpp"
#include "dfsim/random.hpp"
#include "test_support.hpp"

namespace dfsim {
namespace {

using testing::frob;

std::vector<double> sorted_spectrum(const CMat& a) {
  const auto ev = hermitian_eig(a).eigenvalues;
  return {ev.data(), ev.data() + ev.size()};
}

TEST(PairOperator, ZAxisEqualStrength) {
  CMat expected = CMat::Zero(4, 4);
  expected.diagonal() << 2, 0, 0, -2;
  EXPECT_LT(max_abs(pair_operator(AxisVector::z(), 0.0) - expected), 1e-15);
}

TEST(PairOperator, ZAxisMismatchLiftsDegeneracy) {
  // Diagonal entries are +-(2 + eps) and +-eps.
  const auto ev = sorted_spectrum(pair_operator(AxisVector::z(), 0.1));
  const std::vector<double> expected{-2.1, -0.1, 0.1, 2.1};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(ev[i], expected[i], 1e-14);
  EXPECT_EQ(kernel_basis(pair_operator(AxisVector::z(), 0.1)).cols(), 0);
}

TEST(PairOperator, XAxisIsUnitarilyEquivalent) {
  const auto ev = sorted_spectrum(pair_operator(AxisVector::x(), 0.0));
  const std::vector<double> expected{-2, 0, 0, 2};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(ev[i], expected[i], 1e-14);
}

TEST(PairOperator, KernelDimensionProperty) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto rng = make_rng(seed);
    const AxisVector axis(random_unit_vector(rng), 1.0);
    EXPECT_EQ(kernel_basis(pair_operator(axis, 0.0)).cols(), 2);
    const double eps = (seed % 2 ? 1.0 : -1.0) * std::pow(10.0, -1.0 - double(seed % 6));  // down to 1e-6
    EXPECT_EQ(kernel_basis(pair_operator(axis, eps)).cols(), 0) << "eps=" << eps;
  }
}

TEST(CodeSpace, SinglePairColumns) {
  const SystemLayout layout(2, {}, {{0, 1}});
  const auto code = code_space(make_pair_operators({AxisVector::z()}, 0.0), layout);
  ASSERT_EQ(code.logical_dim, 2u);
  EXPECT_LT((code.isometry.col(0) - basis_ket(4, 1)).norm(), 1e-14);  // |0_L> = |01>
  EXPECT_LT((code.isometry.col(1) - basis_ket(4, 2)).norm(), 1e-14);  // |1_L> = |10>
  EXPECT_EQ(code.basis_labels, (std::vector<std::string>{"|0>_L", "|1>_L"}));
}

TEST(CodeSpace, TwoPairsTensorProduct) {
  const SystemLayout layout(4, {}, {{0, 1}, {2, 3}});
  const auto code = code_space(make_pair_operators({AxisVector::z(), AxisVector::z()}, 0.0), layout);
  EXPECT_EQ(code.logical_dim, 4u);
  EXPECT_EQ(code.physical_dim(), 16);
  EXPECT_LT(frob(code.isometry.adjoint() * code.isometry - identity(4)), 1e-12);
  // |0_L 1_L> = |01>|10> = |0110>.
  EXPECT_LT((code.isometry.col(1) - basis_ket(16, 0b0110)).norm(), 1e-14);
  const auto xs = embedded_pair_operators(make_pair_operators({AxisVector::z(), AxisVector::z()}, 0.0), layout);
  for (const auto& x : xs) EXPECT_LT(frob(x * code.isometry), 1e-12);
}

TEST(CodeSpace, InterleavedPairing) {
  const SystemLayout layout(4, {}, {{0, 2}, {1, 3}});
  auto rng = make_rng(3);
  const std::vector<AxisVector> axes{AxisVector(random_unit_vector(rng)), AxisVector(random_unit_vector(rng))};
  const auto set = make_pair_operators(axes, 0.0);
  const auto code = code_space(set, layout);
  EXPECT_LT(frob(code.isometry.adjoint() * code.isometry - identity(4)), 1e-12);
  for (const auto& x : embedded_pair_operators(set, layout)) EXPECT_LT(frob(x * code.isometry), 1e-10);
}

TEST(CodeSpace, MismatchIsAConstructionError) {
  const SystemLayout layout(2, {}, {{0, 1}});
  try {
    (void)code_space(make_pair_operators({AxisVector::z()}, 0.05), layout);
    FAIL() << "expected CodeConstructionError";
  } catch (const CodeConstructionError& e) {
    EXPECT_EQ(e.pair_index(), 0u);
    EXPECT_EQ(e.kernel_dim(), 0u);
  }
}

TEST(CodeSpace, RequiresFullPairing) {
  EXPECT_THROW(code_space(make_pair_operators({AxisVector::z()}, 0.0), SystemLayout(3, {}, {{0, 1}})),
               ValidationError);
}

TEST(CodeSpace, InvariantUnderCommonSu2Rotation) {
  // Rotating both pair members by the same SU(2) frame maps the code of axis n
  // onto the code of the z axis.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto rng = make_rng(seed);
    const AxisVector axis(random_unit_vector(rng), 0.8);
    const SystemLayout layout(2, {}, {{0, 1}});
    const auto before = code_space(make_pair_operators({axis}, 0.0), layout);
    const CMat u = su2_canonicalize(pauli_axis_op(axis)).u;
    const CMat uu = kron(u, u);
    const auto after = code_space(make_pair_operators({AxisVector::z(0.8)}, 0.0), layout);
    const CMat p_before = uu * before.projector() * uu.adjoint();
    EXPECT_LE(frob(p_before - after.projector()), 1e-10);
  }
}

TEST(Encode, ColumnSelectionAndLinearity) {
  const SystemLayout layout(2, {}, {{0, 1}});
  const auto code = code_space(make_pair_operators({AxisVector::z()}, 0.0), layout);
  EXPECT_LT((encode(basis_ket(2, 0), code) - basis_ket(4, 1)).norm(), 1e-14);
  const Ket plus = Ket::Constant(2, 1.0 / std::sqrt(2.0));
  const Ket expected = (basis_ket(4, 1) + basis_ket(4, 2)) / std::sqrt(2.0);
  EXPECT_LT((encode(plus, code) - expected).norm(), 1e-14);
  EXPECT_THROW(encode(basis_ket(4, 0), code), ShapeError);
}

TEST(Encode, PreservesInnerProductsAndRoundTrips) {
  const SystemLayout layout(4, {}, {{0, 1}, {2, 3}});
  auto rng = make_rng(12);
  const auto code =
      code_space(make_pair_operators({AxisVector(random_unit_vector(rng)), AxisVector::y()}, 0.0), layout);
  for (int i = 0; i < 20; ++i) {
    const Ket phi = random_ket(4, rng);
    const Ket psi = random_ket(4, rng);
    EXPECT_LT(std::abs(encode(phi, code).dot(encode(psi, code)) - phi.dot(psi)), 1e-12);
    const auto back = decode(encode(psi, code), code);
    ASSERT_TRUE(back.logical.has_value());
    EXPECT_LT((*back.logical - psi).norm(), 1e-12);
    EXPECT_LT(back.leakage, 1e-12);
  }
}

TEST(Decode, Leakage) {
  const SystemLayout layout(2, {}, {{0, 1}});
  const auto code = code_space(make_pair_operators({AxisVector::z()}, 0.0), layout);
  const auto outside = decode(basis_ket(4, 0), code);
  EXPECT_FALSE(outside.logical.has_value());
  EXPECT_NEAR(outside.leakage, 1.0, 1e-15);

  const auto half = decode((basis_ket(4, 1) + basis_ket(4, 0)) / std::sqrt(2.0), code);
  ASSERT_TRUE(half.logical.has_value());
  EXPECT_NEAR(half.leakage, 0.5, 1e-14);
  EXPECT_LT((*half.logical - basis_ket(2, 0)).norm(), 1e-14);
  EXPECT_THROW(decode(basis_ket(2, 0), code), ShapeError);
}

TEST(SingletCode, DimensionMatchesBruteForceIntersection) {
  const auto code = singlet_code_4qubit();
  EXPECT_EQ(code.logical_dim, 2u);
  // Brute force: kernel of the stacked [Jx; Jy; Jz].
  CMat stacked(48, 16);
  stacked << collective_spin(Generator::kX, 4), collective_spin(Generator::kY, 4), collective_spin(Generator::kZ, 4);
  Eigen::FullPivLU<CMat> lu(stacked);
  lu.setThreshold(1e-10);
  EXPECT_EQ(16 - lu.rank(), 2);
}

TEST(SingletCode, ContainsProductOfSinglets) {
  const auto code = singlet_code_4qubit();
  const Ket singlet = (basis_ket(4, 1) - basis_ket(4, 2)) / std::sqrt(2.0);
  const auto r = decode(kron(singlet, singlet), code);
  EXPECT_LE(r.leakage, 1e-12);
}

TEST(SingletCode, AnnihilatedByEveryCollectiveAxis) {
  const auto code = singlet_code_4qubit();
  EXPECT_LT(frob(code.isometry.adjoint() * code.isometry - identity(2)), 1e-12);
  for (Generator a : {Generator::kX, Generator::kY, Generator::kZ}) {
    EXPECT_LE(frob(collective_spin(a, 4) * code.isometry), 1e-11);
  }
  auto rng = make_rng(20);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector3d n = random_unit_vector(rng);
    CMat nj = CMat::Zero(16, 16);
    for (int a = 0; a < 3; ++a) nj += n(a) * collective_spin(Generator(a), 4);
    EXPECT_LE(frob(nj * code.isometry), 1e-10);
  }
}

}  // namespace
}  // namespace dfsim
