// Copyright 2026 The Purity Authors
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

#include "purity/entropy.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "purity/errors.h"
#include "purity/random.h"
#include "test_states.h"

namespace purity {
namespace {

using testing::bell;
using testing::h2;
using testing::phiBar;

TEST(VonNeumann, KnownStates) {
  EXPECT_EQ(vonNeumann(DensityMatrix::basisState(3, 1)), 0.0);
  EXPECT_EQ(vonNeumann(DensityMatrix::maximallyMixed(2)), 1.0);
  EXPECT_NEAR(vonNeumann(DensityMatrix::maximallyMixed(8)), 3.0, 1e-14);
  EXPECT_NEAR(vonNeumann(testing::diag2(0.9)), 0.46899559358928, 1e-13);
}

TEST(VonNeumann, UnitarilyInvariant) {
  Rng rng(2);
  DensityMatrix rho = randomDensityMatrix(4, rng);
  Matrix u = randomUnitary(4, rng);
  EXPECT_NEAR(vonNeumann(rho), vonNeumann(DensityMatrix(u * rho.matrix() * u.adjoint())), 1e-12);
}

TEST(Shannon, RejectsNegative) {
  const double p[2] = {1.5, -0.5};
  EXPECT_THROW(shannonEntropy(p), ValidationError);
}

TEST(EntropyReport, BellAndPhiBar) {
  EntropyReport b = entropyReport(bell());
  EXPECT_NEAR(b.hA, 1.0, 1e-14);
  EXPECT_NEAR(b.hAB, 0.0, 1e-14);
  EXPECT_NEAR(b.iAB, 2.0, 1e-14);
  EntropyReport p = entropyReport(phiBar());
  EXPECT_EQ(p.hA, 1.0);
  EXPECT_EQ(p.hAB, 1.0);
  EXPECT_EQ(p.iAB, 1.0);
}

TEST(ConditionalEntropy, StandardSign) {
  EXPECT_NEAR(conditionalEntropy(bell()), -1.0, 1e-14);
  EXPECT_EQ(conditionalEntropy(phiBar()), 0.0);
  BipartiteState mixed(2, 2, DensityMatrix::maximallyMixed(4));
  EXPECT_NEAR(conditionalEntropy(mixed), 1.0, 1e-14);
}

TEST(ConditionalMutualInfo, ClassicalCopyIsScreenedOff) {
  // A = B = X perfectly correlated: I(A;B|X) = 0.
  std::vector<double> p(8, 0.0);
  p[0] = p[7] = 0.5;
  TripartiteState s(2, 2, 2, DensityMatrix::diagonal(p));
  EXPECT_NEAR(conditionalMutualInfo(s), 0.0, 1e-14);
  // A = B, X independent: I(A;B|X) = 1.
  std::vector<double> q(8, 0.0);
  q[0] = q[1] = q[6] = q[7] = 0.25;
  TripartiteState t(2, 2, 2, DensityMatrix::diagonal(q));
  EXPECT_NEAR(conditionalMutualInfo(t), 1.0, 1e-14);
}

TEST(Holevo, OrthogonalAndIdenticalEnsembles) {
  std::vector<double> p = {0.5, 0.5};
  ClassicalQuantumState orth(p, {DensityMatrix::basisState(2, 0), DensityMatrix::basisState(2, 1)});
  EXPECT_EQ(holevoInformation(orth), 1.0);
  EXPECT_EQ(cqJointEntropy(orth), 1.0);
  ClassicalQuantumState same(p, {testing::diag2(0.3), testing::diag2(0.3)});
  EXPECT_NEAR(holevoInformation(same), 0.0, 1e-14);
  ClassicalQuantumState noisy(p, {testing::diag2(0.9), testing::diag2(0.1)});
  EXPECT_NEAR(holevoInformation(noisy), 1.0 - h2(0.9), 1e-14);
}

TEST(Fannes, UsesInverseEConstant) {
  FannesCheck f = fannesCheck(DensityMatrix::basisState(2, 0), DensityMatrix::basisState(2, 0));
  EXPECT_EQ(f.lhs, 0.0);
  EXPECT_NEAR(f.rhs, 1.0 / std::numbers::e, 1e-16);
  f = fannesCheck(DensityMatrix::basisState(2, 0), DensityMatrix::maximallyMixed(2));
  EXPECT_EQ(f.lhs, 1.0);
  EXPECT_NEAR(f.rhs, 1.0 / std::numbers::e + 1.0, 1e-15);
}

TEST(Subadditivity, NonNegativeOnRandomStates) {
  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    BipartiteState s(2, 3, randomDensityMatrix(6, rng));
    EXPECT_GE(subadditivityCheck(s), -1e-12);
  }
}

}  // namespace
}  // namespace purity
