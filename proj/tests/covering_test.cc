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

#include "purity/covering.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "purity/errors.h"
#include "test_states.h"

namespace purity {
namespace {

using testing::diag2;

DensityMatrix plusState() {
  Vector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return DensityMatrix::pure(v);
}

ClassicalQuantumState phiBarEnsemble() {
  return ClassicalQuantumState({0.5, 0.5}, {DensityMatrix::basisState(2, 0), DensityMatrix::basisState(2, 1)});
}

ClassicalQuantumState noisyEnsemble() { return ClassicalQuantumState({0.5, 0.5}, {diag2(0.9), diag2(0.1)}); }

TEST(PrettyGood, OrthogonalStatesAreProjective) {
  std::vector<DensityMatrix> st = {DensityMatrix::basisState(3, 0), DensityMatrix::basisState(3, 2)};
  const double priors[2] = {0.5, 0.5};
  Povm p = prettyGoodMeasurement(st, priors);
  ASSERT_EQ(p.outcomes(), 3);  // junk on |1⟩
  EXPECT_NEAR((p.element(0) * st[0].matrix()).trace().real(), 1.0, 1e-14);
  EXPECT_NEAR((p.element(1) * st[1].matrix()).trace().real(), 1.0, 1e-14);
}

TEST(PrettyGood, SingleStateIsIdentity) {
  std::vector<DensityMatrix> st = {diag2(0.7)};
  const double priors[1] = {1.0};
  Povm p = prettyGoodMeasurement(st, priors);
  ASSERT_EQ(p.outcomes(), 1);
  EXPECT_LT((p.element(0) - Matrix::Identity(2, 2)).norm(), 1e-14);
}

TEST(PrettyGood, ZeroAndPlusClosedForm) {
  std::vector<DensityMatrix> st = {DensityMatrix::basisState(2, 0), plusState()};
  const double priors[2] = {0.5, 0.5};
  Povm p = prettyGoodMeasurement(st, priors);
  double success = 0.5 * (p.element(0) * st[0].matrix()).trace().real() + 0.5 * (p.element(1) * st[1].matrix()).trace().real();
  // Equal-prior pure states with overlap s: (1 + √(1 − s²)) / 2, s = 1/√2.
  EXPECT_NEAR(success, 0.5 * (1.0 + 1.0 / std::sqrt(2.0)), 1e-14);
  // Independent route: Σ^{−1/2} from the 2×2 eigen-decomposition.
  Matrix sigma = 0.5 * (st[0].matrix() + st[1].matrix());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  Matrix inv = es.operatorInverseSqrt();
  double direct = 0.0;
  for (int m = 0; m < 2; ++m) direct += 0.5 * (st[m].matrix() * inv * (0.5 * st[m].matrix()) * inv).trace().real();
  EXPECT_NEAR(success, direct, 1e-14);
}

TEST(PrettyGood, RejectsEmpty) {
  EXPECT_THROW(prettyGoodMeasurement({}, std::span<const double>{}), ValidationError);
}

TEST(BuildCovering, PhiBarIsOneBin) {
  ClassicalQuantumState cq = phiBarEnsemble();
  CoveringCode code = buildCovering(cq, 4, 0.1, 0.25, 1);
  EXPECT_EQ(code.lambda, 1u);
  EXPECT_EQ(code.mu, 16u);
  EXPECT_EQ(code.minSuccess, 1.0);
  EXPECT_EQ(code.setMass, 1.0);
  CoveringReport r = verifyCovering(code, cq, 4);
  EXPECT_TRUE(r.structuralOk());
  EXPECT_EQ(r.minSuccess, 1.0);
}

TEST(BuildCovering, IdenticalStatesNeedSingletonBins) {
  ClassicalQuantumState cq({0.5, 0.5}, {diag2(0.6), diag2(0.6)});
  CoveringCode code = buildCovering(cq, 4, 0.1, 0.1, 3);
  EXPECT_EQ(code.mu, 1u);
  EXPECT_EQ(code.lambda, code.set.size());
  EXPECT_EQ(code.minSuccess, 1.0);
}

TEST(BuildCovering, NoisyEnsembleMeetsSuccessCriterion) {
  ClassicalQuantumState cq = noisyEnsemble();
  const int n = 8;
  CoveringCode code = buildCovering(cq, n, 0.25, 0.1, 1);
  CoveringReport r = verifyCovering(code, cq, n);
  EXPECT_TRUE(r.structuralOk());
  EXPECT_GE(code.minSuccess, 0.75);
  // Classical oracle: success of sequence x in its bin is Σ_y P(y|x)² / Σ_{x'} P(y|x').
  auto likelihood = [&](std::uint32_t x, std::uint32_t y) {
    int flips = std::popcount(x ^ y);
    return std::pow(0.1, flips) * std::pow(0.9, n - flips);
  };
  double worst = 1.0;
  for (std::uint64_t l = 0; l < code.lambda; ++l) {
    for (std::uint64_t m = 0; m < code.mu; ++m) {
      double s = 0.0;
      for (std::uint32_t y = 0; y < 256; ++y) {
        double total = 0.0;
        for (std::uint64_t k = 0; k < code.mu; ++k) total += likelihood(code.f(k, l), y);
        s += likelihood(code.f(m, l), y) * likelihood(code.f(m, l), y) / total;
      }
      worst = std::min(worst, s);
    }
  }
  EXPECT_NEAR(code.minSuccess, worst, 1e-12);
}

TEST(BuildCovering, DeterministicGivenSeed) {
  CoveringCode a = buildCovering(noisyEnsemble(), 6, 0.25, 0.1, 9);
  CoveringCode b = buildCovering(noisyEnsemble(), 6, 0.25, 0.1, 9);
  EXPECT_EQ(a.table, b.table);
  EXPECT_EQ(a.minSuccess, b.minSuccess);
  EXPECT_EQ(toJson(a).dump(), toJson(b).dump());
}

TEST(BuildCovering, SetSizeDividesSequenceCount) {
  ClassicalQuantumState cq({0.7, 0.2, 0.1}, {diag2(0.9), diag2(0.5), diag2(0.1)});
  CoveringCode code = buildCovering(cq, 4, 0.2, 0.1, 2);
  EXPECT_EQ(81 % code.set.size(), 0u);
  EXPECT_GE(code.setMass, 0.8);
  EXPECT_TRUE(verifyCovering(code, cq, 4).structuralOk());
}

TEST(BuildCovering, NonCommutingEnsembleUsesDenseDecoders) {
  ClassicalQuantumState cq({0.5, 0.5}, {DensityMatrix::basisState(2, 0), plusState()});
  CoveringCode code = buildCovering(cq, 3, 0.2, 0.1, 4);
  EXPECT_FALSE(code.diagonal);
  CoveringReport r = verifyCovering(code, cq, 3);
  EXPECT_TRUE(r.structuralOk());
  for (std::uint64_t l = 0; l < code.lambda; ++l) EXPECT_EQ(code.decoder(l).outcomes(), static_cast<int>(code.mu));
}

TEST(BuildCovering, Guards) {
  EXPECT_THROW(buildCovering(noisyEnsemble(), 17, 0.1, 0.1, 1), GuardExceeded);
  ClassicalQuantumState cq({0.5, 0.5}, {DensityMatrix::basisState(2, 0), plusState()});
  EXPECT_THROW(buildCovering(cq, 9, 0.1, 0.1, 1), GuardExceeded);
}

// Splitting every bin of a commuting ensemble in two can only raise each
// sequence's success probability.
TEST(Covering, RefinementNeverHurtsCommutingEnsembles) {
  ClassicalQuantumState cq = noisyEnsemble();
  CoveringCode coarse = buildCovering(cq, 6, 0.25, 0.1, 5);
  for (std::uint64_t lambda : {1u, 2u, 4u, 8u, 16u, 32u, 64u}) {
    CoveringCode fine = coarse;
    fine.lambda = lambda;
    fine.mu = fine.set.size() / lambda;
    attachDecoders(fine, cq);
    if (lambda > 1) {
      CoveringCode half = coarse;
      half.lambda = lambda / 2;
      half.mu = half.set.size() / half.lambda;
      attachDecoders(half, cq);
      EXPECT_GE(fine.minSuccess, half.minSuccess - 1e-12) << lambda;
    }
  }
  coarse.lambda = coarse.set.size();
  coarse.mu = 1;
  attachDecoders(coarse, cq);
  EXPECT_EQ(coarse.minSuccess, 1.0);
}

TEST(VerifyCovering, DetectsDuplicatedEntry) {
  ClassicalQuantumState cq = phiBarEnsemble();
  CoveringCode code = buildCovering(cq, 4, 0.1, 0.25, 1);
  code.table[3] = code.table[4];
  CoveringReport r = verifyCovering(code, cq, 4);
  EXPECT_FALSE(r.bijective);
  EXPECT_FALSE(r.structuralOk());
}

TEST(VerifyCovering, ReportsAsymptoticTargetsWithoutFailing) {
  ClassicalQuantumState cq = noisyEnsemble();
  CoveringCode code = buildCovering(cq, 8, 0.25, 0.1, 1);
  CoveringReport r = verifyCovering(code, cq, 8);
  nlohmann::json j = toJson(r);
  EXPECT_TRUE(j.contains("lambdaWithinBound"));
  EXPECT_TRUE(j["setWithinBound"].get<bool>());
  EXPECT_EQ(toJson(code)["bins"].size(), code.lambda);
}

}  // namespace
}  // namespace purity
