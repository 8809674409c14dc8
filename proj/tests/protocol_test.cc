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

#include "purity/protocol.h"

#include <gtest/gtest.h>

#include <cmath>

#include "purity/entropy.h"
#include "purity/errors.h"
#include "purity/random.h"
#include "test_states.h"

namespace purity {
namespace {

using testing::bell;
using testing::diag2;
using testing::noisyCorrelated;
using testing::phiBar;

OptimizerConfig quickConfig() {
  OptimizerConfig c;
  c.restarts = 8;
  c.seed = 3;
  return c;
}

DistillationConfig distillConfig(int n, double eps, DistillPath path = DistillPath::Auto) {
  DistillationConfig c;
  c.n = n;
  c.epsilon = eps;
  c.delta = 0.1;
  c.seed = 1;
  c.path = path;
  return c;
}

TEST(Example1, ExactRateAndPurity) {
  DistillationResult r = runExample1();
  EXPECT_EQ(r.ledger.rate, 1.0);
  EXPECT_EQ(r.trace.finalDistance, 0.0);
  EXPECT_EQ(r.ledger.dC, 1u);
  EXPECT_EQ(r.ledger.classicalBitsSent, 1.0);
  EXPECT_EQ(r.trace.steps.front().distance, 0.0);  // dephasing leaves the state intact
  double margin = converseMargin(r.ledger, phiBar(), r.trace);
  EXPECT_GE(margin, 0.0);
  EXPECT_NEAR(margin, 1.0 / std::numbers::e, 1e-12);
}

TEST(UnitaryToZero, MapsVectorToFirstBasisState) {
  Rng rng(1);
  for (int i = 0; i < 5; ++i) {
    Vector u = randomPureVector(4, rng);
    Matrix v = unitaryToZero(u);
    EXPECT_TRUE(isUnitary(v, 1e-12));
    EXPECT_LT((v * u - basisVector(4, 0)).norm(), 1e-13);
  }
}

TEST(CoherentMeasurement, ComputationalOnPhiBarCopiesToX) {
  CoherentMeasurement c = coherentMeasurement(RankOnePovm::computationalBasis(2), phiBar().rho.matrix(), 2);
  EXPECT_EQ(c.a2Distance, 0.0);
  EXPECT_EQ(c.outcomeProbs(0), 0.5);
  // State on X ⊗ A₂ ⊗ B is ½(|0,0,0⟩⟨0,0,0| + |1,0,1⟩⟨1,0,1|).
  Matrix expected = Matrix::Zero(8, 8);
  expected(0, 0) = 0.5;
  expected(5, 5) = 0.5;
  EXPECT_LT((c.state - expected).norm(), 1e-15);
}

TEST(CoherentMeasurement, EigenbasisInputGivesOneBranch) {
  Rng rng(2);
  Matrix u = randomUnitary(2, rng);
  RankOnePovm lambda = RankOnePovm::fromBasis(u);
  Matrix input = kron(u.col(1) * u.col(1).adjoint(), Matrix::Identity(1, 1));
  CoherentMeasurement c = coherentMeasurement(lambda, input, 1);
  EXPECT_NEAR(c.outcomeProbs(0), 0.0, 1e-14);
  EXPECT_NEAR(c.outcomeProbs(1), 1.0, 1e-14);
}

TEST(CoherentMeasurement, StatisticsMatchApplyPovm) {
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    BipartiteState s(2, 2, randomDensityMatrix(4, rng));
    RankOnePovm lambda(randomIsometry(4, 2, rng));
    CoherentMeasurement c = coherentMeasurement(lambda, s.rho.matrix(), 2);
    EXPECT_LT(c.a2Distance, 1e-12);
    ClassicalQuantumState cq = measurementEnsemble(s, lambda);
    for (int x = 0; x < 4; ++x) EXPECT_NEAR(c.outcomeProbs(x), cq.probs[x], 1e-10);
    ClassicalQuantumState viaPovm = applyPovm(lambda.toPovm(), s);
    EXPECT_NEAR(holevoInformation(cq), holevoInformation(viaPovm), 1e-10);
  }
}

TEST(CoherentMeasurement, RejectsHigherRankElements) {
  std::vector<Matrix> e = {Matrix::Identity(2, 2) * 0.5, Matrix::Identity(2, 2) * 0.5};
  EXPECT_THROW(RankOnePovm::fromPovm(Povm(e)), ValidationError);
}

TEST(BobDecoder, OrthogonalCodeDecodesExactly) {
  ClassicalQuantumState cq({0.5, 0.5}, {DensityMatrix::basisState(2, 0), DensityMatrix::basisState(2, 1)});
  CoveringCode code = buildCovering(cq, 3, 0.1, 0.25, 1);
  ASSERT_EQ(code.lambda, 1u);
  Matrix w = bobDecoder(code, 0);
  EXPECT_TRUE(isUnitary(w, 1e-9));
  const auto d = static_cast<Eigen::Index>(code.dimBn);
  for (std::uint64_t m = 0; m < code.mu; ++m) {
    Matrix in = kron(basisVector(code.mu, m) * basisVector(code.mu, m).adjoint(), sequenceState(cq, code.f(m, 0), 3));
    Matrix out = w * in * w.adjoint();
    double overlap = out.topLeftCorner(d, d).trace().real();
    EXPECT_NEAR(overlap, 1.0, 1e-14);
  }
}

TEST(BobDecoder, FirstBlockRowAndOverlapIdentity) {
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  ClassicalQuantumState cq({0.5, 0.5}, {DensityMatrix::basisState(2, 0), DensityMatrix::pure(plus)});
  CoveringCode code = buildCovering(cq, 2, 0.3, 0.1, 2);
  const auto d = static_cast<Eigen::Index>(code.dimBn);
  for (std::uint64_t l = 0; l < code.lambda; ++l) {
    Matrix w = bobDecoder(code, l);
    EXPECT_TRUE(isUnitary(w, 1e-9));
    for (std::uint64_t m = 0; m < code.mu; ++m) {
      EXPECT_LT((w.block(0, m * d, d, d) - psdSqrt(code.decoderElement(l, m))).norm(), 1e-12);
      Matrix rho = sequenceState(cq, code.f(m, l), 2);
      Matrix in = kron(basisVector(code.mu, m) * basisVector(code.mu, m).adjoint(), rho);
      Matrix out = w * in * w.adjoint();
      double overlap = out.topLeftCorner(d, d).trace().real();
      EXPECT_NEAR(overlap, (rho * code.decoderElement(l, m)).trace().real(), 1e-12);
    }
  }
}

TEST(BobDecoder, SingletonBinRelabelsToZero) {
  ClassicalQuantumState cq({0.5, 0.5}, {diag2(0.6), diag2(0.6)});
  CoveringCode code = buildCovering(cq, 2, 0.1, 0.1, 1);
  ASSERT_EQ(code.mu, 1u);
  EXPECT_LT((bobDecoder(code, 0) - Matrix::Identity(4, 4)).norm(), 1e-14);
}

TEST(BobDecoder, ClosedFormMatchesGramSchmidt) {
  ClassicalQuantumState cq({0.5, 0.5}, {diag2(0.9), diag2(0.1)});
  CoveringCode code = buildCovering(cq, 4, 0.25, 0.1, 3);
  code.lambda = 2;
  code.mu = code.set.size() / 2;
  attachDecoders(code, cq);
  const auto d = static_cast<Eigen::Index>(code.dimBn);
  const auto mu = static_cast<Eigen::Index>(code.mu);
  for (std::uint64_t l = 0; l < code.lambda; ++l) {
    Matrix w = bobDecoder(code, l);
    for (Eigen::Index y = 0; y < d; ++y) {
      RealVector c(mu);
      for (Eigen::Index m = 0; m < mu; ++m) c(m) = std::sqrt(code.diagonalDecoders[l * code.mu + m](y));
      Matrix closed = diagonalDecoderUnitary(c);
      EXPECT_TRUE(isUnitary(closed, 1e-12));
      Matrix sector(mu, mu);
      for (Eigen::Index i = 0; i < mu; ++i) {
        for (Eigen::Index m = 0; m < mu; ++m) sector(i, m) = w(i * d + y, m * d + y);
      }
      EXPECT_LT((closed - sector).norm(), 1e-10) << "l=" << l << " y=" << y;
    }
  }
}

TEST(BobDecoder, Guard) {
  ClassicalQuantumState cq({0.5, 0.5}, {DensityMatrix::basisState(2, 0), DensityMatrix::basisState(2, 1)});
  CoveringCode code = buildCovering(cq, 6, 0.1, 0.25, 1);
  EXPECT_THROW(bobDecoder(code, 0), GuardExceeded);
}

TEST(Distillation, PhiBarEightCopies) {
  DistillationResult r = runDistillation(phiBar(), RankOnePovm::computationalBasis(2), distillConfig(8, 0.1));
  EXPECT_EQ(r.trace.path, "classical");
  EXPECT_EQ(r.ledger.rate, 1.0);
  EXPECT_EQ(r.trace.finalDistance, 0.0);
  EXPECT_EQ(r.ledger.classicalBitsSent, 1.0);
  EXPECT_TRUE(r.ledger.catalystReturned());
  EXPECT_EQ(r.trace.lambda, 1u);
  EXPECT_GE(converseMargin(r.ledger, phiBar(), r.trace), 0.0);
}

TEST(Distillation, ProductPureStateIsAlreadyPure) {
  BipartiteState s = testing::productPure(2, 3);
  DistillationResult r = runDistillation(s, RankOnePovm::computationalBasis(2), distillConfig(4, 0.1));
  EXPECT_NEAR(r.ledger.rate, 1.0 + std::log2(3.0), 1e-12);
  EXPECT_EQ(r.trace.finalDistance, 0.0);
}

TEST(Distillation, NoisyCorrelatedState) {
  BipartiteState s = noisyCorrelated();
  DistillationResult r = runDistillation(s, RankOnePovm::computationalBasis(2), distillConfig(8, 0.25));
  EXPECT_GE(r.trace.coveringMinSuccess, 0.75);
  EXPECT_GE(converseMargin(r.ledger, s, r.trace), -1e-9);
  EXPECT_TRUE(r.ledger.catalystReturned());
  EXPECT_LE(r.trace.decodeDistance, r.trace.decodeBound + 1e-12);
  EXPECT_GE(r.trace.decodeOverlap, 0.75);
  EXPECT_NEAR(r.trace.measurementInfo, 8 * (1.0 - testing::h2(0.1)), 1e-12);
}

TEST(Distillation, ClassicalAndDensePathsAgree) {
  BipartiteState s = noisyCorrelated();
  for (int n = 2; n <= 4; ++n) {
    DistillationResult a = runDistillation(s, RankOnePovm::computationalBasis(2), distillConfig(n, 0.25, DistillPath::Classical));
    DistillationResult b = runDistillation(s, RankOnePovm::computationalBasis(2), distillConfig(n, 0.25, DistillPath::Dense));
    EXPECT_EQ(a.ledger.rate, b.ledger.rate);
    EXPECT_NEAR(a.trace.finalDistance, b.trace.finalDistance, 1e-10) << n;
    EXPECT_NEAR(a.trace.decodeDistance, b.trace.decodeDistance, 1e-10) << n;
    for (std::size_t k = 0; k < a.trace.steps.size(); ++k) {
      EXPECT_NEAR(a.trace.steps[k].distance, b.trace.steps[k].distance, 1e-10) << a.trace.steps[k].name;
    }
  }
}

TEST(Distillation, DensePathOnEntangledInput) {
  DistillationResult r = runDistillation(bell(), RankOnePovm::computationalBasis(2), distillConfig(2, 0.1));
  EXPECT_EQ(r.trace.path, "dense");
  EXPECT_NEAR(r.ledger.rate, 1.0, 1e-12);
  EXPECT_NEAR(r.trace.finalDistance, 0.0, 1e-10);
  EXPECT_GE(converseMargin(r.ledger, bell(), r.trace), -1e-9);
}

TEST(Distillation, ClassicalPathRequiresComputationalMeasurement) {
  Rng rng(4);
  RankOnePovm lambda(randomIsometry(2, 2, rng));
  EXPECT_FALSE(classicalPathApplies(phiBar(), lambda));
  EXPECT_THROW(runDistillation(phiBar(), lambda, distillConfig(2, 0.1, DistillPath::Classical)), ValidationError);
  EXPECT_THROW(runDistillation(bell(), RankOnePovm::computationalBasis(2, 4), distillConfig(4, 0.1)), GuardExceeded);
}

TEST(ConverseMargin, RejectsForgedLedger) {
  DistillationResult r = runDistillation(phiBar(), RankOnePovm::computationalBasis(2), distillConfig(8, 0.1));
  Ledger forged = r.ledger;
  forged.rate = 3.0;
  EXPECT_LT(converseMargin(forged, phiBar(), r.trace), 0.0);
}

TEST(RateFormula, KnownStates) {
  EXPECT_NEAR(rateFormula(phiBar(), quickConfig()), 1.0, 1e-4);
  EXPECT_NEAR(rateFormula(bell(), quickConfig()), 1.0, 1e-4);
  BipartiteState mixed(2, 2, DensityMatrix::maximallyMixed(4));
  EXPECT_NEAR(rateFormula(mixed, quickConfig()), 0.0, 1e-9);
}

TEST(Ledger, RateIdentityAndBootstrap) {
  Ledger l = makeLedger(8, 256, 256, 256, 1.0);
  EXPECT_EQ(l.rate, 1.0);
  EXPECT_EQ(l.catalystRate, 1.0);
  std::vector<BootstrapRow> rows = bootstrapSummary(l, 16);
  ASSERT_EQ(rows.size(), 16u);
  EXPECT_EQ(rows.back().catalystRate, 1.0 / 16);
  for (const BootstrapRow& b : rows) EXPECT_EQ(b.netRate, 1.0);
  EXPECT_THROW(makeLedger(0, 1, 1, 1, 0.0), ValidationError);
}

TEST(Json, TraceAndLedgerFields) {
  DistillationResult r = runExample1();
  nlohmann::json t = toJson(r.trace);
  EXPECT_EQ(t["finalDistance"].get<double>(), 0.0);
  EXPECT_EQ(toJson(r.ledger)["rate"].get<double>(), 1.0);
  EXPECT_TRUE(toJson(r.ledger)["catalystReturned"].get<bool>());
}

}  // namespace
}  // namespace purity
