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

#include "purity/inequalities.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "purity/entropy.h"
#include "purity/qmat.h"
#include "purity/random.h"

namespace purity {

namespace {

void record(InequalityTally& t, double lhs, double rhs, double slack) {
  ++t.instances;
  double excess = lhs - rhs;
  if (t.instances == 1 || excess > t.worstExcess) t.worstExcess = excess;
  if (excess > slack) ++t.violations;
}

int pickDim(Rng& rng) { return 2 + static_cast<int>(rng.below(3)); }

// Mixes a random state with a nearby perturbation so that small-distance
// regimes (where the bounds are tight) are exercised too.
DensityMatrix nearby(const DensityMatrix& rho, Rng& rng) {
  double t = std::pow(10.0, -4.0 * rng.uniform());
  Matrix m = (1.0 - t) * rho.matrix() + t * randomDensityMatrix(rho.dim(), rng).matrix();
  return DensityMatrix((m + m.adjoint()) * 0.5);
}

}  // namespace

std::vector<InequalityTally> runInequalitySuite(int instances, std::uint64_t seed, double slack) {
  InequalityTally triangle{"triangle"}, fidelity{"fidelity_bound"}, gentle{"gentle_operator"}, fannes{"fannes"},
      subadd{"subadditivity"};

  Rng rng(seed, 0);
  for (int i = 0; i < instances; ++i) {
    int d = pickDim(rng);
    DensityMatrix rho = randomDensityMatrix(d, rng, 1 + static_cast<int>(rng.below(d)));
    DensityMatrix omega = rng.uniform() < 0.5 ? nearby(rho, rng) : randomDensityMatrix(d, rng);
    DensityMatrix sigma = randomDensityMatrix(d, rng);
    double lhs = traceNorm(rho.matrix() - omega.matrix()) + traceNorm(omega.matrix() - sigma.matrix());
    record(triangle, traceNorm(rho.matrix() - sigma.matrix()), lhs, slack);
  }

  for (int i = 0; i < instances; ++i) {
    int d = pickDim(rng);
    Vector phi = randomPureVector(d, rng);
    DensityMatrix rho = rng.uniform() < 0.5 ? nearby(DensityMatrix::pure(phi), rng) : randomDensityMatrix(d, rng);
    FidelityBound fb = fidelityPureBound(rho, phi);
    record(fidelity, fb.distance, fb.bound, slack);
  }

  for (int i = 0; i < instances; ++i) {
    int d = pickDim(rng);
    Matrix rho = randomDensityMatrix(d, rng).matrix();
    if (rng.uniform() < 0.3) rho *= rng.uniform();
    Matrix lam = randomContraction(d, rng);
    if (rng.uniform() < 0.5) {
      // Nearly-accepting operators: the interesting regime of the lemma.
      lam = Matrix::Identity(d, d) - 1e-3 * rng.uniform() * (Matrix::Identity(d, d) - lam);
      lam = hermitianPart(lam);
    }
    GentleBound gb = gentleOperator(rho, lam);
    record(gentle, gb.disturbance, gb.bound, slack);
  }

  for (int i = 0; i < instances; ++i) {
    int d = pickDim(rng);
    DensityMatrix rho = randomDensityMatrix(d, rng, 1 + static_cast<int>(rng.below(d)));
    DensityMatrix omega = rng.uniform() < 0.5 ? nearby(rho, rng) : randomDensityMatrix(d, rng);
    FannesCheck fc = fannesCheck(rho, omega);
    record(fannes, fc.lhs, fc.rhs, slack);
  }

  for (int i = 0; i < instances; ++i) {
    int dA = pickDim(rng), dB = pickDim(rng);
    DensityMatrix rho = randomDensityMatrix(dA * dB, rng, 1 + static_cast<int>(rng.below(dA * dB)));
    BipartiteState s(dA, dB, rho);
    // subadditivity: H(AB) ≤ H(A) + H(B), i.e. margin ≥ 0
    record(subadd, -subadditivityCheck(s), 0.0, slack);
  }

  return {triangle, fidelity, gentle, fannes, subadd};
}

}  // namespace purity
