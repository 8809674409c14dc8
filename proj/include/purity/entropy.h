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

#pragma once

// Entropic functionals, all in bits.

#include <span>

#include "purity/qmat.h"

namespace purity {

/// −Σ λ log₂ λ over a spectrum. Entries in [−1e-10, 0] contribute 0; more
/// negative ones are rejected.
double spectrumEntropy(const RealVector& spectrum);
double shannonEntropy(std::span<const double> probs);
double binaryEntropy(double p);

double vonNeumann(const DensityMatrix& rho);

/// Same as vonNeumann, for intermediate operators that are not wrapped in a
/// validated DensityMatrix (normalized by their trace first).
double vonNeumannOf(const Matrix& m);

struct EntropyReport {
  double hA;
  double hB;
  double hAB;
  double iAB;
};

EntropyReport entropyReport(const BipartiteState& s);
double mutualInfo(const BipartiteState& s);

/// H(A|B) := H(AB) − H(B) (standard sign).
double conditionalEntropy(const BipartiteState& s);

/// State on A ⊗ B ⊗ X, A slowest.
struct TripartiteState {
  TripartiteState(int dimA, int dimB, int dimX, DensityMatrix rho);

  int dimA;
  int dimB;
  int dimX;
  DensityMatrix rho;
};

/// I(A;B|X) = I(A;BX) − I(A;X).
double conditionalMutualInfo(const TripartiteState& s);

/// H(XB) of a classical-quantum state: H(p) + Σ p(x) H(ρ_x).
double cqJointEntropy(const ClassicalQuantumState& cq);

/// I(X;B) = H(Σ p ρ_x) − Σ p H(ρ_x).
double holevoInformation(const ClassicalQuantumState& cq);

struct FannesCheck {
  double lhs;  ///< |H(ρ) − H(ω)|
  double rhs;  ///< 1/e + log₂(d)·‖ρ − ω‖₁
};

FannesCheck fannesCheck(const DensityMatrix& rho, const DensityMatrix& omega);

/// H(A) + H(B) − H(AB).
double subadditivityCheck(const BipartiteState& s);

}  // namespace purity
