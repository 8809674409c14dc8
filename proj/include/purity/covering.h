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

// Covering codes for a classical-quantum ensemble: a high-probability set S
// of X-sequences is split into λ bins of μ sequences, and each bin carries a
// decoding POVM on Bⁿ that identifies the sequence inside the bin.

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "purity/qmat.h"

namespace purity {

/// Elements Υ_m = Σ^{−1/2} p_m ρ_m Σ^{−1/2}, Σ = Σ_m p_m ρ_m. If Σ is
/// singular a final junk element 1 − Σ_m Υ_m is appended.
Povm prettyGoodMeasurement(const std::vector<DensityMatrix>& states, std::span<const double> priors);

struct CoveringAttempt {
  std::uint64_t lambda;
  double minSuccess;
};

struct CoveringCode {
  int n = 0;
  int alphabet = 0;
  int dimB = 0;     ///< single-copy B dimension
  std::uint64_t dimBn = 0;
  double epsilon = 0;
  double delta = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> set;  ///< S, ascending sequence indices
  std::uint64_t mu = 0;
  std::uint64_t lambda = 0;
  /// f(m, l) = table[l·μ + m].
  std::vector<std::uint32_t> table;
  bool diagonal = false;
  /// Υ⁽ˡ⁾_m stored at index l·μ + m: diagonals for commuting ensembles,
  /// dense matrices otherwise.
  std::vector<RealVector> diagonalDecoders;
  std::vector<Matrix> denseDecoders;
  double minSuccess = 0;
  double setMass = 0;
  double entropyX = 0;
  double holevo = 0;
  double lambdaTarget = 0;  ///< ⌈2^{n(H(X) − I(X;B) + δ)}⌉
  std::vector<CoveringAttempt> attempts;

  std::uint32_t f(std::uint64_t m, std::uint64_t l) const { return table[l * mu + m]; }
  Matrix decoderElement(std::uint64_t l, std::uint64_t m) const;
  Povm decoder(std::uint64_t l) const;
};

/// Letters of a sequence index, first letter slowest.
std::vector<int> sequenceLetters(std::uint64_t index, int alphabet, int n);

/// ρ_{x₁} ⊗ … ⊗ ρ_{xₙ}.
Matrix sequenceState(const ClassicalQuantumState& cq, std::uint64_t index, int n);

/// Throws GuardExceeded when |X|ⁿ > 2¹⁶ or Bⁿ is too large for the
/// ensemble's representation.
CoveringCode buildCovering(const ClassicalQuantumState& cq, int n, double epsilon, double delta, std::uint64_t seed);

/// Rebuilds the decoders of a code for a given binning table; used by
/// buildCovering and by tests that construct codes by hand.
void attachDecoders(CoveringCode& code, const ClassicalQuantumState& cq);

/// min_{m,l} Tr ρ_{f(m,l)} Υ⁽ˡ⁾_m.
double coveringMinSuccess(const CoveringCode& code, const ClassicalQuantumState& cq);

struct CoveringReport {
  double setMass = 0;
  bool massOk = false;  ///< Pr{Xⁿ ∉ S} ≤ ε
  bool bijective = false;
  bool sizeConsistent = false;  ///< μλ = |S|
  bool povmsValid = false;
  double minSuccess = 0;
  bool successOk = false;  ///< minSuccess ≥ 1 − ε
  double lambdaBound = 0;  ///< 2^{n(H(X) − I(X;B) + δ)}
  bool lambdaWithinBound = false;
  double setBound = 0;  ///< 2^{n(H(X) + δ)}
  bool setWithinBound = false;

  bool structuralOk() const { return massOk && bijective && sizeConsistent && povmsValid && successOk; }
};

CoveringReport verifyCovering(const CoveringCode& code, const ClassicalQuantumState& cq, int n);

nlohmann::json toJson(const CoveringReport& r);
nlohmann::json toJson(const CoveringCode& code);

}  // namespace purity
