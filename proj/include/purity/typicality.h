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

// Weakly typical projectors of ρ^{⊗n}, the relabeling unitary that packs a
// projector's support into a product register, and purity-concentration
// codes built from them.
//
// Everything here commutes with ρ^{⊗n}, so n-copy objects live in the
// eigenbasis as probability vectors over letter sequences. Sequence index
// s = Σ_k x_k d^{n−1−k} (first letter slowest).

#include <cstdint>
#include <vector>

#include "purity/qmat.h"

namespace purity {

inline constexpr std::uint64_t kSequenceGuard = std::uint64_t{1} << 20;

/// Eigen-decomposition used as the letter alphabet. Diagonal inputs keep the
/// computational basis and their diagonal order.
struct Spectrum {
  RealVector probs;  ///< nonnegative, sums to 1
  Matrix basis;      ///< columns are eigenvectors
};

Spectrum spectrumOf(const DensityMatrix& rho);

/// −(1/n) log₂ p(x^n) within [H − δ, H + δ].
bool isTypical(double logProb, int n, double entropy, double delta);

struct TypicalProjector {
  int n = 0;
  double delta = 0;
  int dim = 0;  ///< single-copy dimension d
  Spectrum spectrum;
  double entropy = 0;
  std::uint64_t size = 0;  ///< Tr Π
  double mass = 0;         ///< Tr ρ^{⊗n} Π
  std::vector<std::uint64_t> indexSet;  ///< ascending sequence indices

  bool contains(std::uint64_t index) const;
};

/// Throws GuardExceeded when dⁿ > 2²⁰.
TypicalProjector typicalProjector(const DensityMatrix& rho, int n, double delta);

struct TypeSummary {
  double mass;
  double logSize;  ///< log₂ Tr Π (−∞ when empty)
};

/// Typical mass and size summed over letter-count types; no sequence
/// enumeration, usable far beyond the enumeration guard.
TypeSummary typicalMass(const RealVector& probs, int n, double delta);

/// log₂ p of a sequence index under an n-fold product distribution.
double sequenceLogProb(std::uint64_t index, const RealVector& probs, int n);

struct RelabelResult {
  Matrix unitary;         ///< maps ρ's eigenvectors to product basis states
  std::vector<int> slot;  ///< eigenvector k → target index i·d₂ + c
  double outputDistance;  ///< ‖UρU† − (ΠρΠ)^B ⊗ |0⟩⟨0|^C‖₁
};

/// Packs the support of a projector Π commuting with ρ onto {|i⟩|0⟩} of a
/// d₁·d₂ register. Tr Π may be smaller than d₁. Throws ValidationError on
/// non-commuting input or when d₁·d₂ differs from the dimension.
RelabelResult relabelToProduct(const Matrix& pi, const Matrix& rho, int d1, int d2);

struct ConcentrationCode {
  int n = 0;
  double delta = 0;
  int dim = 0;
  Spectrum spectrum;
  std::uint64_t d1 = 0;  ///< garbage register
  std::uint64_t d2 = 0;  ///< pure register, target |0⟩
  double rate = 0;       ///< log₂ d₂ / n
  double achievedEpsilon = 0;  ///< ‖σ^{pure} − |0⟩⟨0|‖₁
  double typicalMass = 0;
  double keptMass = 0;        ///< mass of the d₁ sequences mapped to c = 0
  double relabelDistance = 0;  ///< 1 − typicalMass
  std::uint64_t typicalSize = 0;
  /// Sequence index → target index i·d₂ + c. A permutation of [dⁿ].
  std::vector<std::uint32_t> relabel;
};

ConcentrationCode buildConcentrationCode(const DensityMatrix& rho, int n, double delta);

/// Distribution of the pure register after applying the code to ρ^{⊗n}.
RealVector pureRegisterDistribution(const ConcentrationCode& code, const RealVector& probs);

/// Recomputes ‖σ^{pure} − |0⟩⟨0|‖₁ from the relabeling table.
double measuredEpsilon(const ConcentrationCode& code, const DensityMatrix& rho);

struct ConverseResult {
  double bound;  ///< log₂ d − H + 1/(e n) + ε log₂ d
  double slack;  ///< bound − rate
};

ConverseResult converseCheck(const ConcentrationCode& code, const DensityMatrix& rho);

}  // namespace purity
