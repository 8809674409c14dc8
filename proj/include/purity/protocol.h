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

// One-way local purity distillation at desk scale: the single-copy
// example, the coherent measurement, Bob's coherent decoder, the full
// n-copy protocol with its resource ledger, and the converse margin.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "purity/covering.h"
#include "purity/povm_opt.h"
#include "purity/qmat.h"
#include "purity/typicality.h"

namespace purity {

struct Ledger {
  int n = 1;
  std::uint64_t dC = 1;   ///< catalyst dimension
  std::uint64_t dAp = 1;  ///< Alice's pure output dimension
  std::uint64_t dBp = 1;  ///< Bob's pure output dimension
  double rate = 0;        ///< (1/n)(log₂ d_{ApBp} − log₂ d_C)
  double catalystRate = 0;
  double classicalBitsSent = 0;  ///< per copy

  double borrowedQubits() const;
  double returnedQubits() const;
  bool catalystReturned() const { return returnedQubits() >= borrowedQubits(); }
};

/// Fills rate and catalystRate from the integer dimensions.
Ledger makeLedger(int n, std::uint64_t dC, std::uint64_t dAp, std::uint64_t dBp, double classicalBitsSent);

struct TraceStep {
  std::string name;
  double distance;  ///< trace distance of the step's register to its target
};

struct ProtocolTrace {
  std::string path;  ///< "example", "classical" or "dense"
  std::vector<TraceStep> steps;
  double finalDistance = 0;  ///< ‖σ^{ApBp} − |0⟩⟨0|‖₁
  double epsilon = 0;
  double envelope = 0;  ///< 7ε + (2 + √8)√ε
  double decodeOverlap = 0;   ///< Σ p(m,l) ⟨0|σ^M_{ml}|0⟩ over S
  double decodeDistance = 0;  ///< ‖Σ p σ^M − |0⟩⟨0|‖₁
  double decodeBound = 0;     ///< 2√(1 − overlap)
  double measurementInfo = 0;  ///< I(Xⁿ;Bⁿ) of the measured ensemble
  std::uint64_t mu = 1;
  std::uint64_t lambda = 1;
  double coveringMinSuccess = 1;
  double setMass = 1;
};

struct DistillationResult {
  Ledger ledger;
  ProtocolTrace trace;
};

DistillationResult runExample1();

struct CoherentMeasurement {
  Matrix state;            ///< on X ⊗ A₂ ⊗ R
  std::vector<int> dims;   ///< {N, dA, dR}
  double a2Distance;       ///< ‖σ^{A₂} − |0⟩⟨0|‖₁
  RealVector outcomeProbs; ///< diagonal of σ^X
};

/// Applies Σ_x |x⟩ ⊗ |u_x⟩r_x followed by the controlled V_x with
/// V_x|u_x⟩ = |0⟩. `input` is a state on A ⊗ R with A of dimension λ.dim().
CoherentMeasurement coherentMeasurement(const RankOnePovm& lambda, const Matrix& input, int dimR);

/// V with V u = e₀ for a unit vector u.
Matrix unitaryToZero(const Vector& u);

/// Unitary on M ⊗ Bⁿ (M major) whose first block row is (√Υ⁽ˡ⁾_m)_m,
/// completed by Gram-Schmidt over the standard basis. Throws
/// CompletionError if the result is not unitary to 1e-9 and GuardExceeded
/// above dimension 1024.
Matrix bobDecoder(const CoveringCode& code, std::uint64_t l);

/// Per-outcome μ×μ decoder for commuting codes. `c` holds √Υ_m(y) for one
/// Bⁿ basis state y. Equal to the corresponding block of bobDecoder.
Matrix diagonalDecoderUnitary(const RealVector& c);

/// The ensemble {p(x), ρ_x^B} produced by Λ on A, keeping every outcome;
/// zero-probability outcomes carry |0⟩⟨0| as placeholder.
ClassicalQuantumState measurementEnsemble(const BipartiteState& s, const RankOnePovm& lambda);

enum class DistillPath { Auto, Classical, Dense };

struct DistillationConfig {
  int n = 8;
  double epsilon = 0.1;
  double delta = 0.1;
  std::uint64_t seed = 1;
  DistillPath path = DistillPath::Auto;
};

/// True when ρ^{AB} is diagonal and every nonzero row of Λ is a unit
/// multiple of a computational basis vector.
bool classicalPathApplies(const BipartiteState& s, const RankOnePovm& lambda);

DistillationResult runDistillation(const BipartiteState& s, const RankOnePovm& lambda, const DistillationConfig& cfg);

/// log dA + log dB − H(A) − H(B) + D⁽¹⁾(ρ).
double rateFormula(const BipartiteState& s, const OptimizerConfig& cfg);

/// Converse bound minus achieved rate, with δ = 1/(e n) + ε log₂(dA dB) and
/// ε the run's final distance.
double converseMargin(const Ledger& ledger, const BipartiteState& s, const ProtocolTrace& trace);

struct BootstrapRow {
  int blocks;
  double catalystRate;
  double netRate;
};

/// Reuses distilled output as the next block's catalyst: one borrow of
/// log₂ d_C qubits serves `blocks` blocks.
std::vector<BootstrapRow> bootstrapSummary(const Ledger& ledger, int maxBlocks);

nlohmann::json toJson(const Ledger& l);
nlohmann::json toJson(const ProtocolTrace& t);

}  // namespace purity
