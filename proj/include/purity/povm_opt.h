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

// One-way deficit D⁽¹⁾(ρ^{AB}) = max over rank-1 POVMs Λ on A of I(X;B),
// local purity κ and the finite-copy levels of the one-way local purity.
//
// A rank-1 POVM with N outcomes on C^d is stored as an N×d matrix M whose
// rows r_x give the elements Λ_x = r_x† r_x. Completeness Σ Λ_x = 1 is the
// isometry condition M†M = 1, so the optimizer works on the complex Stiefel
// manifold.

#include <cstdint>
#include <vector>

#include "purity/qmat.h"

namespace purity {

class RankOnePovm {
 public:
  /// Validates M†M = 1 to 1e-9 entrywise.
  explicit RankOnePovm(Matrix rows);

  /// Projective measurement in the computational basis, padded with zero
  /// rows up to `outcomes` (default: d).
  static RankOnePovm computationalBasis(int dim, int outcomes = -1);

  /// Projective measurement onto the columns of a unitary, zero-padded.
  static RankOnePovm fromBasis(const Matrix& unitary, int outcomes = -1);

  /// Converts a general POVM; throws ValidationError if an element has rank
  /// above one.
  static RankOnePovm fromPovm(const Povm& povm);

  int outcomes() const { return static_cast<int>(rows_.rows()); }
  int dim() const { return static_cast<int>(rows_.cols()); }
  const Matrix& rows() const { return rows_; }

  /// m_x = r_x†, so Λ_x = m_x m_x†.
  Vector vector(int x) const { return rows_.row(x).adjoint(); }
  Matrix element(int x) const { return rows_.row(x).adjoint() * rows_.row(x); }
  Povm toPovm() const;

  /// Same measurement with `outcomes` rows (zero rows appended).
  RankOnePovm padded(int outcomes) const;

 private:
  Matrix rows_;
};

/// Tensor product Λ ⊗ Λ' (row index x·N' + x').
RankOnePovm tensorPovm(const RankOnePovm& a, const RankOnePovm& b);

struct OptimizerConfig {
  int outcomes = 0;  ///< 0 → d²
  int restarts = 32;
  int maxIters = 400;
  double gradTol = 1e-9;
  std::uint64_t seed = 1;
  int threads = 0;  ///< 0 → hardware concurrency
  /// Extra starting points; they are ascended like every other restart.
  std::vector<RankOnePovm> warmStarts;
  /// Adds the computational basis and the eigenbasis of ρ^A as warm starts.
  bool defaultWarmStarts = true;
};

struct DeficitResult {
  double value = 0;  ///< lower bound on D⁽¹⁾
  RankOnePovm argmax = RankOnePovm::computationalBasis(1);
  std::vector<double> trace;  ///< best value per restart (warm starts first)
  double ceiling = 0;         ///< min(H(A), H(B), I(A;B))
  int bestRestart = 0;
  bool converged = true;  ///< false → best restart stopped at maxIters
  int outcomes = 0;
};

/// I(X;B) of (Λ ⊗ 1)(ρ) in bits.
double objective(const RankOnePovm& povm, const BipartiteState& s);

/// Objective and its Euclidean gradient with respect to the rows of M.
/// Conditional states are floored at 1e-12 inside the logarithm.
double objectiveWithGradient(const RankOnePovm& povm, const BipartiteState& s, Matrix& gradient);

DeficitResult oneShotDeficit(const BipartiteState& s, const OptimizerConfig& cfg);

/// Exhaustive (θ, φ) grid over projective qubit measurements plus seeded
/// random 3- and 4-outcome rank-1 POVMs. A lower bound on D⁽¹⁾.
double oracleGridQubit(const BipartiteState& s, int resolution, std::uint64_t seed = 0, int randomSamples = 256);

/// log₂ d − H(ρ).
double kappaLocal(const DensityMatrix& rho);

/// ρ^{⊗n} regrouped as A^n | B^n. Throws GuardExceeded above total
/// dimension 4096.
BipartiteState tensorPower(const BipartiteState& s, int n);

/// ρ ⊗ σ regrouped as AA' | BB'.
BipartiteState tensorBipartite(const BipartiteState& rho, const BipartiteState& sigma);

/// (1/n) D⁽¹⁾(ρ^{⊗n}). For n > 1 the n-fold product of the single-copy
/// optimum is supplied as a warm start.
DeficitResult classicalDeficitResult(const BipartiteState& s, int n, const OptimizerConfig& cfg);
double classicalDeficit(const BipartiteState& s, int n, const OptimizerConfig& cfg);

/// log dA + log dB − H(A) − H(B) + (1/n) D⁽¹⁾(ρ^{⊗n}).
double kappaOneWayLevel(const BipartiteState& s, int n, const OptimizerConfig& cfg);

struct AdditivityResult {
  double lhs;         ///< D⁽¹⁾(ρ ⊗ σ), σ maximally mixed on the same dims
  double rhs;         ///< D⁽¹⁾(ρ)
  double sigmaAlone;  ///< D⁽¹⁾(σ)
};

AdditivityResult additivityCheck(const BipartiteState& s, const OptimizerConfig& cfg);

}  // namespace purity
