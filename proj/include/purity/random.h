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

// Seeded generators for random states, unitaries and measurement operators.
// Used by the optimizer restarts, the inequality suite and the tests.

#include <cstdint>
#include <random>

#include "purity/qmat.h"

namespace purity {

/// mt19937_64 seeded from (seed, stream) so that independent restarts or
/// instances get reproducible, decorrelated streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

Matrix ginibre(int rows, int cols, Rng& rng);

/// Haar-random unitary (QR of a Ginibre matrix with phase fix).
Matrix randomUnitary(int dim, Rng& rng);

/// rows×cols matrix with orthonormal columns (rows ≥ cols).
Matrix randomIsometry(int rows, int cols, Rng& rng);

Vector randomPureVector(int dim, Rng& rng);

/// Random mixed state of the given rank via the induced (Ginibre) measure.
DensityMatrix randomDensityMatrix(int dim, Rng& rng, int rank = -1);

/// Random operator with spectrum in [0, 1].
Matrix randomContraction(int dim, Rng& rng);

/// Σ_k q_k α_k ⊗ β_k with `terms` random product components.
BipartiteState randomSeparableState(int dimA, int dimB, int terms, Rng& rng);

}  // namespace purity
