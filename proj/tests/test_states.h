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

#include <cmath>
#include <vector>

#include "purity/qmat.h"

namespace purity::testing {

/// ½(|00⟩⟨00| + |11⟩⟨11|).
inline BipartiteState phiBar() {
  const double p[4] = {0.5, 0.0, 0.0, 0.5};
  return BipartiteState(2, 2, DensityMatrix::diagonal(p));
}

inline BipartiteState bell() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return BipartiteState(2, 2, DensityMatrix::pure(v));
}

inline BipartiteState productPure(int dA = 2, int dB = 2) {
  return BipartiteState(dA, dB, DensityMatrix::basisState(dA * dB, 0));
}

/// ½|0⟩⟨0| ⊗ diag(.9,.1) + ½|1⟩⟨1| ⊗ diag(.1,.9).
inline BipartiteState noisyCorrelated() {
  const double p[4] = {0.45, 0.05, 0.05, 0.45};
  return BipartiteState(2, 2, DensityMatrix::diagonal(p));
}

inline DensityMatrix diag2(double a) {
  const double p[2] = {a, 1.0 - a};
  return DensityMatrix::diagonal(p);
}

inline double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

}  // namespace purity::testing
