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

// Seeded randomized checks of the distance and entropy inequalities used by
// the converse and direct-coding arguments: triangle inequality, the
// pure-target fidelity bound, the gentle operator lemma, Fannes' inequality
// and subadditivity.

#include <cstdint>
#include <string>
#include <vector>

namespace purity {

struct InequalityTally {
  std::string name;
  int instances = 0;
  int violations = 0;      ///< lhs > rhs + slack
  double worstExcess = 0;  ///< max over instances of lhs − rhs (negative when all hold)
};

/// Runs `instances` random cases of every inequality; violations are counted
/// beyond `slack`.
std::vector<InequalityTally> runInequalitySuite(int instances, std::uint64_t seed, double slack = 1e-9);

}  // namespace purity
