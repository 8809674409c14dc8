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

// State file format:
//   {"dims": [dA, dB], "matrix": [[[re, im], ...], ...]}
// Row-major entries; "dims": [d] for a monopartite state.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "purity/qmat.h"

namespace purity {

struct StateFile {
  std::vector<int> dims;
  DensityMatrix rho;

  bool bipartite() const { return dims.size() == 2; }
  BipartiteState asBipartite() const;
};

/// Throws ValidationError on schema or state errors, with the JSON path of
/// the offending entry.
StateFile parseState(const nlohmann::json& j);
StateFile readStateFile(const std::string& path);

nlohmann::json stateToJson(const DensityMatrix& rho, const std::vector<int>& dims);

}  // namespace purity
