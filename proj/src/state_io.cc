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

#include "purity/state_io.h"

#include <fstream>
#include <sstream>

#include "purity/errors.h"

namespace purity {

using nlohmann::json;

BipartiteState StateFile::asBipartite() const {
  if (!bipartite()) throw ValidationError("state file: expected bipartite dims [dA, dB]");
  return BipartiteState(dims[0], dims[1], rho);
}

StateFile parseState(const json& j) {
  if (!j.is_object()) throw ValidationError("state file: top level must be an object");
  if (!j.contains("dims") || !j["dims"].is_array()) throw ValidationError("state file: missing array \"dims\"");
  if (!j.contains("matrix") || !j["matrix"].is_array()) throw ValidationError("state file: missing array \"matrix\"");
  const json& jd = j["dims"];
  if (jd.empty() || jd.size() > 2) throw ValidationError("state file: \"dims\" must have 1 or 2 entries");
  std::vector<int> dims;
  int total = 1;
  for (std::size_t k = 0; k < jd.size(); ++k) {
    if (!jd[k].is_number_integer() || jd[k].get<int>() <= 0) {
      throw ValidationError("state file: /dims/" + std::to_string(k) + " must be a positive integer");
    }
    dims.push_back(jd[k].get<int>());
    total *= dims.back();
  }
  const json& jm = j["matrix"];
  if (static_cast<int>(jm.size()) != total) {
    throw ValidationError("state file: /matrix has " + std::to_string(jm.size()) + " rows, expected " + std::to_string(total));
  }
  Matrix m(total, total);
  for (int r = 0; r < total; ++r) {
    const json& row = jm[r];
    if (!row.is_array() || static_cast<int>(row.size()) != total) {
      throw ValidationError("state file: /matrix/" + std::to_string(r) + " must have " + std::to_string(total) + " entries");
    }
    for (int c = 0; c < total; ++c) {
      const json& e = row[c];
      std::string where = "/matrix/" + std::to_string(r) + "/" + std::to_string(c);
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ValidationError("state file: " + where + " must be [re, im]");
      }
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return StateFile{dims, DensityMatrix(std::move(m))};
}

StateFile readStateFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open state file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path + " at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return parseState(j);
}

json stateToJson(const DensityMatrix& rho, const std::vector<int>& dims) {
  json rows = json::array();
  for (int r = 0; r < rho.dim(); ++r) {
    json row = json::array();
    for (int c = 0; c < rho.dim(); ++c) row.push_back({rho.matrix()(r, c).real(), rho.matrix()(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return json{{"dims", dims}, {"matrix", std::move(rows)}};
}

}  // namespace purity
