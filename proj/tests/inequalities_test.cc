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

#include "purity/inequalities.h"

#include <gtest/gtest.h>

namespace purity {
namespace {

TEST(InequalitySuite, NoViolations) {
  std::vector<InequalityTally> tallies = runInequalitySuite(200, 99);
  ASSERT_EQ(tallies.size(), 5u);
  for (const InequalityTally& t : tallies) {
    EXPECT_EQ(t.instances, 200) << t.name;
    EXPECT_EQ(t.violations, 0) << t.name;
    EXPECT_LE(t.worstExcess, 1e-9) << t.name;
  }
}

TEST(InequalitySuite, Deterministic) {
  std::vector<InequalityTally> a = runInequalitySuite(20, 5);
  std::vector<InequalityTally> b = runInequalitySuite(20, 5);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].worstExcess, b[i].worstExcess);
}

}  // namespace
}  // namespace purity
