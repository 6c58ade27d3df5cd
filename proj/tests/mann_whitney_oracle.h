// Copyright 2026 The AllocDSS Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Brute-force Mann-Whitney reference: pair counting and full relabelling.

#ifndef ALLOCDSS_TESTS_MANN_WHITNEY_ORACLE_H_
#define ALLOCDSS_TESTS_MANN_WHITNEY_ORACLE_H_

#include <cmath>
#include <cstdint>
#include <vector>

namespace allocdss::test {

// U of `a` by direct pair counting.
inline double PairU(const std::vector<double>& a, const std::vector<double>& b) {
  double u = 0.0;
  for (double x : a) {
    for (double y : b) u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
  }
  return u;
}

// Two-sided exact p by relabelling the pooled sample in every possible way.
inline double EnumeratedP(const std::vector<double>& a,
                          const std::vector<double>& b) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const size_t n = pooled.size(), na = a.size();
  const double mean = static_cast<double>(na * b.size()) / 2.0;
  const double observed = std::abs(PairU(a, b) - mean);
  int64_t total = 0, extreme = 0;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<size_t>(__builtin_popcount(mask)) != na) continue;
    std::vector<double> x, y;
    for (size_t k = 0; k < n; ++k) (mask >> k & 1u ? x : y).push_back(pooled[k]);
    ++total;
    if (std::abs(PairU(x, y) - mean) >= observed - 1e-9) ++extreme;
  }
  return static_cast<double>(extreme) / static_cast<double>(total);
}

}  // namespace allocdss::test

#endif  // ALLOCDSS_TESTS_MANN_WHITNEY_ORACLE_H_
