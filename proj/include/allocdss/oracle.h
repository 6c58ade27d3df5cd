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

// Exact solver for the 0-1 allocation model on small instances.
//
//   max  sum_i (lambda * (max_rank + 1 - rank(w(i))) + priority_i) * x_i
//   s.t. store loads <= residual capacity
//        (route, constrained category) loads <= route limit
//        x_i = 0 for ineligible orders and inactive warehouses
//        x_i in {0, 1}
//
// Two independent search routes are provided: plain enumeration of all
// subsets of the eligible orders, and depth-first branch and bound bounded by
// a per-store fractional knapsack relaxation. Ties between distinct optimal
// sets go to the lexicographically smallest sorted id sequence.

#ifndef ALLOCDSS_ORACLE_H_
#define ALLOCDSS_ORACLE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "allocdss/model.h"

namespace allocdss {

// lambda = 1 + sum of all order priorities. Any one-unit difference in the
// rank term then outweighs every achievable difference in priority sums.
double LambdaFor(const Instance& instance);

// Largest rank among the instance warehouses and the plan's active ranks.
int MaxRankFor(const Instance& instance, const PlanConfig& plan);

// lambda * (max_rank + 1 - rank) + priority
inline double ObjectiveCoefficient(double lambda, int max_rank, int rank,
                                   double priority) {
  return lambda * static_cast<double>(max_rank + 1 - rank) + priority;
}

// Sum of coefficients over `chosen`, accumulated in ascending id order so the
// value does not depend on the order ids are listed in. Unknown ids throw
// InputError.
double ObjectiveValue(const Instance& instance, const PlanConfig& plan,
                      std::span<const std::string> chosen);

struct SearchBudget {
  int64_t max_nodes = 200'000'000;
  double max_seconds = 0.0;  // <= 0 means no wall-clock limit
};

struct OracleSolution {
  std::vector<std::string> chosen;  // sorted ascending
  double objective = 0.0;
  bool optimal = false;
  int64_t node_count = 0;
};

inline constexpr int kMaxEnumerationOrders = 24;

// Enumerates all 2^n subsets of eligible orders. Throws InputError when more
// than kMaxEnumerationOrders orders are eligible.
OracleSolution SolveByEnumeration(const Instance& instance,
                                  const PlanConfig& plan,
                                  const ResidualCapacityMap& residuals);

OracleSolution SolveExact(const Instance& instance, const PlanConfig& plan,
                          const ResidualCapacityMap& residuals,
                          const SearchBudget& budget = {});

struct GapReport {
  double heuristic_objective = 0.0;
  double oracle_objective = 0.0;
  double relative_gap = 0.0;  // (oracle - heuristic) / max(oracle, eps)
  bool usable = false;        // false when the oracle did not finish
  int64_t oracle_nodes = 0;
};

GapReport ComputeGap(const Instance& instance, const PlanConfig& plan,
                     const ResidualCapacityMap& residuals,
                     const SearchBudget& budget = {});

}  // namespace allocdss

#endif  // ALLOCDSS_ORACLE_H_
