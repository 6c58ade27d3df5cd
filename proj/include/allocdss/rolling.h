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

// Rolling multi-day evaluation: rerun an allocator once per planning cycle
// on refreshed inputs and record what each store asked for and received.
//
// Per day t:
//   pool      = backlog from earlier days (arrival order) + day t's orders
//   residual  = base - flow_through (a fresh receiving day)
//   R(m, t)   = pool volume destined to store m
//   S(m, t)   = accepted volume for store m
//   limit(m)  = max(0, base - flow_through)
//   backlog  <- pool minus accepted orders, minus orders that can never ship
//               under the plan (ineligible node or inactive warehouse)

#ifndef ALLOCDSS_ROLLING_H_
#define ALLOCDSS_ROLLING_H_

#include <chrono>
#include <functional>
#include <span>
#include <vector>

#include "allocdss/model.h"

namespace allocdss {

using Allocator = std::function<AllocationResult(
    const Instance&, const PlanConfig&, const ResidualCapacityMap&)>;

// The warehouse-aware cumulative heuristic (Allocate with default options).
AllocationResult HeuristicAllocator(const Instance& instance,
                                    const PlanConfig& plan,
                                    const ResidualCapacityMap& residuals);

struct RollingOptions {
  std::chrono::year_month_day start_date{std::chrono::year{2026},
                                         std::chrono::January,
                                         std::chrono::day{1}};
};

struct RollingOutcome {
  std::vector<DailyServiceRecord> records;  // day-major, stores by id
  std::vector<AllocationResult> results;    // one per day
  std::vector<size_t> backlog_sizes;        // after each day
};

// `days` are the per-day order pools (e.g. GenerateDailySeries). Stores and
// capacities are taken from each day's instance.
RollingOutcome RunRolling(std::span<const Instance> days,
                          const PlanConfig& plan, const Allocator& allocator,
                          const RollingOptions& options = {});

}  // namespace allocdss

#endif  // ALLOCDSS_ROLLING_H_
