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

// Warehouse-aware cumulative allocation.
//
// One run is a fixed pipeline:
//   1. drop orders from inactive warehouses (WAREHOUSE_INACTIVE) and orders
//      whose store may not receive the category (INELIGIBLE_NODE);
//   2. sort the rest by warehouse rank asc, priority desc, volume desc,
//      order id asc;
//   3. walk the sorted list once, accepting an order iff its store load stays
//      within the residual capacity and, for constrained categories, the
//      (route, category) load stays within the category's route limit.
//      Trackers are updated immediately; nothing is revisited.
//
// Every function here is pure and reentrant.

#ifndef ALLOCDSS_ENGINE_H_
#define ALLOCDSS_ENGINE_H_

#include <map>
#include <string>
#include <vector>

#include "allocdss/kernels.h"
#include "allocdss/model.h"

namespace allocdss {

struct PhaseTimings {
  double filter_ms = 0.0;
  double sort_ms = 0.0;
  double allocate_ms = 0.0;
  double export_ms = 0.0;
};

struct AllocateOptions {
  Execution execution = Execution::kSerial;
  PhaseTimings* timings = nullptr;  // optional, filled when non-null
};

struct EligibilityResult {
  std::vector<Order> eligible;
  std::map<std::string, RejectionReason> rejections;
};

EligibilityResult FilterEligible(const Instance& instance,
                                 const PlanConfig& plan,
                                 Execution execution = Execution::kSerial);

// Every order's warehouse must be active in `plan`.
std::vector<Order> SortEligible(std::vector<Order> eligible,
                                const PlanConfig& plan);

// Throws InputError if the instance or plan is invalid, or if `residuals`
// does not cover every store.
AllocationResult Allocate(const Instance& instance, const PlanConfig& plan,
                          const ResidualCapacityMap& residuals,
                          const AllocateOptions& options = {});

enum class Constraint {
  kStoreCapacity,
  kCategoryRouteLimit,
  kNodeEligibility,
  kWarehouseActivation,
  kBinarySelection,  // unknown or duplicated order in the accepted list
};

std::string_view ToString(Constraint constraint);

struct ConstraintViolation {
  Constraint constraint;
  std::string subject;  // store id, "route/category", or order id
  std::string message;
};

// Recomputes every constraint from the raw orders; shares no state with
// Allocate. Empty iff `result.accepted` is feasible.
std::vector<ConstraintViolation> CheckFeasibility(
    const Instance& instance, const PlanConfig& plan,
    const ResidualCapacityMap& residuals, const AllocationResult& result);

// Reruns the pipeline for the next day: residuals shrink by day-1 store
// loads, day-1 accepted orders leave the pool, route-category trackers start
// from zero.
AllocationResult SimulateNextDay(const Instance& instance,
                                 const PlanConfig& plan,
                                 const AllocationResult& day1,
                                 const AllocateOptions& options = {});

// The order pool and residuals SimulateNextDay runs on.
Instance NextDayInstance(const Instance& instance, const AllocationResult& day1);

}  // namespace allocdss

#endif  // ALLOCDSS_ENGINE_H_
