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

// Domain types for one planning cycle of store replenishment: pending order
// lines, capacity-constrained stores grouped on delivery routes, product
// categories with per-route volume caps, and ranked outbound warehouses.
//
// All types are plain values. Once an Instance is built it is treated as
// immutable and can be shared read-only between concurrent allocation runs.

#ifndef ALLOCDSS_MODEL_H_
#define ALLOCDSS_MODEL_H_

#include <chrono>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace allocdss {

// Absolute tolerance used by every "load <= capacity" comparison.
inline constexpr double kCapacityEpsilon = 1e-9;

// Raised for malformed or inconsistent caller input (bad files, dangling
// references, unknown ids). Maps to CLI exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Order {
  std::string id;
  std::string store_id;
  std::string warehouse_id;
  std::string category_id;
  double volume = 0.0;    // dimensional weight (Desi), > 0
  double priority = 0.0;  // business priority weight, >= 0

  bool operator==(const Order&) const = default;
};

struct Store {
  std::string id;
  std::string route_id;
  double base_capacity = 0.0;
  double flow_through_deduction = 0.0;
  // Category id -> may this store receive the category.
  std::map<std::string, bool> eligibility;

  bool IsEligible(const std::string& category_id) const {
    auto it = eligibility.find(category_id);
    return it != eligibility.end() && it->second;
  }

  bool operator==(const Store&) const = default;
};

struct Route {
  std::string id;

  bool operator==(const Route&) const = default;
};

struct Category {
  std::string id;
  bool constrained = false;
  // Cumulative cap applied independently on every route. Only meaningful
  // when `constrained` is set.
  std::optional<double> route_limit;

  bool operator==(const Category&) const = default;
};

struct Warehouse {
  std::string id;
  bool active = true;
  int rank = 1;  // smaller dispatches first
  // Display label such as "Warehouse-Primary". Empty means derive from rank.
  std::string label;

  bool operator==(const Warehouse&) const = default;
};

struct Instance {
  std::vector<Order> orders;
  std::vector<Store> stores;
  std::vector<Route> routes;
  std::vector<Category> categories;
  std::vector<Warehouse> warehouses;
  int planning_day = 1;

  bool operator==(const Instance&) const = default;
};

// Sorts every collection by id (and store eligibility is already keyed).
void Canonicalize(Instance& instance);

// Largest warehouse rank appearing in the instance (0 when there are none).
int MaxRank(const Instance& instance);

// Role label used for display; falls back to rank position when the warehouse
// carries no explicit label.
std::string RoleLabel(const Warehouse& warehouse);

struct WarehouseSetting {
  bool active = false;
  int rank = 1;

  bool operator==(const WarehouseSetting&) const = default;
};

// Planner controls for one run. Warehouses absent from the map are inactive.
struct PlanConfig {
  std::map<std::string, WarehouseSetting> warehouses;

  bool IsActive(const std::string& warehouse_id) const;
  // Rank of an active warehouse; throws InputError for inactive/unknown ids.
  int RankOf(const std::string& warehouse_id) const;
  int ActiveCount() const;

  bool operator==(const PlanConfig&) const = default;
};

// Plan mirroring the activation flags and ranks stored on the warehouses.
PlanConfig DefaultPlan(const Instance& instance);

// Store id -> volume. Used for residual capacities and prior accepted loads.
using StoreVolumeMap = std::map<std::string, double>;

// Residual receiving capacity per store for the planning day.
struct ResidualCapacityMap {
  StoreVolumeMap residual;

  double at(const std::string& store_id) const;
  bool operator==(const ResidualCapacityMap&) const = default;
};

enum class RejectionReason {
  kIneligibleNode,
  kWarehouseInactive,
  kStoreCapacity,
  kCategoryRouteLimit,
};

std::string_view ToString(RejectionReason reason);
RejectionReason ParseRejectionReason(std::string_view text);

// (route id, category id)
using RouteCategory = std::pair<std::string, std::string>;

struct AllocationResult {
  std::vector<std::string> accepted;  // acceptance sequence
  StoreVolumeMap store_loads;         // every store, zero if nothing accepted
  std::map<RouteCategory, double> category_loads;  // constrained pairs only
  std::map<std::string, RejectionReason> rejections;
  double objective_value = 0.0;

  bool operator==(const AllocationResult&) const = default;
};

struct DailyServiceRecord {
  std::chrono::year_month_day date;
  std::string store_id;
  double requested = 0.0;  // R
  double shipped = 0.0;    // S
  double store_limit = 0.0;

  bool operator==(const DailyServiceRecord&) const = default;
};

// A single broken invariant. `entity` names the offending object
// (e.g. "order o17"), `rule` is a short machine-readable tag.
struct Violation {
  std::string entity;
  std::string rule;
  std::string message;

  bool operator==(const Violation&) const = default;
};

std::vector<Violation> ValidateInstance(const Instance& instance);
// ValidateInstance without the per-order checks.
std::vector<Violation> ValidateNetwork(const Instance& instance);

// Checks a plan against an instance: unknown warehouses, rank >= 1, distinct
// ranks among active warehouses, at least one active warehouse.
std::vector<Violation> ValidatePlan(const Instance& instance,
                                    const PlanConfig& plan);

// residual(m) = max(0, base(m) - flow_through(m) - prior(m)). Stores missing
// from `prior_accepted_load` count as zero prior load; unknown store ids in it
// are an InputError.
ResidualCapacityMap ResidualCapacities(const Instance& instance,
                                       const StoreVolumeMap& prior_accepted_load);
ResidualCapacityMap ResidualCapacities(const Instance& instance);

// Throws InputError listing the violations when the list is non-empty.
void ThrowIfViolations(const std::vector<Violation>& violations,
                       std::string_view what);

std::string FormatDate(const std::chrono::year_month_day& date);
// Parses YYYY-MM-DD; throws InputError on malformed or invalid dates.
std::chrono::year_month_day ParseDate(std::string_view text);

}  // namespace allocdss

#endif  // ALLOCDSS_MODEL_H_
