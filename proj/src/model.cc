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

#include "allocdss/model.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <span>
#include <unordered_map>
#include <unordered_set>

namespace allocdss {

namespace {

template <typename T>
void SortById(std::vector<T>& items) {
  std::sort(items.begin(), items.end(),
            [](const T& a, const T& b) { return a.id < b.id; });
}

template <typename T>
void CheckUniqueIds(const std::vector<T>& items, std::string_view kind,
                    std::vector<Violation>& out) {
  const auto by_id = [](const T& a, const T& b) { return a.id < b.id; };
  if (std::is_sorted(items.begin(), items.end(), by_id)) {
    // Canonical input: duplicates are adjacent.
    for (size_t i = 0; i < items.size(); ++i) {
      if (items[i].id.empty()) {
        out.push_back({std::string(kind) + " <empty>", "empty_id",
                       std::string(kind) + " has an empty id"});
      } else if (i > 0 && items[i].id == items[i - 1].id) {
        out.push_back({std::string(kind) + " " + items[i].id, "duplicate_id",
                       "duplicate " + std::string(kind) + " id '" +
                           items[i].id + "'"});
      }
    }
    return;
  }
  std::unordered_set<std::string_view> seen;
  seen.reserve(items.size());
  for (const T& item : items) {
    if (item.id.empty()) {
      out.push_back({std::string(kind) + " <empty>", "empty_id",
                     std::string(kind) + " has an empty id"});
    } else if (!seen.insert(item.id).second) {
      out.push_back({std::string(kind) + " " + item.id, "duplicate_id",
                     "duplicate " + std::string(kind) + " id '" + item.id +
                         "'"});
    }
  }
}

void CheckDistinctActiveRanks(
    const std::vector<std::pair<std::string, WarehouseSetting>>& settings,
    std::vector<Violation>& out) {
  std::map<int, std::string> owner;
  for (const auto& [id, setting] : settings) {
    if (setting.rank < 1) {
      out.push_back({"warehouse " + id, "rank_positive",
                     "warehouse '" + id + "' has rank " +
                         std::to_string(setting.rank) + " (must be >= 1)"});
    }
    if (!setting.active) continue;
    auto [it, inserted] = owner.emplace(setting.rank, id);
    if (!inserted) {
      out.push_back({"warehouse " + id, "duplicate_rank",
                     "active warehouses '" + it->second + "' and '" + id +
                         "' share rank " + std::to_string(setting.rank)});
    }
  }
}

}  // namespace

void Canonicalize(Instance& instance) {
  SortById(instance.orders);
  SortById(instance.stores);
  SortById(instance.routes);
  SortById(instance.categories);
  SortById(instance.warehouses);
}

int MaxRank(const Instance& instance) {
  int max_rank = 0;
  for (const Warehouse& w : instance.warehouses) {
    max_rank = std::max(max_rank, w.rank);
  }
  return max_rank;
}

std::string RoleLabel(const Warehouse& warehouse) {
  if (!warehouse.label.empty()) return warehouse.label;
  switch (warehouse.rank) {
    case 1:
      return "Warehouse-Primary";
    case 2:
      return "Warehouse-Auxiliary";
    case 3:
      return "Warehouse-InnerProducts";
    default:
      return "Warehouse-" + warehouse.id;
  }
}

bool PlanConfig::IsActive(const std::string& warehouse_id) const {
  auto it = warehouses.find(warehouse_id);
  return it != warehouses.end() && it->second.active;
}

int PlanConfig::RankOf(const std::string& warehouse_id) const {
  auto it = warehouses.find(warehouse_id);
  if (it == warehouses.end() || !it->second.active) {
    throw InputError("warehouse '" + warehouse_id +
                     "' is not active in the plan");
  }
  return it->second.rank;
}

int PlanConfig::ActiveCount() const {
  return static_cast<int>(std::count_if(
      warehouses.begin(), warehouses.end(),
      [](const auto& entry) { return entry.second.active; }));
}

PlanConfig DefaultPlan(const Instance& instance) {
  PlanConfig plan;
  for (const Warehouse& w : instance.warehouses) {
    plan.warehouses[w.id] = WarehouseSetting{w.active, w.rank};
  }
  return plan;
}

double ResidualCapacityMap::at(const std::string& store_id) const {
  auto it = residual.find(store_id);
  if (it == residual.end()) {
    throw InputError("no residual capacity for store '" + store_id + "'");
  }
  return it->second;
}

std::string_view ToString(RejectionReason reason) {
  switch (reason) {
    case RejectionReason::kIneligibleNode:
      return "INELIGIBLE_NODE";
    case RejectionReason::kWarehouseInactive:
      return "WAREHOUSE_INACTIVE";
    case RejectionReason::kStoreCapacity:
      return "STORE_CAPACITY";
    case RejectionReason::kCategoryRouteLimit:
      return "CATEGORY_ROUTE_LIMIT";
  }
  return "UNKNOWN";
}

RejectionReason ParseRejectionReason(std::string_view text) {
  for (RejectionReason r :
       {RejectionReason::kIneligibleNode, RejectionReason::kWarehouseInactive,
        RejectionReason::kStoreCapacity,
        RejectionReason::kCategoryRouteLimit}) {
    if (ToString(r) == text) return r;
  }
  throw InputError("unknown rejection reason '" + std::string(text) + "'");
}

namespace {

std::vector<Violation> Validate(const Instance& instance, bool with_orders) {
  std::vector<Violation> out;
  if (with_orders) CheckUniqueIds(instance.orders, "order", out);
  CheckUniqueIds(instance.stores, "store", out);
  CheckUniqueIds(instance.routes, "route", out);
  CheckUniqueIds(instance.categories, "category", out);
  CheckUniqueIds(instance.warehouses, "warehouse", out);

  if (instance.warehouses.empty()) {
    out.push_back({"instance", "no_warehouse",
                   "instance must contain at least one warehouse"});
  }

  std::unordered_set<std::string_view> routes, categories, warehouses, stores;
  for (const Route& r : instance.routes) routes.insert(r.id);
  for (const Warehouse& w : instance.warehouses) warehouses.insert(w.id);
  for (const Store& s : instance.stores) stores.insert(s.id);

  for (const Category& c : instance.categories) {
    categories.insert(c.id);
    if (c.constrained && !c.route_limit.has_value()) {
      out.push_back({"category " + c.id, "missing_route_limit",
                     "constrained category '" + c.id + "' has no route_limit"});
    }
    if (c.route_limit.has_value() &&
        !(std::isfinite(*c.route_limit) && *c.route_limit >= 0.0)) {
      out.push_back({"category " + c.id, "route_limit_nonnegative",
                     "category '" + c.id + "' route_limit must be >= 0"});
    }
  }

  for (const Store& s : instance.stores) {
    const std::string entity = "store " + s.id;
    if (!routes.contains(s.route_id)) {
      out.push_back({entity, "dangling_route",
                     "store '" + s.id + "' references unknown route '" +
                         s.route_id + "'"});
    }
    if (!(std::isfinite(s.base_capacity) && s.base_capacity >= 0.0)) {
      out.push_back({entity, "base_capacity_nonnegative",
                     "store '" + s.id + "' base_capacity must be >= 0"});
    }
    if (!(std::isfinite(s.flow_through_deduction) &&
          s.flow_through_deduction >= 0.0)) {
      out.push_back({entity, "flow_through_nonnegative",
                     "store '" + s.id +
                         "' flow_through_deduction must be >= 0"});
    }
    for (const Category& c : instance.categories) {
      if (!s.eligibility.contains(c.id)) {
        out.push_back({entity, "eligibility_incomplete",
                       "store '" + s.id + "' has no eligibility flag for '" +
                           c.id + "'"});
      }
    }
    for (const auto& [category_id, flag] : s.eligibility) {
      if (!categories.contains(category_id)) {
        out.push_back({entity, "dangling_category",
                       "store '" + s.id +
                           "' eligibility references unknown category '" +
                           category_id + "'"});
      }
    }
  }

  const std::span<const Order> orders =
      with_orders ? std::span<const Order>(instance.orders)
                  : std::span<const Order>();
  for (const Order& o : orders) {
    const auto entity = [&o] { return "order " + o.id; };
    if (!stores.contains(o.store_id)) {
      out.push_back({entity(), "dangling_store",
                     "order '" + o.id + "' references unknown store '" +
                         o.store_id + "'"});
    }
    if (!warehouses.contains(o.warehouse_id)) {
      out.push_back({entity(), "dangling_warehouse",
                     "order '" + o.id + "' references unknown warehouse '" +
                         o.warehouse_id + "'"});
    }
    if (!categories.contains(o.category_id)) {
      out.push_back({entity(), "dangling_category",
                     "order '" + o.id + "' references unknown category '" +
                         o.category_id + "'"});
    }
    if (!(std::isfinite(o.volume) && o.volume > 0.0)) {
      out.push_back({entity(), "volume_positive",
                     "order '" + o.id + "' volume must be > 0"});
    }
    if (!(std::isfinite(o.priority) && o.priority >= 0.0)) {
      out.push_back({entity(), "priority_nonnegative",
                     "order '" + o.id + "' priority must be >= 0"});
    }
  }

  std::vector<std::pair<std::string, WarehouseSetting>> settings;
  for (const Warehouse& w : instance.warehouses) {
    settings.emplace_back(w.id, WarehouseSetting{w.active, w.rank});
  }
  CheckDistinctActiveRanks(settings, out);
  return out;
}

}  // namespace

std::vector<Violation> ValidateInstance(const Instance& instance) {
  return Validate(instance, /*with_orders=*/true);
}

std::vector<Violation> ValidateNetwork(const Instance& instance) {
  return Validate(instance, /*with_orders=*/false);
}

std::vector<Violation> ValidatePlan(const Instance& instance,
                                    const PlanConfig& plan) {
  std::vector<Violation> out;
  std::unordered_set<std::string> known;
  for (const Warehouse& w : instance.warehouses) known.insert(w.id);
  for (const auto& [id, setting] : plan.warehouses) {
    if (!known.contains(id)) {
      out.push_back({"warehouse " + id, "unknown_warehouse",
                     "plan references unknown warehouse '" + id + "'"});
    }
  }
  CheckDistinctActiveRanks({plan.warehouses.begin(), plan.warehouses.end()},
                           out);
  if (plan.ActiveCount() == 0) {
    out.push_back({"plan", "no_active_warehouse",
                   "at least one warehouse must be active"});
  }
  return out;
}

ResidualCapacityMap ResidualCapacities(
    const Instance& instance, const StoreVolumeMap& prior_accepted_load) {
  ResidualCapacityMap out;
  std::unordered_set<std::string> known;
  for (const Store& s : instance.stores) known.insert(s.id);
  for (const auto& [store_id, load] : prior_accepted_load) {
    (void)load;
    if (!known.contains(store_id)) {
      throw InputError("prior accepted load references unknown store '" +
                       store_id + "'");
    }
  }
  for (const Store& s : instance.stores) {
    double prior = 0.0;
    if (auto it = prior_accepted_load.find(s.id);
        it != prior_accepted_load.end()) {
      prior = it->second;
    }
    out.residual[s.id] =
        std::max(0.0, s.base_capacity - s.flow_through_deduction - prior);
  }
  return out;
}

ResidualCapacityMap ResidualCapacities(const Instance& instance) {
  return ResidualCapacities(instance, StoreVolumeMap{});
}

void ThrowIfViolations(const std::vector<Violation>& violations,
                       std::string_view what) {
  if (violations.empty()) return;
  std::string message = std::string(what) + ": " +
                        std::to_string(violations.size()) + " violation(s)";
  const size_t shown = std::min<size_t>(violations.size(), 5);
  for (size_t i = 0; i < shown; ++i) {
    message += "\n  " + violations[i].message;
  }
  if (shown < violations.size()) message += "\n  ...";
  throw InputError(message);
}

std::string FormatDate(const std::chrono::year_month_day& date) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(date.year()),
                unsigned(date.month()), unsigned(date.day()));
  return buf;
}

std::chrono::year_month_day ParseDate(std::string_view text) {
  auto fail = [&]() -> std::chrono::year_month_day {
    throw InputError("invalid date '" + std::string(text) +
                     "' (expected YYYY-MM-DD)");
  };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return fail();
  int y = 0;
  unsigned m = 0, d = 0;
  auto parse = [&](std::string_view part, auto& value) {
    auto [ptr, ec] =
        std::from_chars(part.data(), part.data() + part.size(), value);
    return ec == std::errc() && ptr == part.data() + part.size();
  };
  if (!parse(text.substr(0, 4), y) || !parse(text.substr(5, 2), m) ||
      !parse(text.substr(8, 2), d)) {
    return fail();
  }
  std::chrono::year_month_day date{std::chrono::year{y}, std::chrono::month{m},
                                   std::chrono::day{d}};
  if (!date.ok()) return fail();
  return date;
}

}  // namespace allocdss
