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

#include "allocdss/engine.h"

#include <algorithm>
#include <chrono>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "allocdss/oracle.h"

namespace allocdss {

namespace {

using Clock = std::chrono::steady_clock;

// Resolves orders and completes instance validation. The full per-order
// validator only runs when the fused checks in Resolve cannot vouch for the
// orders (unsorted ids or an out-of-range value).
kernels::ResolvedInstance ResolveVerified(const Instance& instance,
                                          const PlanConfig& plan,
                                          Execution execution) {
  std::optional<kernels::ResolvedInstance> resolved;
  try {
    resolved = kernels::Resolve(instance, plan, execution);
  } catch (const InputError&) {
    ThrowIfViolations(ValidateInstance(instance), "invalid instance");
    throw;
  }
  if (!resolved->orders_verified) {
    ThrowIfViolations(ValidateInstance(instance), "invalid instance");
  }
  return std::move(*resolved);
}

double MillisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

}  // namespace

std::string_view ToString(Constraint constraint) {
  switch (constraint) {
    case Constraint::kStoreCapacity:
      return "store_capacity";
    case Constraint::kCategoryRouteLimit:
      return "category_route_limit";
    case Constraint::kNodeEligibility:
      return "node_eligibility";
    case Constraint::kWarehouseActivation:
      return "warehouse_activation";
    case Constraint::kBinarySelection:
      return "binary_selection";
  }
  return "unknown";
}

EligibilityResult FilterEligible(const Instance& instance,
                                 const PlanConfig& plan, Execution execution) {
  const kernels::ResolvedInstance resolved =
      kernels::Resolve(instance, plan, execution);
  const kernels::Screening screening = kernels::Screen(resolved, execution);
  EligibilityResult out;
  out.eligible.reserve(screening.eligible.size());
  for (const kernels::Candidate& c : screening.eligible) {
    out.eligible.push_back(instance.orders[c.order]);
  }
  for (const auto& [order, reason] : screening.rejected) {
    out.rejections.emplace(instance.orders[order].id, reason);
  }
  return out;
}

std::vector<Order> SortEligible(std::vector<Order> eligible,
                                const PlanConfig& plan) {
  const std::vector<uint32_t> id_rank = kernels::IdRanks(eligible);
  std::vector<kernels::Candidate> keys;
  keys.reserve(eligible.size());
  for (uint32_t i = 0; i < eligible.size(); ++i) {
    kernels::Candidate c;
    c.order = i;
    c.rank = plan.RankOf(eligible[i].warehouse_id);
    c.priority = eligible[i].priority;
    c.volume = eligible[i].volume;
    c.id_rank = id_rank[i];
    keys.push_back(c);
  }
  kernels::SortCandidates(keys, Execution::kSerial);
  std::vector<Order> sorted;
  sorted.reserve(eligible.size());
  for (const kernels::Candidate& c : keys) {
    sorted.push_back(std::move(eligible[c.order]));
  }
  return sorted;
}

AllocationResult Allocate(const Instance& instance, const PlanConfig& plan,
                          const ResidualCapacityMap& residuals,
                          const AllocateOptions& options) {
  ThrowIfViolations(ValidateNetwork(instance), "invalid instance");
  ThrowIfViolations(ValidatePlan(instance, plan), "invalid plan");

  std::vector<double> residual(instance.stores.size());
  for (size_t m = 0; m < instance.stores.size(); ++m) {
    residual[m] = residuals.at(instance.stores[m].id);
  }

  const Execution execution = options.execution;
  auto start = Clock::now();
  const kernels::ResolvedInstance resolved =
      ResolveVerified(instance, plan, execution);
  kernels::Screening screening = kernels::Screen(resolved, execution);
  const double filter_ms = MillisSince(start);

  start = Clock::now();
  kernels::SortCandidates(screening.eligible, execution);
  const double sort_ms = MillisSince(start);

  start = Clock::now();
  const kernels::PassResult pass = kernels::CumulativePass(
      resolved, screening.eligible, residual, execution);

  AllocationResult result;
  result.accepted.reserve(pass.accepted.size());
  for (uint32_t i : pass.accepted) {
    result.accepted.push_back(instance.orders[i].id);
  }
  for (size_t m = 0; m < instance.stores.size(); ++m) {
    result.store_loads.emplace(instance.stores[m].id, pass.store_load[m]);
  }
  for (size_t p = 0; p < instance.categories.size(); ++p) {
    const int32_t constrained = resolved.category_slot[p];
    if (constrained < 0) continue;
    for (uint32_t k = 0; k < resolved.num_routes; ++k) {
      result.category_loads.emplace(
          RouteCategory{instance.routes[k].id, instance.categories[p].id},
          pass.slot_load[resolved.LimitSlot(k, constrained)]);
    }
  }
  // Rejections and the objective are emitted in ascending id order so map
  // insertion is append-only and the objective sum is canonical.
  std::vector<uint32_t> by_id(instance.orders.size());
  for (uint32_t i = 0; i < by_id.size(); ++i) {
    by_id[resolved.order_id_rank[i]] = i;
  }
  constexpr uint8_t kNone = 0xff;
  std::vector<uint8_t> outcome(instance.orders.size(), kNone);
  constexpr uint8_t kAccepted = 0xfe;
  for (uint32_t i : pass.accepted) outcome[i] = kAccepted;
  for (const auto& rejected : {std::cref(screening.rejected),
                               std::cref(pass.rejected)}) {
    for (const auto& [order, reason] : rejected.get()) {
      outcome[order] = static_cast<uint8_t>(reason);
    }
  }
  // Same summation order as LambdaFor.
  double lambda = 1.0;
  {
    double sum = 0.0;
    for (double w : resolved.order_priority) sum += w;
    lambda += sum;
  }
  const int max_rank = MaxRankFor(instance, plan);
  for (uint32_t i : by_id) {
    const Order& o = instance.orders[i];
    if (outcome[i] == kAccepted) {
      result.objective_value += ObjectiveCoefficient(
          lambda, max_rank,
          resolved.warehouse_rank[resolved.order_warehouse[i]],
          resolved.order_priority[i]);
    } else if (outcome[i] != kNone) {
      result.rejections.emplace_hint(result.rejections.end(), o.id,
                                     static_cast<RejectionReason>(outcome[i]));
    }
  }
  const double allocate_ms = MillisSince(start);

  if (options.timings != nullptr) {
    options.timings->filter_ms = filter_ms;
    options.timings->sort_ms = sort_ms;
    options.timings->allocate_ms = allocate_ms;
  }
  return result;
}

std::vector<ConstraintViolation> CheckFeasibility(
    const Instance& instance, const PlanConfig& plan,
    const ResidualCapacityMap& residuals, const AllocationResult& result) {
  std::vector<ConstraintViolation> out;

  std::unordered_map<std::string, const Order*> orders;
  for (const Order& o : instance.orders) orders.emplace(o.id, &o);
  std::unordered_map<std::string, const Store*> stores;
  for (const Store& s : instance.stores) stores.emplace(s.id, &s);
  std::unordered_map<std::string, const Category*> categories;
  for (const Category& c : instance.categories) categories.emplace(c.id, &c);

  std::map<std::string, double> store_sum;
  std::map<RouteCategory, double> route_category_sum;
  std::unordered_set<std::string> seen;

  for (const std::string& id : result.accepted) {
    auto it = orders.find(id);
    if (it == orders.end()) {
      out.push_back({Constraint::kBinarySelection, id,
                     "accepted order '" + id + "' is not in the instance"});
      continue;
    }
    if (!seen.insert(id).second) {
      out.push_back({Constraint::kBinarySelection, id,
                     "order '" + id + "' accepted more than once"});
      continue;
    }
    const Order& o = *it->second;
    const Store& s = *stores.at(o.store_id);
    const Category& c = *categories.at(o.category_id);
    if (!s.IsEligible(o.category_id)) {
      out.push_back({Constraint::kNodeEligibility, id,
                     "order '" + id + "': store '" + s.id +
                         "' may not receive category '" + c.id + "'"});
    }
    if (!plan.IsActive(o.warehouse_id)) {
      out.push_back({Constraint::kWarehouseActivation, id,
                     "order '" + id + "' ships from inactive warehouse '" +
                         o.warehouse_id + "'"});
    }
    store_sum[s.id] += o.volume;
    if (c.constrained) route_category_sum[{s.route_id, c.id}] += o.volume;
  }

  for (const auto& [store_id, load] : store_sum) {
    const double capacity = residuals.at(store_id);
    if (load > capacity + kCapacityEpsilon) {
      out.push_back({Constraint::kStoreCapacity, store_id,
                     "store '" + store_id + "' load " + std::to_string(load) +
                         " exceeds residual capacity " +
                         std::to_string(capacity)});
    }
  }
  for (const auto& [key, load] : route_category_sum) {
    const double limit = categories.at(key.second)->route_limit.value_or(0.0);
    if (load > limit + kCapacityEpsilon) {
      out.push_back({Constraint::kCategoryRouteLimit,
                     key.first + "/" + key.second,
                     "category '" + key.second + "' on route '" + key.first +
                         "' load " + std::to_string(load) +
                         " exceeds route limit " + std::to_string(limit)});
    }
  }
  return out;
}

Instance NextDayInstance(const Instance& instance,
                         const AllocationResult& day1) {
  std::unordered_set<std::string> taken(day1.accepted.begin(),
                                        day1.accepted.end());
  Instance next = instance;
  std::erase_if(next.orders,
                [&](const Order& o) { return taken.contains(o.id); });
  next.planning_day = instance.planning_day + 1;
  return next;
}

AllocationResult SimulateNextDay(const Instance& instance,
                                 const PlanConfig& plan,
                                 const AllocationResult& day1,
                                 const AllocateOptions& options) {
  const ResidualCapacityMap residuals =
      ResidualCapacities(instance, day1.store_loads);
  return Allocate(NextDayInstance(instance, day1), plan, residuals, options);
}

}  // namespace allocdss
