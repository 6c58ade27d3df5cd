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

#include "allocdss/rolling.h"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "allocdss/engine.h"

namespace allocdss {

AllocationResult HeuristicAllocator(const Instance& instance,
                                    const PlanConfig& plan,
                                    const ResidualCapacityMap& residuals) {
  return Allocate(instance, plan, residuals);
}

RollingOutcome RunRolling(std::span<const Instance> days,
                          const PlanConfig& plan, const Allocator& allocator,
                          const RollingOptions& options) {
  RollingOutcome out;
  std::vector<Order> backlog;
  std::chrono::sys_days date{options.start_date};

  for (const Instance& day : days) {
    Instance pool = day;
    pool.orders = backlog;
    pool.orders.insert(pool.orders.end(), day.orders.begin(), day.orders.end());

    const ResidualCapacityMap residuals = ResidualCapacities(pool);
    AllocationResult result = allocator(pool, plan, residuals);

    std::unordered_set<std::string> accepted(result.accepted.begin(),
                                             result.accepted.end());
    std::unordered_map<std::string, const Store*> stores;
    for (const Store& s : pool.stores) stores.emplace(s.id, &s);

    std::map<std::string, double> requested, shipped;
    backlog.clear();
    for (const Order& o : pool.orders) {
      requested[o.store_id] += o.volume;
      if (accepted.contains(o.id)) {
        shipped[o.store_id] += o.volume;
        continue;
      }
      const bool shippable = plan.IsActive(o.warehouse_id) &&
                             stores.at(o.store_id)->IsEligible(o.category_id);
      if (shippable) backlog.push_back(o);
    }

    std::vector<const Store*> by_id;
    for (const Store& s : pool.stores) by_id.push_back(&s);
    std::sort(by_id.begin(), by_id.end(),
              [](const Store* a, const Store* b) { return a->id < b->id; });
    for (const Store* s : by_id) {
      DailyServiceRecord record;
      record.date = std::chrono::year_month_day{date};
      record.store_id = s->id;
      record.requested = requested[s->id];
      record.shipped = shipped[s->id];
      record.store_limit =
          std::max(0.0, s->base_capacity - s->flow_through_deduction);
      out.records.push_back(std::move(record));
    }
    out.results.push_back(std::move(result));
    out.backlog_sizes.push_back(backlog.size());
    date += std::chrono::days{1};
  }
  return out;
}

}  // namespace allocdss
