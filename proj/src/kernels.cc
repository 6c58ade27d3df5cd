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

#include "allocdss/kernels.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <parallel/algorithm>
#include <string>
#include <unordered_map>

namespace allocdss::kernels {

namespace {

template <typename T>
std::unordered_map<std::string, uint32_t> IndexById(const std::vector<T>& v) {
  std::unordered_map<std::string, uint32_t> index;
  index.reserve(v.size());
  for (uint32_t i = 0; i < v.size(); ++i) index.emplace(v[i].id, i);
  return index;
}

uint32_t Lookup(const std::unordered_map<std::string, uint32_t>& index,
                const std::string& id) {
  auto it = index.find(id);
  return it == index.end() ? kUnresolved : it->second;
}

enum : uint8_t { kPending = 0, kAccept = 1, kRejectStore = 2, kRejectLimit = 3 };

// Shared acceptance test for one candidate against the live trackers.
inline uint8_t Decide(const Candidate& c, std::span<const double> residual,
                      const std::vector<double>& slot_limit,
                      uint32_t num_constrained, std::vector<double>& store_load,
                      std::vector<double>& slot_load) {
  if (store_load[c.store] + c.volume > residual[c.store] + kCapacityEpsilon) {
    return kRejectStore;
  }
  if (c.slot >= 0) {
    const double limit = slot_limit[c.slot % num_constrained];
    if (slot_load[c.slot] + c.volume > limit + kCapacityEpsilon) {
      return kRejectLimit;
    }
    slot_load[c.slot] += c.volume;
  }
  store_load[c.store] += c.volume;
  return kAccept;
}

}  // namespace

ResolvedInstance Resolve(const Instance& instance, const PlanConfig& plan,
                         Execution execution) {
  ResolvedInstance r;
  r.instance = &instance;
  r.num_routes = static_cast<uint32_t>(instance.routes.size());

  const auto route_index = IndexById(instance.routes);
  const auto store_index = IndexById(instance.stores);
  const auto category_index = IndexById(instance.categories);
  const auto warehouse_index = IndexById(instance.warehouses);

  r.category_slot.assign(instance.categories.size(), -1);
  for (size_t p = 0; p < instance.categories.size(); ++p) {
    const Category& c = instance.categories[p];
    if (c.constrained) {
      r.category_slot[p] = static_cast<int32_t>(r.num_constrained++);
      r.slot_limit.push_back(c.route_limit.value_or(0.0));
    }
  }

  const size_t num_categories = instance.categories.size();
  r.store_route.resize(instance.stores.size());
  r.eligibility.assign(instance.stores.size() * num_categories, 0);
  for (size_t m = 0; m < instance.stores.size(); ++m) {
    const Store& s = instance.stores[m];
    r.store_route[m] = Lookup(route_index, s.route_id);
    if (r.store_route[m] == kUnresolved) {
      throw InputError("store '" + s.id + "' references unknown route '" +
                       s.route_id + "'");
    }
    for (const auto& [category_id, flag] : s.eligibility) {
      const uint32_t p = Lookup(category_index, category_id);
      if (p != kUnresolved) r.eligibility[m * num_categories + p] = flag;
    }
  }

  r.warehouse_active.assign(instance.warehouses.size(), 0);
  r.warehouse_rank.assign(instance.warehouses.size(), 0);
  for (const auto& [id, setting] : plan.warehouses) {
    const uint32_t w = Lookup(warehouse_index, id);
    if (w == kUnresolved) continue;
    r.warehouse_active[w] = setting.active;
    r.warehouse_rank[w] = setting.rank;
  }

  const int64_t n = static_cast<int64_t>(instance.orders.size());
  r.order_store.resize(n);
  r.order_category.resize(n);
  r.order_warehouse.resize(n);
  r.order_volume.resize(n);
  r.order_priority.resize(n);
  int64_t first_bad = n;
  int64_t first_unchecked = n;  // unsorted id or out-of-range value
  auto resolve_one = [&](int64_t i) {
    const Order& o = instance.orders[i];
    r.order_store[i] = Lookup(store_index, o.store_id);
    r.order_category[i] = Lookup(category_index, o.category_id);
    r.order_warehouse[i] = Lookup(warehouse_index, o.warehouse_id);
    r.order_volume[i] = o.volume;
    r.order_priority[i] = o.priority;
    const bool in_order =
        i == 0 ? !o.id.empty() : instance.orders[i - 1].id < o.id;
    const bool values_ok = std::isfinite(o.volume) && o.volume > 0.0 &&
                           std::isfinite(o.priority) && o.priority >= 0.0;
    if (!in_order || !values_ok) first_unchecked = std::min(first_unchecked, i);
    return r.order_store[i] == kUnresolved ||
           r.order_category[i] == kUnresolved ||
           r.order_warehouse[i] == kUnresolved;
  };
  if (execution == Execution::kParallel) {
#pragma omp parallel for schedule(static) \
    reduction(min : first_bad, first_unchecked)
    for (int64_t i = 0; i < n; ++i) {
      if (resolve_one(i)) first_bad = std::min(first_bad, i);
    }
  } else {
    for (int64_t i = 0; i < n; ++i) {
      if (resolve_one(i)) {
        first_bad = i;
        break;
      }
    }
  }
  if (first_bad < n) {
    throw InputError("order '" + instance.orders[first_bad].id +
                     "' has an unresolved store, category or warehouse");
  }
  r.orders_verified = first_unchecked == n;
  if (r.orders_verified) {
    r.order_id_rank.resize(n);
    std::iota(r.order_id_rank.begin(), r.order_id_rank.end(), 0u);
  } else {
    r.order_id_rank = IdRanks(instance.orders);
  }
  return r;
}

Screening Screen(const ResolvedInstance& r, Execution execution) {
  const Instance& instance = *r.instance;
  const size_t num_categories = instance.categories.size();
  const int64_t n = static_cast<int64_t>(instance.orders.size());

  // 0 = eligible, 1 = warehouse inactive, 2 = ineligible node
  auto classify = [&](int64_t i) -> uint8_t {
    if (!r.warehouse_active[r.order_warehouse[i]]) return 1;
    if (!r.eligibility[r.order_store[i] * num_categories +
                       r.order_category[i]]) {
      return 2;
    }
    return 0;
  };
  auto make_candidate = [&](int64_t i) {
    const uint32_t store = r.order_store[i];
    const uint32_t route = r.store_route[store];
    const int32_t constrained = r.category_slot[r.order_category[i]];
    return Candidate{
        static_cast<uint32_t>(i),
        store,
        route,
        constrained < 0 ? -1
                        : static_cast<int32_t>(r.LimitSlot(route, constrained)),
        r.warehouse_rank[r.order_warehouse[i]],
        r.order_priority[i],
        r.order_volume[i],
        r.order_id_rank[i]};
  };
  auto reason_of = [](uint8_t status) {
    return status == 1 ? RejectionReason::kWarehouseInactive
                       : RejectionReason::kIneligibleNode;
  };

  Screening out;
  if (execution == Execution::kSerial) {
    for (int64_t i = 0; i < n; ++i) {
      const uint8_t status = classify(i);
      if (status == 0) {
        out.eligible.push_back(make_candidate(i));
      } else {
        out.rejected.emplace_back(static_cast<uint32_t>(i), reason_of(status));
      }
    }
    return out;
  }

  std::vector<uint8_t> status(n);
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < n; ++i) status[i] = classify(i);

  // Stable compaction: prefix sums over eligible flags.
  std::vector<int64_t> position(n + 1, 0);
  for (int64_t i = 0; i < n; ++i) {
    position[i + 1] = position[i] + (status[i] == 0 ? 1 : 0);
  }
  out.eligible.resize(position[n]);
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < n; ++i) {
    if (status[i] == 0) out.eligible[position[i]] = make_candidate(i);
  }
  out.rejected.reserve(n - position[n]);
  for (int64_t i = 0; i < n; ++i) {
    if (status[i] != 0) {
      out.rejected.emplace_back(static_cast<uint32_t>(i), reason_of(status[i]));
    }
  }
  return out;
}

std::vector<uint32_t> IdRanks(const std::vector<Order>& orders) {
  std::vector<uint32_t> rank(orders.size());
  std::iota(rank.begin(), rank.end(), 0u);
  const auto by_id = [](const Order& a, const Order& b) { return a.id < b.id; };
  if (std::is_sorted(orders.begin(), orders.end(), by_id)) return rank;
  std::vector<uint32_t> order = rank;
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    return orders[a].id < orders[b].id;
  });
  for (uint32_t k = 0; k < order.size(); ++k) rank[order[k]] = k;
  return rank;
}

bool DispatchBefore(const Candidate& a, const Candidate& b) {
  if (a.rank != b.rank) return a.rank < b.rank;
  if (a.priority != b.priority) return a.priority > b.priority;
  if (a.volume != b.volume) return a.volume > b.volume;
  return a.id_rank < b.id_rank;
}

void SortCandidates(std::vector<Candidate>& candidates, Execution execution) {
  auto before = [](const Candidate& a, const Candidate& b) {
    return DispatchBefore(a, b);
  };
  if (execution == Execution::kParallel) {
    __gnu_parallel::sort(candidates.begin(), candidates.end(), before);
  } else {
    std::sort(candidates.begin(), candidates.end(), before);
  }
}

PassResult CumulativePass(const ResolvedInstance& r,
                          std::span<const Candidate> sorted,
                          std::span<const double> residual,
                          Execution execution) {
  PassResult out;
  out.store_load.assign(r.store_route.size(), 0.0);
  out.slot_load.assign(r.num_limit_slots(), 0.0);
  const uint32_t nc = std::max<uint32_t>(r.num_constrained, 1);

  if (execution == Execution::kSerial) {
    for (const Candidate& c : sorted) {
      switch (Decide(c, residual, r.slot_limit, nc, out.store_load,
                     out.slot_load)) {
        case kAccept:
          out.accepted.push_back(c.order);
          break;
        case kRejectStore:
          out.rejected.emplace_back(c.order, RejectionReason::kStoreCapacity);
          break;
        default:
          out.rejected.emplace_back(c.order,
                                    RejectionReason::kCategoryRouteLimit);
          break;
      }
    }
    return out;
  }

  // Bucket sorted positions by route, keeping the dispatch order per route.
  const int64_t n = static_cast<int64_t>(sorted.size());
  std::vector<int64_t> route_begin(r.num_routes + 1, 0);
  for (const Candidate& c : sorted) ++route_begin[c.route + 1];
  for (uint32_t k = 0; k < r.num_routes; ++k) {
    route_begin[k + 1] += route_begin[k];
  }
  std::vector<int64_t> bucket(n);
  {
    std::vector<int64_t> fill(route_begin.begin(), route_begin.end() - 1);
    for (int64_t i = 0; i < n; ++i) bucket[fill[sorted[i].route]++] = i;
  }

  std::vector<uint8_t> decision(n, kPending);
  const int64_t num_routes = r.num_routes;
#pragma omp parallel for schedule(dynamic, 1)
  for (int64_t k = 0; k < num_routes; ++k) {
    for (int64_t j = route_begin[k]; j < route_begin[k + 1]; ++j) {
      const int64_t i = bucket[j];
      decision[i] = Decide(sorted[i], residual, r.slot_limit, nc,
                           out.store_load, out.slot_load);
    }
  }

  for (int64_t i = 0; i < n; ++i) {
    const uint32_t order = sorted[i].order;
    if (decision[i] == kAccept) {
      out.accepted.push_back(order);
    } else if (decision[i] == kRejectStore) {
      out.rejected.emplace_back(order, RejectionReason::kStoreCapacity);
    } else {
      out.rejected.emplace_back(order, RejectionReason::kCategoryRouteLimit);
    }
  }
  return out;
}

}  // namespace allocdss::kernels
