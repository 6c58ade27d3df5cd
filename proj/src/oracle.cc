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

#include "allocdss/oracle.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "allocdss/engine.h"

namespace allocdss {

namespace {

// One eligible order, with resolved tracker indices.
struct Item {
  std::string id;
  int store = 0;
  int slot = -1;  // constrained (route, category) tracker, -1 if none
  double volume = 0.0;
  double coefficient = 0.0;
};

// Eligible orders sorted by id, plus the capacities they compete for.
struct Model {
  std::vector<Item> items;
  std::vector<double> store_capacity;
  std::vector<double> slot_capacity;
};

Model BuildModel(const Instance& instance, const PlanConfig& plan,
                 const ResidualCapacityMap& residuals) {
  ThrowIfViolations(ValidateInstance(instance), "invalid instance");
  ThrowIfViolations(ValidatePlan(instance, plan), "invalid plan");

  Model model;
  std::unordered_map<std::string, int> store_index;
  for (const Store& s : instance.stores) {
    store_index.emplace(s.id, static_cast<int>(model.store_capacity.size()));
    model.store_capacity.push_back(residuals.at(s.id));
  }
  std::unordered_map<std::string, const Store*> stores;
  for (const Store& s : instance.stores) stores.emplace(s.id, &s);
  std::unordered_map<std::string, const Category*> categories;
  for (const Category& c : instance.categories) categories.emplace(c.id, &c);

  std::map<RouteCategory, int> slot_index;
  const double lambda = LambdaFor(instance);
  const int max_rank = MaxRankFor(instance, plan);
  for (const Order& o : instance.orders) {
    const Store& s = *stores.at(o.store_id);
    if (!plan.IsActive(o.warehouse_id) || !s.IsEligible(o.category_id)) {
      continue;
    }
    Item item;
    item.id = o.id;
    item.store = store_index.at(o.store_id);
    item.volume = o.volume;
    item.coefficient = ObjectiveCoefficient(
        lambda, max_rank, plan.RankOf(o.warehouse_id), o.priority);
    const Category& c = *categories.at(o.category_id);
    if (c.constrained) {
      auto [it, inserted] = slot_index.emplace(
          RouteCategory{s.route_id, c.id},
          static_cast<int>(model.slot_capacity.size()));
      if (inserted) model.slot_capacity.push_back(c.route_limit.value_or(0.0));
      item.slot = it->second;
    }
    model.items.push_back(std::move(item));
  }
  std::sort(model.items.begin(), model.items.end(),
            [](const Item& a, const Item& b) { return a.id < b.id; });
  return model;
}

double Tolerance(double reference) {
  return 1e-9 * std::max(1.0, std::abs(reference));
}

// Incumbent with the deterministic tie rule. `chosen` holds item indices in
// ascending order, which is ascending id order.
struct Incumbent {
  double objective = 0.0;
  std::vector<int> chosen;

  void Offer(double objective_value, const std::vector<int>& candidate) {
    const double tol = Tolerance(objective);
    if (objective_value > objective + tol ||
        (std::abs(objective_value - objective) <= tol &&
         std::lexicographical_compare(candidate.begin(), candidate.end(),
                                      chosen.begin(), chosen.end()))) {
      objective = objective_value;
      chosen = candidate;
    }
  }
};

OracleSolution ToSolution(const Model& model, const Incumbent& best,
                          bool optimal, int64_t nodes) {
  OracleSolution out;
  for (int i : best.chosen) out.chosen.push_back(model.items[i].id);
  out.objective = best.objective;
  out.optimal = optimal;
  out.node_count = nodes;
  return out;
}

class BranchAndBound {
 public:
  BranchAndBound(const Model& model, const SearchBudget& budget)
      : model_(model), budget_(budget) {
    const int n = static_cast<int>(model.items.size());
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return model.items[a].coefficient > model.items[b].coefficient;
    });
    position_.resize(n);
    for (int d = 0; d < n; ++d) position_[order_[d]] = d;

    by_ratio_.resize(model.store_capacity.size());
    for (int i = 0; i < n; ++i) by_ratio_[model.items[i].store].push_back(i);
    for (auto& list : by_ratio_) {
      std::stable_sort(list.begin(), list.end(), [&](int a, int b) {
        return model.items[a].coefficient / model.items[a].volume >
               model.items[b].coefficient / model.items[b].volume;
      });
    }
    store_left_ = model.store_capacity;
    slot_left_ = model.slot_capacity;
    taken_.assign(n, false);
  }

  OracleSolution Run() {
    start_ = std::chrono::steady_clock::now();
    Visit(0, 0.0);
    return ToSolution(model_, best_, !aborted_, nodes_);
  }

 private:
  // Per-store fractional knapsack over undecided items; ignores category
  // limits and integrality, so it never underestimates.
  double UpperBound(int depth) const {
    double bound = 0.0;
    for (size_t m = 0; m < by_ratio_.size(); ++m) {
      double room = store_left_[m];
      for (int i : by_ratio_[m]) {
        if (position_[i] < depth) continue;
        const Item& item = model_.items[i];
        if (item.volume <= room) {
          room -= item.volume;
          bound += item.coefficient;
        } else {
          bound += item.coefficient * std::max(0.0, room) / item.volume;
          break;
        }
      }
    }
    return bound;
  }

  bool OutOfBudget() {
    if (nodes_ > budget_.max_nodes) return true;
    if (budget_.max_seconds > 0.0 && (nodes_ & 0xfff) == 0) {
      const double elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start_)
                                 .count();
      if (elapsed > budget_.max_seconds) return true;
    }
    return false;
  }

  void Visit(int depth, double value) {
    if (aborted_) return;
    ++nodes_;
    if (OutOfBudget()) {
      aborted_ = true;
      return;
    }
    const int n = static_cast<int>(order_.size());
    if (depth == n) {
      std::vector<int> chosen;
      double objective = 0.0;
      for (int i = 0; i < n; ++i) {
        if (taken_[i]) {
          chosen.push_back(i);
          objective += model_.items[i].coefficient;
        }
      }
      best_.Offer(objective, chosen);
      return;
    }
    if (value + UpperBound(depth) < best_.objective - Tolerance(best_.objective)) {
      return;
    }

    const int i = order_[depth];
    const Item& item = model_.items[i];
    const bool fits =
        item.volume <= store_left_[item.store] + kCapacityEpsilon &&
        (item.slot < 0 ||
         item.volume <= slot_left_[item.slot] + kCapacityEpsilon);
    if (fits) {
      store_left_[item.store] -= item.volume;
      if (item.slot >= 0) slot_left_[item.slot] -= item.volume;
      taken_[i] = true;
      Visit(depth + 1, value + item.coefficient);
      taken_[i] = false;
      store_left_[item.store] += item.volume;
      if (item.slot >= 0) slot_left_[item.slot] += item.volume;
    }
    Visit(depth + 1, value);
  }

  const Model& model_;
  SearchBudget budget_;
  std::vector<int> order_;     // depth -> item
  std::vector<int> position_;  // item -> depth
  std::vector<std::vector<int>> by_ratio_;
  std::vector<double> store_left_;
  std::vector<double> slot_left_;
  std::vector<bool> taken_;
  Incumbent best_;
  int64_t nodes_ = 0;
  bool aborted_ = false;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

double LambdaFor(const Instance& instance) {
  double sum = 0.0;
  for (const Order& o : instance.orders) sum += o.priority;
  return 1.0 + sum;
}

int MaxRankFor(const Instance& instance, const PlanConfig& plan) {
  int max_rank = MaxRank(instance);
  for (const auto& [id, setting] : plan.warehouses) {
    if (setting.active) max_rank = std::max(max_rank, setting.rank);
  }
  return max_rank;
}

double ObjectiveValue(const Instance& instance, const PlanConfig& plan,
                      std::span<const std::string> chosen) {
  std::unordered_map<std::string, const Order*> orders;
  for (const Order& o : instance.orders) orders.emplace(o.id, &o);
  std::vector<const Order*> selected;
  selected.reserve(chosen.size());
  for (const std::string& id : chosen) {
    auto it = orders.find(id);
    if (it == orders.end()) {
      throw InputError("unknown order id '" + id + "'");
    }
    selected.push_back(it->second);
  }
  std::sort(selected.begin(), selected.end(),
            [](const Order* a, const Order* b) { return a->id < b->id; });

  const double lambda = LambdaFor(instance);
  const int max_rank = MaxRankFor(instance, plan);
  std::map<std::string, int> rank;
  for (const Warehouse& w : instance.warehouses) rank[w.id] = w.rank;
  for (const auto& [id, setting] : plan.warehouses) {
    if (setting.active) rank[id] = setting.rank;
  }
  double total = 0.0;
  for (const Order* o : selected) {
    total += ObjectiveCoefficient(lambda, max_rank, rank.at(o->warehouse_id),
                                  o->priority);
  }
  return total;
}

OracleSolution SolveByEnumeration(const Instance& instance,
                                  const PlanConfig& plan,
                                  const ResidualCapacityMap& residuals) {
  const Model model = BuildModel(instance, plan, residuals);
  const int n = static_cast<int>(model.items.size());
  if (n > kMaxEnumerationOrders) {
    throw InputError("enumeration supports at most " +
                     std::to_string(kMaxEnumerationOrders) +
                     " eligible orders, got " + std::to_string(n));
  }

  Incumbent best;
  std::vector<double> store_load(model.store_capacity.size());
  std::vector<double> slot_load(model.slot_capacity.size());
  std::vector<int> chosen;
  const uint64_t subsets = uint64_t{1} << n;
  for (uint64_t mask = 0; mask < subsets; ++mask) {
    std::fill(store_load.begin(), store_load.end(), 0.0);
    std::fill(slot_load.begin(), slot_load.end(), 0.0);
    chosen.clear();
    double objective = 0.0;
    bool feasible = true;
    for (int i = 0; i < n && feasible; ++i) {
      if (!(mask >> i & 1)) continue;
      const Item& item = model.items[i];
      chosen.push_back(i);
      objective += item.coefficient;
      store_load[item.store] += item.volume;
      feasible = store_load[item.store] <=
                 model.store_capacity[item.store] + kCapacityEpsilon;
      if (item.slot >= 0) {
        slot_load[item.slot] += item.volume;
        feasible = feasible && slot_load[item.slot] <=
                                   model.slot_capacity[item.slot] +
                                       kCapacityEpsilon;
      }
    }
    if (feasible) best.Offer(objective, chosen);
  }
  return ToSolution(model, best, true, static_cast<int64_t>(subsets));
}

OracleSolution SolveExact(const Instance& instance, const PlanConfig& plan,
                          const ResidualCapacityMap& residuals,
                          const SearchBudget& budget) {
  const Model model = BuildModel(instance, plan, residuals);
  return BranchAndBound(model, budget).Run();
}

GapReport ComputeGap(const Instance& instance, const PlanConfig& plan,
                     const ResidualCapacityMap& residuals,
                     const SearchBudget& budget) {
  GapReport report;
  report.heuristic_objective =
      Allocate(instance, plan, residuals).objective_value;
  const OracleSolution exact = SolveExact(instance, plan, residuals, budget);
  report.oracle_objective = exact.objective;
  report.oracle_nodes = exact.node_count;
  report.usable = exact.optimal;
  report.relative_gap = (report.oracle_objective - report.heuristic_objective) /
                        std::max(report.oracle_objective, kCapacityEpsilon);
  return report;
}

}  // namespace allocdss
