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

#include "allocdss/generator.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "allocdss/random.h"

namespace allocdss {

namespace {

constexpr uint64_t kSeriesStream = 0x5851f42d4c957f2dULL;

std::string MakeId(char prefix, int index, int count, int min_width) {
  const int width =
      std::max(min_width, static_cast<int>(std::to_string(count).size()));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%0*d", prefix, width, index);
  return buf;
}

double RoundCents(double x) { return std::round(x * 100.0) / 100.0; }

double DrawVolume(const VolumeDistribution& d, Xoshiro256& rng) {
  const double raw = d.kind == VolumeDistribution::Kind::kUniform
                         ? rng.Uniform(d.a, d.b)
                         : rng.LogNormal(d.a, d.b);
  return std::max(0.01, RoundCents(raw));
}

}  // namespace

double VolumeDistribution::Mean() const {
  return kind == Kind::kUniform ? 0.5 * (a + b) : std::exp(a + 0.5 * b * b);
}

std::vector<std::string> ValidateSpec(const GeneratorSpec& spec) {
  std::vector<std::string> errors;
  auto require = [&](bool ok, const char* message) {
    if (!ok) errors.emplace_back(message);
  };
  require(spec.n_orders >= 1, "n_orders must be >= 1");
  require(spec.n_routes >= 1, "n_routes must be >= 1");
  require(spec.n_stores >= spec.n_routes, "n_stores must be >= n_routes");
  require(spec.n_categories >= 1, "n_categories must be >= 1");
  require(spec.n_warehouses >= 1, "n_warehouses must be >= 1");
  require(spec.constrained_category_fraction >= 0.0 &&
              spec.constrained_category_fraction <= 1.0,
          "constrained_category_fraction must be in [0, 1]");
  require(spec.eligibility_density >= 0.0 && spec.eligibility_density <= 1.0,
          "eligibility_density must be in [0, 1]");
  require(spec.capacity_tightness > 0.0, "capacity_tightness must be > 0");
  require(spec.category_tightness > 0.0, "category_tightness must be > 0");
  require(spec.priority_levels >= 1, "priority_levels must be >= 1");
  require(spec.flow_through_fraction >= 0.0 && spec.flow_through_fraction < 1.0,
          "flow_through_fraction must be in [0, 1)");
  if (spec.volume.kind == VolumeDistribution::Kind::kUniform) {
    require(spec.volume.a > 0.0 && spec.volume.b >= spec.volume.a,
            "uniform volume needs 0 < lo <= hi");
  } else {
    require(spec.volume.b >= 0.0, "lognormal sigma must be >= 0");
  }
  return errors;
}

Instance Generate(const GeneratorSpec& spec) {
  if (auto errors = ValidateSpec(spec); !errors.empty()) {
    std::string message = "invalid generator spec:";
    for (const std::string& e : errors) message += "\n  " + e;
    throw InputError(message);
  }
  Xoshiro256 rng(spec.seed);
  Instance instance;

  for (int k = 1; k <= spec.n_routes; ++k) {
    instance.routes.push_back({MakeId('R', k, spec.n_routes, 2)});
  }
  const int n_constrained = static_cast<int>(std::lround(
      spec.constrained_category_fraction * spec.n_categories));
  for (int p = 1; p <= spec.n_categories; ++p) {
    Category c;
    c.id = MakeId('C', p, spec.n_categories, 2);
    c.constrained = p <= n_constrained;
    instance.categories.push_back(c);
  }
  for (int w = 1; w <= spec.n_warehouses; ++w) {
    Warehouse wh;
    wh.id = MakeId('W', w, spec.n_warehouses, 1);
    wh.active = true;
    wh.rank = w;
    instance.warehouses.push_back(wh);
  }
  for (int m = 1; m <= spec.n_stores; ++m) {
    Store s;
    s.id = MakeId('S', m, spec.n_stores, 4);
    s.route_id = instance.routes[(m - 1) % spec.n_routes].id;
    instance.stores.push_back(s);
  }

  std::vector<double> store_demand(spec.n_stores, 0.0);
  std::vector<double> route_category_demand(
      static_cast<size_t>(spec.n_routes) * spec.n_categories, 0.0);
  instance.orders.reserve(spec.n_orders);
  for (int i = 1; i <= spec.n_orders; ++i) {
    const auto m = static_cast<int>(rng.Below(spec.n_stores));
    const auto w = static_cast<int>(rng.Below(spec.n_warehouses));
    const auto p = static_cast<int>(rng.Below(spec.n_categories));
    Order o;
    o.id = MakeId('O', i, spec.n_orders, 7);
    o.store_id = instance.stores[m].id;
    o.warehouse_id = instance.warehouses[w].id;
    o.category_id = instance.categories[p].id;
    o.volume = DrawVolume(spec.volume, rng);
    o.priority = 1.0 + static_cast<double>(rng.Below(spec.priority_levels));
    store_demand[m] += o.volume;
    route_category_demand[static_cast<size_t>((m % spec.n_routes)) *
                              spec.n_categories +
                          p] += o.volume;
    instance.orders.push_back(std::move(o));
  }

  for (int m = 0; m < spec.n_stores; ++m) {
    Store& s = instance.stores[m];
    for (const Category& c : instance.categories) {
      s.eligibility[c.id] = rng.Uniform() < spec.eligibility_density;
    }
    s.base_capacity = std::ceil(spec.capacity_tightness * store_demand[m]);
    s.flow_through_deduction =
        RoundCents(spec.flow_through_fraction * s.base_capacity);
  }
  for (int p = 0; p < spec.n_categories; ++p) {
    Category& c = instance.categories[p];
    if (!c.constrained) continue;
    double peak = 0.0;
    for (int k = 0; k < spec.n_routes; ++k) {
      peak = std::max(peak, route_category_demand[static_cast<size_t>(k) *
                                                      spec.n_categories +
                                                  p]);
    }
    c.route_limit = std::ceil(spec.category_tightness * peak);
  }
  return instance;
}

std::vector<Instance> GenerateDailySeries(const GeneratorSpec& spec,
                                          int n_days,
                                          double demand_volatility) {
  if (n_days < 1) throw InputError("n_days must be >= 1");
  if (!(demand_volatility >= 0.0)) {
    throw InputError("demand_volatility must be >= 0");
  }
  std::vector<Instance> days;
  days.reserve(n_days);  // `first` below must stay valid
  days.push_back(Generate(spec));
  const Instance& first = days.front();

  Xoshiro256 rng(spec.seed ^ kSeriesStream);
  const double s = demand_volatility;
  for (int t = 2; t <= n_days; ++t) {
    Instance day = first;
    day.planning_day = t;
    char prefix[16];
    std::snprintf(prefix, sizeof(prefix), "d%03d-", t);
    const double day_multiplier = std::exp(s * rng.Normal() - 0.5 * s * s);
    for (Order& o : day.orders) {
      const double jitter = std::exp(0.5 * s * rng.Normal() - 0.125 * s * s);
      o.id = prefix + o.id;
      o.volume = std::max(0.01, RoundCents(o.volume * day_multiplier * jitter));
    }
    days.push_back(std::move(day));
  }
  return days;
}

double TotalVolume(const Instance& instance) {
  double total = 0.0;
  for (const Order& o : instance.orders) total += o.volume;
  return total;
}

}  // namespace allocdss
