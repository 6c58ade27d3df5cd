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

// Seeded synthetic planning cycles. All defaults are synthetic; nothing here
// is calibrated against real retail data.
//
// Construction, in draw order:
//   * per order: store, warehouse, category (uniform), volume, priority tier
//     in {1..priority_levels};
//   * per (store, category): eligibility flag with P = eligibility_density.
// Deterministic parts:
//   * store k sits on route k mod n_routes;
//   * the first round(constrained_category_fraction * n_categories)
//     categories are constrained;
//   * base capacity of a store = ceil(capacity_tightness * its order volume),
//     flow-through deduction = flow_through_fraction * base;
//   * route limit of a constrained category =
//     ceil(category_tightness * max over routes of its route volume);
//   * warehouses W1..Wn get ranks 1..n and are all active.

#ifndef ALLOCDSS_GENERATOR_H_
#define ALLOCDSS_GENERATOR_H_

#include <cstdint>
#include <string>
#include <vector>

#include "allocdss/model.h"

namespace allocdss {

struct VolumeDistribution {
  enum class Kind { kUniform, kLogNormal };
  Kind kind = Kind::kUniform;
  double a = 1.0;   // uniform: lo,  lognormal: mu
  double b = 20.0;  // uniform: hi,  lognormal: sigma

  double Mean() const;
  bool operator==(const VolumeDistribution&) const = default;
};

struct GeneratorSpec {
  uint64_t seed = 1;
  int n_orders = 100;
  int n_stores = 10;
  int n_routes = 3;
  int n_categories = 4;
  int n_warehouses = 3;
  double constrained_category_fraction = 0.5;
  double capacity_tightness = 1.0;
  double category_tightness = 1.0;
  double eligibility_density = 0.9;
  VolumeDistribution volume;
  int priority_levels = 3;
  double flow_through_fraction = 0.1;

  bool operator==(const GeneratorSpec&) const = default;
};

// Empty iff the spec is usable.
std::vector<std::string> ValidateSpec(const GeneratorSpec& spec);

// Throws InputError on an invalid spec.
Instance Generate(const GeneratorSpec& spec);

// Day 1 is exactly Generate(spec). Day t >= 2 reuses day 1's order lines
// (ids prefixed "dNNN-") with volumes scaled by a day-level lognormal
// multiplier M_t and a per-order lognormal jitter J, both mean one:
//   M_t ~ LN(-s^2/2, s),  J ~ LN(-s^2/8, s/2),  s = demand_volatility.
// Stores, capacities and limits stay fixed across days.
std::vector<Instance> GenerateDailySeries(const GeneratorSpec& spec,
                                          int n_days,
                                          double demand_volatility);

// Total order volume of an instance.
double TotalVolume(const Instance& instance);

}  // namespace allocdss

#endif  // ALLOCDSS_GENERATOR_H_
