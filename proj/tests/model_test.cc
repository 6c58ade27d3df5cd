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

#include <gtest/gtest.h>

#include "allocdss/generator.h"
#include "test_util.h"

namespace allocdss {
namespace {

using test::InstanceBuilder;

Instance ThreeOrders() {
  return InstanceBuilder()
      .Route("R1")
      .Category("C1")
      .Warehouse("W1", 1)
      .Warehouse("W2", 2)
      .Store("S1", "R1", 100, 20)
      .Order("O1", "S1", "W1", "C1", 5, 1)
      .Order("O2", "S1", "W2", "C1", 6, 2)
      .Order("O3", "S1", "W1", "C1", 7, 0)
      .Build();
}

bool HasRule(const std::vector<Violation>& v, const std::string& rule) {
  for (const Violation& x : v) {
    if (x.rule == rule) return true;
  }
  return false;
}

TEST(ValidateInstanceTest, WellFormedInstanceHasNoViolations) {
  EXPECT_TRUE(ValidateInstance(ThreeOrders()).empty());
}

TEST(ValidateInstanceTest, DanglingStoreNamesOrderAndReference) {
  Instance instance = ThreeOrders();
  instance.orders[1].store_id = "S404";
  const auto violations = ValidateInstance(instance);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].entity, "order O2");
  EXPECT_EQ(violations[0].rule, "dangling_store");
  EXPECT_NE(violations[0].message.find("O2"), std::string::npos);
  EXPECT_NE(violations[0].message.find("S404"), std::string::npos);
}

TEST(ValidateInstanceTest, DuplicateActiveRankIsOneViolation) {
  Instance instance = ThreeOrders();
  instance.warehouses[1].rank = 1;
  const auto violations = ValidateInstance(instance);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].rule, "duplicate_rank");
  EXPECT_NE(violations[0].message.find("rank 1"), std::string::npos);
}

TEST(ValidateInstanceTest, DetectsEachStructuralRule) {
  Instance base = ThreeOrders();

  Instance dup = base;
  dup.orders[2].id = "O1";
  EXPECT_TRUE(HasRule(ValidateInstance(dup), "duplicate_id"));

  Instance no_wh = base;
  no_wh.warehouses.clear();
  EXPECT_TRUE(HasRule(ValidateInstance(no_wh), "no_warehouse"));

  Instance bad_volume = base;
  bad_volume.orders[0].volume = 0.0;
  EXPECT_TRUE(HasRule(ValidateInstance(bad_volume), "volume_positive"));

  Instance bad_priority = base;
  bad_priority.orders[0].priority = -1.0;
  EXPECT_TRUE(
      HasRule(ValidateInstance(bad_priority), "priority_nonnegative"));

  Instance bad_cap = base;
  bad_cap.stores[0].base_capacity = -1.0;
  EXPECT_TRUE(HasRule(ValidateInstance(bad_cap), "base_capacity_nonnegative"));

  Instance missing_flag = base;
  missing_flag.stores[0].eligibility.clear();
  EXPECT_TRUE(
      HasRule(ValidateInstance(missing_flag), "eligibility_incomplete"));

  Instance no_limit = base;
  no_limit.categories[0].constrained = true;
  EXPECT_TRUE(HasRule(ValidateInstance(no_limit), "missing_route_limit"));

  Instance bad_route = base;
  bad_route.stores[0].route_id = "R9";
  EXPECT_TRUE(HasRule(ValidateInstance(bad_route), "dangling_route"));

  Instance bad_rank = base;
  bad_rank.warehouses[0].rank = 0;
  EXPECT_TRUE(HasRule(ValidateInstance(bad_rank), "rank_positive"));
}

TEST(ValidateInstanceTest, InactiveWarehousesMayShareRanks) {
  Instance instance = ThreeOrders();
  instance.warehouses[1].rank = 1;
  instance.warehouses[1].active = false;
  EXPECT_TRUE(ValidateInstance(instance).empty());
}

TEST(ValidateNetworkTest, IgnoresOrderProblems) {
  Instance instance = ThreeOrders();
  instance.orders[0].volume = -3.0;
  EXPECT_TRUE(ValidateNetwork(instance).empty());
  EXPECT_FALSE(ValidateInstance(instance).empty());
}

TEST(ValidatePlanTest, Rules) {
  const Instance instance = ThreeOrders();
  PlanConfig plan = DefaultPlan(instance);
  EXPECT_TRUE(ValidatePlan(instance, plan).empty());

  PlanConfig none = plan;
  for (auto& [id, s] : none.warehouses) s.active = false;
  EXPECT_TRUE(HasRule(ValidatePlan(instance, none), "no_active_warehouse"));

  PlanConfig dup = plan;
  dup.warehouses["W2"].rank = 1;
  EXPECT_TRUE(HasRule(ValidatePlan(instance, dup), "duplicate_rank"));

  PlanConfig unknown = plan;
  unknown.warehouses["W9"] = {true, 3};
  EXPECT_TRUE(HasRule(ValidatePlan(instance, unknown), "unknown_warehouse"));
}

TEST(PlanConfigTest, DefaultPlanMirrorsInstance) {
  Instance instance = ThreeOrders();
  instance.warehouses[1].active = false;
  const PlanConfig plan = DefaultPlan(instance);
  EXPECT_TRUE(plan.IsActive("W1"));
  EXPECT_FALSE(plan.IsActive("W2"));
  EXPECT_FALSE(plan.IsActive("missing"));
  EXPECT_EQ(plan.RankOf("W1"), 1);
  EXPECT_THROW(plan.RankOf("W2"), InputError);
  EXPECT_EQ(plan.ActiveCount(), 1);
}

TEST(ResidualCapacitiesTest, Arithmetic) {
  const Instance instance = InstanceBuilder()
                                .Route("R")
                                .Category("C")
                                .Warehouse("W", 1)
                                .Store("A", "R", 100, 20)
                                .Store("B", "R", 100, 20)
                                .Store("Z", "R", 0, 0)
                                .Build();
  const ResidualCapacityMap r =
      ResidualCapacities(instance, {{"A", 0.0}, {"B", 90.0}});
  EXPECT_DOUBLE_EQ(r.at("A"), 80.0);
  EXPECT_DOUBLE_EQ(r.at("B"), 0.0);  // clamped
  EXPECT_DOUBLE_EQ(r.at("Z"), 0.0);
  EXPECT_THROW(r.at("nope"), InputError);
}

TEST(ResidualCapacitiesTest, UnknownStoreIsInputError) {
  const Instance instance = ThreeOrders();
  EXPECT_THROW(ResidualCapacities(instance, {{"S9", 1.0}}), InputError);
}

TEST(ResidualCapacitiesTest, MonotoneAndBounded) {
  GeneratorSpec spec;
  spec.seed = 3;
  const Instance instance = Generate(spec);
  StoreVolumeMap low, high;
  for (size_t k = 0; k < instance.stores.size(); ++k) {
    low[instance.stores[k].id] = 3.0 * k;
    high[instance.stores[k].id] = 3.0 * k + 17.5;
  }
  const auto rl = ResidualCapacities(instance, low);
  const auto rh = ResidualCapacities(instance, high);
  for (const Store& s : instance.stores) {
    EXPECT_GE(rl.at(s.id), rh.at(s.id));
    EXPECT_GE(rh.at(s.id), 0.0);
    EXPECT_LE(rl.at(s.id), s.base_capacity);
  }
}

TEST(RoleLabelTest, RankDerivedAndExplicit) {
  Warehouse w;
  w.id = "X";
  w.rank = 1;
  EXPECT_EQ(RoleLabel(w), "Warehouse-Primary");
  w.rank = 2;
  EXPECT_EQ(RoleLabel(w), "Warehouse-Auxiliary");
  w.rank = 3;
  EXPECT_EQ(RoleLabel(w), "Warehouse-InnerProducts");
  w.rank = 4;
  EXPECT_EQ(RoleLabel(w), "Warehouse-X");
  w.label = "Overflow";
  EXPECT_EQ(RoleLabel(w), "Overflow");
}

TEST(RejectionReasonTest, RoundTrip) {
  for (RejectionReason r :
       {RejectionReason::kIneligibleNode, RejectionReason::kWarehouseInactive,
        RejectionReason::kStoreCapacity,
        RejectionReason::kCategoryRouteLimit}) {
    EXPECT_EQ(ParseRejectionReason(ToString(r)), r);
  }
  EXPECT_EQ(ToString(RejectionReason::kStoreCapacity), "STORE_CAPACITY");
  EXPECT_THROW(ParseRejectionReason("NOPE"), InputError);
}

TEST(DateTest, ParseAndFormat) {
  const auto d = ParseDate("2026-01-31");
  EXPECT_EQ(FormatDate(d), "2026-01-31");
  EXPECT_THROW(ParseDate("2026-02-30"), InputError);
  EXPECT_THROW(ParseDate("2026/01/01"), InputError);
  EXPECT_THROW(ParseDate(""), InputError);
}

TEST(CanonicalizeTest, SortsEveryCollection) {
  Instance instance = ThreeOrders();
  std::swap(instance.orders[0], instance.orders[2]);
  std::swap(instance.warehouses[0], instance.warehouses[1]);
  Canonicalize(instance);
  EXPECT_EQ(instance.orders[0].id, "O1");
  EXPECT_EQ(instance.orders[2].id, "O3");
  EXPECT_EQ(instance.warehouses[0].id, "W1");
  EXPECT_EQ(MaxRank(instance), 2);
}

}  // namespace
}  // namespace allocdss
