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

#include "allocdss/kpi.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "allocdss/random.h"
#include "mann_whitney_oracle.h"

namespace allocdss {
namespace {

using std::chrono::day;
using std::chrono::year;
using std::chrono::year_month_day;

year_month_day Date(int offset) {
  return std::chrono::sys_days{year_month_day{year{2026}, std::chrono::January,
                                              day{1}}} +
         std::chrono::days{offset};
}

DailyServiceRecord Rec(int offset, std::string store, double r, double s,
                       double limit = 1e9) {
  return {Date(offset), std::move(store), r, s, limit};
}

std::vector<DailyServiceRecord> RandomRecords(uint64_t seed, int days,
                                              int stores) {
  Xoshiro256 rng(seed);
  std::vector<DailyServiceRecord> out;
  for (int t = 0; t < days; ++t) {
    for (int m = 0; m < stores; ++m) {
      const double r = std::round(rng.Uniform(0.0, 100.0) * 100) / 100;
      const double s = std::round(rng.Uniform(0.0, 110.0) * 100) / 100;
      out.push_back(Rec(t, "S" + std::to_string(m), r, s,
                        std::round(rng.Uniform(30.0, 90.0))));
    }
  }
  return out;
}

// --- ratios -----------------------------------------------------------------

TEST(ShipOrderRatioTest, Examples) {
  const std::vector<DailyServiceRecord> one = {Rec(0, "S", 100, 54.1)};
  EXPECT_DOUBLE_EQ(ShipOrderRatio(one), 0.541);
  const std::vector<DailyServiceRecord> equal = {Rec(0, "S", 7, 7),
                                                 Rec(0, "T", 3, 3)};
  EXPECT_DOUBLE_EQ(ShipOrderRatio(equal), 1.0);
  const std::vector<DailyServiceRecord> over = {Rec(0, "S", 10, 30),
                                                Rec(0, "T", 10, 0)};
  EXPECT_DOUBLE_EQ(ShipOrderRatio(over), 1.5);
  EXPECT_DOUBLE_EQ(SameDayCoverage(over), 0.5);
}

TEST(ShipOrderRatioTest, ZeroRequestedIsUndefined) {
  const std::vector<DailyServiceRecord> zero = {Rec(0, "S", 0, 5)};
  EXPECT_THROW(ShipOrderRatio(zero), UndefinedMetricError);
  EXPECT_THROW(SameDayCoverage(zero), UndefinedMetricError);
  EXPECT_THROW(ShipOrderRatio({}), UndefinedMetricError);
}

TEST(SameDayCoverageTest, FullWhenShippedCoversRequest) {
  const std::vector<DailyServiceRecord> r = {Rec(0, "S", 10, 12),
                                             Rec(1, "S", 4, 4)};
  EXPECT_DOUBLE_EQ(SameDayCoverage(r), 1.0);
}

TEST(SameDayCoverageTest, MatchesPerRecordSummation) {
  const auto records = RandomRecords(20, 4, 5);
  ASSERT_EQ(records.size(), 20u);
  double covered = 0.0, requested = 0.0, shipped = 0.0;
  for (const auto& r : records) {
    covered += r.shipped < r.requested ? r.shipped : r.requested;
    requested += r.requested;
    shipped += r.shipped;
  }
  EXPECT_NEAR(SameDayCoverage(records), covered / requested, 1e-15);
  EXPECT_NEAR(ShipOrderRatio(records), shipped / requested, 1e-15);
}

TEST(SameDayCoverageTest, PropertiesOnRandomSets) {
  for (uint64_t seed = 1; seed <= 200; ++seed) {
    auto records = RandomRecords(seed, 3, 4);
    const double coverage = SameDayCoverage(records);
    EXPECT_LE(coverage, ShipOrderRatio(records) + 1e-15);
    EXPECT_GE(coverage, 0.0);
    EXPECT_LE(coverage, 1.0);
    for (auto& r : records) {
      r.requested *= 3.5;
      r.shipped *= 3.5;
    }
    EXPECT_NEAR(SameDayCoverage(records), coverage, 1e-12);
  }
}

// --- compliance -------------------------------------------------------------

TEST(ComplianceSharesTest, PerfectDay) {
  const std::vector<DailyServiceRecord> r = {Rec(0, "A", 5, 5, 10),
                                             Rec(0, "B", 10, 10, 10)};
  const ComplianceShares s = ComputeComplianceShares(r);
  EXPECT_EQ(s.order_over_limit, 0.0);
  EXPECT_EQ(s.ship_over_limit, 0.0);
  EXPECT_EQ(s.full_fulfillment, 1.0);
  EXPECT_EQ(s.avg_daily_unserved, 0.0);
}

TEST(ComplianceSharesTest, OneOfFourOverLimit) {
  const std::vector<DailyServiceRecord> r = {
      Rec(0, "A", 11, 10, 10), Rec(0, "B", 1, 1, 10), Rec(1, "A", 2, 2, 10),
      Rec(1, "B", 3, 3, 10)};
  EXPECT_EQ(ComputeComplianceShares(r).order_over_limit, 0.25);
}

TEST(ComplianceSharesTest, HandComputedUnserved) {
  // Day 0 shortfalls 4 + 0 + 2.5 (store C over-ships and offsets nothing).
  // Day 1 shortfalls 0 + 10 + 1.
  const std::vector<DailyServiceRecord> r = {
      Rec(0, "A", 10, 6, 8),  Rec(0, "B", 3, 9, 8),   Rec(0, "C", 5, 2.5, 8),
      Rec(1, "A", 0, 0, 8),   Rec(1, "B", 12, 2, 8), Rec(1, "C", 9, 8, 8)};
  const ComplianceShares s = ComputeComplianceShares(r);
  EXPECT_DOUBLE_EQ(s.avg_daily_unserved, (6.5 + 11.0) / 2.0);
  EXPECT_DOUBLE_EQ(s.order_over_limit, 3.0 / 6.0);  // A0, B1, C1
  EXPECT_DOUBLE_EQ(s.ship_over_limit, 1.0 / 6.0);   // B0
  EXPECT_DOUBLE_EQ(s.full_fulfillment, 2.0 / 6.0);  // B0, A1
}

TEST(ComplianceSharesTest, IgnoresSummationNoise) {
  // 219.6 as a sum of order volumes comes out as 219.60000000000002.
  const std::vector<DailyServiceRecord> r = {
      Rec(0, "A", 219.6, 219.60000000000002, 219.6),
      Rec(0, "B", 5.0, 4.999999999999999, 8)};
  const ComplianceShares s = ComputeComplianceShares(r);
  EXPECT_EQ(s.ship_over_limit, 0.0);
  EXPECT_EQ(s.order_over_limit, 0.0);
  EXPECT_EQ(s.full_fulfillment, 1.0);
}

TEST(ComplianceSharesTest, EmptyIsUndefined) {
  EXPECT_THROW(ComputeComplianceShares({}), UndefinedMetricError);
}

TEST(KpiTest, CountsDaysAndRecords) {
  const auto records = RandomRecords(3, 6, 4);
  const KpiReport k = ComputeKpis(records);
  EXPECT_EQ(k.n_days, 6);
  EXPECT_EQ(k.n_store_days, 24);
}

TEST(DailySeriesTest, OnePointPerDay) {
  const std::vector<DailyServiceRecord> r = {
      Rec(1, "A", 10, 5), Rec(0, "A", 4, 8), Rec(1, "B", 10, 15),
      Rec(2, "A", 0, 3)};
  const auto series = DailySeries(r);
  ASSERT_EQ(series.size(), 3u);
  EXPECT_EQ(series[0].date, Date(0));
  EXPECT_DOUBLE_EQ(series[0].coverage, 1.0);
  EXPECT_DOUBLE_EQ(series[0].ratio, 2.0);
  EXPECT_DOUBLE_EQ(series[1].coverage, 15.0 / 20.0);
  EXPECT_DOUBLE_EQ(series[1].ratio, 1.0);
  EXPECT_EQ(series[2].coverage, 0.0);
}

// --- Mann-Whitney -----------------------------------------------------------

using test::EnumeratedP;
using test::PairU;

TEST(MannWhitneyTest, CompleteSeparation) {
  const std::vector<double> a = {1, 2, 3}, b = {4, 5, 6};
  const MannWhitneyResult r = MannWhitneyU(a, b);
  EXPECT_EQ(r.u_a, 0.0);
  EXPECT_EQ(r.u_b, 9.0);
  EXPECT_TRUE(r.exact);
  EXPECT_NEAR(r.p_value, 0.1, 1e-12);  // 2 of C(6,3) = 20 labelings
}

TEST(MannWhitneyTest, IdenticalSamples) {
  const std::vector<double> a = {0.3, 0.5, 0.5, 0.9};
  const MannWhitneyResult r = MannWhitneyU(a, a);
  EXPECT_EQ(r.u_a, 8.0);
  EXPECT_GE(r.p_value, 0.99);
}

TEST(MannWhitneyTest, InterleavedMatchesSeventyLabelings) {
  const std::vector<double> a = {1, 3, 5, 7}, b = {2, 4, 6, 8};
  const MannWhitneyResult r = MannWhitneyU(a, b);
  EXPECT_EQ(r.u_a, PairU(a, b));
  EXPECT_TRUE(r.exact);
  EXPECT_NEAR(r.p_value, EnumeratedP(a, b), 1e-12);
}

TEST(MannWhitneyTest, ExactMatchesEnumerationWithTies) {
  Xoshiro256 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const size_t na = 1 + rng.Below(6), nb = 1 + rng.Below(12 - na);
    std::vector<double> a, b;
    for (size_t k = 0; k < na; ++k) a.push_back(static_cast<double>(rng.Below(5)));
    for (size_t k = 0; k < nb; ++k) b.push_back(static_cast<double>(rng.Below(5)));
    EXPECT_NEAR(MannWhitneyExactP(a, b), EnumeratedP(a, b), 1e-12)
        << "trial " << trial;
    EXPECT_EQ(MannWhitneyU(a, b).u_a, PairU(a, b));
  }
}

TEST(MannWhitneyTest, Symmetry) {
  const std::vector<double> a = {0.2, 0.4, 0.4, 0.8, 0.9, 1.3, 2.0, 2.2, 2.5,
                                 3.0};
  const std::vector<double> b = {0.1, 0.4, 0.5, 0.6, 0.7, 1.0, 1.1, 1.5, 1.9};
  const MannWhitneyResult ab = MannWhitneyU(a, b), ba = MannWhitneyU(b, a);
  EXPECT_EQ(ab.u_a, ba.u_b);
  EXPECT_EQ(ab.u_b, ba.u_a);
  EXPECT_NEAR(ab.p_value, ba.p_value, 1e-15);
  EXPECT_FALSE(ab.exact);
}

TEST(MannWhitneyTest, ApproximationTracksExactOverWholeSupport) {
  // Every possible U at n_a = n_b = 10 without ties: b takes the first j
  // values below all of a's, the rest above.
  for (int j = 0; j <= 10; ++j) {
    std::vector<double> a, b;
    for (int k = 0; k < 10; ++k) {
      a.push_back(100 + k);
      b.push_back(k < j ? k : 200 + k);
    }
    EXPECT_NEAR(MannWhitneyNormalP(a, b), MannWhitneyExactP(a, b), 0.002)
        << "j " << j;
  }
  std::vector<double> a, b;
  for (int k = 1; k <= 10; ++k) a.push_back(k);
  for (int k = 11; k <= 20; ++k) b.push_back(k);
  EXPECT_LT(MannWhitneyNormalP(a, b), 1e-4);
  EXPECT_FALSE(MannWhitneyU(a, b).exact);
}

TEST(MannWhitneyTest, ApproximationCloseToExactAtNine) {
  Xoshiro256 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a, b;
    for (int k = 0; k < 9; ++k) {
      a.push_back(rng.Uniform());
      b.push_back(rng.Uniform() + 0.2);
    }
    EXPECT_NEAR(MannWhitneyNormalP(a, b), MannWhitneyExactP(a, b), 0.005);
  }
}

TEST(MannWhitneyTest, EmptySampleThrows) {
  const std::vector<double> a = {1.0};
  EXPECT_THROW(MannWhitneyU(a, {}), InputError);
  EXPECT_THROW(MannWhitneyU({}, a), InputError);
}

// --- before/after -----------------------------------------------------------

std::vector<DailyServiceRecord> CoverageSeries(double before, double after,
                                               int days_each) {
  std::vector<DailyServiceRecord> out;
  for (int t = 0; t < 2 * days_each; ++t) {
    const double c = t < days_each ? before : after;
    out.push_back(Rec(t, "A", 1000.0, 1000.0 * c, 2000.0));
  }
  return out;
}

TEST(BeforeAfterTest, CoverageDeltaIsRawPoints) {
  const auto records = CoverageSeries(0.243, 0.378, 10);
  const BeforeAfterComparison c = BeforeAfter(records, Date(10));
  EXPECT_NEAR(c.before.same_day_coverage, 0.243, 1e-12);
  EXPECT_NEAR(c.after.same_day_coverage, 0.378, 1e-12);
  const MetricDelta& d = c.deltas[1];
  EXPECT_EQ(d.metric, "weighted_same_day_coverage");
  EXPECT_EQ(d.display, "pp");
  EXPECT_NEAR(d.points, 13.5, 1e-9);
  EXPECT_LT(c.coverage_test.p_value, 1e-3);
}

TEST(BeforeAfterTest, UnservedUsesPercentChange) {
  KpiReport before, after;
  before.avg_daily_unserved = 6657;
  after.avg_daily_unserved = 5137;
  before.share_order_over_limit = 0.0453;
  after.share_order_over_limit = 0.0233;
  const auto deltas = ComputeDeltas(before, after);
  EXPECT_EQ(deltas[2].display, "%");
  EXPECT_NEAR(deltas[2].percent_change, -22.83, 0.01);
  EXPECT_NEAR(deltas[3].percent_change, -48.57, 0.01);
}

TEST(BeforeAfterTest, NullCase) {
  auto records = RandomRecords(77, 40, 5);
  const BeforeAfterComparison c = BeforeAfter(records, Date(20));
  EXPECT_GT(c.coverage_test.p_value, 0.01);
  EXPECT_EQ(c.before.n_days, 20);
  EXPECT_EQ(c.after.n_days, 20);
}

TEST(BeforeAfterTest, EmptySideThrows) {
  const auto records = RandomRecords(1, 5, 2);
  EXPECT_THROW(BeforeAfter(records, Date(0)), InputError);
  EXPECT_THROW(BeforeAfter(records, Date(30)), InputError);
}

TEST(BeforeAfterTest, SixtyDaysMatchIndependentRecomputation) {
  const auto records = RandomRecords(60, 60, 7);
  const BeforeAfterComparison c = BeforeAfter(records, Date(25));
  for (int side = 0; side < 2; ++side) {
    double r = 0, s = 0, cov = 0;
    int over_r = 0, over_s = 0, full = 0, n = 0;
    std::map<int, double> unserved;
    for (size_t k = 0; k < records.size(); ++k) {
      const int t = static_cast<int>(k / 7);
      if ((t < 25) != (side == 0)) continue;
      const auto& x = records[k];
      r += x.requested;
      s += x.shipped;
      cov += std::min(x.requested, x.shipped);
      over_r += x.requested > x.store_limit;
      over_s += x.shipped > x.store_limit;
      full += x.shipped >= x.requested;
      unserved[t] += std::max(0.0, x.requested - x.shipped);
      ++n;
    }
    double u = 0;
    for (const auto& [t, v] : unserved) u += v;
    const KpiReport& k = side == 0 ? c.before : c.after;
    EXPECT_NEAR(k.ship_order_ratio, s / r, 1e-12);
    EXPECT_NEAR(k.same_day_coverage, cov / r, 1e-12);
    EXPECT_NEAR(k.avg_daily_unserved, u / unserved.size(), 1e-9);
    EXPECT_NEAR(k.share_order_over_limit, static_cast<double>(over_r) / n,
                1e-15);
    EXPECT_NEAR(k.share_ship_over_limit, static_cast<double>(over_s) / n,
                1e-15);
    EXPECT_NEAR(k.share_full_fulfillment, static_cast<double>(full) / n,
                1e-15);
  }
  for (const MetricDelta& d : c.deltas) {
    EXPECT_NEAR(d.points, (d.after - d.before) * 100.0, 1e-12) << d.metric;
  }
}

TEST(FormatComparisonTableTest, ContainsRowsAndTest) {
  const auto records = CoverageSeries(0.243, 0.378, 10);
  const std::string table = FormatComparisonTable(BeforeAfter(records, Date(10)));
  EXPECT_NE(table.find("Weighted Same-Day Coverage"), std::string::npos);
  EXPECT_NE(table.find("+13.5 pp"), std::string::npos);
  EXPECT_NE(table.find("Mann"), std::string::npos);
}

}  // namespace
}  // namespace allocdss
