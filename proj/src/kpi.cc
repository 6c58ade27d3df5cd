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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

namespace allocdss {

namespace {

double TotalRequested(std::span<const DailyServiceRecord> records) {
  double total = 0.0;
  for (const DailyServiceRecord& r : records) total += r.requested;
  if (!(total > 0.0)) {
    throw UndefinedMetricError("total requested volume is zero");
  }
  return total;
}

// Doubled midranks (integers) of the pooled sample, plus the tie term
// sum(t^3 - t) over tie groups.
struct PooledRanks {
  std::vector<int64_t> doubled;  // index: a first, then b
  double tie_term = 0.0;
};

PooledRanks RankPooled(std::span<const double> a, std::span<const double> b) {
  const size_t n = a.size() + b.size();
  std::vector<double> values(a.begin(), a.end());
  values.insert(values.end(), b.begin(), b.end());
  std::vector<size_t> index(n);
  std::iota(index.begin(), index.end(), 0);
  std::stable_sort(index.begin(), index.end(),
                   [&](size_t x, size_t y) { return values[x] < values[y]; });
  PooledRanks out;
  out.doubled.resize(n);
  for (size_t i = 0; i < n;) {
    size_t j = i + 1;
    while (j < n && values[index[j]] == values[index[i]]) ++j;
    // positions i..j-1 (1-based i+1..j) share midrank (i+1+j)/2
    for (size_t k = i; k < j; ++k) {
      out.doubled[index[k]] = static_cast<int64_t>(i + 1 + j);
    }
    const double t = static_cast<double>(j - i);
    out.tie_term += t * t * t - t;
    i = j;
  }
  return out;
}

void RequireNonEmpty(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw InputError("Mann-Whitney U needs two non-empty samples");
  }
}

double UStatisticA(const PooledRanks& ranks, size_t n_a) {
  int64_t doubled_sum = 0;
  for (size_t i = 0; i < n_a; ++i) doubled_sum += ranks.doubled[i];
  const double na = static_cast<double>(n_a);
  return 0.5 * static_cast<double>(doubled_sum) - na * (na + 1.0) / 2.0;
}

}  // namespace

double ShipOrderRatio(std::span<const DailyServiceRecord> records) {
  const double requested = TotalRequested(records);
  double shipped = 0.0;
  for (const DailyServiceRecord& r : records) shipped += r.shipped;
  return shipped / requested;
}

double SameDayCoverage(std::span<const DailyServiceRecord> records) {
  const double requested = TotalRequested(records);
  double covered = 0.0;
  for (const DailyServiceRecord& r : records) {
    covered += std::min(r.shipped, r.requested);
  }
  return covered / requested;
}

ComplianceShares ComputeComplianceShares(
    std::span<const DailyServiceRecord> records) {
  if (records.empty()) {
    throw UndefinedMetricError("no store-day records");
  }
  ComplianceShares out;
  size_t order_over = 0, ship_over = 0, full = 0;
  std::map<std::chrono::year_month_day, double> unserved_by_day;
  for (const DailyServiceRecord& r : records) {
    // Summed volumes carry rounding noise; the engine's own tolerance applies.
    if (r.requested > r.store_limit + kCapacityEpsilon) ++order_over;
    if (r.shipped > r.store_limit + kCapacityEpsilon) ++ship_over;
    if (r.shipped >= r.requested - kCapacityEpsilon) ++full;
    unserved_by_day[r.date] += std::max(0.0, r.requested - r.shipped);
  }
  const double n = static_cast<double>(records.size());
  out.order_over_limit = static_cast<double>(order_over) / n;
  out.ship_over_limit = static_cast<double>(ship_over) / n;
  out.full_fulfillment = static_cast<double>(full) / n;
  double unserved = 0.0;
  for (const auto& [day, value] : unserved_by_day) unserved += value;
  out.avg_daily_unserved =
      unserved / static_cast<double>(unserved_by_day.size());
  return out;
}

KpiReport ComputeKpis(std::span<const DailyServiceRecord> records) {
  KpiReport report;
  report.ship_order_ratio = ShipOrderRatio(records);
  report.same_day_coverage = SameDayCoverage(records);
  const ComplianceShares shares = ComputeComplianceShares(records);
  report.avg_daily_unserved = shares.avg_daily_unserved;
  report.share_order_over_limit = shares.order_over_limit;
  report.share_ship_over_limit = shares.ship_over_limit;
  report.share_full_fulfillment = shares.full_fulfillment;
  std::map<std::chrono::year_month_day, int> days;
  for (const DailyServiceRecord& r : records) ++days[r.date];
  report.n_days = static_cast<int>(days.size());
  report.n_store_days = static_cast<int>(records.size());
  return report;
}

std::vector<DailyPoint> DailySeries(
    std::span<const DailyServiceRecord> records) {
  struct Sums {
    double requested = 0.0, shipped = 0.0, covered = 0.0;
  };
  std::map<std::chrono::year_month_day, Sums> by_day;
  for (const DailyServiceRecord& r : records) {
    Sums& s = by_day[r.date];
    s.requested += r.requested;
    s.shipped += r.shipped;
    s.covered += std::min(r.shipped, r.requested);
  }
  std::vector<DailyPoint> out;
  out.reserve(by_day.size());
  for (const auto& [date, s] : by_day) {
    DailyPoint p;
    p.date = date;
    p.requested = s.requested;
    p.shipped = s.shipped;
    if (s.requested > 0.0) {
      p.coverage = s.covered / s.requested;
      p.ratio = s.shipped / s.requested;
    }
    out.push_back(p);
  }
  return out;
}

double MannWhitneyExactP(std::span<const double> a, std::span<const double> b) {
  RequireNonEmpty(a, b);
  const PooledRanks ranks = RankPooled(a, b);
  const int64_t n = static_cast<int64_t>(ranks.doubled.size());
  // Work with the smaller sample; the two-sided statistic is symmetric.
  const bool use_a = a.size() <= b.size();
  const int64_t k = static_cast<int64_t>(use_a ? a.size() : b.size());
  const size_t offset = use_a ? 0 : a.size();

  int64_t observed = 0;
  for (int64_t i = 0; i < k; ++i) observed += ranks.doubled[offset + i];
  const int64_t center = k * (n + 1);  // E[doubled rank sum]
  const int64_t observed_dev = std::abs(observed - center);

  int64_t max_sum = 0;
  {
    std::vector<int64_t> sorted = ranks.doubled;
    std::sort(sorted.rbegin(), sorted.rend());
    for (int64_t i = 0; i < k; ++i) max_sum += sorted[i];
  }
  // ways[j][s]: number of j-subsets with doubled rank sum s.
  const size_t width = static_cast<size_t>(max_sum) + 1;
  std::vector<double> ways((k + 1) * width, 0.0);
  ways[0] = 1.0;
  int64_t reach = 0;
  for (int64_t item = 0; item < n; ++item) {
    const int64_t r = ranks.doubled[item];
    reach = std::min(max_sum, reach + r);
    for (int64_t j = std::min<int64_t>(k, item + 1); j >= 1; --j) {
      double* row = &ways[j * width];
      const double* prev = &ways[(j - 1) * width];
      for (int64_t s = reach; s >= r; --s) row[s] += prev[s - r];
    }
  }
  double total = 0.0, extreme = 0.0;
  const double* last = &ways[k * width];
  for (int64_t s = 0; s <= max_sum; ++s) {
    total += last[s];
    if (std::abs(s - center) >= observed_dev) extreme += last[s];
  }
  return std::min(1.0, extreme / total);
}

double MannWhitneyNormalP(std::span<const double> a,
                          std::span<const double> b) {
  RequireNonEmpty(a, b);
  const PooledRanks ranks = RankPooled(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double n = na + nb;
  const double u = UStatisticA(ranks, a.size());
  const double mean = na * nb / 2.0;
  const double tie_correction = n > 1.0 ? ranks.tie_term / (n * (n - 1.0)) : 0.0;
  const double variance = na * nb / 12.0 * ((n + 1.0) - tie_correction);
  if (!(variance > 0.0)) return 1.0;
  const double sigma = std::sqrt(variance);

  // Third and fourth cumulants of a random na-subset sum of the midranks.
  // p[d] = P(d given items are all in the subset).
  double p[5] = {1.0, 0.0, 0.0, 0.0, 0.0};
  for (int d = 1; d <= 4; ++d) {
    p[d] = n > d - 1 ? p[d - 1] * std::max(0.0, na - (d - 1)) / (n - (d - 1))
                     : 0.0;
  }
  const double center = (n + 1.0);  // doubled mean rank
  double p2 = 0.0, p3 = 0.0, p4 = 0.0;
  for (int64_t r : ranks.doubled) {
    const double y = 0.5 * (static_cast<double>(r) - center);
    p2 += y * y;
    p3 += y * y * y;
    p4 += y * y * y * y;
  }
  const double m3 = p3 * (p[1] - 3.0 * p[2] + 2.0 * p[3]);
  const double m4 = p[1] * p4 + p[2] * (3.0 * p2 * p2 - 7.0 * p4) +
                    p[3] * (12.0 * p4 - 6.0 * p2 * p2) +
                    p[4] * (3.0 * p2 * p2 - 6.0 * p4);
  const double g1 = m3 / (variance * sigma);
  const double g2 = (m4 - 3.0 * variance * variance) / (variance * variance);

  // Edgeworth-corrected CDF of the standardized statistic.
  auto cdf = [&](double z) {
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
    const double z2 = z * z, z3 = z2 * z, z5 = z3 * z2;
    return 0.5 * std::erfc(-z / std::sqrt(2.0)) -
           pdf * (g1 / 6.0 * (z2 - 1.0) + g2 / 24.0 * (z3 - 3.0 * z) +
                  g1 * g1 / 72.0 * (z5 - 10.0 * z3 + 15.0 * z));
  };
  const double z = std::max(0.0, std::abs(u - mean) - 0.5) / sigma;
  return std::clamp((1.0 - cdf(z)) + cdf(-z), 0.0, 1.0);
}

MannWhitneyResult MannWhitneyU(std::span<const double> a,
                               std::span<const double> b) {
  RequireNonEmpty(a, b);
  const PooledRanks ranks = RankPooled(a, b);
  MannWhitneyResult out;
  out.u_a = UStatisticA(ranks, a.size());
  out.u_b = static_cast<double>(a.size()) * static_cast<double>(b.size()) -
            out.u_a;
  out.exact = std::min(a.size(), b.size()) <= kExactMaxMinSize;
  out.p_value = out.exact ? MannWhitneyExactP(a, b) : MannWhitneyNormalP(a, b);
  return out;
}

std::vector<MetricDelta> ComputeDeltas(const KpiReport& before,
                                       const KpiReport& after) {
  auto row = [](std::string name, double b, double a, std::string display) {
    MetricDelta d;
    d.metric = std::move(name);
    d.before = b;
    d.after = a;
    d.points = (a - b) * 100.0;
    d.percent_change = b != 0.0 ? (a - b) / b * 100.0 : 0.0;
    d.display = std::move(display);
    return d;
  };
  return {
      row("weighted_ship_order_ratio", before.ship_order_ratio,
          after.ship_order_ratio, "pp"),
      row("weighted_same_day_coverage", before.same_day_coverage,
          after.same_day_coverage, "pp"),
      row("avg_daily_unserved", before.avg_daily_unserved,
          after.avg_daily_unserved, "%"),
      row("share_order_over_limit", before.share_order_over_limit,
          after.share_order_over_limit, "%"),
      row("share_ship_over_limit", before.share_ship_over_limit,
          after.share_ship_over_limit, "%"),
      row("share_full_fulfillment", before.share_full_fulfillment,
          after.share_full_fulfillment, "pp"),
  };
}

BeforeAfterComparison BeforeAfter(std::span<const DailyServiceRecord> records,
                                  std::chrono::year_month_day cutoff) {
  std::vector<DailyServiceRecord> before, after;
  for (const DailyServiceRecord& r : records) {
    (r.date < cutoff ? before : after).push_back(r);
  }
  if (before.empty() || after.empty()) {
    throw InputError("cutoff " + FormatDate(cutoff) +
                     " leaves the " + (before.empty() ? "before" : "after") +
                     " window empty");
  }
  BeforeAfterComparison out;
  out.before = ComputeKpis(before);
  out.after = ComputeKpis(after);
  out.deltas = ComputeDeltas(out.before, out.after);
  for (const DailyPoint& p : DailySeries(before)) {
    if (p.requested > 0.0) out.before_daily_coverage.push_back(p.coverage);
  }
  for (const DailyPoint& p : DailySeries(after)) {
    if (p.requested > 0.0) out.after_daily_coverage.push_back(p.coverage);
  }
  if (!out.before_daily_coverage.empty() && !out.after_daily_coverage.empty()) {
    out.coverage_test =
        MannWhitneyU(out.before_daily_coverage, out.after_daily_coverage);
  }
  return out;
}

std::string FormatComparisonTable(const BeforeAfterComparison& c) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-34s %12s %12s %12s\n", "Metric",
                "Before", "After", "Delta");
  out += line;
  std::snprintf(line, sizeof(line), "%-34s %12d %12d %12s\n",
                "Analysis horizon (days)", c.before.n_days, c.after.n_days,
                "--");
  out += line;
  static const char* kLabels[] = {
      "Weighted Ship/Order Ratio",   "Weighted Same-Day Coverage",
      "Average Daily Unserved Batch", "Store-days with Order > Limit",
      "Store-days with Ship > Limit", "Store-days with Full Fulfillment"};
  for (size_t i = 0; i < c.deltas.size(); ++i) {
    const MetricDelta& d = c.deltas[i];
    char before[32], after[32], delta[32];
    if (d.metric == "avg_daily_unserved") {
      std::snprintf(before, sizeof(before), "%.1f", d.before);
      std::snprintf(after, sizeof(after), "%.1f", d.after);
    } else {
      std::snprintf(before, sizeof(before), "%.2f%%", d.before * 100.0);
      std::snprintf(after, sizeof(after), "%.2f%%", d.after * 100.0);
    }
    if (d.display == "pp") {
      std::snprintf(delta, sizeof(delta), "%+.1f pp", d.points);
    } else {
      std::snprintf(delta, sizeof(delta), "%+.1f%%", d.percent_change);
    }
    std::snprintf(line, sizeof(line), "%-34s %12s %12s %12s\n", kLabels[i],
                  before, after, delta);
    out += line;
  }
  std::snprintf(line, sizeof(line),
                "Mann-Whitney U (daily same-day coverage): U=%.1f p=%.3g (%s)\n",
                c.coverage_test.u_a, c.coverage_test.p_value,
                c.coverage_test.exact ? "exact" : "normal approx.");
  out += line;
  return out;
}

}  // namespace allocdss
