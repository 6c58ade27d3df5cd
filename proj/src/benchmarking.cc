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

#include "allocdss/benchmarking.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace allocdss {

GeneratorSpec ProductionScaleSpec(uint64_t seed) {
  GeneratorSpec spec;
  spec.seed = seed;
  spec.n_orders = 212278;
  spec.n_stores = 772;
  spec.n_routes = 24;
  spec.n_categories = 12;
  spec.n_warehouses = 3;
  spec.capacity_tightness = 0.8;
  spec.category_tightness = 0.9;
  return spec;
}

GapSummary RunGapBenchmark(const GapOptions& options) {
  GapSummary summary;
  summary.rows.resize(std::max(0, options.num_seeds));
  const int n = static_cast<int>(summary.rows.size());

#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < n; ++k) {
    GeneratorSpec spec = options.base;
    spec.seed = options.first_seed + static_cast<uint64_t>(k);
    const Instance instance = Generate(spec);
    const PlanConfig plan = DefaultPlan(instance);
    GapRow& row = summary.rows[k];
    row.seed = spec.seed;
    row.num_orders = static_cast<int>(instance.orders.size());
    row.report =
        ComputeGap(instance, plan, ResidualCapacities(instance), options.budget);
  }

  double sum = 0.0;
  for (const GapRow& row : summary.rows) {
    if (!row.report.usable) continue;
    ++summary.usable;
    sum += row.report.relative_gap;
    summary.max_gap = std::max(summary.max_gap, row.report.relative_gap);
  }
  if (summary.usable > 0) summary.mean_gap = sum / summary.usable;
  return summary;
}

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid]
                                : 0.5 * (values[mid - 1] + values[mid]);
}

double TimeAllocate(const Instance& instance, const PlanConfig& plan,
                    int repetitions, Execution execution) {
  const ResidualCapacityMap residuals = ResidualCapacities(instance);
  AllocateOptions options;
  options.execution = execution;
  Allocate(instance, plan, residuals, options);  // warm-up, not timed
  std::vector<double> samples;
  for (int r = 0; r < std::max(1, repetitions); ++r) {
    const auto start = std::chrono::steady_clock::now();
    Allocate(instance, plan, residuals, options);
    const auto stop = std::chrono::steady_clock::now();
    samples.push_back(
        std::chrono::duration<double, std::milli>(stop - start).count());
  }
  return Median(std::move(samples));
}

ScalingReport RunScalingBenchmark(const ScalingOptions& options) {
  struct Case {
    Instance instance;
    PlanConfig plan;
    ResidualCapacityMap residuals;
    std::vector<double> samples;
  };
  std::vector<Case> cases;
  for (int n : options.sizes) {
    GeneratorSpec spec = options.base;
    spec.n_orders = n;
    Case c;
    c.instance = Generate(spec);
    c.plan = DefaultPlan(c.instance);
    c.residuals = ResidualCapacities(c.instance);
    cases.push_back(std::move(c));
  }
  AllocateOptions allocate;
  allocate.execution = options.execution;
  for (Case& c : cases) Allocate(c.instance, c.plan, c.residuals, allocate);
  // Repetitions go round-robin over the sizes so that a stretch of machine
  // noise spreads over all sizes instead of landing on one size's samples.
  for (int r = 0; r < std::max(1, options.repetitions); ++r) {
    for (Case& c : cases) {
      const auto start = std::chrono::steady_clock::now();
      Allocate(c.instance, c.plan, c.residuals, allocate);
      const auto stop = std::chrono::steady_clock::now();
      c.samples.push_back(
          std::chrono::duration<double, std::milli>(stop - start).count());
    }
  }

  ScalingReport report;
  double sxy = 0.0, sxx = 0.0;
  for (size_t k = 0; k < cases.size(); ++k) {
    const int n = options.sizes[k];
    ScalingRow row;
    row.num_orders = n;
    row.median_ms = Median(std::move(cases[k].samples));
    const double nlogn = n * std::log2(std::max(2, n));
    row.ns_per_nlogn = row.median_ms * 1e6 / nlogn;
    if (!report.rows.empty() && report.rows.back().median_ms > 0.0) {
      row.doubling_ratio = row.median_ms / report.rows.back().median_ms;
      report.max_doubling_ratio =
          std::max(report.max_doubling_ratio, row.doubling_ratio);
    }
    sxy += nlogn * row.median_ms;
    sxx += nlogn * nlogn;
    report.rows.push_back(row);
  }
  if (sxx > 0.0) report.fit_c = sxy / sxx;
  double mean = 0.0;
  for (const ScalingRow& r : report.rows) mean += r.median_ms;
  if (!report.rows.empty()) mean /= report.rows.size();
  double ss_res = 0.0, ss_tot = 0.0;
  for (const ScalingRow& r : report.rows) {
    const double n = r.num_orders;
    const double fit = report.fit_c * n * std::log2(std::max(2.0, n));
    ss_res += (r.median_ms - fit) * (r.median_ms - fit);
    ss_tot += (r.median_ms - mean) * (r.median_ms - mean);
  }
  report.fit_r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return report;
}

std::string FormatGapTable(const GapSummary& summary) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-8s %6s %16s %16s %10s %12s\n", "seed",
                "N", "heuristic", "oracle", "gap", "nodes");
  out += line;
  for (const GapRow& row : summary.rows) {
    if (row.report.usable) {
      std::snprintf(line, sizeof(line), "%-8llu %6d %16.4f %16.4f %10.6f %12lld\n",
                    static_cast<unsigned long long>(row.seed), row.num_orders,
                    row.report.heuristic_objective,
                    row.report.oracle_objective, row.report.relative_gap,
                    static_cast<long long>(row.report.oracle_nodes));
    } else {
      std::snprintf(line, sizeof(line), "%-8llu %6d %16.4f %16s %10s %12lld\n",
                    static_cast<unsigned long long>(row.seed), row.num_orders,
                    row.report.heuristic_objective, "budget", "n/a",
                    static_cast<long long>(row.report.oracle_nodes));
    }
    out += line;
  }
  std::snprintf(line, sizeof(line),
                "usable %d/%zu  mean gap %.6f  max gap %.6f\n", summary.usable,
                summary.rows.size(), summary.mean_gap, summary.max_gap);
  out += line;
  return out;
}

std::string FormatScalingTable(const ScalingReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%10s %12s %10s %14s\n", "N", "median_ms",
                "ratio", "ns/(N log N)");
  out += line;
  for (const ScalingRow& row : report.rows) {
    if (row.doubling_ratio > 0.0) {
      std::snprintf(line, sizeof(line), "%10d %12.3f %10.3f %14.3f\n",
                    row.num_orders, row.median_ms, row.doubling_ratio,
                    row.ns_per_nlogn);
    } else {
      std::snprintf(line, sizeof(line), "%10d %12.3f %10s %14.3f\n",
                    row.num_orders, row.median_ms, "-", row.ns_per_nlogn);
    }
    out += line;
  }
  std::snprintf(line, sizeof(line),
                "fit ms = %.4g * N log2 N  (R^2 %.4f)  max doubling ratio %.3f\n",
                report.fit_c, report.fit_r2, report.max_doubling_ratio);
  out += line;
  return out;
}

}  // namespace allocdss
