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

// Batch experiments: heuristic-vs-oracle optimality gaps and runtime scaling.
// Timings cover Allocate only; instances are generated up front and reused.

#ifndef ALLOCDSS_BENCHMARKING_H_
#define ALLOCDSS_BENCHMARKING_H_

#include <cstdint>
#include <string>
#include <vector>

#include "allocdss/engine.h"
#include "allocdss/generator.h"
#include "allocdss/oracle.h"

namespace allocdss {

// 212,278 orders over 772 stores and 3 warehouses.
GeneratorSpec ProductionScaleSpec(uint64_t seed = 1);

struct GapOptions {
  GeneratorSpec base;      // seed is replaced by first_seed + k
  int num_seeds = 100;
  uint64_t first_seed = 1;
  SearchBudget budget;
};

struct GapRow {
  uint64_t seed = 0;
  int num_orders = 0;
  GapReport report;
};

struct GapSummary {
  std::vector<GapRow> rows;  // in seed order
  int usable = 0;
  double mean_gap = 0.0;     // over usable rows
  double max_gap = 0.0;
};

// Seeds run in parallel; rows are stored by index so output is stable.
GapSummary RunGapBenchmark(const GapOptions& options);

struct ScalingOptions {
  GeneratorSpec base;  // n_orders is replaced by each size
  std::vector<int> sizes = {16384, 32768, 65536, 131072, 262144};
  int repetitions = 5;
  Execution execution = Execution::kSerial;
};

struct ScalingRow {
  int num_orders = 0;
  double median_ms = 0.0;
  double doubling_ratio = 0.0;  // median / previous median; 0 for the first
  double ns_per_nlogn = 0.0;    // median / (N log2 N), in nanoseconds
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  // Least-squares fit ms = c * N log2 N through the origin.
  double fit_c = 0.0;
  double fit_r2 = 0.0;
  double max_doubling_ratio = 0.0;
};

double Median(std::vector<double> values);

// Median wall time of `repetitions` Allocate calls on one instance, after
// one untimed warm-up call.
double TimeAllocate(const Instance& instance, const PlanConfig& plan,
                    int repetitions, Execution execution);

ScalingReport RunScalingBenchmark(const ScalingOptions& options);

std::string FormatGapTable(const GapSummary& summary);
std::string FormatScalingTable(const ScalingReport& report);

}  // namespace allocdss

#endif  // ALLOCDSS_BENCHMARKING_H_
