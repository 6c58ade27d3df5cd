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

// allocdss: batch entry point.
//
//   allocdss generate --spec demo.json --out inst.json
//   allocdss allocate --instance inst.json --plan plan.json --out-dir out
//   allocdss simulate --spec demo.json --days 30 --out records.csv
//   allocdss evaluate --records records.csv --cutoff 2026-01-15 --out kpi
//   allocdss bench --mode gap|scaling
//   allocdss serve --addr 127.0.0.1:8080
//
// Exit codes: 0 success, 1 input or validation error, 2 internal failure.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "allocdss/benchmarking.h"
#include "allocdss/engine.h"
#include "allocdss/generator.h"
#include "allocdss/http_server.h"
#include "allocdss/io.h"
#include "allocdss/kpi.h"
#include "allocdss/rolling.h"
#include "allocdss/service.h"

namespace fs = std::filesystem;

namespace allocdss {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

struct GenerateFlags {
  std::string spec_path;
  std::string out;
  bool production_scale = false;
  int64_t seed = -1;
};

struct AllocateFlags {
  std::string instance;
  std::string plan;
  std::string out_dir;
  bool second_day = false;
  bool parallel = false;
  std::string format;
};

struct SimulateFlags {
  std::string spec_path;
  std::string plan;
  std::string out;
  int days = 30;
  double volatility = 0.3;
  std::string start_date = "2026-01-01";
};

struct EvaluateFlags {
  std::string records;
  std::string cutoff;
  std::string out;
  std::string format;
};

struct BenchFlags {
  std::string mode;
  std::string spec_path;
  std::string out;
  int seeds = 100;
  int64_t first_seed = 1;
  int n_orders = 15;
  double tightness = 0.6;
  double category_tightness = 0.8;
  std::vector<int> sizes;
  int repetitions = 5;
  bool parallel = false;
  bool production_scale = false;
};

struct ServeFlags {
  std::string addr;
};

bool UseTable(const std::string& format) {
  if (format == "table") return true;
  if (format == "records") return false;
  return isatty(STDOUT_FILENO) != 0;
}

GeneratorSpec SpecFrom(const std::string& path) {
  return path.empty() ? GeneratorSpec{} : LoadGeneratorSpec(path);
}

std::string Ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", ms);
  return buf;
}

int RunGenerate(const GenerateFlags& f) {
  GeneratorSpec spec = f.production_scale ? ProductionScaleSpec() : SpecFrom(f.spec_path);
  if (f.seed >= 0) spec.seed = static_cast<uint64_t>(f.seed);
  const Instance instance = Generate(spec);
  SaveInstance(instance, f.out);
  std::cout << "generated " << instance.orders.size() << " orders, "
            << instance.stores.size() << " stores, "
            << instance.warehouses.size() << " warehouses -> " << f.out
            << "\n";
  return kExitOk;
}

int RunAllocate(const AllocateFlags& f) {
  std::vector<std::string> warnings;
  const Instance instance = LoadInstance(f.instance, &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
  const PlanConfig plan = f.plan.empty() ? DefaultPlan(instance) : LoadPlan(f.plan);
  ThrowIfViolations(ValidatePlan(instance, plan), "invalid plan");

  PhaseTimings timings;
  AllocateOptions options;
  options.execution = f.parallel ? Execution::kParallel : Execution::kSerial;
  options.timings = &timings;
  const ResidualCapacityMap residuals = ResidualCapacities(instance);
  const AllocationResult result = Allocate(instance, plan, residuals, options);

  const auto violations = CheckFeasibility(instance, plan, residuals, result);

  const auto export_start = std::chrono::steady_clock::now();
  const fs::path out_dir = f.out_dir;
  SaveResult(result, out_dir / "result.json");
  const auto files = ExportDispatchFiles(result, instance, plan, out_dir);
  timings.export_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - export_start)
                          .count();

  std::optional<AllocationResult> day2;
  if (f.second_day) {
    day2 = SimulateNextDay(instance, plan, result, options);
    SaveResult(*day2, out_dir / "result_day2.json");
  }

  if (UseTable(f.format)) {
    std::cout << "orders:    " << instance.orders.size() << "\n"
              << "accepted:  " << result.accepted.size() << "\n"
              << "rejected:  " << result.rejections.size() << "\n"
              << "objective: " << FormatNumber(result.objective_value) << "\n";
    std::map<std::string, int> by_reason;
    for (const auto& [id, reason] : result.rejections) {
      ++by_reason[std::string(ToString(reason))];
    }
    for (const auto& [reason, count] : by_reason) {
      std::cout << "  " << reason << ": " << count << "\n";
    }
    for (const fs::path& p : files) std::cout << "export:    " << p.string() << "\n";
    if (day2) {
      std::cout << "day 2:     " << day2->accepted.size() << " accepted of "
                << day2->accepted.size() + day2->rejections.size() << "\n";
    }
  } else {
    std::cout << ResultToJson(result).dump() << "\n";
  }
  std::cerr << "timings ms: filter " << Ms(timings.filter_ms) << " sort "
            << Ms(timings.sort_ms) << " allocate " << Ms(timings.allocate_ms)
            << " export " << Ms(timings.export_ms) << "\n";
  if (!violations.empty()) {
    std::cerr << "feasibility: FAIL\n";
    for (const ConstraintViolation& v : violations) {
      std::cerr << "  " << ToString(v.constraint) << " " << v.subject << ": "
                << v.message << "\n";
    }
    return kExitInternal;
  }
  std::cerr << "feasibility: PASS\n";
  return kExitOk;
}

int RunSimulate(const SimulateFlags& f) {
  const GeneratorSpec spec = SpecFrom(f.spec_path);
  const std::vector<Instance> days =
      GenerateDailySeries(spec, f.days, f.volatility);
  const PlanConfig plan = f.plan.empty() ? DefaultPlan(days.front()) : LoadPlan(f.plan);
  ThrowIfViolations(ValidatePlan(days.front(), plan), "invalid plan");
  RollingOptions options;
  options.start_date = ParseDate(f.start_date);
  const RollingOutcome outcome =
      RunRolling(days, plan, HeuristicAllocator, options);
  SaveDailyRecords(outcome.records, f.out);
  std::cout << "simulated " << f.days << " days, " << outcome.records.size()
            << " store-day records -> " << f.out << "\n";
  return kExitOk;
}

int RunEvaluate(const EvaluateFlags& f) {
  const auto records = LoadDailyRecords(f.records);
  const BeforeAfterComparison comparison =
      BeforeAfter(records, ParseDate(f.cutoff));
  const std::string table = FormatComparisonTable(comparison);
  if (!f.out.empty()) {
    const fs::path out = f.out;
    WriteTextFile(out / "kpi_comparison.json",
                  ComparisonToJson(comparison).dump(2) + "\n");
    WriteTextFile(out / "kpi_table.txt", table);
    WriteTextFile(out / "daily_series.csv",
                  FormatDailySeries(DailySeries(records)));
  }
  if (UseTable(f.format)) {
    std::cout << table;
  } else {
    std::cout << ComparisonToJson(comparison).dump() << "\n";
  }
  return kExitOk;
}

int RunBench(const BenchFlags& f) {
  std::string text;
  if (f.mode == "gap") {
    GapOptions options;
    if (!f.spec_path.empty()) {
      options.base = LoadGeneratorSpec(f.spec_path);
    } else {
      options.base.n_orders = f.n_orders;
      options.base.n_stores = 4;
      options.base.n_routes = 2;
      options.base.capacity_tightness = f.tightness;
      options.base.category_tightness = f.category_tightness;
    }
    options.num_seeds = f.seeds;
    options.first_seed = static_cast<uint64_t>(f.first_seed);
    text = FormatGapTable(RunGapBenchmark(options));
  } else if (f.mode == "scaling") {
    ScalingOptions options;
    if (!f.spec_path.empty()) options.base = LoadGeneratorSpec(f.spec_path);
    if (f.production_scale) {
      options.base = ProductionScaleSpec();
      options.sizes = {options.base.n_orders};
    }
    if (!f.sizes.empty()) options.sizes = f.sizes;
    options.repetitions = f.repetitions;
    options.execution = f.parallel ? Execution::kParallel : Execution::kSerial;
    text = FormatScalingTable(RunScalingBenchmark(options));
  } else {
    throw InputError("--mode must be 'gap' or 'scaling'");
  }
  std::cout << text;
  if (!f.out.empty()) WriteTextFile(f.out, text);
  return kExitOk;
}

int RunServe(const ServeFlags& f) {
  const std::string addr = ResolveListenAddress(f.addr);
  PlannerService service;
  HttpServer server(service);
  const int port = server.Bind(ParseListenAddress(addr));
  std::cerr << "listening on " << ParseListenAddress(addr).host << ":" << port
            << "\n";
  server.Serve();
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Warehouse-aware order allocation decision support"};
  app.set_config("--config", "", "TOML/INI file with default flag values");
  app.require_subcommand(1);

  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic instance");
  generate->add_option("--spec", gen.spec_path, "Generator spec (JSON)");
  generate->add_option("--out", gen.out, "Instance output path")->required();
  generate->add_flag("--production-scale", gen.production_scale,
                     "212,278 orders, 772 stores, 3 warehouses");
  generate->add_option("--seed", gen.seed, "Override the spec seed");

  AllocateFlags alloc;
  auto* allocate = app.add_subcommand("allocate", "Run the allocation heuristic");
  allocate->add_option("--instance", alloc.instance, "Instance file")->required();
  allocate->add_option("--plan", alloc.plan,
                       "Plan file (default: instance activation and ranks)");
  allocate->add_option("--out-dir", alloc.out_dir, "Output directory")->required();
  allocate->add_flag("--second-day", alloc.second_day,
                     "Also write the simulated day-2 result");
  allocate->add_flag("--parallel", alloc.parallel, "Use the OpenMP kernels");
  allocate->add_option("--format", alloc.format, "table or records")
      ->check(CLI::IsMember({"table", "records"}));

  SimulateFlags sim;
  auto* simulate =
      app.add_subcommand("simulate", "Rolling multi-day run -> daily records");
  simulate->add_option("--spec", sim.spec_path, "Generator spec (JSON)");
  simulate->add_option("--plan", sim.plan, "Plan file");
  simulate->add_option("--out", sim.out, "Daily records CSV")->required();
  simulate->add_option("--days", sim.days, "Number of days")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--volatility", sim.volatility, "Daily demand volatility")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--start-date", sim.start_date, "First day (YYYY-MM-DD)");

  EvaluateFlags eval;
  auto* evaluate = app.add_subcommand("evaluate", "Before/after KPI comparison");
  evaluate->add_option("--records", eval.records, "Daily records CSV")->required();
  evaluate->add_option("--cutoff", eval.cutoff, "Go-live date (YYYY-MM-DD)")
      ->required();
  evaluate->add_option("--out", eval.out, "Output directory");
  evaluate->add_option("--format", eval.format, "table or records")
      ->check(CLI::IsMember({"table", "records"}));

  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "Gap or scaling experiments");
  bench_cmd->add_option("--mode", bench.mode, "gap or scaling")
      ->required()
      ->check(CLI::IsMember({"gap", "scaling"}));
  bench_cmd->add_option("--spec", bench.spec_path, "Base generator spec");
  bench_cmd->add_option("--out", bench.out, "Write the table here too");
  bench_cmd->add_option("--seeds", bench.seeds, "Gap: number of seeds");
  bench_cmd->add_option("--first-seed", bench.first_seed, "Gap: first seed");
  bench_cmd->add_option("--n-orders", bench.n_orders, "Gap: orders per instance");
  bench_cmd->add_option("--tightness", bench.tightness,
                        "Gap: store capacity tightness");
  bench_cmd->add_option("--category-tightness", bench.category_tightness,
                        "Gap: route-category limit tightness");
  bench_cmd->add_option("--sizes", bench.sizes, "Scaling: order counts")
      ->delimiter(',');
  bench_cmd->add_option("--reps", bench.repetitions, "Scaling: repetitions");
  bench_cmd->add_flag("--parallel", bench.parallel, "Scaling: OpenMP kernels");
  bench_cmd->add_flag("--production-scale", bench.production_scale,
                      "Scaling: time the 212,278-order instance only");

  ServeFlags serve;
  auto* serve_cmd = app.add_subcommand("serve", "Start the planner API");
  serve_cmd->add_option("--addr", serve.addr,
                        "host:port (default $ALLOCDSS_ADDR or 127.0.0.1:8080)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*generate) return RunGenerate(gen);
    if (*allocate) return RunAllocate(alloc);
    if (*simulate) return RunSimulate(sim);
    if (*evaluate) return RunEvaluate(eval);
    if (*bench_cmd) return RunBench(bench);
    if (*serve_cmd) return RunServe(serve);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace
}  // namespace allocdss

int main(int argc, char** argv) { return allocdss::Main(argc, argv); }
