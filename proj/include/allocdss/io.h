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

// File formats.
//
// Structured documents (instances, plans, allocation results, generator
// specs, KPI reports, run records) are JSON objects carrying
//   "kind": "<document kind>", "schema_version": "<major>.<minor>"
// A major version other than kSchemaMajor is a hard error; unknown fields
// produce warnings. Canonical serialization sorts every collection by id and
// pretty-prints with two-space indentation and a trailing newline, so equal
// values serialize to identical bytes.
//
// Tabular files (daily records, dispatch exports, daily series) are UTF-8
// comma-separated text, LF line endings, a header row, '.' as decimal
// separator, and numbers in shortest round-trip form.

#ifndef ALLOCDSS_IO_H_
#define ALLOCDSS_IO_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "allocdss/generator.h"
#include "allocdss/kpi.h"
#include "allocdss/model.h"
#include "json.hpp"

namespace allocdss {

using Json = nlohmann::json;

inline constexpr int kSchemaMajor = 1;
inline constexpr std::string_view kSchemaVersion = "1.0";

// Shortest decimal text that parses back to the same double.
std::string FormatNumber(double value);

// Parses JSON text; syntax errors become InputError with line and column.
Json ParseJsonText(std::string_view text, std::string_view source);

std::string ReadTextFile(const std::filesystem::path& path);
// Creates parent directories. I/O failures become InputError naming the path.
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

// --- instances --------------------------------------------------------------

Json InstanceToJson(const Instance& instance);  // canonical order
// Throws InputError on missing/mistyped fields (with a field path) and on any
// ValidateInstance violation (dangling references name both ids).
Instance InstanceFromJson(const Json& json,
                          std::vector<std::string>* warnings = nullptr);
std::string SerializeInstance(const Instance& instance);
Instance LoadInstance(const std::filesystem::path& path,
                      std::vector<std::string>* warnings = nullptr);
void SaveInstance(const Instance& instance, const std::filesystem::path& path);

// 64-bit FNV-1a of the canonical compact serialization, as 16 hex digits.
std::string InstanceHash(const Instance& instance);

// --- plans ------------------------------------------------------------------

Json PlanToJson(const PlanConfig& plan);
PlanConfig PlanFromJson(const Json& json,
                        std::vector<std::string>* warnings = nullptr);
PlanConfig LoadPlan(const std::filesystem::path& path);
void SavePlan(const PlanConfig& plan, const std::filesystem::path& path);

// --- allocation results -----------------------------------------------------

Json ResultToJson(const AllocationResult& result);
AllocationResult ResultFromJson(const Json& json);
void SaveResult(const AllocationResult& result,
                const std::filesystem::path& path);
AllocationResult LoadResult(const std::filesystem::path& path);

// --- generator specs --------------------------------------------------------

Json GeneratorSpecToJson(const GeneratorSpec& spec);
// Missing fields keep GeneratorSpec defaults.
GeneratorSpec GeneratorSpecFromJson(const Json& json,
                                    std::vector<std::string>* warnings = nullptr);
GeneratorSpec LoadGeneratorSpec(const std::filesystem::path& path);

// --- KPI reports ------------------------------------------------------------

Json KpiReportToJson(const KpiReport& report);
Json ComparisonToJson(const BeforeAfterComparison& comparison);

// --- daily records ----------------------------------------------------------

// Header: date,store_id,requested,shipped,limit
std::string FormatDailyRecords(const std::vector<DailyServiceRecord>& records);
// Malformed rows and negative values are InputErrors naming the row number
// (1-based, header is row 1).
std::vector<DailyServiceRecord> ParseDailyRecords(std::string_view text);
std::vector<DailyServiceRecord> LoadDailyRecords(
    const std::filesystem::path& path);
void SaveDailyRecords(const std::vector<DailyServiceRecord>& records,
                      const std::filesystem::path& path);

// Header: date,requested,shipped,coverage,ratio
std::string FormatDailySeries(const std::vector<DailyPoint>& series);

// --- dispatch exports -------------------------------------------------------

// Accepted orders of one warehouse in acceptance sequence:
//   seq,order_id,store_id,route_id,category_id,volume
//   ...
//   TOTAL,,,,,<total volume>
std::string DispatchCsv(const AllocationResult& result,
                        const Instance& instance,
                        const std::string& warehouse_id);

std::string DispatchFileName(const std::string& warehouse_id);

// One file per active warehouse (empty partitions included), named by
// DispatchFileName. Returns the written paths sorted by warehouse id.
std::vector<std::filesystem::path> ExportDispatchFiles(
    const AllocationResult& result, const Instance& instance,
    const PlanConfig& plan, const std::filesystem::path& out_dir);

// --- run records ------------------------------------------------------------

struct RunRecord {
  std::string run_id;
  std::string created_at;  // ISO-8601 UTC; not part of any content hash
  PlanConfig plan;
  std::string instance_ref;  // InstanceHash of the input
  std::string day1_result;   // reference, e.g. "<run_id>/day1"
  std::string day2_result;   // empty when not simulated
  std::optional<KpiReport> kpi;
};

Json RunRecordToJson(const RunRecord& record);

}  // namespace allocdss

#endif  // ALLOCDSS_IO_H_
