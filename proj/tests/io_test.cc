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

#include "allocdss/io.h"

#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "allocdss/engine.h"
#include "allocdss/random.h"
#include "test_util.h"

namespace allocdss {
namespace {

using test::TempDir;
using test::TestData;

std::string ErrorOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

bool Contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

GeneratorSpec SmallSpec(uint64_t seed) {
  GeneratorSpec spec;
  spec.seed = seed;
  spec.n_orders = 150;
  spec.capacity_tightness = 0.7;
  return spec;
}

// --- numbers and JSON text --------------------------------------------------

TEST(FormatNumberTest, ShortestRoundTrip) {
  EXPECT_EQ(FormatNumber(0.1), "0.1");
  EXPECT_EQ(FormatNumber(12.5), "12.5");
  EXPECT_EQ(FormatNumber(20), "20");
  EXPECT_EQ(FormatNumber(-3.25), "-3.25");
  Xoshiro256 rng(5);
  for (int k = 0; k < 1000; ++k) {
    const double x = rng.Uniform(-1e6, 1e6);
    EXPECT_EQ(std::stod(FormatNumber(x)), x);
  }
}

TEST(ParseJsonTextTest, SyntaxErrorHasLineAndColumn) {
  const std::string message =
      ErrorOf([] { ParseJsonText("{\n  \"a\": 1,\n  oops\n}", "f.json"); });
  EXPECT_TRUE(Contains(message, "f.json:3:")) << message;
}

// --- instances --------------------------------------------------------------

TEST(InstanceIoTest, SampleFixtureLoadsToKnownValue) {
  std::vector<std::string> warnings;
  const Instance loaded = LoadInstance(TestData("sample_3_orders.json"),
                                       &warnings);
  EXPECT_TRUE(warnings.empty());

  // Second reader: the same document assembled by hand.
  Instance expected;
  expected.routes = {{"R1"}};
  expected.categories = {{"FOOD", false, std::nullopt},
                         {"TEXTILE", true, 12.5}};
  Warehouse w1, w2;
  w1.id = "W1";
  w1.rank = 1;
  w2.id = "W2";
  w2.rank = 2;
  expected.warehouses = {w1, w2};
  expected.stores = {
      {"S1", "R1", 20, 2.5, {{"FOOD", true}, {"TEXTILE", true}}},
      {"S2", "R1", 8, 0, {{"FOOD", true}, {"TEXTILE", false}}}};
  // Loading keeps file order; only serialization canonicalizes.
  expected.orders = {{"O3", "S2", "W1", "FOOD", 4.25, 1},
                     {"O1", "S1", "W1", "TEXTILE", 10, 2},
                     {"O2", "S1", "W2", "FOOD", 7.5, 3}};
  EXPECT_EQ(loaded, expected);
}

TEST(InstanceIoTest, SaveLoadRoundTrip) {
  TempDir dir;
  const Instance instance = Generate(SmallSpec(3));
  SaveInstance(instance, dir / "i.json");
  EXPECT_EQ(LoadInstance(dir / "i.json"), instance);
}

TEST(InstanceIoTest, CanonicalSerializationIsIdempotent) {
  TempDir dir;
  Instance instance = Generate(SmallSpec(4));
  std::reverse(instance.orders.begin(), instance.orders.end());
  const std::string first = SerializeInstance(instance);
  SaveInstance(instance, dir / "a.json");
  SaveInstance(LoadInstance(dir / "a.json"), dir / "b.json");
  EXPECT_EQ(ReadTextFile(dir / "b.json"), first);
  EXPECT_EQ(first.back(), '\n');
}

TEST(InstanceIoTest, HashInvariantUnderReordering) {
  Instance instance = Generate(SmallSpec(5));
  const std::string hash = InstanceHash(instance);
  EXPECT_EQ(hash.size(), 16u);
  std::reverse(instance.orders.begin(), instance.orders.end());
  std::reverse(instance.stores.begin(), instance.stores.end());
  EXPECT_EQ(InstanceHash(instance), hash);

  // Field order inside objects is irrelevant too.
  Json j = InstanceToJson(instance);
  Json shuffled = Json::object();
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  std::reverse(keys.begin(), keys.end());
  for (const std::string& k : keys) shuffled[k] = j[k];
  EXPECT_EQ(InstanceHash(InstanceFromJson(shuffled)), hash);

  instance.orders[0].volume += 1.0;
  EXPECT_NE(InstanceHash(instance), hash);
}

TEST(InstanceIoTest, DanglingReferenceNamesBothIds) {
  Json j = ParseJsonText(ReadTextFile(TestData("sample_3_orders.json")), "t");
  j["orders"][0]["store_id"] = "S404";
  const std::string message = ErrorOf([&] { InstanceFromJson(j); });
  EXPECT_TRUE(Contains(message, "O3")) << message;
  EXPECT_TRUE(Contains(message, "S404")) << message;
}

TEST(InstanceIoTest, FieldPathInTypeErrors) {
  Json j = ParseJsonText(ReadTextFile(TestData("sample_3_orders.json")), "t");
  j["orders"][1]["volume"] = "ten";
  EXPECT_TRUE(Contains(ErrorOf([&] { InstanceFromJson(j); }),
                       "orders[1].volume"));
  j = ParseJsonText(ReadTextFile(TestData("sample_3_orders.json")), "t");
  j["stores"][0].erase("route_id");
  EXPECT_TRUE(Contains(ErrorOf([&] { InstanceFromJson(j); }),
                       "stores[0].route_id"));
}

TEST(InstanceIoTest, UnknownFieldsWarn) {
  Json j = ParseJsonText(ReadTextFile(TestData("sample_3_orders.json")), "t");
  j["extra"] = 1;
  j["orders"][0]["colour"] = "red";
  std::vector<std::string> warnings;
  InstanceFromJson(j, &warnings);
  ASSERT_EQ(warnings.size(), 2u);
  EXPECT_TRUE(Contains(warnings[0] + warnings[1], "colour"));
}

TEST(InstanceIoTest, SchemaVersionAndKindChecked) {
  Json j = ParseJsonText(ReadTextFile(TestData("sample_3_orders.json")), "t");
  j["schema_version"] = "2.0";
  EXPECT_THROW(InstanceFromJson(j), InputError);
  j["schema_version"] = "1.7";
  EXPECT_NO_THROW(InstanceFromJson(j));
  j["kind"] = "plan";
  EXPECT_THROW(InstanceFromJson(j), InputError);
  j.erase("kind");  // optional; the version is not
  EXPECT_NO_THROW(InstanceFromJson(j));
  j.erase("schema_version");
  EXPECT_THROW(InstanceFromJson(j), InputError);
}

TEST(InstanceIoTest, LoadErrorsNameThePath) {
  TempDir dir;
  WriteTextFile(dir / "bad.json", "{");
  EXPECT_TRUE(Contains(ErrorOf([&] { LoadInstance(dir / "bad.json"); }),
                       "bad.json"));
  EXPECT_TRUE(Contains(ErrorOf([&] { LoadInstance(dir / "missing.json"); }),
                       "missing.json"));
}

// --- plans, results, specs --------------------------------------------------

TEST(PlanIoTest, RoundTripAndDuplicates) {
  TempDir dir;
  const PlanConfig plan = LoadPlan(TestData("demo_plan.json"));
  EXPECT_EQ(plan.warehouses.size(), 3u);
  EXPECT_EQ(plan.RankOf("WH-B"), 2);
  SavePlan(plan, dir / "p.json");
  EXPECT_EQ(LoadPlan(dir / "p.json"), plan);

  Json j = PlanToJson(plan);
  j["warehouses"].push_back(j["warehouses"][0]);
  EXPECT_THROW(PlanFromJson(j), InputError);
}

TEST(ResultIoTest, RoundTrip) {
  TempDir dir;
  const Instance instance = Generate(SmallSpec(6));
  const AllocationResult result =
      Allocate(instance, DefaultPlan(instance), ResidualCapacities(instance));
  ASSERT_FALSE(result.rejections.empty());
  SaveResult(result, dir / "r.json");
  EXPECT_EQ(LoadResult(dir / "r.json"), result);
}

TEST(GeneratorSpecIoTest, RoundTripAndDefaults) {
  GeneratorSpec spec = SmallSpec(9);
  spec.volume = {VolumeDistribution::Kind::kLogNormal, 1.2, 0.4};
  EXPECT_EQ(GeneratorSpecFromJson(GeneratorSpecToJson(spec)), spec);
  const GeneratorSpec loaded = LoadGeneratorSpec(TestData("demo_spec.json"));
  EXPECT_EQ(loaded.seed, 7u);
  EXPECT_EQ(loaded.n_orders, 400);
  Json minimal = {{"kind", "generator_spec"}, {"schema_version", "1.0"}};
  EXPECT_EQ(GeneratorSpecFromJson(minimal), GeneratorSpec());
}

// --- daily records ----------------------------------------------------------

TEST(DailyRecordsTest, FourRowFixture) {
  const auto records = LoadDailyRecords(TestData("daily_records_4.csv"));
  ASSERT_EQ(records.size(), 4u);
  EXPECT_EQ(FormatDate(records[0].date), "2026-01-05");
  EXPECT_EQ(records[0].store_id, "S1");
  EXPECT_EQ(records[0].requested, 100.0);
  EXPECT_EQ(records[0].shipped, 54.1);
  EXPECT_EQ(records[0].store_limit, 80.0);
  EXPECT_EQ(records[3].shipped, 0.25);
  EXPECT_EQ(FormatDate(records[3].date), "2026-01-06");
  EXPECT_EQ(records[2].requested, 0.0);
}

TEST(DailyRecordsTest, NegativeValueNamesRow) {
  const std::string text =
      "date,store_id,requested,shipped,limit\n"
      "2026-01-05,S1,1,2,3\n"
      "2026-01-05,S2,1,-3,3\n";
  const std::string message = ErrorOf([&] { ParseDailyRecords(text); });
  EXPECT_TRUE(Contains(message, "row 3")) << message;
}

TEST(DailyRecordsTest, MalformedRows) {
  const std::string header = "date,store_id,requested,shipped,limit\n";
  EXPECT_TRUE(Contains(
      ErrorOf([&] { ParseDailyRecords(header + "2026-13-01,S,1,1,1\n"); }),
      "row 2"));
  EXPECT_TRUE(Contains(
      ErrorOf([&] { ParseDailyRecords(header + "2026-01-01,S,1,1\n"); }),
      "row 2"));
  EXPECT_TRUE(Contains(
      ErrorOf([&] { ParseDailyRecords(header + "2026-01-01,S,x,1,1\n"); }),
      "row 2"));
  EXPECT_THROW(ParseDailyRecords(""), InputError);
  EXPECT_THROW(ParseDailyRecords("date,store_id\n"), InputError);
}

TEST(DailyRecordsTest, ColumnsFoundByName) {
  const auto records = ParseDailyRecords(
      "limit,shipped,requested,store_id,date\n9,2,1,S,2026-02-01\n");
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].store_limit, 9.0);
  EXPECT_EQ(records[0].requested, 1.0);
}

TEST(DailyRecordsTest, LargeFileRoundTrip) {
  TempDir dir;
  Xoshiro256 rng(100000);
  std::vector<DailyServiceRecord> records;
  for (int k = 0; k < 100000; ++k) {
    DailyServiceRecord r;
    r.date = std::chrono::sys_days{ParseDate("2025-06-01")} +
             std::chrono::days{k / 500};
    r.store_id = "S" + std::to_string(k % 500);
    r.requested = std::round(rng.Uniform(0, 500) * 100) / 100;
    r.shipped = rng.Uniform(0, 500);
    r.store_limit = std::round(rng.Uniform(50, 400));
    records.push_back(r);
  }
  SaveDailyRecords(records, dir / "d.csv");
  const auto loaded = LoadDailyRecords(dir / "d.csv");
  EXPECT_EQ(loaded, records);
  EXPECT_EQ(FormatDailyRecords(loaded), ReadTextFile(dir / "d.csv"));
}

TEST(DailySeriesFormatTest, HeaderAndRows) {
  const auto records = LoadDailyRecords(TestData("daily_records_4.csv"));
  const std::string text = FormatDailySeries(DailySeries(records));
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "date,requested,shipped,coverage,ratio");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2);
}

// --- dispatch exports -------------------------------------------------------

TEST(DispatchTest, PartitionsAcceptedOrders) {
  TempDir dir;
  const Instance instance = Generate(SmallSpec(11));
  const PlanConfig plan = DefaultPlan(instance);
  const AllocationResult result =
      Allocate(instance, plan, ResidualCapacities(instance));
  const auto paths = ExportDispatchFiles(result, instance, plan, dir.path());
  ASSERT_EQ(paths.size(), 3u);
  std::multiset<std::string> rows;
  for (const auto& path : paths) {
    std::istringstream in(ReadTextFile(path));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "seq,order_id,store_id,route_id,category_id,volume");
    while (std::getline(in, line)) {
      if (line.rfind("TOTAL", 0) == 0) continue;
      rows.insert(line.substr(line.find(',') + 1, line.find(',', line.find(',') + 1) -
                                                  line.find(',') - 1));
    }
  }
  EXPECT_EQ(rows, std::multiset<std::string>(result.accepted.begin(),
                                             result.accepted.end()));
}

TEST(DispatchTest, EmptyPartitionHasHeaderAndZeroFooter) {
  const Instance instance = test::InstanceBuilder()
                                .Route("R")
                                .Category("C")
                                .Warehouse("A", 1)
                                .Warehouse("B", 2)
                                .Store("S", "R", 10)
                                .Order("o", "S", "A", "C", 2)
                                .Build();
  const AllocationResult result =
      Allocate(instance, DefaultPlan(instance), ResidualCapacities(instance));
  EXPECT_EQ(DispatchCsv(result, instance, "B"),
            "seq,order_id,store_id,route_id,category_id,volume\n"
            "TOTAL,,,,,0\n");
  EXPECT_EQ(DispatchCsv(result, instance, "A"),
            "seq,order_id,store_id,route_id,category_id,volume\n"
            "1,o,S,R,C,2\n"
            "TOTAL,,,,,2\n");
  EXPECT_EQ(DispatchFileName("A"), "dispatch_A.csv");
}

TEST(DispatchTest, InactiveWarehouseGetsNoFile) {
  TempDir dir;
  const Instance instance = LoadInstance(TestData("demo_instance.json"));
  PlanConfig plan = LoadPlan(TestData("demo_plan.json"));
  plan.warehouses["WH-C"].active = false;
  const AllocationResult result =
      Allocate(instance, plan, ResidualCapacities(instance));
  const auto paths = ExportDispatchFiles(result, instance, plan, dir.path());
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(paths[1].filename(), "dispatch_WH-B.csv");
}

// Frozen after the first verified run of the demo fixture.
TEST(DispatchTest, DemoMatchesGoldenFiles) {
  TempDir dir;
  const Instance instance = LoadInstance(TestData("demo_instance.json"));
  const PlanConfig plan = LoadPlan(TestData("demo_plan.json"));
  const AllocationResult result =
      Allocate(instance, plan, ResidualCapacities(instance));
  for (const auto& path :
       ExportDispatchFiles(result, instance, plan, dir.path())) {
    EXPECT_EQ(ReadTextFile(path),
              ReadTextFile(TestData("golden") / path.filename()))
        << path.filename();
  }
  std::string result_text = ReadTextFile(TestData("golden/demo_result.json"));
  SaveResult(result, dir / "result.json");
  EXPECT_EQ(ReadTextFile(dir / "result.json"), result_text);
}

TEST(DispatchTest, ByteDeterministic) {
  TempDir a, b;
  const Instance instance = Generate(SmallSpec(12));
  const PlanConfig plan = DefaultPlan(instance);
  const AllocationResult r1 =
      Allocate(instance, plan, ResidualCapacities(instance));
  const AllocationResult r2 =
      Allocate(instance, plan, ResidualCapacities(instance),
               {Execution::kParallel, nullptr});
  const auto pa = ExportDispatchFiles(r1, instance, plan, a.path());
  const auto pb = ExportDispatchFiles(r2, instance, plan, b.path());
  ASSERT_EQ(pa.size(), pb.size());
  for (size_t k = 0; k < pa.size(); ++k) {
    EXPECT_EQ(ReadTextFile(pa[k]), ReadTextFile(pb[k]));
  }
}

// --- reports ----------------------------------------------------------------

TEST(ReportIoTest, ComparisonJsonFields) {
  const auto records = LoadDailyRecords(TestData("daily_records_4.csv"));
  const auto comparison = BeforeAfter(records, ParseDate("2026-01-06"));
  const Json j = ComparisonToJson(comparison);
  EXPECT_TRUE(j.contains("before"));
  EXPECT_TRUE(j.contains("after"));
  EXPECT_EQ(j["deltas"].size(), 6u);
  EXPECT_TRUE(j["mann_whitney"].contains("p_value_two_sided"));
}

TEST(ReportIoTest, RunRecordOmitsEmptyDayTwo) {
  RunRecord record;
  record.run_id = "run-000001";
  record.instance_ref = "0123456789abcdef";
  record.day1_result = "run-000001/day1";
  const Json j = RunRecordToJson(record);
  EXPECT_EQ(j["run_id"], "run-000001");
  EXPECT_EQ(j["instance_ref"], "0123456789abcdef");
}

}  // namespace
}  // namespace allocdss
