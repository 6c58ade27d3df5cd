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

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace allocdss {

namespace fs = std::filesystem;

namespace {

// Typed access to one JSON object with a path prefix for diagnostics.
class Fields {
 public:
  Fields(const Json& object, std::string path,
         std::vector<std::string>* warnings,
         std::initializer_list<std::string_view> known)
      : object_(object), path_(std::move(path)) {
    if (!object.is_object()) Fail(path_, "expected an object");
    if (warnings == nullptr) return;
    for (const auto& [key, value] : object.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        warnings->push_back("unknown field '" + Sub(key) + "' ignored");
      }
    }
  }

  std::string Sub(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  bool Has(std::string_view key) const {
    return object_.contains(std::string(key));
  }

  const Json& Require(std::string_view key) const {
    auto it = object_.find(std::string(key));
    if (it == object_.end()) Fail(Sub(key), "missing required field");
    return *it;
  }

  std::string String(std::string_view key) const {
    const Json& v = Require(key);
    if (!v.is_string()) Fail(Sub(key), "expected a string");
    return v.get<std::string>();
  }

  double Number(std::string_view key) const {
    const Json& v = Require(key);
    if (!v.is_number()) Fail(Sub(key), "expected a number");
    return v.get<double>();
  }

  double Number(std::string_view key, double fallback) const {
    return Has(key) ? Number(key) : fallback;
  }

  int64_t Integer(std::string_view key) const {
    const Json& v = Require(key);
    if (!v.is_number_integer()) Fail(Sub(key), "expected an integer");
    return v.get<int64_t>();
  }

  int64_t Integer(std::string_view key, int64_t fallback) const {
    return Has(key) ? Integer(key) : fallback;
  }

  bool Bool(std::string_view key) const {
    const Json& v = Require(key);
    return AsBool(v, Sub(key));
  }

  bool Bool(std::string_view key, bool fallback) const {
    return Has(key) ? Bool(key) : fallback;
  }

  const Json& Array(std::string_view key) const {
    const Json& v = Require(key);
    if (!v.is_array()) Fail(Sub(key), "expected an array");
    return v;
  }

  static bool AsBool(const Json& v, const std::string& path) {
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number_integer()) {
      const int64_t i = v.get<int64_t>();
      if (i == 0 || i == 1) return i == 1;
    }
    Fail(path, "expected a boolean (true/false or 0/1)");
  }

  [[noreturn]] static void Fail(const std::string& path,
                                std::string_view message) {
    throw InputError((path.empty() ? std::string("document") : path) + ": " +
                     std::string(message));
  }

 private:
  const Json& object_;
  std::string path_;
};

std::string Indexed(std::string_view name, size_t i) {
  return std::string(name) + "[" + std::to_string(i) + "]";
}

Json Header(std::string_view kind) {
  Json j = Json::object();
  j["kind"] = kind;
  j["schema_version"] = kSchemaVersion;
  return j;
}

void CheckHeader(const Json& j, std::string_view kind) {
  if (!j.is_object()) Fields::Fail("", "expected a JSON object");
  Fields f(j, "", nullptr, {});
  const std::string version = f.String("schema_version");
  int major = 0;
  auto [ptr, ec] =
      std::from_chars(version.data(), version.data() + version.size(), major);
  if (ec != std::errc() || (ptr != version.data() + version.size() &&
                            *ptr != '.')) {
    Fields::Fail("schema_version", "malformed version '" + version + "'");
  }
  if (major != kSchemaMajor) {
    Fields::Fail("schema_version",
                 "unsupported major version " + std::to_string(major) +
                     " (this build reads " + std::to_string(kSchemaMajor) +
                     ".x)");
  }
  if (f.Has("kind") && f.String("kind") != kind) {
    Fields::Fail("kind", "expected '" + std::string(kind) + "', got '" +
                             f.String("kind") + "'");
  }
}

std::string Pretty(const Json& j) { return j.dump(2) + "\n"; }

uint64_t Fnv1a(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::string_view> SplitCsvLine(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

std::string FormatNumber(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Json ParseJsonText(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    size_t line = 1, column = 1;
    const size_t limit = std::min<size_t>(e.byte, text.size());
    for (size_t i = 0; i + 1 < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw InputError(std::string(source) + ":" + std::to_string(line) + ":" +
                     std::to_string(column) + ": JSON syntax error");
  }
}

std::string ReadTextFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteTextFile(const fs::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw InputError("write failed for '" + path.string() + "'");
}

// --- instances --------------------------------------------------------------

Json InstanceToJson(const Instance& input) {
  Instance instance = input;
  Canonicalize(instance);
  Json j = Header("instance");
  j["planning_day"] = instance.planning_day;
  j["routes"] = Json::array();
  for (const Route& r : instance.routes) j["routes"].push_back({{"id", r.id}});
  j["categories"] = Json::array();
  for (const Category& c : instance.categories) {
    Json cj = {{"id", c.id}, {"constrained", c.constrained}};
    if (c.route_limit.has_value()) cj["route_limit"] = *c.route_limit;
    j["categories"].push_back(std::move(cj));
  }
  j["warehouses"] = Json::array();
  for (const Warehouse& w : instance.warehouses) {
    Json wj = {{"id", w.id}, {"active", w.active}, {"rank", w.rank}};
    if (!w.label.empty()) wj["label"] = w.label;
    j["warehouses"].push_back(std::move(wj));
  }
  j["stores"] = Json::array();
  for (const Store& s : instance.stores) {
    Json eligibility = Json::object();
    for (const auto& [category, flag] : s.eligibility) {
      eligibility[category] = flag;
    }
    j["stores"].push_back({{"id", s.id},
                           {"route_id", s.route_id},
                           {"base_capacity", s.base_capacity},
                           {"flow_through_deduction", s.flow_through_deduction},
                           {"eligibility", std::move(eligibility)}});
  }
  j["orders"] = Json::array();
  for (const Order& o : instance.orders) {
    j["orders"].push_back({{"id", o.id},
                           {"store_id", o.store_id},
                           {"warehouse_id", o.warehouse_id},
                           {"category_id", o.category_id},
                           {"volume", o.volume},
                           {"priority", o.priority}});
  }
  return j;
}

Instance InstanceFromJson(const Json& j, std::vector<std::string>* warnings) {
  CheckHeader(j, "instance");
  Fields top(j, "", warnings,
             {"kind", "schema_version", "planning_day", "routes", "categories",
              "warehouses", "stores", "orders"});
  Instance instance;
  instance.planning_day = static_cast<int>(top.Integer("planning_day", 1));

  const Json& routes = top.Array("routes");
  for (size_t i = 0; i < routes.size(); ++i) {
    Fields f(routes[i], Indexed("routes", i), warnings, {"id"});
    instance.routes.push_back({f.String("id")});
  }
  const Json& categories = top.Array("categories");
  for (size_t i = 0; i < categories.size(); ++i) {
    Fields f(categories[i], Indexed("categories", i), warnings,
             {"id", "constrained", "route_limit"});
    Category c;
    c.id = f.String("id");
    c.constrained = f.Bool("constrained", false);
    if (f.Has("route_limit")) c.route_limit = f.Number("route_limit");
    instance.categories.push_back(std::move(c));
  }
  const Json& warehouses = top.Array("warehouses");
  for (size_t i = 0; i < warehouses.size(); ++i) {
    Fields f(warehouses[i], Indexed("warehouses", i), warnings,
             {"id", "active", "rank", "label"});
    Warehouse w;
    w.id = f.String("id");
    w.active = f.Bool("active", true);
    w.rank = static_cast<int>(f.Integer("rank"));
    if (f.Has("label")) w.label = f.String("label");
    instance.warehouses.push_back(std::move(w));
  }
  const Json& stores = top.Array("stores");
  for (size_t i = 0; i < stores.size(); ++i) {
    const std::string path = Indexed("stores", i);
    Fields f(stores[i], path, warnings,
             {"id", "route_id", "base_capacity", "flow_through_deduction",
              "eligibility"});
    Store s;
    s.id = f.String("id");
    s.route_id = f.String("route_id");
    s.base_capacity = f.Number("base_capacity");
    s.flow_through_deduction = f.Number("flow_through_deduction", 0.0);
    const Json& eligibility = f.Require("eligibility");
    if (!eligibility.is_object()) {
      Fields::Fail(f.Sub("eligibility"), "expected an object");
    }
    for (const auto& [category, flag] : eligibility.items()) {
      s.eligibility[category] =
          Fields::AsBool(flag, f.Sub("eligibility") + "." + category);
    }
    instance.stores.push_back(std::move(s));
  }
  const Json& orders = top.Array("orders");
  instance.orders.reserve(orders.size());
  for (size_t i = 0; i < orders.size(); ++i) {
    Fields f(orders[i], Indexed("orders", i), warnings,
             {"id", "store_id", "warehouse_id", "category_id", "volume",
              "priority"});
    Order o;
    o.id = f.String("id");
    o.store_id = f.String("store_id");
    o.warehouse_id = f.String("warehouse_id");
    o.category_id = f.String("category_id");
    o.volume = f.Number("volume");
    o.priority = f.Number("priority", 0.0);
    instance.orders.push_back(std::move(o));
  }
  ThrowIfViolations(ValidateInstance(instance), "invalid instance");
  return instance;
}

std::string SerializeInstance(const Instance& instance) {
  return Pretty(InstanceToJson(instance));
}

Instance LoadInstance(const fs::path& path, std::vector<std::string>* warnings) {
  const std::string text = ReadTextFile(path);
  try {
    return InstanceFromJson(ParseJsonText(text, path.string()), warnings);
  } catch (const InputError& e) {
    const std::string what = e.what();
    if (what.rfind(path.string(), 0) == 0) throw;
    throw InputError(path.string() + ": " + what);
  }
}

void SaveInstance(const Instance& instance, const fs::path& path) {
  WriteTextFile(path, SerializeInstance(instance));
}

std::string InstanceHash(const Instance& instance) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(
                    Fnv1a(InstanceToJson(instance).dump())));
  return buf;
}

// --- plans ------------------------------------------------------------------

Json PlanToJson(const PlanConfig& plan) {
  Json j = Header("plan");
  j["warehouses"] = Json::array();
  for (const auto& [id, setting] : plan.warehouses) {
    j["warehouses"].push_back(
        {{"id", id}, {"active", setting.active}, {"rank", setting.rank}});
  }
  return j;
}

PlanConfig PlanFromJson(const Json& j, std::vector<std::string>* warnings) {
  CheckHeader(j, "plan");
  Fields top(j, "", warnings, {"kind", "schema_version", "warehouses"});
  PlanConfig plan;
  const Json& warehouses = top.Array("warehouses");
  for (size_t i = 0; i < warehouses.size(); ++i) {
    Fields f(warehouses[i], Indexed("warehouses", i), warnings,
             {"id", "active", "rank"});
    const std::string id = f.String("id");
    WarehouseSetting setting;
    setting.active = f.Bool("active", true);
    setting.rank = static_cast<int>(f.Integer("rank", 1));
    if (!plan.warehouses.emplace(id, setting).second) {
      Fields::Fail(f.Sub("id"), "duplicate warehouse '" + id + "'");
    }
  }
  return plan;
}

PlanConfig LoadPlan(const fs::path& path) {
  return PlanFromJson(ParseJsonText(ReadTextFile(path), path.string()));
}

void SavePlan(const PlanConfig& plan, const fs::path& path) {
  WriteTextFile(path, Pretty(PlanToJson(plan)));
}

// --- allocation results -----------------------------------------------------

Json ResultToJson(const AllocationResult& result) {
  Json j = Header("allocation_result");
  j["accepted"] = result.accepted;
  j["store_loads"] = Json::object();
  for (const auto& [store, load] : result.store_loads) {
    j["store_loads"][store] = load;
  }
  j["category_loads"] = Json::array();
  for (const auto& [key, load] : result.category_loads) {
    j["category_loads"].push_back(
        {{"route_id", key.first}, {"category_id", key.second}, {"load", load}});
  }
  j["rejections"] = Json::object();
  for (const auto& [order, reason] : result.rejections) {
    j["rejections"][order] = std::string(ToString(reason));
  }
  j["objective_value"] = result.objective_value;
  return j;
}

AllocationResult ResultFromJson(const Json& j) {
  CheckHeader(j, "allocation_result");
  Fields top(j, "", nullptr, {});
  AllocationResult result;
  const Json& accepted = top.Array("accepted");
  for (size_t i = 0; i < accepted.size(); ++i) {
    if (!accepted[i].is_string()) {
      Fields::Fail(Indexed("accepted", i), "expected a string");
    }
    result.accepted.push_back(accepted[i].get<std::string>());
  }
  for (const auto& [store, load] : top.Require("store_loads").items()) {
    if (!load.is_number()) Fields::Fail("store_loads." + store, "expected a number");
    result.store_loads[store] = load.get<double>();
  }
  const Json& loads = top.Array("category_loads");
  for (size_t i = 0; i < loads.size(); ++i) {
    Fields f(loads[i], Indexed("category_loads", i), nullptr, {});
    result.category_loads[{f.String("route_id"), f.String("category_id")}] =
        f.Number("load");
  }
  for (const auto& [order, reason] : top.Require("rejections").items()) {
    if (!reason.is_string()) Fields::Fail("rejections." + order, "expected a string");
    result.rejections[order] = ParseRejectionReason(reason.get<std::string>());
  }
  result.objective_value = top.Number("objective_value");
  return result;
}

void SaveResult(const AllocationResult& result, const fs::path& path) {
  WriteTextFile(path, Pretty(ResultToJson(result)));
}

AllocationResult LoadResult(const fs::path& path) {
  return ResultFromJson(ParseJsonText(ReadTextFile(path), path.string()));
}

// --- generator specs --------------------------------------------------------

Json GeneratorSpecToJson(const GeneratorSpec& spec) {
  Json j = Header("generator_spec");
  j["seed"] = spec.seed;
  j["n_orders"] = spec.n_orders;
  j["n_stores"] = spec.n_stores;
  j["n_routes"] = spec.n_routes;
  j["n_categories"] = spec.n_categories;
  j["n_warehouses"] = spec.n_warehouses;
  j["constrained_category_fraction"] = spec.constrained_category_fraction;
  j["capacity_tightness"] = spec.capacity_tightness;
  j["category_tightness"] = spec.category_tightness;
  j["eligibility_density"] = spec.eligibility_density;
  if (spec.volume.kind == VolumeDistribution::Kind::kUniform) {
    j["volume_distribution"] = {
        {"type", "uniform"}, {"lo", spec.volume.a}, {"hi", spec.volume.b}};
  } else {
    j["volume_distribution"] = {
        {"type", "lognormal"}, {"mu", spec.volume.a}, {"sigma", spec.volume.b}};
  }
  j["priority_levels"] = spec.priority_levels;
  j["flow_through_fraction"] = spec.flow_through_fraction;
  return j;
}

GeneratorSpec GeneratorSpecFromJson(const Json& j,
                                    std::vector<std::string>* warnings) {
  CheckHeader(j, "generator_spec");
  Fields f(j, "", warnings,
           {"kind", "schema_version", "seed", "n_orders", "n_stores",
            "n_routes", "n_categories", "n_warehouses",
            "constrained_category_fraction", "capacity_tightness",
            "category_tightness", "eligibility_density", "volume_distribution",
            "priority_levels", "flow_through_fraction"});
  GeneratorSpec spec;
  if (f.Has("seed")) {
    const Json& seed = f.Require("seed");
    if (!seed.is_number_integer()) Fields::Fail("seed", "expected an integer");
    spec.seed = seed.get<uint64_t>();
  }
  spec.n_orders = static_cast<int>(f.Integer("n_orders", spec.n_orders));
  spec.n_stores = static_cast<int>(f.Integer("n_stores", spec.n_stores));
  spec.n_routes = static_cast<int>(f.Integer("n_routes", spec.n_routes));
  spec.n_categories =
      static_cast<int>(f.Integer("n_categories", spec.n_categories));
  spec.n_warehouses =
      static_cast<int>(f.Integer("n_warehouses", spec.n_warehouses));
  spec.constrained_category_fraction = f.Number(
      "constrained_category_fraction", spec.constrained_category_fraction);
  spec.capacity_tightness =
      f.Number("capacity_tightness", spec.capacity_tightness);
  spec.category_tightness =
      f.Number("category_tightness", spec.category_tightness);
  spec.eligibility_density =
      f.Number("eligibility_density", spec.eligibility_density);
  spec.priority_levels =
      static_cast<int>(f.Integer("priority_levels", spec.priority_levels));
  spec.flow_through_fraction =
      f.Number("flow_through_fraction", spec.flow_through_fraction);
  if (f.Has("volume_distribution")) {
    Fields v(f.Require("volume_distribution"), "volume_distribution", warnings,
             {"type", "lo", "hi", "mu", "sigma"});
    const std::string type = v.String("type");
    if (type == "uniform") {
      spec.volume = {VolumeDistribution::Kind::kUniform, v.Number("lo"),
                     v.Number("hi")};
    } else if (type == "lognormal") {
      spec.volume = {VolumeDistribution::Kind::kLogNormal, v.Number("mu"),
                     v.Number("sigma")};
    } else {
      Fields::Fail("volume_distribution.type",
                   "expected 'uniform' or 'lognormal', got '" + type + "'");
    }
  }
  return spec;
}

GeneratorSpec LoadGeneratorSpec(const fs::path& path) {
  std::vector<std::string> warnings;
  return GeneratorSpecFromJson(ParseJsonText(ReadTextFile(path), path.string()),
                               &warnings);
}

// --- KPI reports ------------------------------------------------------------

Json KpiReportToJson(const KpiReport& r) {
  return {{"ship_order_ratio", r.ship_order_ratio},
          {"same_day_coverage", r.same_day_coverage},
          {"avg_daily_unserved", r.avg_daily_unserved},
          {"share_order_over_limit", r.share_order_over_limit},
          {"share_ship_over_limit", r.share_ship_over_limit},
          {"share_full_fulfillment", r.share_full_fulfillment},
          {"n_days", r.n_days},
          {"n_store_days", r.n_store_days}};
}

Json ComparisonToJson(const BeforeAfterComparison& c) {
  Json j = Header("kpi_comparison");
  j["before"] = KpiReportToJson(c.before);
  j["after"] = KpiReportToJson(c.after);
  j["deltas"] = Json::array();
  for (const MetricDelta& d : c.deltas) {
    j["deltas"].push_back({{"metric", d.metric},
                           {"before", d.before},
                           {"after", d.after},
                           {"points", d.points},
                           {"percent_change", d.percent_change},
                           {"display", d.display}});
  }
  j["mann_whitney"] = {{"u", c.coverage_test.u_a},
                       {"p_value_two_sided", c.coverage_test.p_value},
                       {"exact", c.coverage_test.exact},
                       {"n_before", c.before_daily_coverage.size()},
                       {"n_after", c.after_daily_coverage.size()}};
  return j;
}

// --- daily records ----------------------------------------------------------

std::string FormatDailyRecords(const std::vector<DailyServiceRecord>& records) {
  std::string out = "date,store_id,requested,shipped,limit\n";
  for (const DailyServiceRecord& r : records) {
    out += FormatDate(r.date) + "," + r.store_id + "," +
           FormatNumber(r.requested) + "," + FormatNumber(r.shipped) + "," +
           FormatNumber(r.store_limit) + "\n";
  }
  return out;
}

std::vector<DailyServiceRecord> ParseDailyRecords(std::string_view text) {
  static constexpr std::string_view kColumns[] = {"date", "store_id",
                                                  "requested", "shipped",
                                                  "limit"};
  std::vector<DailyServiceRecord> out;
  std::vector<int> column_of(5, -1);
  size_t row = 0, pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++row;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto cells = SplitCsvLine(line);
    auto fail = [&](const std::string& message) {
      throw InputError("row " + std::to_string(row) + ": " + message);
    };
    if (row == 1) {
      for (size_t c = 0; c < cells.size(); ++c) {
        for (size_t k = 0; k < 5; ++k) {
          if (cells[c] == kColumns[k]) column_of[k] = static_cast<int>(c);
        }
      }
      for (size_t k = 0; k < 5; ++k) {
        if (column_of[k] < 0) {
          fail("header is missing column '" + std::string(kColumns[k]) + "'");
        }
      }
      continue;
    }
    const int needed = *std::max_element(column_of.begin(), column_of.end());
    if (static_cast<int>(cells.size()) <= needed) {
      fail("expected at least " + std::to_string(needed + 1) + " fields, got " +
           std::to_string(cells.size()));
    }
    auto number = [&](int k) {
      const std::string_view cell = cells[column_of[k]];
      double value = 0.0;
      auto [ptr, ec] =
          std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
        fail(std::string(kColumns[k]) + " '" + std::string(cell) +
             "' is not a number");
      }
      if (!(value >= 0.0)) {
        fail(std::string(kColumns[k]) + " must be non-negative, got " +
             std::string(cell));
      }
      return value;
    };
    DailyServiceRecord r;
    try {
      r.date = ParseDate(cells[column_of[0]]);
    } catch (const InputError& e) {
      fail(e.what());
    }
    r.store_id = std::string(cells[column_of[1]]);
    if (r.store_id.empty()) fail("store_id is empty");
    r.requested = number(2);
    r.shipped = number(3);
    r.store_limit = number(4);
    out.push_back(std::move(r));
  }
  if (row == 0) throw InputError("daily records file is empty");
  return out;
}

std::vector<DailyServiceRecord> LoadDailyRecords(const fs::path& path) {
  try {
    return ParseDailyRecords(ReadTextFile(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void SaveDailyRecords(const std::vector<DailyServiceRecord>& records,
                      const fs::path& path) {
  WriteTextFile(path, FormatDailyRecords(records));
}

std::string FormatDailySeries(const std::vector<DailyPoint>& series) {
  std::string out = "date,requested,shipped,coverage,ratio\n";
  for (const DailyPoint& p : series) {
    out += FormatDate(p.date) + "," + FormatNumber(p.requested) + "," +
           FormatNumber(p.shipped) + "," + FormatNumber(p.coverage) + "," +
           FormatNumber(p.ratio) + "\n";
  }
  return out;
}

// --- dispatch exports -------------------------------------------------------

namespace {

struct DispatchIndex {
  std::unordered_map<std::string_view, const Order*> orders;
  std::unordered_map<std::string_view, const std::string*> route_of;

  explicit DispatchIndex(const Instance& instance) {
    orders.reserve(instance.orders.size());
    for (const Order& o : instance.orders) orders.emplace(o.id, &o);
    for (const Store& s : instance.stores) route_of.emplace(s.id, &s.route_id);
  }
};

std::string DispatchCsvImpl(const AllocationResult& result,
                            const DispatchIndex& index,
                            const std::string& warehouse_id) {
  std::string out = "seq,order_id,store_id,route_id,category_id,volume\n";
  double total = 0.0;
  int seq = 0;
  for (const std::string& id : result.accepted) {
    auto it = index.orders.find(id);
    if (it == index.orders.end()) {
      throw InputError("accepted order '" + id + "' is not in the instance");
    }
    const Order& o = *it->second;
    if (o.warehouse_id != warehouse_id) continue;
    total += o.volume;
    out += std::to_string(++seq);
    out += ',';
    out += o.id;
    out += ',';
    out += o.store_id;
    out += ',';
    out += *index.route_of.at(o.store_id);
    out += ',';
    out += o.category_id;
    out += ',';
    out += FormatNumber(o.volume);
    out += '\n';
  }
  out += "TOTAL,,,,," + FormatNumber(total) + "\n";
  return out;
}

}  // namespace

std::string DispatchCsv(const AllocationResult& result,
                        const Instance& instance,
                        const std::string& warehouse_id) {
  return DispatchCsvImpl(result, DispatchIndex(instance), warehouse_id);
}

std::string DispatchFileName(const std::string& warehouse_id) {
  return "dispatch_" + warehouse_id + ".csv";
}

std::vector<fs::path> ExportDispatchFiles(const AllocationResult& result,
                                          const Instance& instance,
                                          const PlanConfig& plan,
                                          const fs::path& out_dir) {
  std::vector<fs::path> written;
  std::set<std::string> active;
  for (const Warehouse& w : instance.warehouses) {
    if (plan.IsActive(w.id)) active.insert(w.id);
  }
  const DispatchIndex index(instance);
  for (const std::string& id : active) {
    const fs::path path = out_dir / DispatchFileName(id);
    WriteTextFile(path, DispatchCsvImpl(result, index, id));
    written.push_back(path);
  }
  return written;
}

// --- run records ------------------------------------------------------------

Json RunRecordToJson(const RunRecord& record) {
  Json j = Header("run_record");
  j["run_id"] = record.run_id;
  j["created_at"] = record.created_at;
  j["plan"] = PlanToJson(record.plan);
  j["instance_ref"] = record.instance_ref;
  j["day1_result"] = record.day1_result;
  j["day2_result"] = record.day2_result;
  j["kpi"] = record.kpi ? KpiReportToJson(*record.kpi) : Json(nullptr);
  return j;
}

}  // namespace allocdss
