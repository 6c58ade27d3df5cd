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

// Small builders shared by the test binaries.

#ifndef ALLOCDSS_TESTS_TEST_UTIL_H_
#define ALLOCDSS_TESTS_TEST_UTIL_H_

#include <atomic>
#include <filesystem>
#include <optional>
#include <string>
#include <unistd.h>

#include "allocdss/model.h"

namespace allocdss::test {

inline std::filesystem::path TestData(const std::string& name) {
  return std::filesystem::path(ALLOCDSS_TESTDATA) / name;
}

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("allocdss_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

// Fluent builder for hand-made instances. Every store is eligible for every
// category unless Ineligible() says otherwise.
class InstanceBuilder {
 public:
  InstanceBuilder& Route(const std::string& id) {
    instance_.routes.push_back({id});
    return *this;
  }
  InstanceBuilder& Category(const std::string& id,
                            std::optional<double> limit = std::nullopt) {
    instance_.categories.push_back({id, limit.has_value(), limit});
    for (allocdss::Store& s : instance_.stores) s.eligibility[id] = true;
    return *this;
  }
  InstanceBuilder& Warehouse(const std::string& id, int rank,
                             bool active = true) {
    allocdss::Warehouse w;
    w.id = id;
    w.rank = rank;
    w.active = active;
    instance_.warehouses.push_back(w);
    return *this;
  }
  InstanceBuilder& Store(const std::string& id, const std::string& route,
                         double base, double flow = 0.0) {
    allocdss::Store s;
    s.id = id;
    s.route_id = route;
    s.base_capacity = base;
    s.flow_through_deduction = flow;
    for (const allocdss::Category& c : instance_.categories) {
      s.eligibility[c.id] = true;
    }
    instance_.stores.push_back(s);
    return *this;
  }
  InstanceBuilder& Ineligible(const std::string& store,
                              const std::string& category) {
    for (allocdss::Store& s : instance_.stores) {
      if (s.id == store) s.eligibility[category] = false;
    }
    return *this;
  }
  InstanceBuilder& Order(const std::string& id, const std::string& store,
                         const std::string& warehouse,
                         const std::string& category, double volume,
                         double priority = 1.0) {
    instance_.orders.push_back(
        {id, store, warehouse, category, volume, priority});
    return *this;
  }
  Instance Build() const { return instance_; }

 private:
  Instance instance_;
};

}  // namespace allocdss::test

#endif  // ALLOCDSS_TESTS_TEST_UTIL_H_
