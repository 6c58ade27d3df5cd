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

// Run lifecycle behind the planner API.
//
// Instances are stored once per content hash and referenced from sessions
// (one loaded instance per session token) and from runs. Runs execute on
// their own worker thread; the run table is the only shared mutable state.
// Every payload is produced by the same library calls a direct caller would
// make, so service results are bit-identical to library results.

#ifndef ALLOCDSS_SERVICE_H_
#define ALLOCDSS_SERVICE_H_

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "allocdss/engine.h"
#include "allocdss/kpi.h"
#include "allocdss/model.h"

namespace allocdss {

class ServiceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public ServiceError {
 public:
  using ServiceError::ServiceError;
};

class PreconditionError : public ServiceError {
 public:
  using ServiceError::ServiceError;
};

class EmptySessionError : public ServiceError {
 public:
  using ServiceError::ServiceError;
};

struct FieldError {
  std::string field;  // e.g. "plan.warehouses[W2].rank"
  std::string rule;
  std::string message;
};

class ValidationError : public ServiceError {
 public:
  explicit ValidationError(std::vector<FieldError> fields);
  const std::vector<FieldError>& fields() const { return fields_; }

 private:
  std::vector<FieldError> fields_;
};

struct SessionInfo {
  std::string session;
  std::string instance_hash;
};

struct WarehouseDescriptor {
  std::string id;
  std::string label;
  bool active = true;
  int rank = 1;
};

// Exactly one instance reference is used, in this order of preference:
// instance_hash, instance_path (read server-side), session.
struct RunRequest {
  std::string session;
  std::string instance_hash;
  std::string instance_path;
  PlanConfig plan;
  bool simulate_second_day = false;
};

enum class RunState { kPending, kRunning, kDone, kFailed };
std::string_view ToString(RunState state);

struct RunStatus {
  std::string run_id;
  RunState state = RunState::kPending;
  PhaseTimings timings;
  std::string error;
  std::string instance_hash;
  PlanConfig plan;
};

struct RunOutput {
  AllocationResult result;
  // Per-store service records of the run (R = pool volume per store,
  // S = accepted volume). kpi is empty when the pool has no volume.
  std::vector<DailyServiceRecord> records;
  std::optional<KpiReport> kpi;
};

// Service records for one allocation: one row per store, stores by id.
std::vector<DailyServiceRecord> RunRecords(const Instance& instance,
                                           const AllocationResult& result,
                                           std::chrono::year_month_day date);

class PlannerService {
 public:
  PlannerService() = default;
  ~PlannerService();  // waits for workers

  PlannerService(const PlannerService&) = delete;
  PlannerService& operator=(const PlannerService&) = delete;

  // Registers the instance (validated) and binds it to `session`, creating a
  // new session token when empty. Re-uploads of equal content share storage.
  SessionInfo LoadInstance(Instance instance, const std::string& session = "");

  std::vector<WarehouseDescriptor> ListWarehouses(
      const std::string& session) const;

  // Validates synchronously, then returns the id of a pending run.
  std::string SubmitRun(const RunRequest& request);

  RunStatus GetRun(const std::string& run_id) const;
  // Throws PreconditionError until the run is done.
  RunOutput GetResult(const std::string& run_id) const;
  std::string GetExport(const std::string& run_id,
                        const std::string& warehouse_id) const;
  AllocationResult WhatIfSecondDay(const std::string& run_id);

  // Blocks until the run leaves pending/running or the timeout expires.
  RunStatus WaitForRun(const std::string& run_id,
                       std::chrono::milliseconds timeout =
                           std::chrono::minutes(5)) const;

 private:
  struct Run {
    RunStatus status;
    std::shared_ptr<const Instance> instance;
    bool simulate_second_day = false;
    std::optional<RunOutput> output;
    std::map<std::string, std::string> exports;
    std::optional<AllocationResult> day2;
  };

  std::shared_ptr<const Instance> ResolveInstance(const RunRequest& request,
                                                  std::string* hash);
  void Execute(const std::string& run_id);
  const Run& FindRun(const std::string& run_id) const;  // caller holds mu_
  Run& FindRun(const std::string& run_id);

  mutable std::mutex mu_;
  mutable std::condition_variable changed_;
  std::map<std::string, std::shared_ptr<const Instance>> instances_;
  std::map<std::string, std::string> sessions_;  // token -> instance hash
  std::map<std::string, std::unique_ptr<Run>> runs_;
  std::vector<std::thread> workers_;
  int next_session_ = 1;
  int next_run_ = 1;
};

}  // namespace allocdss

#endif  // ALLOCDSS_SERVICE_H_
