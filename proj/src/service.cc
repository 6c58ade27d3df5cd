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

#include "allocdss/service.h"

#include <algorithm>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include "allocdss/io.h"

namespace allocdss {

namespace {

std::string JoinMessages(const std::vector<FieldError>& fields) {
  std::string out = "validation failed";
  for (const FieldError& f : fields) out += "; " + f.field + ": " + f.message;
  return out;
}

std::string Token(const char* prefix, int n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%06d", prefix, n);
  return buf;
}

// Maps a plan violation onto the request field it concerns.
FieldError ToFieldError(const Violation& v) {
  static constexpr std::string_view kWarehouse = "warehouse ";
  std::string field = "plan.warehouses";
  if (v.entity.rfind(kWarehouse, 0) == 0) {
    field += "[" + v.entity.substr(kWarehouse.size()) + "]";
    field += v.rule == "unknown_warehouse" ? ".id" : ".rank";
  } else if (v.rule == "no_active_warehouse") {
    field += "[*].active";
  }
  return {field, v.rule, v.message};
}

}  // namespace

ValidationError::ValidationError(std::vector<FieldError> fields)
    : ServiceError(JoinMessages(fields)), fields_(std::move(fields)) {}

std::string_view ToString(RunState state) {
  switch (state) {
    case RunState::kPending:
      return "pending";
    case RunState::kRunning:
      return "running";
    case RunState::kDone:
      return "done";
    case RunState::kFailed:
      return "failed";
  }
  return "unknown";
}

std::vector<DailyServiceRecord> RunRecords(const Instance& instance,
                                           const AllocationResult& result,
                                           std::chrono::year_month_day date) {
  std::unordered_set<std::string> accepted(result.accepted.begin(),
                                           result.accepted.end());
  std::unordered_map<std::string, double> requested, shipped;
  for (const Order& o : instance.orders) {
    requested[o.store_id] += o.volume;
    if (accepted.contains(o.id)) shipped[o.store_id] += o.volume;
  }
  std::vector<const Store*> stores;
  for (const Store& s : instance.stores) stores.push_back(&s);
  std::sort(stores.begin(), stores.end(),
            [](const Store* a, const Store* b) { return a->id < b->id; });
  std::vector<DailyServiceRecord> out;
  out.reserve(stores.size());
  for (const Store* s : stores) {
    out.push_back({date, s->id, requested[s->id], shipped[s->id],
                   std::max(0.0, s->base_capacity - s->flow_through_deduction)});
  }
  return out;
}

PlannerService::~PlannerService() {
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mu_);
    workers.swap(workers_);
  }
  for (std::thread& t : workers) t.join();
}

SessionInfo PlannerService::LoadInstance(Instance instance,
                                         const std::string& session) {
  ThrowIfViolations(ValidateInstance(instance), "invalid instance");
  Canonicalize(instance);
  const std::string hash = InstanceHash(instance);
  auto shared = std::make_shared<const Instance>(std::move(instance));
  std::lock_guard lock(mu_);
  instances_.try_emplace(hash, std::move(shared));
  std::string token = session;
  if (token.empty()) token = Token("s-", next_session_++);
  sessions_[token] = hash;
  return {token, hash};
}

std::vector<WarehouseDescriptor> PlannerService::ListWarehouses(
    const std::string& session) const {
  std::shared_ptr<const Instance> instance;
  {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(session);
    if (it == sessions_.end()) {
      throw EmptySessionError("no instance loaded in session '" + session +
                              "'");
    }
    instance = instances_.at(it->second);
  }
  std::vector<WarehouseDescriptor> out;
  for (const Warehouse& w : instance->warehouses) {
    out.push_back({w.id, RoleLabel(w), w.active, w.rank});
  }
  return out;
}

std::shared_ptr<const Instance> PlannerService::ResolveInstance(
    const RunRequest& request, std::string* hash) {
  if (!request.instance_hash.empty()) {
    std::lock_guard lock(mu_);
    auto it = instances_.find(request.instance_hash);
    if (it == instances_.end()) {
      throw NotFoundError("unknown instance hash '" + request.instance_hash +
                          "'");
    }
    *hash = it->first;
    return it->second;
  }
  if (!request.instance_path.empty()) {
    Instance loaded;
    try {
      loaded = allocdss::LoadInstance(request.instance_path);
    } catch (const InputError& e) {
      throw ValidationError({{"instance_path", "load_failed", e.what()}});
    }
    Canonicalize(loaded);
    *hash = InstanceHash(loaded);
    auto shared = std::make_shared<const Instance>(std::move(loaded));
    std::lock_guard lock(mu_);
    return instances_.try_emplace(*hash, std::move(shared)).first->second;
  }
  std::lock_guard lock(mu_);
  auto it = sessions_.find(request.session);
  if (it == sessions_.end()) {
    throw EmptySessionError("no instance loaded in session '" +
                            request.session + "'");
  }
  *hash = it->second;
  return instances_.at(it->second);
}

std::string PlannerService::SubmitRun(const RunRequest& request) {
  std::string hash;
  std::shared_ptr<const Instance> instance = ResolveInstance(request, &hash);

  std::vector<FieldError> errors;
  for (const Violation& v : ValidatePlan(*instance, request.plan)) {
    errors.push_back(ToFieldError(v));
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));

  auto run = std::make_unique<Run>();
  run->status.instance_hash = hash;
  run->status.plan = request.plan;
  run->instance = std::move(instance);
  run->simulate_second_day = request.simulate_second_day;

  std::lock_guard lock(mu_);
  const std::string id = Token("run-", next_run_++);
  run->status.run_id = id;
  runs_.emplace(id, std::move(run));
  workers_.emplace_back([this, id] { Execute(id); });
  return id;
}

void PlannerService::Execute(const std::string& run_id) {
  std::shared_ptr<const Instance> instance;
  PlanConfig plan;
  bool second_day = false;
  {
    std::lock_guard lock(mu_);
    Run& run = FindRun(run_id);
    run.status.state = RunState::kRunning;
    instance = run.instance;
    plan = run.status.plan;
    second_day = run.simulate_second_day;
  }
  changed_.notify_all();

  PhaseTimings timings;
  RunOutput output;
  std::map<std::string, std::string> exports;
  std::optional<AllocationResult> day2;
  std::string error;
  try {
    AllocateOptions options;
    options.timings = &timings;
    output.result =
        Allocate(*instance, plan, ResidualCapacities(*instance), options);

    const auto start = std::chrono::steady_clock::now();
    for (const Warehouse& w : instance->warehouses) {
      if (plan.IsActive(w.id)) {
        exports[w.id] = DispatchCsv(output.result, *instance, w.id);
      }
    }
    timings.export_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();

    output.records = RunRecords(
        *instance, output.result,
        std::chrono::year_month_day{std::chrono::year{2026},
                                    std::chrono::January, std::chrono::day{1}});
    try {
      output.kpi = ComputeKpis(output.records);
    } catch (const UndefinedMetricError&) {
      output.kpi.reset();
    }
    if (second_day) day2 = SimulateNextDay(*instance, plan, output.result);
  } catch (const std::exception& e) {
    error = e.what();
  }

  {
    std::lock_guard lock(mu_);
    Run& run = FindRun(run_id);
    run.status.timings = timings;
    if (error.empty()) {
      run.output = std::move(output);
      run.exports = std::move(exports);
      run.day2 = std::move(day2);
      run.status.state = RunState::kDone;
    } else {
      run.status.error = error;
      run.status.state = RunState::kFailed;
    }
  }
  changed_.notify_all();
}

const PlannerService::Run& PlannerService::FindRun(
    const std::string& run_id) const {
  auto it = runs_.find(run_id);
  if (it == runs_.end()) throw NotFoundError("unknown run '" + run_id + "'");
  return *it->second;
}

PlannerService::Run& PlannerService::FindRun(const std::string& run_id) {
  return const_cast<Run&>(std::as_const(*this).FindRun(run_id));
}

RunStatus PlannerService::GetRun(const std::string& run_id) const {
  std::lock_guard lock(mu_);
  return FindRun(run_id).status;
}

RunOutput PlannerService::GetResult(const std::string& run_id) const {
  std::lock_guard lock(mu_);
  const Run& run = FindRun(run_id);
  if (run.status.state != RunState::kDone) {
    throw PreconditionError("run '" + run_id + "' is " +
                            std::string(ToString(run.status.state)));
  }
  return *run.output;
}

std::string PlannerService::GetExport(const std::string& run_id,
                                      const std::string& warehouse_id) const {
  std::lock_guard lock(mu_);
  const Run& run = FindRun(run_id);
  if (run.status.state != RunState::kDone) {
    throw PreconditionError("run '" + run_id + "' is " +
                            std::string(ToString(run.status.state)));
  }
  auto it = run.exports.find(warehouse_id);
  if (it == run.exports.end()) {
    throw NotFoundError("no export for warehouse '" + warehouse_id +
                        "' in run '" + run_id + "'");
  }
  return it->second;
}

AllocationResult PlannerService::WhatIfSecondDay(const std::string& run_id) {
  std::shared_ptr<const Instance> instance;
  PlanConfig plan;
  AllocationResult day1;
  {
    std::lock_guard lock(mu_);
    const Run& run = FindRun(run_id);
    if (run.status.state != RunState::kDone) {
      throw PreconditionError("run '" + run_id + "' is " +
                              std::string(ToString(run.status.state)) +
                              "; day 2 needs a finished day-1 run");
    }
    if (run.day2) return *run.day2;
    instance = run.instance;
    plan = run.status.plan;
    day1 = run.output->result;
  }
  AllocationResult day2 = SimulateNextDay(*instance, plan, day1);
  std::lock_guard lock(mu_);
  Run& run = FindRun(run_id);
  if (!run.day2) run.day2 = std::move(day2);
  return *run.day2;
}

RunStatus PlannerService::WaitForRun(const std::string& run_id,
                                     std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  changed_.wait_for(lock, timeout, [&] {
    const RunState s = FindRun(run_id).status.state;
    return s == RunState::kDone || s == RunState::kFailed;
  });
  return FindRun(run_id).status;
}

}  // namespace allocdss
