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

// Index-based kernels behind the allocation engine. Each kernel has a plain
// serial implementation and an OpenMP implementation; both must produce
// bit-identical output; the serial path is the reference the tests compare
// against.
//
//   Resolve         string ids -> dense indices (parallel over orders)
//   Screen          eligibility / activation pruning (parallel over orders)
//   SortCandidates  lexicographic dispatch order (GNU parallel-mode sort)
//   CumulativePass  single-pass acceptance. Routes never share a tracker
//                   (a store sits on exactly one route and category caps are
//                   per route), so the parallel version runs one sequential
//                   pass per route.

#ifndef ALLOCDSS_KERNELS_H_
#define ALLOCDSS_KERNELS_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "allocdss/model.h"

namespace allocdss {

enum class Execution { kSerial, kParallel };

namespace kernels {

inline constexpr uint32_t kUnresolved = UINT32_MAX;

struct ResolvedInstance {
  const Instance* instance = nullptr;
  uint32_t num_routes = 0;
  uint32_t num_constrained = 0;

  std::vector<uint32_t> store_route;        // per store
  std::vector<int32_t> category_slot;       // per category, -1 unconstrained
  std::vector<double> slot_limit;           // per constrained category
  std::vector<uint8_t> eligibility;         // store-major [store][category]
  std::vector<uint8_t> warehouse_active;    // per warehouse, from the plan
  std::vector<int32_t> warehouse_rank;      // per warehouse, from the plan

  std::vector<uint32_t> order_store;        // per order
  std::vector<uint32_t> order_category;
  std::vector<uint32_t> order_warehouse;
  std::vector<uint32_t> order_id_rank;      // position in ascending id order
  std::vector<double> order_volume;
  std::vector<double> order_priority;
  // True when order ids are non-empty and strictly ascending and every volume
  // and priority is in range: together with resolved references this is the
  // whole per-order part of ValidateInstance.
  bool orders_verified = false;

  // Index of a (route, constrained category) tracker.
  uint32_t LimitSlot(uint32_t route, int32_t constrained_index) const {
    return route * num_constrained + static_cast<uint32_t>(constrained_index);
  }
  uint32_t num_limit_slots() const { return num_routes * num_constrained; }
};

// Throws InputError when an order reference does not resolve.
ResolvedInstance Resolve(const Instance& instance, const PlanConfig& plan,
                         Execution execution);

struct Candidate {
  uint32_t order = 0;  // index into Instance::orders
  uint32_t store = 0;
  uint32_t route = 0;
  int32_t slot = -1;   // route-category tracker, -1 if unconstrained
  int32_t rank = 0;
  double priority = 0.0;
  double volume = 0.0;
  uint32_t id_rank = 0;  // final tie-break: ascending order id
};

using Rejection = std::pair<uint32_t, RejectionReason>;

struct Screening {
  std::vector<Candidate> eligible;   // input order preserved
  std::vector<Rejection> rejected;   // input order preserved
};

Screening Screen(const ResolvedInstance& resolved, Execution execution);

// Rank ascending, priority descending, volume descending, order id ascending.
// Position of each order in ascending id order (identity when sorted).
std::vector<uint32_t> IdRanks(const std::vector<Order>& orders);

bool DispatchBefore(const Candidate& a, const Candidate& b);

void SortCandidates(std::vector<Candidate>& candidates, Execution execution);

struct PassResult {
  std::vector<uint32_t> accepted;  // order indices, acceptance sequence
  std::vector<Rejection> rejected; // in sorted sequence
  std::vector<double> store_load;  // per store
  std::vector<double> slot_load;   // per limit slot
};

// `residual` is indexed by store.
PassResult CumulativePass(const ResolvedInstance& resolved,
                          std::span<const Candidate> sorted,
                          std::span<const double> residual,
                          Execution execution);

}  // namespace kernels
}  // namespace allocdss

#endif  // ALLOCDSS_KERNELS_H_
