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

// Serial reference kernels vs OpenMP kernels. Arguments: {N, parallel}.

#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "allocdss/engine.h"
#include "allocdss/generator.h"
#include "allocdss/kernels.h"

namespace allocdss {
namespace {

struct Fixture {
  Instance instance;
  PlanConfig plan;
  ResidualCapacityMap residuals;
  std::vector<double> residual;
};

const Fixture& FixtureFor(int n) {
  static std::map<int, std::unique_ptr<Fixture>> cache;
  auto& slot = cache[n];
  if (!slot) {
    GeneratorSpec spec;
    spec.n_orders = n;
    spec.n_stores = 772;
    spec.n_routes = 24;
    spec.n_categories = 12;
    spec.capacity_tightness = 0.8;
    slot = std::make_unique<Fixture>();
    slot->instance = Generate(spec);
    slot->plan = DefaultPlan(slot->instance);
    slot->residuals = ResidualCapacities(slot->instance);
    for (const Store& s : slot->instance.stores) {
      slot->residual.push_back(slot->residuals.at(s.id));
    }
  }
  return *slot;
}

Execution Mode(const benchmark::State& state) {
  return state.range(1) ? Execution::kParallel : Execution::kSerial;
}

void BM_Screen(benchmark::State& state) {
  const Fixture& f = FixtureFor(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto resolved = kernels::Resolve(f.instance, f.plan, Mode(state));
    benchmark::DoNotOptimize(kernels::Screen(resolved, Mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Sort(benchmark::State& state) {
  const Fixture& f = FixtureFor(static_cast<int>(state.range(0)));
  const auto resolved = kernels::Resolve(f.instance, f.plan, Execution::kSerial);
  const auto screening = kernels::Screen(resolved, Execution::kSerial);
  for (auto _ : state) {
    state.PauseTiming();
    auto candidates = screening.eligible;
    state.ResumeTiming();
    kernels::SortCandidates(candidates, Mode(state));
    benchmark::DoNotOptimize(candidates.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Pass(benchmark::State& state) {
  const Fixture& f = FixtureFor(static_cast<int>(state.range(0)));
  const auto resolved = kernels::Resolve(f.instance, f.plan, Execution::kSerial);
  auto candidates = kernels::Screen(resolved, Execution::kSerial).eligible;
  kernels::SortCandidates(candidates, Execution::kSerial);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        kernels::CumulativePass(resolved, candidates, f.residual, Mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Allocate(benchmark::State& state) {
  const Fixture& f = FixtureFor(static_cast<int>(state.range(0)));
  AllocateOptions options;
  options.execution = Mode(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Allocate(f.instance, f.plan, f.residuals, options));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void Sizes(benchmark::internal::Benchmark* b) {
  for (int n : {1 << 14, 1 << 16, 1 << 18}) {
    b->Args({n, 0});
    b->Args({n, 1});
  }
  b->Unit(benchmark::kMillisecond);
}

BENCHMARK(BM_Screen)->Apply(Sizes);
BENCHMARK(BM_Sort)->Apply(Sizes);
BENCHMARK(BM_Pass)->Apply(Sizes);
BENCHMARK(BM_Allocate)->Apply(Sizes);

}  // namespace
}  // namespace allocdss

BENCHMARK_MAIN();
