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

// Portable pseudo-random numbers for reproducible instances.
//
// The bit stream is xoshiro256** (Blackman & Vigna), seeded by expanding the
// 64-bit seed with SplitMix64. Unlike the <random> distributions, every
// transformation below is spelled out, so a given seed yields the same
// instance on every compiler and standard library.

#ifndef ALLOCDSS_RANDOM_H_
#define ALLOCDSS_RANDOM_H_

#include <array>
#include <cstdint>

namespace allocdss {

uint64_t SplitMix64(uint64_t& state);

class Xoshiro256 {
 public:
  explicit Xoshiro256(uint64_t seed);

  uint64_t Next();

  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, n), n > 0. Lemire's rejection method.
  uint64_t Below(uint64_t n);
  // Standard normal via Box-Muller (one value per call, no caching).
  double Normal();
  double LogNormal(double mu, double sigma);

 private:
  std::array<uint64_t, 4> s_;
};

}  // namespace allocdss

#endif  // ALLOCDSS_RANDOM_H_
