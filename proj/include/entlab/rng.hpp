// Copyright 2026 The entlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Portable, seedable random streams.
//
// The generator is SplitMix64 (Steele, Lea, Flood 2014). Outputs depend only on
// integer arithmetic, and uniform doubles / bounded integers are derived here
// rather than through <random> distributions, whose algorithms are
// implementation-defined. Results are therefore identical across platforms
// and standard libraries.
//
// Substreams: stream(seed, k) starts from mix64(seed ^ mix64(k + 1)). Hashing
// the index (instead of offsetting the state) keeps substreams from being
// shifted copies of one another.

#pragma once

#include <cstdint>

namespace entlab {

/// The SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  /// Independent substream k of a seed.
  static constexpr SplitMix64 stream(std::uint64_t seed, std::uint64_t k) {
    return SplitMix64(mix64(seed ^ mix64(k + 1)));
  }

  constexpr std::uint64_t next() {
    state_ += kGamma;
    return mix64(state_);
  }

  /// Uniform in [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased (rejection on the top of the range). n > 0.
  constexpr std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

  /// Standard normal via Box-Muller (one value per call).
  double normal();

 private:
  std::uint64_t state_;
};

}  // namespace entlab
