// Copyright 2026 The erdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "erdp/common.hpp"

namespace erdp {

// Seeded randomness source. Uniform draws are built from raw 64-bit engine
// output rather than std::uniform_real_distribution so that sequences are
// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in the open interval (0, 1).
  double uniform_open() {
    for (;;) {
      const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) invalid_argument("Rng::below called with n = 0");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      const std::uint64_t v = engine_();
      if (v < limit) return v % n;
    }
  }

  // Uniform real in [lo, hi).
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53);
  }

  // Exponential with the given rate.
  double exponential(double rate) { return -std::log(uniform_open()) / rate; }

  // Derives an independent child seed, used to fan out per-run streams.
  std::uint64_t fork_seed() { return engine_() ^ 0x9e3779b97f4a7c15ULL; }

 private:
  std::mt19937_64 engine_;
};

// Draws from Lap(b): density (1/2b) e^{-|z|/b}.
// SplitMix64 finaliser over two words; used to derive stable per-run seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double sample_laplace(double b, Rng& rng) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    invalid_argument("Laplace scale must be positive and finite");
  }
  const double u = rng.uniform_open() - 0.5;  // (-0.5, 0.5)
  const double mag = -b * std::log(1.0 - 2.0 * std::fabs(u));
  return u < 0.0 ? -mag : mag;
}

}  // namespace erdp
