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

// Monte-Carlo checks of the tolerance guarantees. Violations are judged
// against the true answer directly, never through mechanism internals.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "erdp/mechanisms/mechanisms.hpp"
#include "support/oracles.hpp"

namespace oracle {

constexpr double kAdversarialGap = 1.01;

struct ViolationRates {
  double lm = 0.0;
  double lcm = 0.0;
  double ltm = 0.0;
  double lcmp = 0.0;
  double lcmmp = 0.0;
};

// Fraction of trials in which a count answer misses the truth by more than alpha.
inline double lm_violation_rate(double alpha, double beta, int trials, std::uint64_t seed) {
  erdp::Rng rng(seed);
  int bad = 0;
  for (int i = 0; i < trials; ++i) {
    const double r = erdp::run_lm(500.0, {alpha, beta}, 1, rng).value;
    if (std::fabs(r - 500.0) > alpha) ++bad;
  }
  return static_cast<double>(bad) / trials;
}

// Comparison mechanisms, at margins q - c = +gap*alpha and -gap*alpha in
// alternating trials. A violation is a wrong boolean answer.
template <typename Run>
double comparison_violation_rate(double alpha, int trials, std::uint64_t seed, Run run) {
  erdp::Rng rng(seed);
  int bad = 0;
  for (int i = 0; i < trials; ++i) {
    const bool truth = i % 2 == 0;
    const double q = 1000.0 + (truth ? 1.0 : -1.0) * kAdversarialGap * alpha;
    const double margin = erdp::comparison_margin(q, 1000.0, erdp::Direction::kGreater);
    if (run(margin, rng) != truth) ++bad;
  }
  return static_cast<double>(bad) / trials;
}

// Top-2 of five counts where the two leaders tie at c_k and the rest sit
// just below c_k - alpha. Any trailing count in the output is a violation.
inline double ltm_violation_rate(double alpha, double beta, int trials, std::uint64_t seed) {
  erdp::Rng rng(seed);
  const double top = 1000.0;
  const double low = top - kAdversarialGap * alpha;
  const std::vector<double> counts = {top, low, top, low, low};
  int bad = 0;
  for (int i = 0; i < trials; ++i) {
    const auto ans = erdp::run_ltm(counts, 2, erdp::TopOrder::kLargest, {alpha, beta}, 1, rng);
    for (auto idx : ans.indices) {
      if (counts[idx] < top - alpha) {
        ++bad;
        break;
      }
    }
  }
  return static_cast<double>(bad) / trials;
}

inline ViolationRates soundness_suite(double alpha, double beta, int trials, std::uint64_t seed) {
  ViolationRates v;
  const erdp::Tolerance tol{alpha, beta};
  v.lm = lm_violation_rate(alpha, beta, trials, seed);
  v.lcm = comparison_violation_rate(alpha, trials, seed + 1, [&](double m, erdp::Rng& r) {
    return erdp::run_lcm(m, tol, 1, r).value;
  });
  v.ltm = ltm_violation_rate(alpha, beta, trials, seed + 2);
  v.lcmp = comparison_violation_rate(alpha, trials, seed + 3, [&](double m, erdp::Rng& r) {
    return erdp::run_lcmp(m, tol, 0.05, 1, r).value;
  });
  v.lcmmp = comparison_violation_rate(alpha, trials, seed + 4, [&](double m, erdp::Rng& r) {
    return erdp::run_lcmmp(m, tol, 5, 1, r).value;
  });
  return v;
}

// Fraction of trials in which LTM on the example counts returns {0, 1}.
inline double ltm_example_rate(int trials, std::uint64_t seed) {
  erdp::Rng rng(seed);
  const std::vector<double> counts = {10000, 8000, 200, 100, 50};
  int hit = 0;
  for (int i = 0; i < trials; ++i) {
    const auto ans = erdp::run_ltm(counts, 2, erdp::TopOrder::kLargest, {10.0, 0.05}, 1, rng);
    if (ans.indices == std::vector<std::size_t>{0, 1}) ++hit;
  }
  return static_cast<double>(hit) / trials;
}

// Largest gap between the empirical CDF of NoiseDown(Lap(1/eps), eps, eps')
// at the nine deciles of Lap(1/eps') and the decile levels themselves.
inline double noise_down_decile_gap(double eps, double eps_prime, int draws,
                                    std::uint64_t seed) {
  erdp::Rng rng(seed);
  std::vector<double> out(static_cast<std::size_t>(draws));
  for (auto& x : out) {
    const double eta = erdp::sample_laplace(1.0 / eps, rng);
    x = erdp::noise_down(eta, eps, eps_prime, rng);
  }
  double worst = 0.0;
  for (int d = 1; d <= 9; ++d) {
    const double p = d / 10.0;
    const double q = laplace_quantile(p, 1.0 / eps_prime);
    double below = 0;
    for (double x : out) below += x <= q ? 1 : 0;
    worst = std::max(worst, std::fabs(below / draws - p));
  }
  return worst;
}

}  // namespace oracle
