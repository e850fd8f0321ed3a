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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "erdp/common.hpp"
#include "erdp/mechanisms/translate.hpp"
#include "erdp/random.hpp"

namespace erdp {

enum class Direction { kGreater, kLess, kGreaterEqual, kLessEqual };
enum class TopOrder { kLargest, kSmallest };

inline const char* to_string(Direction d) {
  switch (d) {
    case Direction::kGreater: return ">";
    case Direction::kLess: return "<";
    case Direction::kGreaterEqual: return ">=";
    case Direction::kLessEqual: return "<=";
  }
  return "?";
}

inline Direction direction_from_string(const std::string& s) {
  if (s == ">") return Direction::kGreater;
  if (s == "<") return Direction::kLess;
  if (s == ">=") return Direction::kGreaterEqual;
  if (s == "<=") return Direction::kLessEqual;
  invalid_argument("unknown comparison direction: " + s);
}

// Signed margin of a threshold comparison in its ">" form: positive means
// the condition holds. Under continuous noise the strict and non-strict
// forms differ only on a null set, inside the tolerance band.
inline double comparison_margin(double true_count, double threshold, Direction d) {
  if (!std::isfinite(threshold)) invalid_argument("comparison threshold must be finite");
  switch (d) {
    case Direction::kGreater:
    case Direction::kGreaterEqual:
      return true_count - threshold;
    case Direction::kLess:
    case Direction::kLessEqual:
      return threshold - true_count;
  }
  return 0.0;
}

struct NoiseDownDraw {
  double value = 0.0;
  int branch = 0;  // 1..4
};

// Resamples Laplace noise eta ~ Lap(1/eps) into eta' ~ Lap(1/eps_prime),
// eps_prime > eps, correlated with eta so that releasing both costs only
// eps_prime. Four-branch mixture; branch 4 takes the remaining weight.
inline NoiseDownDraw noise_down_traced(double eta, double eps, double eps_prime, Rng& rng) {
  if (!(eps > 0.0) || !(eps_prime > eps)) {
    invalid_argument("NoiseDown needs 0 < eps < eps_prime");
  }
  const double a = std::fabs(eta);
  const double gap = eps_prime - eps;
  const double sum = eps_prime + eps;
  const double decay = std::exp(-gap * a);
  const double w1 = (eps / eps_prime) * decay;
  const double w2 = gap / (2.0 * eps_prime);
  const double w3 = (sum / (2.0 * eps_prime)) * (1.0 - decay);
  const double sign = eta < 0.0 ? -1.0 : 1.0;
  const double p = rng.uniform_open();
  if (p <= w1) return {eta, 1};
  if (p <= w1 + w2) {
    // z <= 0 with density proportional to e^{(eps' + eps) z}
    return {sign * -rng.exponential(sum), 2};
  }
  if (p <= w1 + w2 + w3) {
    // z in [0, |eta|] with density proportional to e^{-(eps' - eps) z}
    const double u = rng.uniform_open();
    const double z = -std::log1p(-u * (1.0 - decay)) / gap;
    return {sign * std::min(z, a), 3};
  }
  // z >= |eta| with density proportional to e^{-(eps' + eps) z}
  return {sign * (a + rng.exponential(sum)), 4};
}

inline double noise_down(double eta, double eps, double eps_prime, Rng& rng) {
  return noise_down_traced(eta, eps, eps_prime, rng).value;
}

struct CountAnswer {
  double value = 0.0;
  MechanismRecord record;
};

struct BoolAnswer {
  bool value = false;
  MechanismRecord record;
};

struct TopKAnswer {
  std::vector<std::size_t> indices;  // ascending
  MechanismRecord record;
};

inline MechanismRecord lm_record(const Tolerance& tol, int sensitivity) {
  MechanismRecord r;
  r.kind = MechanismKind::kLM;
  r.worst = {translate_lm(tol, sensitivity)};
  r.executed = r.worst;
  r.alpha = tol.alpha;
  r.beta = tol.beta;
  r.sensitivity = sensitivity;
  return r;
}

inline MechanismRecord lcm_record(const Tolerance& tol, int sensitivity) {
  MechanismRecord r;
  r.kind = MechanismKind::kLCM;
  r.worst = {translate_lcm(tol, sensitivity)};
  r.executed = r.worst;
  r.alpha = tol.alpha;
  r.beta = tol.beta;
  r.sensitivity = sensitivity;
  return r;
}

inline MechanismRecord ltm_record(const Tolerance& tol, int L, int k, int sensitivity) {
  MechanismRecord r;
  r.kind = MechanismKind::kLTM;
  r.worst = {translate_ltm(tol, L, k, sensitivity)};
  r.executed = r.worst;
  r.components = L;
  r.k = k;
  r.alpha = tol.alpha;
  r.beta = tol.beta;
  r.sensitivity = sensitivity;
  return r;
}

inline MechanismRecord lcmp_record(const Tolerance& tol, double f, int sensitivity) {
  const auto plan = plan_lcmp(tol, f, sensitivity);
  MechanismRecord r;
  r.kind = MechanismKind::kLCMP;
  r.worst = {plan.poke, plan.escalation};
  r.executed = r.worst;
  r.alpha = tol.alpha;
  r.beta = tol.beta;
  r.poke_fraction = f;
  r.sensitivity = sensitivity;
  return r;
}

inline MechanismRecord lcmmp_record(const Tolerance& tol, int m, int sensitivity) {
  const auto plan = plan_lcmmp(tol, m);
  MechanismRecord r;
  r.kind = MechanismKind::kLCMMP;
  r.worst = {LaplaceSpec::from_scale(1.0 / plan.max_rate, sensitivity)};
  r.executed = r.worst;
  r.alpha = tol.alpha;
  r.beta = tol.beta;
  r.pokes = m;
  r.sensitivity = sensitivity;
  return r;
}

// Laplace mechanism: true count plus Lap(alpha / ln(1/beta)).
inline CountAnswer run_lm(double true_count, const Tolerance& tol, int sensitivity, Rng& rng) {
  CountAnswer out;
  out.record = lm_record(tol, sensitivity);
  out.value = true_count + sample_laplace(out.record.worst[0].b, rng);
  return out;
}

// Laplace comparison mechanism on a signed margin (q - c in ">" form).
inline BoolAnswer run_lcm(double margin, const Tolerance& tol, int sensitivity, Rng& rng) {
  BoolAnswer out;
  out.record = lcm_record(tol, sensitivity);
  out.value = margin + sample_laplace(out.record.worst[0].b, rng) > 0.0;
  return out;
}

// Top-k selection given the noise already drawn. Ties go to the lower index.
inline std::vector<std::size_t> ltm_select(std::span<const double> counts,
                                           std::span<const double> noise, int k,
                                           TopOrder order) {
  const std::size_t L = counts.size();
  if (noise.size() != L) invalid_argument("LTM noise vector length mismatch");
  if (k < 1 || static_cast<std::size_t>(k) > L) invalid_argument("LTM needs 1 <= k <= L");
  std::vector<double> noisy(L);
  for (std::size_t i = 0; i < L; ++i) {
    const double c = order == TopOrder::kLargest ? counts[i] : -counts[i];
    noisy[i] = c + noise[i];
  }
  std::vector<std::size_t> idx(L);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return noisy[a] > noisy[b]; });
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

// Laplace top-k mechanism: i.i.d. Lap(b) on each of the L counts, report the
// k largest (or smallest) noisy counts.
inline TopKAnswer run_ltm(std::span<const double> counts, int k, TopOrder order,
                          const Tolerance& tol, int sensitivity, Rng& rng) {
  const int L = static_cast<int>(counts.size());
  TopKAnswer out;
  out.record = ltm_record(tol, L, k, sensitivity);
  std::vector<double> noise(counts.size());
  for (auto& n : noise) n = sample_laplace(out.record.worst[0].b, rng);
  out.indices = ltm_select(counts, noise, k, order);
  return out;
}

// LCM with poking. Spends a fraction f of LCM's cost on a first look and
// escalates to LCM(alpha, beta/2) only when that look is inconclusive.
inline BoolAnswer run_lcmp(double margin, const Tolerance& tol, double f, int sensitivity,
                           Rng& rng) {
  const auto plan = plan_lcmp(tol, f, sensitivity);
  BoolAnswer out;
  out.record = lcmp_record(tol, f, sensitivity);
  const double noisy = margin + sample_laplace(1.0 / plan.poke_rate, rng);
  if (noisy - plan.poke_alpha + tol.alpha >= 0.0) {
    out.value = true;
    out.record.executed = {plan.poke};
    out.record.stop_iteration = 0;
    return out;
  }
  if (noisy + plan.poke_alpha - tol.alpha <= 0.0) {
    out.value = false;
    out.record.executed = {plan.poke};
    out.record.stop_iteration = 0;
    return out;
  }
  out.value = margin + sample_laplace(plan.escalation.b, rng) > 0.0;
  out.record.executed = {plan.poke, plan.escalation};
  out.record.stop_iteration = 1;
  return out;
}

// LCM with multi-poking. Noise is refined with NoiseDown between pokes, so a
// run that answers at poke i has paid for Lap(1/rate_i) only.
inline BoolAnswer run_lcmmp(double margin, const Tolerance& tol, int m, int sensitivity,
                            Rng& rng) {
  const auto plan = plan_lcmmp(tol, m);
  BoolAnswer out;
  out.record = lcmmp_record(tol, m, sensitivity);
  double eta = sample_laplace(1.0 / plan.rates[0], rng);
  for (int i = 0; i + 1 < m; ++i) {
    const double noisy = margin + eta;
    const double a_i = plan.alphas[static_cast<std::size_t>(i)];
    if ((noisy - a_i) / tol.alpha >= -1.0) {
      out.value = true;
      out.record.stop_iteration = i;
      out.record.executed = {LaplaceSpec::from_scale(1.0 / plan.rates[i], sensitivity)};
      return out;
    }
    if ((noisy + a_i) / tol.alpha <= 1.0) {
      out.value = false;
      out.record.stop_iteration = i;
      out.record.executed = {LaplaceSpec::from_scale(1.0 / plan.rates[i], sensitivity)};
      return out;
    }
    eta = noise_down(eta, plan.rates[i], plan.rates[i + 1], rng);
  }
  out.value = margin + eta > 0.0;
  out.record.stop_iteration = m - 1;
  out.record.executed = {LaplaceSpec::from_scale(1.0 / plan.max_rate, sensitivity)};
  return out;
}

}  // namespace erdp
