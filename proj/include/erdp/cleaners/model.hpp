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
#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "erdp/common.hpp"
#include "erdp/core/formula.hpp"
#include "erdp/core/similarity.hpp"
#include "erdp/random.hpp"
#include "json.hpp"

namespace erdp {

enum class StrategyKind { kBS1, kBS2, kMS1, kMS2 };

inline const char* to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::kBS1: return "BS1";
    case StrategyKind::kBS2: return "BS2";
    case StrategyKind::kMS1: return "MS1";
    case StrategyKind::kMS2: return "MS2";
  }
  return "?";
}

inline StrategyKind strategy_from_string(const std::string& s) {
  for (auto k : {StrategyKind::kBS1, StrategyKind::kBS2, StrategyKind::kMS1, StrategyKind::kMS2}) {
    if (s == to_string(k)) return k;
  }
  invalid_argument("unknown strategy: " + s);
}

inline bool is_blocking(StrategyKind k) {
  return k == StrategyKind::kBS1 || k == StrategyKind::kBS2;
}

// How much a cleaner trusts noisy answers (x11).
enum class TrustStyle { kNeutral, kOptimistic, kPessimistic };

inline const char* to_string(TrustStyle t) {
  switch (t) {
    case TrustStyle::kNeutral: return "neutral";
    case TrustStyle::kOptimistic: return "optimistic";
    case TrustStyle::kPessimistic: return "pessimistic";
  }
  return "?";
}

// Dimensions of the candidate predicate grid, in the order x7 permutes them.
enum class GridDim { kAttribute = 0, kTransform = 1, kSimilarity = 2, kThreshold = 3 };

struct CleanerModel {
  StrategyKind strategy = StrategyKind::kBS1;
  int attributes = 2;                        // x1; capped at d when used
  std::vector<TransformSpec> transforms;     // x2, ordered
  std::vector<SimilarityFunction> sims;      // x3, ordered
  double low = 0.3;                          // x4
  double high = 0.8;                         // x5
  int thresholds = 3;                        // x6
  bool ascending = false;                    // threshold order
  std::array<int, 4> nesting = {0, 1, 2, 3};  // x7: outermost loop first
  double match_fraction = 0.3;               // x8
  double nonmatch_fraction = 0.15;           // x9
  int relax = 2;                             // x10
  TrustStyle trust = TrustStyle::kNeutral;   // x11

  std::vector<double> threshold_list() const {
    std::vector<double> t;
    for (int i = 0; i < thresholds; ++i) {
      t.push_back(thresholds == 1 ? low : low + (high - low) * i / (thresholds - 1));
    }
    if (!ascending) std::reverse(t.begin(), t.end());
    return t;
  }
};

// The transformation pool: character 2-grams, 3-grams and word tokens.
inline std::vector<TransformSpec> transformation_pool() {
  return {{Transformation::kQgram, 2}, {Transformation::kQgram, 3},
          {Transformation::kSpaceTokenize, 2}};
}

template <typename T>
std::vector<T> ordered_subset(std::vector<T> pool, std::size_t n, Rng& rng) {
  for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.below(i)]);
  pool.resize(n);
  return pool;
}

// Draws every field uniformly from its range. `d` is the schema width.
inline CleanerModel sample_cleaner(StrategyKind kind, Rng& rng, int d) {
  if (d < 1) invalid_argument("sample_cleaner needs a schema with attributes");
  CleanerModel m;
  m.strategy = kind;
  const int x1_choices[] = {2, 3, d};
  m.attributes = std::min(d, x1_choices[rng.below(3)]);
  m.transforms = ordered_subset(transformation_pool(), 1 + rng.below(3), rng);
  m.sims = ordered_subset(std::vector<SimilarityFunction>(std::begin(kAllSimilarities),
                                                          std::end(kAllSimilarities)),
                          2 + rng.below(5), rng);
  m.low = rng.uniform(0.0, 0.5);
  while (m.low == 0.0) m.low = rng.uniform(0.0, 0.5);
  m.high = 0.5 + (1.0 - rng.uniform_open()) * 0.5;  // (0.5, 1)
  if (m.high >= 1.0) m.high = std::nextafter(1.0, 0.0);
  m.thresholds = 2 + static_cast<int>(rng.below(5));
  m.ascending = rng.below(2) == 1;
  std::vector<int> dims = {0, 1, 2, 3};
  dims = ordered_subset(dims, 4, rng);
  std::copy(dims.begin(), dims.end(), m.nesting.begin());
  m.match_fraction = rng.uniform(0.2, 0.5);
  m.nonmatch_fraction = rng.uniform(0.1, 0.2);
  m.relax = 2 + static_cast<int>(rng.below(2));
  m.trust = static_cast<TrustStyle>(rng.below(3));
  return m;
}

// Candidate predicates over the given attribute order, enumerated with the
// loop nesting chosen by x7.
inline std::vector<SimilarityPredicate> candidate_predicates(
    const CleanerModel& m, const std::vector<std::string>& attributes) {
  const auto thetas = m.threshold_list();
  const std::array<std::size_t, 4> sizes = {attributes.size(), m.transforms.size(),
                                            m.sims.size(), thetas.size()};
  std::size_t total = 1;
  for (auto s : sizes) total *= s;
  std::vector<SimilarityPredicate> out;
  out.reserve(total);
  std::array<std::size_t, 4> idx{};
  for (std::size_t n = 0; n < total; ++n) {
    // Innermost loop is the last entry of `nesting`.
    std::size_t rest = n;
    for (int level = 3; level >= 0; --level) {
      const auto dim = static_cast<std::size_t>(m.nesting[static_cast<std::size_t>(level)]);
      idx[dim] = rest % sizes[dim];
      rest /= sizes[dim];
    }
    out.push_back({attributes[idx[0]], m.transforms[idx[1]], m.sims[idx[2]], thetas[idx[3]]});
  }
  return out;
}

inline nlohmann::json model_to_json(const CleanerModel& m) {
  auto ts = nlohmann::json::array();
  for (const auto& t : m.transforms) ts.push_back(to_string(t));
  auto ss = nlohmann::json::array();
  for (auto s : m.sims) ss.push_back(to_string(s));
  return {{"strategy", to_string(m.strategy)},
          {"x1", m.attributes},
          {"x2", ts},
          {"x3", ss},
          {"x4", m.low},
          {"x5", m.high},
          {"x6", m.thresholds},
          {"ascending", m.ascending},
          {"x7", m.nesting},
          {"x8", m.match_fraction},
          {"x9", m.nonmatch_fraction},
          {"x10", m.relax},
          {"x11", to_string(m.trust)}};
}

}  // namespace erdp
