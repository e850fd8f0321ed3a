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
#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "erdp/common.hpp"

namespace erdp {

enum class Transformation { kLowercase, kQgram, kSpaceTokenize };

enum class SimilarityFunction {
  kLevenshtein,
  kJaro,
  kSmithWaterman,
  kCosine,
  kJaccard,
  kOverlap,
  kAbsDiffLen,
};

inline constexpr SimilarityFunction kAllSimilarities[] = {
    SimilarityFunction::kLevenshtein, SimilarityFunction::kJaro,
    SimilarityFunction::kSmithWaterman, SimilarityFunction::kCosine,
    SimilarityFunction::kJaccard, SimilarityFunction::kOverlap,
    SimilarityFunction::kAbsDiffLen,
};

struct TransformSpec {
  Transformation kind = Transformation::kLowercase;
  int q = 2;  // only for kQgram

  bool operator==(const TransformSpec&) const = default;
};

// A transformed attribute value: the lowercased string (used by the
// character-level similarities) and its token multiset (used by the
// set-level ones).
struct Transformed {
  std::string text;
  std::vector<std::string> tokens;
};

namespace sim_detail {

inline std::string lowercase(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::vector<std::string> space_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::vector<std::string> qgrams(std::string_view s, int q) {
  std::vector<std::string> out;
  const auto n = static_cast<std::size_t>(q);
  if (s.empty()) return out;
  if (s.size() <= n) {
    out.emplace_back(s);
    return out;
  }
  for (std::size_t i = 0; i + n <= s.size(); ++i) out.emplace_back(s.substr(i, n));
  return out;
}

using Bag = std::map<std::string, int>;

inline Bag bag(const std::vector<std::string>& tokens) {
  Bag b;
  for (const auto& t : tokens) ++b[t];
  return b;
}

}  // namespace sim_detail

inline Transformed apply_transform(const TransformSpec& t, std::string_view value) {
  Transformed out;
  out.text = sim_detail::lowercase(value);
  switch (t.kind) {
    case Transformation::kLowercase:
      out.tokens = {out.text};
      break;
    case Transformation::kQgram:
      if (t.q < 1) invalid_argument("q-gram size must be >= 1");
      out.tokens = sim_detail::qgrams(out.text, t.q);
      break;
    case Transformation::kSpaceTokenize:
      out.tokens = sim_detail::space_tokens(out.text);
      break;
  }
  return out;
}

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// 1 - editDistance / maxLen.
inline double levenshtein_similarity(std::string_view a, std::string_view b) {
  const std::size_t m = std::max(a.size(), b.size());
  if (m == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(a, b)) / static_cast<double>(m);
}

inline double jaro_similarity(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const std::size_t window =
      std::max<std::size_t>(std::max(a.size(), b.size()) / 2, 1) - 1;
  std::vector<bool> a_m(a.size(), false), b_m(b.size(), false);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(i + window + 1, b.size());
    for (std::size_t j = lo; j < hi; ++j) {
      if (!b_m[j] && a[i] == b[j]) {
        a_m[i] = b_m[j] = true;
        ++matches;
        break;
      }
    }
  }
  if (matches == 0) return 0.0;
  std::size_t k = 0, half_transpositions = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a_m[i]) continue;
    while (!b_m[k]) ++k;
    if (a[i] != b[k]) ++half_transpositions;
    ++k;
  }
  const double m = static_cast<double>(matches);
  const double t = static_cast<double>(half_transpositions) / 2.0;
  return (m / a.size() + m / b.size() + (m - t) / m) / 3.0;
}

// Local alignment with match +1, mismatch -2, gap -0.5, normalised by the
// best achievable score min(|a|, |b|).
inline double smith_waterman_similarity(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  constexpr double kMatch = 1.0, kMismatch = -2.0, kGap = -0.5;
  std::vector<double> prev(b.size() + 1, 0.0), cur(b.size() + 1, 0.0);
  double best = 0.0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = 0.0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const double diag = prev[j - 1] + (a[i - 1] == b[j - 1] ? kMatch : kMismatch);
      cur[j] = std::max({0.0, diag, prev[j] + kGap, cur[j - 1] + kGap});
      best = std::max(best, cur[j]);
    }
    std::swap(prev, cur);
  }
  return best / (kMatch * static_cast<double>(std::min(a.size(), b.size())));
}

inline double cosine_similarity(const std::vector<std::string>& a,
                                const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const auto ba = sim_detail::bag(a), bb = sim_detail::bag(b);
  if (ba == bb) return 1.0;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [tok, c] : ba) {
    na += static_cast<double>(c) * c;
    auto it = bb.find(tok);
    if (it != bb.end()) dot += static_cast<double>(c) * it->second;
  }
  for (const auto& [tok, c] : bb) nb += static_cast<double>(c) * c;
  return std::min(1.0, dot / (std::sqrt(na) * std::sqrt(nb)));
}

namespace sim_detail {

struct BagSizes {
  double intersection = 0, unioned = 0, a = 0, b = 0;
};

inline BagSizes bag_sizes(const std::vector<std::string>& a,
                          const std::vector<std::string>& b) {
  const auto ba = bag(a), bb = bag(b);
  BagSizes s;
  s.a = static_cast<double>(a.size());
  s.b = static_cast<double>(b.size());
  for (const auto& [tok, c] : ba) {
    auto it = bb.find(tok);
    const int other = it == bb.end() ? 0 : it->second;
    s.intersection += std::min(c, other);
    s.unioned += std::max(c, other);
  }
  for (const auto& [tok, c] : bb) {
    if (!ba.count(tok)) s.unioned += c;
  }
  return s;
}

}  // namespace sim_detail

inline double jaccard_similarity(const std::vector<std::string>& a,
                                 const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  const auto s = sim_detail::bag_sizes(a, b);
  return s.intersection / s.unioned;
}

inline double overlap_similarity(const std::vector<std::string>& a,
                                 const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const auto s = sim_detail::bag_sizes(a, b);
  return s.intersection / std::min(s.a, s.b);
}

// 1 - |len(a) - len(b)| / max(len).
inline double abs_diff_len_similarity(std::string_view a, std::string_view b) {
  const std::size_t m = std::max(a.size(), b.size());
  if (m == 0) return 1.0;
  const double d = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
  return 1.0 - d / static_cast<double>(m);
}

inline double similarity(SimilarityFunction f, const Transformed& a, const Transformed& b) {
  switch (f) {
    case SimilarityFunction::kLevenshtein: return levenshtein_similarity(a.text, b.text);
    case SimilarityFunction::kJaro: return jaro_similarity(a.text, b.text);
    case SimilarityFunction::kSmithWaterman: return smith_waterman_similarity(a.text, b.text);
    case SimilarityFunction::kCosine: return cosine_similarity(a.tokens, b.tokens);
    case SimilarityFunction::kJaccard: return jaccard_similarity(a.tokens, b.tokens);
    case SimilarityFunction::kOverlap: return overlap_similarity(a.tokens, b.tokens);
    case SimilarityFunction::kAbsDiffLen: return abs_diff_len_similarity(a.text, b.text);
  }
  return 0.0;
}

inline const char* to_string(SimilarityFunction f) {
  switch (f) {
    case SimilarityFunction::kLevenshtein: return "levenshtein";
    case SimilarityFunction::kJaro: return "jaro";
    case SimilarityFunction::kSmithWaterman: return "smithWaterman";
    case SimilarityFunction::kCosine: return "cosine";
    case SimilarityFunction::kJaccard: return "jaccard";
    case SimilarityFunction::kOverlap: return "overlap";
    case SimilarityFunction::kAbsDiffLen: return "absDiffLen";
  }
  return "?";
}

inline SimilarityFunction similarity_from_string(std::string_view s) {
  for (auto f : kAllSimilarities) {
    if (s == to_string(f)) return f;
  }
  invalid_argument("unknown similarity function: " + std::string(s));
}

inline std::string to_string(const TransformSpec& t) {
  switch (t.kind) {
    case Transformation::kLowercase: return "lowercase";
    case Transformation::kQgram: return "qgram" + std::to_string(t.q);
    case Transformation::kSpaceTokenize: return "spaceTokenize";
  }
  return "?";
}

// Accepts "lowercase", "spaceTokenize", "qgram" (q from the caller), or
// "qgramN" / "Ngrams" with an inline size.
inline TransformSpec transform_from_string(std::string_view s, int q = 2) {
  if (s == "lowercase") return {Transformation::kLowercase, q};
  if (s == "spaceTokenize" || s == "space") return {Transformation::kSpaceTokenize, q};
  if (s == "qgram") return {Transformation::kQgram, q};
  auto digits_to_int = [&](std::string_view d) -> int {
    if (d.empty() || d.size() > 2) invalid_argument("bad q-gram size in: " + std::string(s));
    int v = 0;
    for (char c : d) {
      if (c < '0' || c > '9') invalid_argument("bad q-gram size in: " + std::string(s));
      v = v * 10 + (c - '0');
    }
    if (v < 1) invalid_argument("q-gram size must be >= 1");
    return v;
  };
  if (s.rfind("qgram", 0) == 0) return {Transformation::kQgram, digits_to_int(s.substr(5))};
  if (s.size() > 5 && s.substr(s.size() - 5) == "grams") {
    return {Transformation::kQgram, digits_to_int(s.substr(0, s.size() - 5))};
  }
  invalid_argument("unknown transformation: " + std::string(s));
}

}  // namespace erdp
