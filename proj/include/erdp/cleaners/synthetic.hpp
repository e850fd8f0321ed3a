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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "erdp/common.hpp"
#include "erdp/core/dataset.hpp"
#include "erdp/core/pairs.hpp"
#include "erdp/core/query.hpp"
#include "erdp/random.hpp"
#include "json.hpp"

namespace erdp {

// Generator for small labeled entity-resolution benchmarks. Left record i is
// paired with right record i (stability 1). Positive pairs are perturbed
// duplicates of one entity; negative pairs join two unrelated entities, a
// fraction of which share surface features (same city, a common name word).
enum class SyntheticKind { kRestaurants, kCitations };

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::kRestaurants;
  std::size_t pairs = 100;
  std::size_t positives = 50;
  double hard_negative_rate = 0.3;
  double typo_rate = 0.5;  // chance of each text field receiving an edit
  std::uint64_t seed = 7;
};

struct SyntheticData {
  Dataset left;
  Dataset right;
  std::vector<PairLabel> labels;
};

namespace synth {

inline const std::vector<std::string>& words(int which) {
  static const std::vector<std::vector<std::string>> lists = {
      // 0: restaurant name words
      {"golden", "dragon", "blue", "olive", "garden", "house", "palace", "corner", "little",
       "royal", "bamboo", "harbor", "sunset", "lotus", "rustic", "table", "kitchen", "grill",
       "bistro", "tavern", "cafe", "oyster", "smoke", "pepper", "saffron", "maple", "copper",
       "union", "silver", "spoon", "fig", "lantern", "ember", "basil", "cedar", "river"},
      // 1: street names
      {"main", "oak", "pine", "market", "mission", "broadway", "sunset", "valencia", "lake",
       "hill", "park", "church", "union", "elm", "washington", "lincoln", "franklin",
       "madison", "grand", "spring", "center", "ocean", "bay", "harrison"},
      // 2: cities
      {"san francisco", "los angeles", "new york", "atlanta", "las vegas", "chicago",
       "boston", "seattle", "portland", "austin", "denver", "miami", "houston", "phoenix"},
      // 3: cuisines
      {"american", "italian", "french", "chinese", "japanese", "mexican", "thai", "indian",
       "seafood", "steakhouse", "californian", "mediterranean", "delis", "vegetarian"},
      // 4: title words
      {"efficient", "learning", "query", "processing", "distributed", "database", "systems",
       "privacy", "scalable", "graph", "mining", "streams", "index", "optimization",
       "parallel", "model", "approximate", "networks", "adaptive", "semantic", "clustering",
       "analysis", "framework", "data", "integration", "entity", "resolution", "transactions",
       "storage", "web", "search", "ranking", "probabilistic", "inference", "sampling"},
      // 5: surnames
      {"smith", "kumar", "chen", "garcia", "muller", "rossi", "tanaka", "nguyen", "wang",
       "johnson", "silva", "kowalski", "ivanov", "haddad", "okafor", "larsen", "dubois",
       "cohen", "patel", "novak", "schmidt", "lopez", "zhang", "brown"},
      // 6: venues
      {"sigmod", "vldb", "icde", "kdd", "www", "cikm", "edbt", "pods", "icml", "nips",
       "tods", "tkde"},
  };
  return lists.at(static_cast<std::size_t>(which));
}

inline const std::string& pick(const std::vector<std::string>& v, Rng& rng) {
  return v[rng.below(v.size())];
}

inline std::string typo(std::string s, Rng& rng) {
  if (s.size() < 2) return s;
  const auto i = rng.below(s.size());
  switch (rng.below(4)) {
    case 0: s.erase(i, 1); break;
    case 1: s.insert(i, 1, static_cast<char>('a' + rng.below(26))); break;
    case 2: s[i] = static_cast<char>('a' + rng.below(26)); break;
    default:
      if (i + 1 < s.size()) std::swap(s[i], s[i + 1]);
      break;
  }
  return s;
}

inline std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

inline std::string title_case(std::string s) {
  bool start = true;
  for (auto& c : s) {
    if (start && c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    start = (c == ' ');
  }
  return s;
}

inline std::string digits(std::size_t n, Rng& rng) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += static_cast<char>('0' + rng.below(10));
  return s;
}

// Applies token-level noise then character typos.
inline std::string perturb_text(const std::string& s, double typo_rate, Rng& rng) {
  auto toks = split(s);
  if (toks.size() > 2 && rng.uniform(0, 1) < 0.2) {
    const auto i = rng.below(toks.size() - 1);
    std::swap(toks[i], toks[i + 1]);
  }
  if (toks.size() > 3 && rng.uniform(0, 1) < 0.15) toks.pop_back();
  std::string out = join(toks);
  if (rng.uniform(0, 1) < typo_rate) out = typo(out, rng);
  if (rng.uniform(0, 1) < typo_rate * 0.4) out = typo(out, rng);
  if (rng.uniform(0, 1) < 0.3) out = title_case(out);
  return out;
}

inline Value maybe_null(std::string v, double null_rate, Rng& rng) {
  if (rng.uniform(0, 1) < null_rate) return std::nullopt;
  return Value(std::move(v));
}

inline Record restaurant(Rng& rng) {
  std::string name = pick(words(0), rng) + " " + pick(words(0), rng);
  if (rng.uniform(0, 1) < 0.5) name += " " + pick(words(0), rng);
  const std::string addr =
      std::to_string(10 + rng.below(990)) + " " + pick(words(1), rng) + " street";
  const std::string phone = digits(3, rng) + "-" + digits(3, rng) + "-" + digits(4, rng);
  return {Value(name), Value(addr), Value(pick(words(2), rng)),
          maybe_null(phone, 0.45, rng), maybe_null(pick(words(3), rng), 0.15, rng)};
}

inline Record restaurant_duplicate(const Record& r, double typo_rate, Rng& rng) {
  Record d = r;
  d[0] = perturb_text(*r[0], typo_rate, rng);
  std::string addr = *r[1];
  if (rng.uniform(0, 1) < 0.5) addr = addr.substr(0, addr.size() - 6) + "st.";
  d[1] = perturb_text(addr, typo_rate, rng);
  if (rng.uniform(0, 1) < 0.15) {
    d[2] = words(2)[rng.below(words(2).size())];
  } else if (rng.uniform(0, 1) < 0.2) {
    d[2] = title_case(*r[2]);
  }
  if (r[3] && rng.uniform(0, 1) < 0.3) {
    std::string p = *r[3];
    std::replace(p.begin(), p.end(), '-', '/');
    d[3] = p;
  } else if (rng.uniform(0, 1) < 0.2) {
    d[3] = std::nullopt;
  }
  if (rng.uniform(0, 1) < 0.25) d[4] = maybe_null(pick(words(3), rng), 0.3, rng);
  return d;
}

// Shares the city and one name word with `r` but is a different place.
inline Record restaurant_lookalike(const Record& r, Rng& rng) {
  Record d = restaurant(rng);
  auto toks = split(*r[0]);
  auto mine = split(*d[0]);
  mine[0] = toks[rng.below(toks.size())];
  d[0] = join(mine);
  d[2] = r[2];
  return d;
}

inline std::string author_list(Rng& rng) {
  std::vector<std::string> names;
  const auto n = 1 + rng.below(4);
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(std::string(1, static_cast<char>('a' + rng.below(26))) + " " +
                    pick(words(5), rng));
  }
  return join(names, ", ");
}

inline Record citation(Rng& rng) {
  std::vector<std::string> title;
  const auto n = 4 + rng.below(6);
  for (std::size_t i = 0; i < n; ++i) title.push_back(pick(words(4), rng));
  return {Value(join(title)), maybe_null(author_list(rng), 0.1, rng),
          maybe_null(pick(words(6), rng), 0.35, rng),
          maybe_null(std::to_string(1990 + rng.below(30)), 0.2, rng)};
}

inline Record citation_duplicate(const Record& r, double typo_rate, Rng& rng) {
  Record d = r;
  d[0] = perturb_text(*r[0], typo_rate, rng);
  if (r[1] && rng.uniform(0, 1) < 0.3) {
    d[1] = typo(*r[1], rng);
  } else if (rng.uniform(0, 1) < 0.1) {
    d[1] = std::nullopt;
  }
  if (r[2] && rng.uniform(0, 1) < 0.3) {
    d[2] = "proc. " + *r[2];
  } else if (rng.uniform(0, 1) < 0.2) {
    d[2] = std::nullopt;
  }
  if (rng.uniform(0, 1) < 0.25) d[3] = std::nullopt;
  return d;
}

inline Record citation_lookalike(const Record& r, Rng& rng) {
  Record d = citation(rng);
  auto toks = split(*r[0]);
  auto mine = split(*d[0]);
  for (std::size_t i = 0; i < std::min<std::size_t>(2, std::min(toks.size(), mine.size())); ++i) {
    mine[i] = toks[i];
  }
  d[0] = join(mine);
  d[2] = r[2];
  return d;
}

}  // namespace synth

inline Schema synthetic_schema(SyntheticKind kind) {
  if (kind == SyntheticKind::kRestaurants) return Schema({"name", "addr", "city", "phone", "type"});
  return Schema({"title", "authors", "venue", "year"});
}

inline SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  if (spec.positives > spec.pairs) invalid_argument("more positives than pairs requested");
  if (spec.pairs == 0) invalid_argument("synthetic dataset needs at least one pair");
  Rng rng(spec.seed);
  const bool rest = spec.kind == SyntheticKind::kRestaurants;
  std::vector<Record> left, right;
  std::vector<PairLabel> labels;
  // Shuffle which slots hold positives so labels are not ordered.
  std::vector<std::size_t> order(spec.pairs);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<bool> positive(spec.pairs, false);
  for (std::size_t i = 0; i < spec.positives; ++i) positive[order[i]] = true;

  for (std::size_t i = 0; i < spec.pairs; ++i) {
    Record a = rest ? synth::restaurant(rng) : synth::citation(rng);
    Record b;
    if (positive[i]) {
      b = rest ? synth::restaurant_duplicate(a, spec.typo_rate, rng)
               : synth::citation_duplicate(a, spec.typo_rate, rng);
    } else if (rng.uniform(0, 1) < spec.hard_negative_rate) {
      b = rest ? synth::restaurant_lookalike(a, rng) : synth::citation_lookalike(a, rng);
    } else {
      b = rest ? synth::restaurant(rng) : synth::citation(rng);
    }
    left.push_back(std::move(a));
    right.push_back(std::move(b));
    labels.push_back({i, i, positive[i] ? Label::kMatch : Label::kNonMatch});
  }
  const Schema schema = synthetic_schema(spec.kind);
  return {Dataset(schema, std::move(left)), Dataset(schema, std::move(right)),
          std::move(labels)};
}

inline std::shared_ptr<const DataBinding> synthetic_binding(const SyntheticSpec& spec,
                                                            std::string id = "synthetic") {
  auto d = generate_synthetic(spec);
  return std::make_shared<const DataBinding>(std::move(id), std::move(d.left),
                                             std::move(d.right), std::move(d.labels), 1);
}

inline SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j) {
  SyntheticSpec s;
  const std::string kind = j.value("kind", std::string("restaurants"));
  if (kind == "restaurants") {
    s.kind = SyntheticKind::kRestaurants;
  } else if (kind == "citations") {
    s.kind = SyntheticKind::kCitations;
    s.pairs = 1000;
    s.positives = 500;
  } else {
    invalid_argument("unknown synthetic kind: " + kind);
  }
  s.pairs = j.value("pairs", s.pairs);
  s.positives = j.value("positives", s.positives);
  s.hard_negative_rate = j.value("hardNegativeRate", s.hard_negative_rate);
  s.typo_rate = j.value("typoRate", s.typo_rate);
  s.seed = j.value("seed", s.seed);
  return s;
}

// Writes left.csv, right.csv, labels.csv and a dataset.json manifest.
inline void write_synthetic(const SyntheticSpec& spec, const std::string& id,
                            const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto data = generate_synthetic(spec);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) io_error("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("left.csv");
    write_dataset(out, data.left);
  }
  {
    auto out = open("right.csv");
    write_dataset(out, data.right);
  }
  {
    auto out = open("labels.csv");
    write_labels(out, data.labels);
  }
  auto out = open("dataset.json");
  nlohmann::json m = {{"id", id},
                      {"schema", data.left.schema().attributes()},
                      {"left", "left.csv"},
                      {"right", "right.csv"},
                      {"labels", "labels.csv"},
                      {"stability", 1}};
  out << m.dump(2) << '\n';
}

}  // namespace erdp
