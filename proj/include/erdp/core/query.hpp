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

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "erdp/common.hpp"
#include "erdp/core/dataset.hpp"
#include "erdp/core/formula.hpp"
#include "erdp/core/pairs.hpp"

namespace erdp {

enum class PairFilter { kAll, kPositives, kNegatives };

struct QueryTarget {
  enum class Kind { kBaseTable, kPairs };

  Kind kind = Kind::kPairs;
  std::string dataset;  // "left" or "right" for kBaseTable
  PairFilter filter = PairFilter::kAll;

  static QueryTarget pairs(PairFilter f) { return {Kind::kPairs, {}, f}; }
  static QueryTarget base(std::string id) {
    return {Kind::kBaseTable, std::move(id), PairFilter::kAll};
  }

  bool operator==(const QueryTarget&) const = default;
};

inline const char* to_string(PairFilter f) {
  switch (f) {
    case PairFilter::kAll: return "all";
    case PairFilter::kPositives: return "positives";
    case PairFilter::kNegatives: return "negatives";
  }
  return "?";
}

inline bool pair_selected(PairFilter f, Label l) {
  switch (f) {
    case PairFilter::kAll: return true;
    case PairFilter::kPositives: return l == Label::kMatch;
    case PairFilter::kNegatives: return l == Label::kNonMatch;
  }
  return false;
}

// The sensitive data a session answers queries over: two base datasets and
// the labeled pair view built from them. Owns the datasets so the pair
// view's record pointers stay valid. Predicate results over the pair view
// are memoised per predicate; the memo never changes an answer.
class DataBinding {
 public:
  DataBinding(std::string id, Dataset left, Dataset right, std::vector<PairLabel> labels,
              int stability)
      : id_(std::move(id)),
        left_(std::make_shared<const Dataset>(std::move(left))),
        right_(std::make_shared<const Dataset>(std::move(right))),
        pairs_(*left_, *right_, std::move(labels), stability) {}

  DataBinding(const DataBinding&) = delete;
  DataBinding& operator=(const DataBinding&) = delete;

  const std::string& id() const { return id_; }
  const Dataset& left() const { return *left_; }
  const Dataset& right() const { return *right_; }
  const PairTable& pairs() const { return pairs_; }
  const Schema& schema() const { return pairs_.schema(); }

  const Dataset& base(const std::string& name) const {
    if (name == "left") return *left_;
    if (name == "right") return *right_;
    not_found("unknown base table: " + name);
  }

  // Sensitivity of a count over `t`: 1 for base tables, the declared
  // stability for the pair view.
  int sensitivity(const QueryTarget& t) const {
    return t.kind == QueryTarget::Kind::kPairs ? pairs_.stability() : 1;
  }

  // Per-pair truth vector for one predicate, computed once.
  std::shared_ptr<const std::vector<std::uint8_t>> predicate_truth(
      const SimilarityPredicate& p) const {
    char theta[32];
    std::snprintf(theta, sizeof theta, "%.17g", p.threshold);
    const std::string key = p.attribute + '\x1f' + to_string(p.transform) + '\x1f' +
                            to_string(p.sim) + '\x1f' + theta;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    auto v = std::make_shared<std::vector<std::uint8_t>>(pairs_.size());
    const auto& ps = pairs_.pairs();
    for (std::size_t i = 0; i < ps.size(); ++i) {
      (*v)[i] = evaluate_predicate(p, schema(), *ps[i].left, *ps[i].right) ? 1 : 0;
    }
    std::lock_guard<std::mutex> lock(mu_);
    return memo_.emplace(key, std::move(v)).first->second;
  }

  // Which pairs satisfy `f`, using the memo.
  std::vector<std::uint8_t> formula_truth(const Formula& f) const {
    if (f.kind() != FormulaKind::kPair) {
      invalid_argument("isNull formula evaluated on a pair");
    }
    f.check_schema(schema());
    std::vector<std::uint8_t> out(pairs_.size(), 0);
    for (const auto& clause : f.clauses()) {
      std::vector<std::uint8_t> acc(pairs_.size(), 1);
      for (const auto& a : clause) {
        const auto t = predicate_truth(std::get<SimilarityPredicate>(a));
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] &= (*t)[i];
      }
      for (std::size_t i = 0; i < out.size(); ++i) out[i] |= acc[i];
    }
    return out;
  }

 private:
  std::string id_;
  std::shared_ptr<const Dataset> left_;
  std::shared_ptr<const Dataset> right_;
  PairTable pairs_;
  mutable std::mutex mu_;
  mutable std::map<std::string, std::shared_ptr<const std::vector<std::uint8_t>>> memo_;
};

// Exact number of items in `target` satisfying `f`. This is the ground truth
// every mechanism perturbs; it never leaves the engine.
inline long true_count(const Formula& f, const QueryTarget& target, const DataBinding& data) {
  if (target.kind == QueryTarget::Kind::kBaseTable) {
    if (f.kind() != FormulaKind::kRecord) {
      invalid_argument("pair predicates cannot be counted over a base table");
    }
    const Dataset& d = data.base(target.dataset);
    f.check_schema(d.schema());
    long n = 0;
    for (const auto& r : d.rows()) n += evaluate_formula(f, d.schema(), r) ? 1 : 0;
    return n;
  }
  if (f.kind() != FormulaKind::kPair) {
    invalid_argument("isNull formulas can only be counted over a base table");
  }
  const auto truth = data.formula_truth(f);
  const auto& ps = data.pairs().pairs();
  long n = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (truth[i] && pair_selected(target.filter, ps[i].label)) ++n;
  }
  return n;
}

enum class Task { kBlocking, kMatching };

struct QualityReport {
  Task task = Task::kBlocking;
  double recall = 0.0;
  double cost = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  bool precision_defined = false;  // false when the formula selects nothing
};

namespace quality_detail {

inline QualityReport from_counts(Task task, std::size_t total, std::size_t positives,
                                 std::size_t selected, std::size_t selected_pos) {
  if (total == 0) invalid_argument("quality report needs a non-empty pair table");
  if (positives == 0) invalid_argument("quality report needs at least one positive pair");
  QualityReport q;
  q.task = task;
  q.recall = static_cast<double>(selected_pos) / static_cast<double>(positives);
  q.cost = static_cast<double>(selected) / static_cast<double>(total);
  q.precision_defined = selected > 0;
  q.precision = selected > 0
                    ? static_cast<double>(selected_pos) / static_cast<double>(selected)
                    : 0.0;
  const double s = q.precision + q.recall;
  q.f1 = s > 0.0 ? 2.0 * q.precision * q.recall / s : 0.0;
  return q;
}

}  // namespace quality_detail

// Blocking: recall and cost over the training pairs. Matching: precision,
// recall and F1. All fields are filled either way; `task` says which ones
// the caller should read.
inline QualityReport quality_report(const Formula& f, const DataBinding& data, Task task) {
  const auto truth = data.formula_truth(f);
  const auto& ps = data.pairs().pairs();
  std::size_t selected = 0, selected_pos = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!truth[i]) continue;
    ++selected;
    if (ps[i].label == Label::kMatch) ++selected_pos;
  }
  return quality_detail::from_counts(task, ps.size(), data.pairs().positives(), selected,
                                     selected_pos);
}

// Quality of the empty output (nothing selected for blocking, nothing
// accepted for matching).
inline QualityReport empty_quality(const DataBinding& data, Task task) {
  return quality_detail::from_counts(task, data.pairs().size(), data.pairs().positives(), 0, 0);
}

// Exact blocking cost over the full cross product left x right. Quadratic;
// meant for small datasets.
inline double cross_product_cost(const Formula& f, const DataBinding& data) {
  const auto& l = data.left();
  const auto& r = data.right();
  if (l.size() == 0 || r.size() == 0) return 0.0;
  std::size_t hits = 0;
  for (const auto& a : l.rows()) {
    for (const auto& b : r.rows()) hits += evaluate_formula(f, data.schema(), a, b) ? 1 : 0;
  }
  return static_cast<double>(hits) / (static_cast<double>(l.size()) * r.size());
}

}  // namespace erdp
