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

// Exact agreement of the engine's counting and scoring with full scans.

#pragma once

#include <string>

#include "support/oracles.hpp"

namespace oracle {

struct EquivalenceReport {
  int instances = 0;
  int mismatches = 0;
  std::string first;
};

// Random instances of up to `max_rows` base rows (split evenly between the
// two sides), one random formula each.
inline EquivalenceReport equivalence_check(int instances, std::size_t max_rows,
                                           std::uint64_t seed) {
  using namespace erdp;
  EquivalenceReport rep;
  Rng rng(seed);
  const Schema schema({"a", "b", "c"});
  auto miss = [&](int i, const std::string& what) {
    if (rep.mismatches++ == 0) rep.first = "instance " + std::to_string(i) + ": " + what;
  };
  for (int i = 0; i < instances; ++i) {
    ++rep.instances;
    const std::size_t n = 1 + rng.below(max_rows / 2);
    auto left = random_dataset(schema, n, rng);
    auto right = random_dataset(schema, n, rng);
    std::vector<PairLabel> labels;
    for (std::size_t p = 0; p < n; ++p) {
      labels.push_back({p, p, (p == 0 || rng.below(2)) ? Label::kMatch : Label::kNonMatch});
    }
    DataBinding d("r", std::move(left), std::move(right), labels, 1);
    const auto f = random_formula(schema, rng);
    const auto expect = scan(f, d.pairs());
    if (true_count(f, QueryTarget::pairs(PairFilter::kAll), d) != expect.all ||
        true_count(f, QueryTarget::pairs(PairFilter::kPositives), d) != expect.positives ||
        true_count(f, QueryTarget::pairs(PairFilter::kNegatives), d) != expect.negatives) {
      miss(i, "pair counts");
      continue;
    }
    const double P = static_cast<double>(d.pairs().positives());
    const double sel = static_cast<double>(expect.all);
    const double recall = expect.positives / P;
    const double precision = expect.all > 0 ? expect.positives / sel : 0.0;
    const double f1 =
        precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
    for (auto task : {Task::kBlocking, Task::kMatching}) {
      const auto q = quality_report(f, d, task);
      if (q.recall != recall || q.cost != sel / static_cast<double>(n) ||
          q.precision != precision || std::fabs(q.f1 - f1) > 1e-15) {
        miss(i, "quality report");
      }
    }
    for (const auto* side : {"left", "right"}) {
      const auto& table = std::string(side) == "left" ? d.left() : d.right();
      const auto attr = schema.attributes()[rng.below(3)];
      long nulls = 0;
      for (const auto& row : table.rows()) nulls += !row[schema.index_of(attr)];
      if (true_count(Formula::single(NullTest{attr}), QueryTarget::base(side), d) != nulls) {
        miss(i, "null count");
      }
    }
  }
  return rep;
}

}  // namespace oracle
