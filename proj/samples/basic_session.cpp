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

// Opens a budgeted session on a synthetic restaurants table and poses one
// query of each kind, printing the noisy answers and the running loss.

#include <cmath>
#include <iostream>

#include "erdp/cleaners/synthetic.hpp"
#include "erdp/engine/session.hpp"

using namespace erdp;

namespace {

void show(const char* what, const EngineResponse& r) {
  std::cout << what << ": ";
  if (r.status == ResponseStatus::kDenied) {
    std::cout << "denied";
  } else if (const auto* d = std::get_if<double>(&r.answer)) {
    std::cout << *d;
  } else if (const auto* b = std::get_if<bool>(&r.answer)) {
    std::cout << (*b ? "true" : "false");
  } else if (const auto* v = std::get_if<std::vector<std::size_t>>(&r.answer)) {
    for (auto i : *v) std::cout << i << ' ';
  }
  std::cout << "  (loss " << r.spent << ", checked " << r.estimate << ")\n";
}

}  // namespace

int main() {
  auto data = synthetic_binding({});
  Session s("demo", data, {5.0, 3e-7}, AccountantMode::moments(), 42);

  const SimilarityPredicate name{"name", {Transformation::kQgram, 2}, SimilarityFunction::kJaccard,
                                 0.5};
  show("positives with similar names",
       s.submit(QueryRequest::lc(Formula::single(name), QueryTarget::pairs(PairFilter::kPositives),
                                 10.0)));
  show("more than 30 similar-name pairs",
       s.submit(QueryRequest::lcc(Formula::single(name), QueryTarget::pairs(PairFilter::kAll), 10.0,
                                  30.0, Direction::kGreater, Translator::multi_poking(5))));

  std::vector<Formula> nulls;
  for (const auto& a : data->schema().attributes()) nulls.push_back(Formula::single(NullTest{a}));
  show("two attributes with fewest NULLs",
       s.submit(QueryRequest::lct(nulls, QueryTarget::base("left"), 100.0, 2,
                                  TopOrder::kSmallest)));

  // A tight tolerance is expensive enough to be refused.
  show("count at alpha=0.1", s.submit(QueryRequest::lc(
                                 Formula::single(name), QueryTarget::pairs(PairFilter::kAll), 0.1)));
  const auto st = s.status();
  std::cout << "answered " << st.answered << ", denied " << st.denied << ", spent " << st.spent
            << " of " << st.privacy.budget << '\n';
  return 0;
}
