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

#include <gtest/gtest.h>

#include "erdp/core/formula.hpp"

using namespace erdp;

namespace {

const Schema kSchema({"a", "b", "c"});

SimilarityPredicate eq(const std::string& attr) {
  return {attr, {Transformation::kLowercase, 2}, SimilarityFunction::kLevenshtein, 0.9};
}

// Left record of all "x"; the right record agrees with it exactly on the
// attributes whose bit is set, so atom eq(attr_i) holds iff bit i is set.
std::pair<Record, Record> pair_for(unsigned bits) {
  Record l, r;
  for (unsigned i = 0; i < 3; ++i) {
    l.emplace_back("xxxx");
    r.emplace_back((bits >> i) & 1u ? "xxxx" : "yyyy");
  }
  return {l, r};
}

}  // namespace

TEST(Predicate, StrictThresholdAndNullRule) {
  const Record l{Value("abc"), Value("q"), std::nullopt};
  const Record r{Value("abd"), Value("q"), Value("z")};
  SimilarityPredicate p{"a", {Transformation::kLowercase, 2}, SimilarityFunction::kLevenshtein, 0.7};
  EXPECT_FALSE(evaluate_predicate(p, kSchema, l, r));  // 0.667 is not > 0.7
  p.threshold = 0.6;
  EXPECT_TRUE(evaluate_predicate(p, kSchema, l, r));
  SimilarityPredicate same{"b", {Transformation::kLowercase, 2}, SimilarityFunction::kJaccard, 0.9};
  EXPECT_TRUE(evaluate_predicate(same, kSchema, l, r));
  same.threshold = 1.0;
  EXPECT_FALSE(evaluate_predicate(same, kSchema, l, r));  // 1 is not > 1
  SimilarityPredicate on_null{"c", {Transformation::kLowercase, 2}, SimilarityFunction::kAbsDiffLen, 0.0};
  EXPECT_FALSE(evaluate_predicate(on_null, kSchema, l, r));
  EXPECT_FALSE(evaluate_predicate(on_null, kSchema, r, l));
  SimilarityPredicate unknown{"zzz", {}, SimilarityFunction::kJaccard, 0.5};
  EXPECT_THROW(evaluate_predicate(unknown, kSchema, l, r), Error);
}

TEST(Formula, ShapesFollowTruthTables) {
  const auto dis = Formula::disjunction({eq("a"), eq("b"), eq("c")});
  const auto con = Formula::conjunction({eq("a"), eq("b"), eq("c")});
  const auto dnf = Formula::dnf({{eq("a"), eq("b")}, {eq("c")}});
  for (unsigned bits = 0; bits < 8; ++bits) {
    const auto [l, r] = pair_for(bits);
    const bool p1 = bits & 1u, p2 = bits & 2u, p3 = bits & 4u;
    EXPECT_EQ(evaluate_formula(dis, kSchema, l, r), p1 || p2 || p3) << bits;
    EXPECT_EQ(evaluate_formula(con, kSchema, l, r), p1 && p2 && p3) << bits;
    EXPECT_EQ(evaluate_formula(dnf, kSchema, l, r), (p1 && p2) || p3) << bits;
  }
  // Only p3 holds.
  const auto [l, r] = pair_for(4u);
  EXPECT_TRUE(evaluate_formula(dnf, kSchema, l, r));
}

TEST(Formula, KindsAreChecked) {
  EXPECT_THROW(Formula::disjunction({}), Error);
  EXPECT_THROW(Formula::dnf({{}}), Error);
  EXPECT_THROW(Formula::disjunction({eq("a"), NullTest{"b"}}), Error);
  const auto nulls = Formula::single(NullTest{"c"});
  EXPECT_EQ(nulls.kind(), FormulaKind::kRecord);
  const Record rec{Value("x"), Value("y"), std::nullopt};
  EXPECT_TRUE(evaluate_formula(nulls, kSchema, rec));
  EXPECT_FALSE(evaluate_formula(Formula::single(NullTest{"a"}), kSchema, rec));
  EXPECT_THROW(evaluate_formula(nulls, kSchema, rec, rec), Error);
  EXPECT_THROW(evaluate_formula(Formula::single(eq("a")), kSchema, rec), Error);
  SimilarityPredicate bad = eq("a");
  bad.threshold = 1.5;
  EXPECT_THROW(Formula::single(bad), Error);
  EXPECT_THROW(Formula::single(eq("missing")).check_schema(kSchema), Error);
}

TEST(FormulaJson, RoundTripsEveryShape) {
  SimilarityPredicate tri{"b", {Transformation::kQgram, 3}, SimilarityFunction::kCosine, 0.35};
  SimilarityPredicate words{"c", {Transformation::kSpaceTokenize, 2}, SimilarityFunction::kOverlap, 0.5};
  const Formula fs[] = {
      Formula::disjunction({eq("a"), tri}),
      Formula::conjunction({tri, words}),
      Formula::dnf({{eq("a"), words}, {tri}}),
      Formula::single(NullTest{"a"}),
  };
  for (const auto& f : fs) {
    const auto j = formula_to_json(f);
    EXPECT_EQ(formula_from_json(nlohmann::json::parse(j.dump())), f) << j.dump();
  }
}

TEST(FormulaJson, ParsesTheDocumentedGrammar) {
  const auto j = nlohmann::json::parse(R"({
    "shape": "disjunction",
    "atoms": [{"attr": "a", "transform": "qgram", "q": 2, "sim": "cosine", "theta": 0.7},
              {"attr": "b", "transform": "spaceTokenize", "sim": "jaccard", "theta": 0.5}]})");
  const auto f = formula_from_json(j);
  ASSERT_EQ(f.atoms().size(), 2u);
  const auto& p = std::get<SimilarityPredicate>(f.atoms()[0]);
  EXPECT_EQ(p.transform, (TransformSpec{Transformation::kQgram, 2}));
  EXPECT_EQ(p.sim, SimilarityFunction::kCosine);
  EXPECT_EQ(to_string(f), "cosine(qgram2(a))>0.7 OR jaccard(spaceTokenize(b))>0.5");

  for (const char* bad : {
           R"({"atoms": []})",
           R"({"shape": "disjunction", "atoms": []})",
           R"({"shape": "ring", "atoms": []})",
           R"({"shape": "conjunction", "atoms": [{"attr": "a", "sim": "cosine", "theta": 0.5}]})",
           R"({"shape": "conjunction", "atoms": [{"attr": "a", "transform": "qgram", "sim": "x", "theta": 0.5}]})",
           R"({"shape": "conjunction", "atoms": [{"attr": "a", "transform": "qgram", "sim": "cosine", "theta": 2}]})",
           R"({"shape": "conjunction", "atoms": [{"attr": "a", "transform": "qgram", "sim": "cosine", "theta": "0.5"}]})",
           R"({"shape": "dnf", "clauses": [[]]})",
       }) {
    EXPECT_THROW(formula_from_json(nlohmann::json::parse(bad)), Error) << bad;
  }
}
