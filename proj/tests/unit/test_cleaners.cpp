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

#include <cmath>
#include <set>
#include <sstream>

#include "erdp/cleaners/sweep.hpp"

using namespace erdp;

namespace {

std::shared_ptr<const DataBinding> data() {
  static auto d = synthetic_binding({});
  return d;
}

// Positives are exact copies and negatives share nothing, so any similarity
// predicate on a non-null attribute separates the classes.
std::shared_ptr<const DataBinding> easy() {
  static auto d = [] {
    const Schema s({"name", "city"});
    const char* names[] = {"golden dragon", "blue olive", "pepper house", "maple grill",
                           "river cafe",    "sunset tavern", "lotus garden", "iron skillet",
                           "harbor bistro", "copper kettle"};
    const char* others[] = {"xqz wvy", "kkj ppo", "zzt yyu", "mmq vvw", "jjx wwq",
                            "qqp zzm", "vvk xxj", "wwy qqz", "ppz kkx", "yyx mmj"};
    std::vector<Record> l, r;
    std::vector<PairLabel> labels;
    for (int i = 0; i < 20; ++i) {
      const std::string name = names[i % 10];
      l.push_back({Value(name), Value("springfield")});
      if (i < 10) {
        r.push_back({Value(name), Value("springfield")});
      } else {
        r.push_back({Value(others[i % 10]), Value("qqqqqq")});
      }
      labels.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(i),
                        i < 10 ? Label::kMatch : Label::kNonMatch});
    }
    return std::make_shared<const DataBinding>("easy", Dataset(s, l), Dataset(s, r),
                                               std::move(labels), 1);
  }();
  return d;
}

}  // namespace

TEST(Cleaners, SamplerRanges) {
  Rng rng(1);
  std::array<int, 3> trust{};
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto m = sample_cleaner(StrategyKind::kBS1, rng, 5);
    EXPECT_TRUE(m.attributes == 2 || m.attributes == 3 || m.attributes == 5);
    EXPECT_GE(m.transforms.size(), 1u);
    EXPECT_LE(m.transforms.size(), 3u);
    EXPECT_GE(m.sims.size(), 2u);
    EXPECT_LE(m.sims.size(), 6u);
    EXPECT_GT(m.low, 0.0);
    EXPECT_LT(m.low, 0.5);
    EXPECT_GT(m.high, 0.5);
    EXPECT_LT(m.high, 1.0);
    EXPECT_GE(m.thresholds, 2);
    EXPECT_LE(m.thresholds, 6);
    std::set<int> dims(m.nesting.begin(), m.nesting.end());
    EXPECT_EQ(dims, (std::set<int>{0, 1, 2, 3}));
    EXPECT_GE(m.match_fraction, 0.2);
    EXPECT_LE(m.match_fraction, 0.5);
    EXPECT_GE(m.nonmatch_fraction, 0.1);
    EXPECT_LE(m.nonmatch_fraction, 0.2);
    EXPECT_TRUE(m.relax == 2 || m.relax == 3);
    ++trust[static_cast<std::size_t>(m.trust)];
  }
  for (int c : trust) EXPECT_NEAR(c / static_cast<double>(n), 1.0 / 3, 0.05);
}

TEST(Cleaners, SamplerCapsAttributesAtSchemaWidth) {
  Rng rng(2);
  for (int i = 0; i < 200; ++i) EXPECT_LE(sample_cleaner(StrategyKind::kMS1, rng, 2).attributes, 2);
  EXPECT_THROW(sample_cleaner(StrategyKind::kBS1, rng, 0), Error);
}

TEST(Cleaners, SamplerIsDeterministic) {
  Rng a(9), b(9);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(model_to_json(sample_cleaner(StrategyKind::kBS2, a, 4)),
              model_to_json(sample_cleaner(StrategyKind::kBS2, b, 4)));
  }
}

TEST(Cleaners, ThresholdListOrder) {
  CleanerModel m;
  m.low = 0.2;
  m.high = 0.8;
  m.thresholds = 4;
  m.ascending = true;
  const auto up = m.threshold_list();
  ASSERT_EQ(up.size(), 4u);
  EXPECT_DOUBLE_EQ(up.front(), 0.2);
  EXPECT_DOUBLE_EQ(up.back(), 0.8);
  EXPECT_NEAR(up[1], 0.4, 1e-12);
  m.ascending = false;
  EXPECT_DOUBLE_EQ(m.threshold_list().front(), 0.8);
}

TEST(Cleaners, CandidatesAreUniqueAndFollowNesting) {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto m = sample_cleaner(StrategyKind::kBS1, rng, 5);
    const std::vector<std::string> attrs = {"name", "addr", "city"};
    const auto preds = candidate_predicates(m, attrs);
    EXPECT_EQ(preds.size(), attrs.size() * m.transforms.size() * m.sims.size() *
                                static_cast<std::size_t>(m.thresholds));
    std::set<std::string> seen;
    for (const auto& p : preds) seen.insert(to_string(Formula::single(p)));
    EXPECT_EQ(seen.size(), preds.size());
  }
  CleanerModel m;
  m.transforms = {{Transformation::kQgram, 2}};
  m.sims = {SimilarityFunction::kJaccard, SimilarityFunction::kCosine};
  m.thresholds = 2;
  m.nesting = {2, 0, 1, 3};  // similarity outermost, threshold innermost
  const auto preds = candidate_predicates(m, {"a", "b"});
  ASSERT_EQ(preds.size(), 8u);
  EXPECT_EQ(preds[0].sim, SimilarityFunction::kJaccard);
  EXPECT_EQ(preds[3].sim, SimilarityFunction::kJaccard);
  EXPECT_EQ(preds[4].sim, SimilarityFunction::kCosine);
  EXPECT_EQ(preds[0].attribute, "a");
  EXPECT_EQ(preds[2].attribute, "b");
  EXPECT_NE(preds[0].threshold, preds[1].threshold);
}

TEST(Cleaners, StrategyNames) {
  for (auto k : {StrategyKind::kBS1, StrategyKind::kBS2, StrategyKind::kMS1, StrategyKind::kMS2}) {
    EXPECT_EQ(strategy_from_string(to_string(k)), k);
  }
  EXPECT_TRUE(is_blocking(StrategyKind::kBS2));
  EXPECT_FALSE(is_blocking(StrategyKind::kMS1));
  EXPECT_THROW(strategy_from_string("BS9"), Error);
}

TEST(Cleaners, BlockingFindsSeparablePositives) {
  Rng rng(5);
  for (auto kind : {StrategyKind::kBS1, StrategyKind::kBS2}) {
    for (int i = 0; i < 10; ++i) {
      const auto m = sample_cleaner(kind, rng, 2);
      Session s("easy", easy(), {INFINITY, 3e-7}, AccountantMode::moments(), 100 + i);
      StrategyOptions o;
      o.alpha = 0.2;
      o.cutoff = 11;
      const auto run = run_strategy(m, s, o);
      ASSERT_TRUE(run.output.has_value()) << to_string(kind) << " " << model_to_json(m);
      EXPECT_EQ(run.quality.recall, 1.0) << to_string(kind) << " " << model_to_json(m);
      EXPECT_EQ(run.output->shape(), Shape::kDisjunction);
      EXPECT_FALSE(run.partial);
    }
  }
}

TEST(Cleaners, MatchingOutputIsConjunction) {
  Rng rng(6);
  for (auto kind : {StrategyKind::kMS1, StrategyKind::kMS2}) {
    for (int i = 0; i < 5; ++i) {
      const auto m = sample_cleaner(kind, rng, 2);
      Session s("easy", easy(), {INFINITY, 3e-7}, AccountantMode::moments(), 200 + i);
      StrategyOptions o;
      o.alpha = 0.2;
      const auto run = run_strategy(m, s, o);
      if (run.output) EXPECT_EQ(run.output->shape(), Shape::kConjunction);
      EXPECT_EQ(run.quality.task, Task::kMatching);
    }
  }
}

TEST(Cleaners, TinyBudgetGivesEmptyOutput) {
  Rng rng(7);
  for (auto kind : {StrategyKind::kBS1, StrategyKind::kBS2, StrategyKind::kMS1,
                    StrategyKind::kMS2}) {
    const auto m = sample_cleaner(kind, rng, 5);
    Session s("tiny", data(), {1e-6, 3e-7}, AccountantMode::moments(), 1);
    StrategyOptions o;
    o.alpha = 8;
    const auto run = run_strategy(m, s, o);
    EXPECT_FALSE(run.output.has_value());
    EXPECT_TRUE(run.partial);
    EXPECT_EQ(run.answered, 0u);
    EXPECT_GE(run.denied, 1u);
    EXPECT_EQ(run.quality.recall, 0.0);
    EXPECT_EQ(run.spent, 0.0);
  }
}

TEST(Cleaners, RunsRespectBudget) {
  Rng rng(8);
  for (int i = 0; i < 40; ++i) {
    const auto kind = static_cast<StrategyKind>(i % 4);
    const auto m = sample_cleaner(kind, rng, 5);
    const double b = 0.05 * (1 + i % 5);
    Session s("b", data(), {b, 3e-7}, AccountantMode::moments(), static_cast<std::uint64_t>(i));
    StrategyOptions o;
    o.alpha = 8;
    o.cutoff = 55;
    const auto run = run_strategy(m, s, o);
    EXPECT_LE(run.spent, b * (1 + 1e-9));
    EXPECT_EQ(run.asked, run.answered + run.denied);
    EXPECT_EQ(run.partial, run.denied > 0);
    EXPECT_GE(run.quality.recall, 0.0);
    EXPECT_LE(run.quality.recall, 1.0);
  }
}

TEST(Cleaners, RejectsBadOptions) {
  Session s("a", data(), {1.0, 3e-7}, AccountantMode::moments(), 1);
  StrategyOptions o;
  o.alpha = 0;
  EXPECT_THROW(run_strategy(CleanerModel{}, s, o), Error);
}

TEST(Sweep, Quantiles) {
  EXPECT_DOUBLE_EQ(quantile({3, 1, 2}, 0.5), 2);
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4, 5}, 0.25), 2);
  EXPECT_DOUBLE_EQ(quantile({7}, 0.75), 7);
  EXPECT_THROW(quantile({}, 0.5), Error);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  SweepConfig c;
  c.t_grid = {0.04, 0.16};
  c.budgets = {0.1, INFINITY};
  c.runs = 4;
  c.mode = "fidelity";
  c.threads = 1;
  const auto a = run_sweep(c, data());
  c.threads = 4;
  const auto b = run_sweep(c, data());
  std::ostringstream x, y;
  write_sweep_csv(x, a);
  write_sweep_csv(y, b);
  EXPECT_EQ(x.str(), y.str());
  EXPECT_EQ(sweep_summary_json(a), sweep_summary_json(b));
  ASSERT_EQ(a.cells.size(), 4u);
  EXPECT_EQ(a.rows.size(), 16u);
  EXPECT_EQ(x.str().substr(0, x.str().find('\n')),
            "strategy,translator,t,alpha,B,run,recall,cost,precision,f1,asked,answered,denied,"
            "spent,partial,predicates");
  EXPECT_NE(x.str().find(",inf,"), std::string::npos);
}

TEST(Sweep, CommonModelsAcrossCells) {
  SweepConfig c;
  c.t_grid = {0.02, 0.32};
  c.runs = 3;
  c.threads = 2;
  const auto r = run_sweep(c, data());
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(model_to_json(r.rows[static_cast<std::size_t>(k)].result.model),
              model_to_json(r.rows[static_cast<std::size_t>(3 + k)].result.model));
  }
}

TEST(Sweep, ConfigFromJson) {
  auto j = nlohmann::json::parse(R"({"strategy": "BS2", "t": [0.01, 0.02], "B": [0.1, "inf"],
    "runs": 3, "seed": 5, "mode": "sequential", "translator": "lcmmp", "m": 4,
    "synthetic": {"kind": "citations", "pairs": 40, "positives": 20}})");
  const auto c = sweep_config_from_json(j);
  EXPECT_EQ(c.strategy, StrategyKind::kBS2);
  EXPECT_EQ(c.budgets.size(), 2u);
  EXPECT_TRUE(std::isinf(c.budgets[1]));
  EXPECT_EQ(c.translator.kind, Translator::Kind::kMultiPoking);
  EXPECT_EQ(c.translator.m, 4);
  EXPECT_EQ(c.synthetic.kind, SyntheticKind::kCitations);
  EXPECT_EQ(c.synthetic.pairs, 40u);
  EXPECT_THROW(sweep_config_from_json(nlohmann::json::parse(R"({"runs": 0})")), Error);
  EXPECT_THROW(sweep_config_from_json(nlohmann::json::parse(R"({"t": [-1]})")), Error);
  EXPECT_THROW(sweep_config_from_json(nlohmann::json::parse(R"({"mode": "x"})")), Error);
  EXPECT_THROW(sweep_config_from_json(nlohmann::json::parse(R"({"t": "x"})")), Error);
}
