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
#include <sstream>

#include "erdp/engine/wire.hpp"
#include "support/engine_fuzz.hpp"

using namespace erdp;
using nlohmann::json;

namespace {

std::shared_ptr<const DataBinding> data() {
  static auto d = synthetic_binding({});
  return d;
}

json lc_json() {
  return json::parse(R"({
    "type": "LC", "target": {"kind": "pairs", "filter": "positives"}, "alpha": 10,
    "formula": {"shape": "disjunction", "atoms": [{"attr": "name", "transform": "qgram",
                                        "q": 2, "sim": "jaccard", "theta": 0.5}]}})");
}

}  // namespace

TEST(Wire, RequestRoundTrip) {
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto req = oracle::random_request(*data(), rng);
    const auto j = wire::request_to_json(req);
    const auto back = wire::request_from_json(json::parse(j.dump()));
    EXPECT_EQ(wire::request_to_json(back), j);
    EXPECT_EQ(back.alpha, req.alpha);
    EXPECT_EQ(back.beta, req.beta);
  }
}

TEST(Wire, ParsesDocumentedShapes) {
  auto lc = wire::request_from_json(lc_json());
  EXPECT_EQ(lc.type, QueryType::kLC);
  EXPECT_EQ(lc.target, QueryTarget::pairs(PairFilter::kPositives));
  EXPECT_FALSE(lc.beta.has_value());

  auto j = lc_json();
  j["type"] = "LCC";
  j["c"] = 12;
  j["direction"] = "<";
  j["translator"] = "lcmmp";
  j["m"] = 4;
  auto lcc = wire::request_from_json(j);
  EXPECT_EQ(lcc.direction, Direction::kLess);
  EXPECT_EQ(lcc.translator.kind, Translator::Kind::kMultiPoking);
  EXPECT_EQ(lcc.translator.m, 4);

  auto t = json::parse(R"({"type": "LCT", "target": {"kind": "base", "dataset": "left"},
    "alpha": 5, "beta": 0.01, "k": 1, "order": "smallest",
    "formulas": [{"shape": "disjunction", "atoms": [{"isNull": "phone"}]},
                 {"shape": "disjunction", "atoms": [{"isNull": "type"}]}]})");
  auto lct = wire::request_from_json(t);
  EXPECT_EQ(lct.formulas.size(), 2u);
  EXPECT_EQ(lct.order, TopOrder::kSmallest);
  EXPECT_EQ(*lct.beta, 0.01);
}

TEST(Wire, RejectsMalformedRequests) {
  EXPECT_THROW(wire::request_from_json(json::array()), Error);
  for (const char* key : {"type", "target", "alpha", "formula"}) {
    auto j = lc_json();
    j.erase(key);
    EXPECT_THROW(wire::request_from_json(j), Error) << key;
  }
  auto j = lc_json();
  j["type"] = "LCX";
  EXPECT_THROW(wire::request_from_json(j), Error);
  j = lc_json();
  j["alpha"] = "ten";
  EXPECT_THROW(wire::request_from_json(j), Error);
  j = lc_json();
  j["type"] = "LCC";
  EXPECT_THROW(wire::request_from_json(j), Error);  // no c
  j["c"] = 1;
  j["translator"] = "magic";
  EXPECT_THROW(wire::request_from_json(j), Error);
  j = lc_json();
  j["target"] = {{"kind", "pairs"}, {"filter", "some"}};
  EXPECT_THROW(wire::request_from_json(j), Error);
  j["target"] = {{"kind", "base"}};
  EXPECT_THROW(wire::request_from_json(j), Error);
}

TEST(Wire, ResponsesCarryNoTrueCounts) {
  Session s("a", data(), {10.0, 3e-7}, AccountantMode::sequential(), 1);
  auto req = wire::request_from_json(lc_json());
  const auto resp = s.submit(req);
  const auto j = wire::response_to_json(resp, &req);
  EXPECT_EQ(j["status"], "answered");
  EXPECT_TRUE(j["answer"].is_number());
  const std::string text = j.dump() + wire::status_to_json(s.status()).dump();
  const long truth = true_count(req.formulas[0], req.target, *data());
  EXPECT_EQ(text.find("\"count\""), std::string::npos);
  EXPECT_NE(j["answer"].get<double>(), static_cast<double>(truth));
}

TEST(Wire, TopKResponseListsSelectedFormulas) {
  Session s("a", data(), {INFINITY, 3e-7}, AccountantMode::moments(), 1);
  auto req = QueryRequest::lct({Formula::single(NullTest{"phone"}),
                                Formula::single(NullTest{"name"})},
                               QueryTarget::base("left"), 5.0, 1);
  const auto j = wire::response_to_json(s.submit(req), &req);
  ASSERT_EQ(j["answer"].size(), 1u);
  ASSERT_EQ(j["selected"].size(), 1u);
  EXPECT_EQ(j["selected"][0], formula_to_json(req.formulas[j["answer"][0].get<std::size_t>()]));
  EXPECT_TRUE(j["estimate"].is_number());
}

TEST(Wire, StatusJson) {
  Session s("x", data(), {INFINITY, 3e-7}, AccountantMode::moments(), 1);
  const auto j = wire::status_to_json(s.status());
  EXPECT_TRUE(j["B"].is_null());
  EXPECT_TRUE(j["remaining"].is_null());
  EXPECT_EQ(j["state"], "open");
  EXPECT_EQ(j["counts"]["answered"], 0);
}

TEST(Wire, ModeNames) {
  for (const char* m : {"sequential", "moments", "fidelity"}) {
    EXPECT_EQ(wire::mode_to_string(wire::mode_from_string(m)), m);
  }
  EXPECT_EQ(wire::mode_to_string(wire::mode_from_string("moments-literal")), "fidelity");
  EXPECT_THROW(wire::mode_from_string("loose"), Error);
  EXPECT_TRUE(std::isinf(wire::number_or_inf("inf")));
  EXPECT_TRUE(std::isinf(wire::number_or_inf(nullptr)));
  EXPECT_EQ(wire::number_or_inf(0.5), 0.5);
  EXPECT_THROW(wire::number_or_inf("x"), Error);
}

TEST(Wire, TraceReplayIsByteIdentical) {
  Rng rng(19);
  TraceOpen open{"synthetic", {0.2, 3e-7}, "moments", 1234, std::exp(-15.0)};
  std::stringstream trace;
  write_trace_open(trace, open);
  Session live("live", data(), open.privacy, wire::mode_from_string(open.mode), open.seed,
               open.default_beta);
  std::ostringstream expected;
  expected.precision(17);
  expected << "index,type,status,answer,spent,estimate\n";
  for (int i = 0; i < 80; ++i) {
    const auto req = oracle::random_request(*data(), rng);
    write_trace_query(trace, req);
    const auto r = live.submit(req);
    expected << i << ',' << to_string(req.type) << ','
             << (r.status == ResponseStatus::kAnswered ? "answered" : "denied") << ',';
    if (const auto* d = std::get_if<double>(&r.answer)) expected << *d;
    if (const auto* b = std::get_if<bool>(&r.answer)) expected << (*b ? "true" : "false");
    if (const auto* v = std::get_if<std::vector<std::size_t>>(&r.answer)) {
      for (std::size_t k = 0; k < v->size(); ++k) expected << (k ? ";" : "") << (*v)[k];
    }
    expected << ',' << r.spent << ',' << r.estimate << '\n';
  }
  const auto parsed = read_trace(trace);
  EXPECT_EQ(parsed.queries.size(), 80u);
  const auto first = replay_trace(parsed, data());
  EXPECT_EQ(first, expected.str());
  EXPECT_EQ(replay_trace(parsed, data()), first);
}

TEST(Wire, TraceErrors) {
  std::istringstream none("");
  EXPECT_THROW(read_trace(none), Error);
  std::istringstream early(R"({"event":"query","request":{}})");
  EXPECT_THROW(read_trace(early), Error);
  std::istringstream junk("not json\n");
  EXPECT_THROW(read_trace(junk), Error);
}
