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

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "erdp/common.hpp"
#include "erdp/engine/session.hpp"
#include "json.hpp"

namespace erdp {

// JSON encoding of engine types. Responses and status reports carry only
// mechanism outputs and public accounting: never true counts, noise values
// or record contents.
namespace wire {

using nlohmann::json;

inline double number_or_inf(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  if (j.is_string() && (j == "inf" || j == "infinity")) {
    return std::numeric_limits<double>::infinity();
  }
  if (!j.is_number()) invalid_argument("expected a number");
  return j.get<double>();
}

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline QueryTarget target_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    invalid_argument("target must be an object with a \"kind\"");
  }
  const auto kind = j["kind"].get<std::string>();
  if (kind == "pairs") {
    const std::string filter = j.value("filter", std::string("all"));
    if (filter == "all") return QueryTarget::pairs(PairFilter::kAll);
    if (filter == "positives") return QueryTarget::pairs(PairFilter::kPositives);
    if (filter == "negatives") return QueryTarget::pairs(PairFilter::kNegatives);
    invalid_argument("unknown pair filter: " + filter);
  }
  if (kind == "base") {
    if (!j.contains("dataset") || !j["dataset"].is_string()) {
      invalid_argument("base target needs a \"dataset\"");
    }
    return QueryTarget::base(j["dataset"].get<std::string>());
  }
  invalid_argument("unknown target kind: " + kind);
}

inline json target_to_json(const QueryTarget& t) {
  if (t.kind == QueryTarget::Kind::kBaseTable) return {{"kind", "base"}, {"dataset", t.dataset}};
  return {{"kind", "pairs"}, {"filter", to_string(t.filter)}};
}

inline QueryRequest request_from_json(const json& j) {
  if (!j.is_object()) invalid_argument("query must be a JSON object");
  auto need = [&](const char* key) -> const json& {
    if (!j.contains(key)) invalid_argument(std::string("query is missing \"") + key + "\"");
    return j[key];
  };
  QueryRequest r;
  const json& type = need("type");
  if (!type.is_string()) invalid_argument("query type must be a string");
  if (type == "LC") r.type = QueryType::kLC;
  else if (type == "LCC") r.type = QueryType::kLCC;
  else if (type == "LCT") r.type = QueryType::kLCT;
  else invalid_argument("unknown query type: " + type.get<std::string>());

  r.target = target_from_json(need("target"));
  const json& alpha = need("alpha");
  if (!alpha.is_number()) invalid_argument("alpha must be a number");
  r.alpha = alpha.get<double>();
  if (j.contains("beta") && !j["beta"].is_null()) {
    if (!j["beta"].is_number()) invalid_argument("beta must be a number");
    r.beta = j["beta"].get<double>();
  }

  if (r.type == QueryType::kLCT) {
    const json& fs = need("formulas");
    if (!fs.is_array() || fs.empty()) invalid_argument("LCT needs a non-empty formulas array");
    for (const auto& f : fs) r.formulas.push_back(formula_from_json(f));
    const json& k = need("k");
    if (!k.is_number_integer()) invalid_argument("k must be an integer");
    r.k = k.get<int>();
    const std::string order = j.value("order", std::string("largest"));
    if (order == "largest") r.order = TopOrder::kLargest;
    else if (order == "smallest") r.order = TopOrder::kSmallest;
    else invalid_argument("order must be largest or smallest");
  } else {
    r.formulas.push_back(formula_from_json(need("formula")));
  }

  if (r.type == QueryType::kLCC) {
    const json& c = need("c");
    if (!c.is_number()) invalid_argument("c must be a number");
    r.threshold = c.get<double>();
    if (j.contains("direction")) {
      if (!j["direction"].is_string()) invalid_argument("direction must be a string");
      r.direction = direction_from_string(j["direction"].get<std::string>());
    }
  }

  if (j.contains("translator") && !j["translator"].is_null()) {
    if (!j["translator"].is_string()) invalid_argument("translator must be a string");
    const auto t = j["translator"].get<std::string>();
    if (t == "default") {
      r.translator = {};
    } else if (t == "lcmp" || t == "LCMP") {
      r.translator = Translator::poking(j.value("f", 0.05));
    } else if (t == "lcmmp" || t == "LCMMP") {
      if (j.contains("m") && !j["m"].is_number_integer()) invalid_argument("m must be an integer");
      r.translator = Translator::multi_poking(j.value("m", 5));
    } else {
      invalid_argument("unknown translator: " + t);
    }
  }
  return r;
}

inline json request_to_json(const QueryRequest& r) {
  json j;
  j["type"] = to_string(r.type);
  j["target"] = target_to_json(r.target);
  j["alpha"] = r.alpha;
  if (r.beta) j["beta"] = *r.beta;
  if (r.type == QueryType::kLCT) {
    auto fs = json::array();
    for (const auto& f : r.formulas) fs.push_back(formula_to_json(f));
    j["formulas"] = std::move(fs);
    j["k"] = r.k;
    j["order"] = r.order == TopOrder::kLargest ? "largest" : "smallest";
  } else if (!r.formulas.empty()) {
    j["formula"] = formula_to_json(r.formulas.front());
  }
  if (r.type == QueryType::kLCC) {
    j["c"] = r.threshold;
    j["direction"] = to_string(r.direction);
    switch (r.translator.kind) {
      case Translator::Kind::kDefault: break;
      case Translator::Kind::kPoking:
        j["translator"] = "lcmp";
        j["f"] = r.translator.f;
        break;
      case Translator::Kind::kMultiPoking:
        j["translator"] = "lcmmp";
        j["m"] = r.translator.m;
        break;
    }
  }
  return j;
}

inline json response_to_json(const EngineResponse& r, const QueryRequest* req = nullptr) {
  json j;
  j["status"] = r.status == ResponseStatus::kAnswered ? "answered" : "denied";
  j["spent"] = r.spent;
  j["estimate"] = finite_or_null(r.estimate);
  if (const auto* d = std::get_if<double>(&r.answer)) {
    j["answer"] = *d;
  } else if (const auto* b = std::get_if<bool>(&r.answer)) {
    j["answer"] = *b;
  } else if (const auto* v = std::get_if<std::vector<std::size_t>>(&r.answer)) {
    j["answer"] = *v;
    if (req) {
      auto fs = json::array();
      for (auto i : *v) fs.push_back(formula_to_json(req->formulas.at(i)));
      j["selected"] = std::move(fs);
    }
  } else {
    j["answer"] = nullptr;
  }
  return j;
}

inline json status_to_json(const SessionStatus& s) {
  auto log = json::array();
  for (const auto& r : s.log) log.push_back(record_to_json(r));
  return {
      {"id", s.id},
      {"B", finite_or_null(s.privacy.budget)},
      {"delta", s.privacy.delta},
      {"spent", s.spent},
      {"remaining", finite_or_null(s.remaining)},
      {"counts", {{"answered", s.answered}, {"denied", s.denied}}},
      {"state", to_string(s.state)},
      {"log", std::move(log)},
  };
}

inline AccountantMode mode_from_string(const std::string& s) {
  if (s == "sequential") return AccountantMode::sequential();
  if (s == "moments") return AccountantMode::moments();
  if (s == "moments-literal" || s == "fidelity") return AccountantMode::fidelity();
  invalid_argument("unknown accountant mode: " + s);
}

inline std::string mode_to_string(const AccountantMode& m) {
  if (m.composition == Composition::kSequential) return "sequential";
  return m.tail == TailRule::kRdpConversion ? "moments" : "fidelity";
}

}  // namespace wire

// A session trace is JSON lines: one "open" event followed by one "query"
// event per submitted request. Replaying it against the same data reproduces
// every answer and spend.
struct TraceOpen {
  std::string dataset;
  PrivacyParams privacy;
  std::string mode = "moments";
  std::uint64_t seed = 0;
  double default_beta = kDefaultBeta;
};

struct Trace {
  TraceOpen open;
  std::vector<QueryRequest> queries;
};

inline void write_trace_open(std::ostream& out, const TraceOpen& o) {
  nlohmann::json j = {{"event", "open"},
                      {"dataset", o.dataset},
                      {"B", wire::finite_or_null(o.privacy.budget)},
                      {"delta", o.privacy.delta},
                      {"mode", o.mode},
                      {"seed", o.seed},
                      {"beta", o.default_beta}};
  out << j.dump() << '\n';
}

inline void write_trace_query(std::ostream& out, const QueryRequest& r) {
  nlohmann::json j = {{"event", "query"}, {"request", wire::request_to_json(r)}};
  out << j.dump() << '\n';
}

inline Trace read_trace(std::istream& in) {
  Trace t;
  bool opened = false;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      invalid_argument("trace line " + std::to_string(n) + " is not JSON: " + e.what());
    }
    const std::string ev = j.value("event", std::string());
    if (ev == "open") {
      t.open.dataset = j.value("dataset", std::string());
      t.open.privacy.budget = wire::number_or_inf(j.value("B", nlohmann::json(nullptr)));
      t.open.privacy.delta = j.value("delta", 3e-7);
      t.open.mode = j.value("mode", std::string("moments"));
      t.open.seed = j.value("seed", std::uint64_t{0});
      t.open.default_beta = j.value("beta", kDefaultBeta);
      opened = true;
    } else if (ev == "query") {
      if (!opened) invalid_argument("trace query before open event");
      t.queries.push_back(wire::request_from_json(j.at("request")));
    } else {
      invalid_argument("unknown trace event on line " + std::to_string(n));
    }
  }
  if (!opened) invalid_argument("trace has no open event");
  return t;
}

// Result table of a replay: fixed column order
// index,type,status,answer,spent,estimate
inline std::string replay_trace(const Trace& t, std::shared_ptr<const DataBinding> data) {
  Session s("replay", std::move(data), t.open.privacy, wire::mode_from_string(t.open.mode),
            t.open.seed, t.open.default_beta);
  std::ostringstream out;
  out.precision(17);
  out << "index,type,status,answer,spent,estimate\n";
  for (std::size_t i = 0; i < t.queries.size(); ++i) {
    const auto resp = s.submit(t.queries[i]);
    out << i << ',' << to_string(t.queries[i].type) << ','
        << (resp.status == ResponseStatus::kAnswered ? "answered" : "denied") << ',';
    if (const auto* d = std::get_if<double>(&resp.answer)) out << *d;
    else if (const auto* b = std::get_if<bool>(&resp.answer)) out << (*b ? "true" : "false");
    else if (const auto* v = std::get_if<std::vector<std::size_t>>(&resp.answer)) {
      for (std::size_t k = 0; k < v->size(); ++k) out << (k ? ";" : "") << (*v)[k];
    }
    out << ',' << resp.spent << ',' << resp.estimate << '\n';
  }
  return out.str();
}

}  // namespace erdp
