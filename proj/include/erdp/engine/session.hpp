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
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "erdp/accountant/accountant.hpp"
#include "erdp/common.hpp"
#include "erdp/core/query.hpp"
#include "erdp/mechanisms/mechanisms.hpp"
#include "erdp/random.hpp"

namespace erdp {

enum class QueryType { kLC, kLCC, kLCT };

inline const char* to_string(QueryType t) {
  switch (t) {
    case QueryType::kLC: return "LC";
    case QueryType::kLCC: return "LCC";
    case QueryType::kLCT: return "LCT";
  }
  return "?";
}

struct Translator {
  enum class Kind { kDefault, kPoking, kMultiPoking };
  Kind kind = Kind::kDefault;
  double f = 0.05;  // poking fraction
  int m = 5;        // poking steps

  static Translator poking(double f) { return {Kind::kPoking, f, 5}; }
  static Translator multi_poking(int m) { return {Kind::kMultiPoking, 0.05, m}; }
};

struct QueryRequest {
  QueryType type = QueryType::kLC;
  QueryTarget target;
  std::vector<Formula> formulas;  // one for LC/LCC, L for LCT
  double alpha = 1.0;
  std::optional<double> beta;  // session default when absent
  double threshold = 0.0;      // LCC
  Direction direction = Direction::kGreater;
  int k = 1;  // LCT
  TopOrder order = TopOrder::kLargest;
  Translator translator;

  static QueryRequest lc(Formula f, QueryTarget t, double alpha) {
    QueryRequest r;
    r.type = QueryType::kLC;
    r.formulas = {std::move(f)};
    r.target = std::move(t);
    r.alpha = alpha;
    return r;
  }
  static QueryRequest lcc(Formula f, QueryTarget t, double alpha, double c,
                          Direction d = Direction::kGreater, Translator tr = {}) {
    QueryRequest r = lc(std::move(f), std::move(t), alpha);
    r.type = QueryType::kLCC;
    r.threshold = c;
    r.direction = d;
    r.translator = tr;
    return r;
  }
  static QueryRequest lct(std::vector<Formula> fs, QueryTarget t, double alpha, int k,
                          TopOrder o = TopOrder::kLargest) {
    QueryRequest r;
    r.type = QueryType::kLCT;
    r.formulas = std::move(fs);
    r.target = std::move(t);
    r.alpha = alpha;
    r.k = k;
    r.order = o;
    return r;
  }
};

// The mechanism a request of this shape translates to, before it runs.
// `L` is the number of formulas (LCT only).
inline MechanismRecord translation_record(QueryType type, const Tolerance& tol, int L, int k,
                                          const Translator& tr, int sensitivity = 1) {
  if (type != QueryType::kLCC && tr.kind != Translator::Kind::kDefault) {
    invalid_argument("only LCC queries accept a data-dependent translator");
  }
  switch (type) {
    case QueryType::kLC: return lm_record(tol, sensitivity);
    case QueryType::kLCT: return ltm_record(tol, L, k, sensitivity);
    case QueryType::kLCC:
      switch (tr.kind) {
        case Translator::Kind::kDefault: return lcm_record(tol, sensitivity);
        case Translator::Kind::kPoking: return lcmp_record(tol, tr.f, sensitivity);
        case Translator::Kind::kMultiPoking: return lcmmp_record(tol, tr.m, sensitivity);
      }
  }
  invalid_argument("unknown query type");
}

inline QueryType query_type_from_string(const std::string& s) {
  if (s == "LC") return QueryType::kLC;
  if (s == "LCC") return QueryType::kLCC;
  if (s == "LCT") return QueryType::kLCT;
  invalid_argument("unknown query type: " + s);
}

using Answer = std::variant<std::monostate, double, bool, std::vector<std::size_t>>;

enum class ResponseStatus { kAnswered, kDenied };

struct EngineResponse {
  ResponseStatus status = ResponseStatus::kDenied;
  Answer answer;
  double spent = 0.0;     // analyzed loss after this request
  double estimate = 0.0;  // worst-case loss that was checked against B
};

enum class SessionState { kOpen, kExhausted, kClosed };

inline const char* to_string(SessionState s) {
  switch (s) {
    case SessionState::kOpen: return "open";
    case SessionState::kExhausted: return "exhausted";
    case SessionState::kClosed: return "closed";
  }
  return "?";
}

struct SessionStatus {
  std::string id;
  PrivacyParams privacy;
  double spent = 0.0;
  double remaining = 0.0;
  std::size_t answered = 0;
  std::size_t denied = 0;
  SessionState state = SessionState::kOpen;
  std::vector<MechanismRecord> log;
};

// One budget-gated interaction: every request is translated to a mechanism,
// its worst-case loss is composed with the ledger, and it runs only if that
// estimate fits the budget. Requests on one session are serialised.
class Session {
 public:
  Session(std::string id, std::shared_ptr<const DataBinding> data, PrivacyParams privacy,
          AccountantMode mode, std::uint64_t seed, double default_beta = kDefaultBeta)
      : id_(std::move(id)),
        data_(std::move(data)),
        privacy_(privacy),
        mode_(mode),
        ledger_(mode),
        rng_(seed),
        seed_(seed),
        default_beta_(default_beta) {
    if (!data_) invalid_argument("session needs bound data");
    privacy_.validate();
    mode_.validate();
    Tolerance{1.0, default_beta_}.validate();
  }

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& id() const { return id_; }
  const DataBinding& data() const { return *data_; }
  const PrivacyParams& privacy() const { return privacy_; }
  const AccountantMode& mode() const { return mode_; }
  std::uint64_t seed() const { return seed_; }
  double default_beta() const { return default_beta_; }

  EngineResponse submit(const QueryRequest& req) {
    std::lock_guard<std::mutex> lock(mu_);
    if (state_ == SessionState::kClosed) failed_precondition("session " + id_ + " is closed");
    Prepared p = prepare(req);
    EngineResponse resp;
    resp.estimate = estimate_loss(ledger_, p.preview, privacy_.delta, mode_);
    if (!within_budget(resp.estimate, privacy_.budget)) {
      ++denied_;
      resp.status = ResponseStatus::kDenied;
      resp.spent = spent_;
      return resp;
    }
    MechanismRecord executed = execute(req, p, resp.answer);
    ledger_.append(std::move(executed));
    spent_ = analyze_loss(ledger_, privacy_.delta, mode_);
    ++answered_;
    if (!(spent_ < privacy_.budget)) state_ = SessionState::kExhausted;
    resp.status = ResponseStatus::kAnswered;
    resp.spent = spent_;
    return resp;
  }

  // Worst-case loss if `req` were answered now. Touches no state.
  double estimate(const QueryRequest& req) const {
    std::lock_guard<std::mutex> lock(mu_);
    Prepared p = prepare(req);
    return estimate_loss(ledger_, p.preview, privacy_.delta, mode_);
  }

  SessionStatus status() const {
    std::lock_guard<std::mutex> lock(mu_);
    SessionStatus s;
    s.id = id_;
    s.privacy = privacy_;
    s.spent = spent_;
    s.remaining = privacy_.budget - spent_;
    s.answered = answered_;
    s.denied = denied_;
    s.state = state_;
    s.log = ledger_.records();
    return s;
  }

  double spent() const {
    std::lock_guard<std::mutex> lock(mu_);
    return spent_;
  }

  void close() {
    std::lock_guard<std::mutex> lock(mu_);
    state_ = SessionState::kClosed;
  }

 private:
  struct Prepared {
    Tolerance tol;
    int sensitivity = 1;
    std::vector<double> counts;
    MechanismRecord preview;
  };

  Prepared prepare(const QueryRequest& req) const {
    Prepared p;
    p.tol = {req.alpha, req.beta.value_or(default_beta_)};
    p.tol.validate();
    p.sensitivity = data_->sensitivity(req.target);
    if (req.type != QueryType::kLCT && req.formulas.size() != 1) {
      invalid_argument(std::string(to_string(req.type)) + " takes exactly one formula");
    }
    if (req.type != QueryType::kLCC && req.translator.kind != Translator::Kind::kDefault) {
      invalid_argument("only LCC queries accept a data-dependent translator");
    }
    if (req.formulas.empty()) invalid_argument("request has no formula");
    for (const auto& f : req.formulas) {
      p.counts.push_back(static_cast<double>(true_count(f, req.target, *data_)));
    }
    if (req.type == QueryType::kLCC) {
      comparison_margin(0.0, req.threshold, req.direction);  // validates c
    }
    p.preview = translation_record(req.type, p.tol, static_cast<int>(req.formulas.size()),
                                   req.k, req.translator, p.sensitivity);
    return p;
  }

  MechanismRecord execute(const QueryRequest& req, const Prepared& p, Answer& answer) {
    switch (req.type) {
      case QueryType::kLC: {
        auto a = run_lm(p.counts[0], p.tol, p.sensitivity, rng_);
        answer = a.value;
        return a.record;
      }
      case QueryType::kLCC: {
        const double margin = comparison_margin(p.counts[0], req.threshold, req.direction);
        BoolAnswer a;
        switch (req.translator.kind) {
          case Translator::Kind::kDefault:
            a = run_lcm(margin, p.tol, p.sensitivity, rng_);
            break;
          case Translator::Kind::kPoking:
            a = run_lcmp(margin, p.tol, req.translator.f, p.sensitivity, rng_);
            break;
          case Translator::Kind::kMultiPoking:
            a = run_lcmmp(margin, p.tol, req.translator.m, p.sensitivity, rng_);
            break;
        }
        answer = a.value;
        return a.record;
      }
      case QueryType::kLCT: {
        auto a = run_ltm(p.counts, req.k, req.order, p.tol, p.sensitivity, rng_);
        answer = a.indices;
        return a.record;
      }
    }
    invalid_argument("unknown query type");
  }

  std::string id_;
  std::shared_ptr<const DataBinding> data_;
  PrivacyParams privacy_;
  AccountantMode mode_;
  LossLedger ledger_;
  Rng rng_;
  std::uint64_t seed_;
  double default_beta_;
  mutable std::mutex mu_;
  double spent_ = 0.0;
  std::size_t answered_ = 0;
  std::size_t denied_ = 0;
  SessionState state_ = SessionState::kOpen;
};

inline std::unique_ptr<Session> open_session(std::string id,
                                             std::shared_ptr<const DataBinding> data,
                                             PrivacyParams privacy, AccountantMode mode,
                                             std::uint64_t seed) {
  return std::make_unique<Session>(std::move(id), std::move(data), privacy, std::move(mode),
                                   seed);
}

}  // namespace erdp
