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
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "erdp/cleaners/model.hpp"
#include "erdp/common.hpp"
#include "erdp/core/formula.hpp"
#include "erdp/core/query.hpp"
#include "erdp/engine/session.hpp"

namespace erdp {

// What a robot cleaner may see of a session: the schema, the public pair
// counts and the engine's responses. No path to the bound data.
class EngineClient {
 public:
  explicit EngineClient(Session& s)
      : session_(s),
        schema_(s.data().schema()),
        pairs_(s.data().pairs().size()),
        positives_(s.data().pairs().positives()) {}

  const Schema& schema() const { return schema_; }
  double pairs() const { return static_cast<double>(pairs_); }
  double positives() const { return static_cast<double>(positives_); }
  double negatives() const { return static_cast<double>(pairs_ - positives_); }

  EngineResponse ask(const QueryRequest& r) {
    ++asked_;
    auto resp = session_.submit(r);
    if (resp.status == ResponseStatus::kAnswered) ++answered_;
    else ++denied_;
    return resp;
  }

  std::size_t asked() const { return asked_; }
  std::size_t answered() const { return answered_; }
  std::size_t denied() const { return denied_; }
  double spent() const { return session_.spent(); }

 private:
  Session& session_;
  Schema schema_;
  std::size_t pairs_;
  std::size_t positives_;
  std::size_t asked_ = 0, answered_ = 0, denied_ = 0;
};

struct StrategyOptions {
  double alpha = 8.0;
  double cutoff = 55.0;  // blocking cost limit, in training pairs
  Translator translator;  // LCC translator for BS2/MS2
  int max_relaxations = 3;
  double done_fraction = 0.05;  // stop once this little remains to gain
};

struct StrategyRun {
  StrategyKind strategy = StrategyKind::kBS1;
  CleanerModel model;
  double alpha = 0.0;
  std::vector<SimilarityPredicate> predicates;  // accepted, in order
  std::optional<Formula> output;
  QualityReport quality;
  std::size_t asked = 0, answered = 0, denied = 0;
  double spent = 0.0;
  bool partial = false;  // ended by a denial
};

namespace strategy_detail {

struct Denied {};

class Explorer {
 public:
  Explorer(const CleanerModel& m, EngineClient& c, const StrategyOptions& o)
      : m_(m), c_(c), o_(o) {
    switch (m.trust) {
      case TrustStyle::kNeutral: shift_ = 0.0; break;
      case TrustStyle::kOptimistic: shift_ = o.alpha / 5.0; break;
      case TrustStyle::kPessimistic: shift_ = -o.alpha / 5.0; break;
    }
  }

  std::vector<SimilarityPredicate> run(bool& partial) {
    try {
      const auto attrs = profile();
      auto pool = candidate_predicates(m_, attrs);
      explore(pool);
    } catch (const Denied&) {
      partial = true;
    }
    return accepted_;
  }

 private:
  bool blocking() const { return is_blocking(m_.strategy); }
  bool uses_counts() const {
    return m_.strategy == StrategyKind::kBS1 || m_.strategy == StrategyKind::kMS1;
  }

  double lc(const Formula& f, const QueryTarget& t) {
    auto r = c_.ask(QueryRequest::lc(f, t, o_.alpha));
    if (r.status != ResponseStatus::kAnswered) throw Denied{};
    return std::get<double>(r.answer);
  }

  bool lcc(const Formula& f, const QueryTarget& t, double c, Direction d) {
    auto r = c_.ask(QueryRequest::lcc(f, t, o_.alpha, c, d, o_.translator));
    if (r.status != ResponseStatus::kAnswered) throw Denied{};
    return std::get<bool>(r.answer);
  }

  // Attributes ordered by fewest NULLs, truncated to x1.
  std::vector<std::string> profile() {
    const auto& names = c_.schema().attributes();
    const auto d = names.size();
    const auto keep = std::min<std::size_t>(d, static_cast<std::size_t>(m_.attributes));
    std::vector<std::string> out;
    if (uses_counts()) {
      std::vector<double> nulls;
      for (const auto& a : names) {
        nulls.push_back(lc(Formula::single(NullTest{a}), QueryTarget::base("left")));
      }
      std::vector<std::size_t> order(d);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return nulls[a] < nulls[b]; });
      for (std::size_t i = 0; i < keep; ++i) out.push_back(names[order[i]]);
      return out;
    }
    if (keep >= d) return names;
    std::vector<Formula> fs;
    for (const auto& a : names) fs.push_back(Formula::single(NullTest{a}));
    auto r = c_.ask(QueryRequest::lct(std::move(fs), QueryTarget::base("left"), o_.alpha,
                                      static_cast<int>(keep), TopOrder::kSmallest));
    if (r.status != ResponseStatus::kAnswered) throw Denied{};
    for (auto i : std::get<std::vector<std::size_t>>(r.answer)) out.push_back(names[i]);
    return out;
  }

  Formula with(const SimilarityPredicate& p) const {
    std::vector<Atom> atoms(accepted_.begin(), accepted_.end());
    atoms.emplace_back(p);
    return blocking() ? Formula::disjunction(std::move(atoms))
                      : Formula::conjunction(std::move(atoms));
  }

  void explore(std::vector<SimilarityPredicate>& pool) {
    const double pos_total = c_.positives();
    const double neg_total = c_.negatives();
    if (blocking()) {
      belief_pos_ = 0.0;
      belief_neg_ = 0.0;
    } else {
      belief_pos_ = pos_total;
      belief_neg_ = neg_total;
    }
    double x8 = m_.match_fraction;
    double x9 = m_.nonmatch_fraction;
    std::vector<bool> used(pool.size(), false);
    for (int round = 0;; ++round) {
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (done()) return;
        if (used[i]) continue;
        if (consider(pool[i], x8, x9)) {
          used[i] = true;
          accepted_.push_back(pool[i]);
        }
      }
      if (!accepted_.empty() || round >= o_.max_relaxations) return;
      x8 /= m_.relax;
      x9 *= m_.relax;
    }
  }

  bool done() const {
    if (blocking()) return c_.positives() - belief_pos_ < o_.done_fraction * c_.positives();
    return belief_neg_ < o_.done_fraction * c_.negatives();
  }

  bool consider(const SimilarityPredicate& p, double x8, double x9) {
    const Formula f = with(p);
    const auto pos_t = QueryTarget::pairs(PairFilter::kPositives);
    const auto neg_t = QueryTarget::pairs(PairFilter::kNegatives);
    const double P = c_.positives();
    const double N = c_.negatives();
    switch (m_.strategy) {
      case StrategyKind::kBS1: {
        const double pos = lc(f, pos_t) + shift_;
        if (pos - belief_pos_ < x8 * (P - belief_pos_)) return false;
        const double neg = lc(f, neg_t) - shift_;
        if (neg - belief_neg_ > x9 * (N - belief_neg_)) return false;
        if (pos + neg >= o_.cutoff) return false;
        belief_pos_ = std::clamp(pos, 0.0, P);
        belief_neg_ = std::clamp(neg, 0.0, N);
        return true;
      }
      case StrategyKind::kBS2: {
        const double need_pos = belief_pos_ + x8 * (P - belief_pos_);
        if (!lcc(f, pos_t, need_pos - shift_, Direction::kGreater)) return false;
        // Positives never exceed P, so this also keeps the cost under the cutoff.
        const double max_neg =
            std::min(belief_neg_ + x9 * (N - belief_neg_), std::max(0.0, o_.cutoff - P));
        if (!lcc(f, neg_t, max_neg + shift_, Direction::kLess)) return false;
        belief_pos_ = std::min(need_pos, P);
        belief_neg_ = max_neg;
        return true;
      }
      case StrategyKind::kMS1: {
        const double pos = lc(f, pos_t) + shift_;
        if (belief_pos_ - pos > x9 * belief_pos_) return false;
        const double neg = lc(f, neg_t) - shift_;
        if (belief_neg_ - neg < x8 * belief_neg_) return false;
        belief_pos_ = std::clamp(pos, 0.0, P);
        belief_neg_ = std::clamp(neg, 0.0, N);
        return true;
      }
      case StrategyKind::kMS2: {
        const double keep_pos = (1.0 - x9) * belief_pos_;
        if (!lcc(f, pos_t, keep_pos - shift_, Direction::kGreater)) return false;
        const double max_neg = (1.0 - x8) * belief_neg_;
        if (!lcc(f, neg_t, max_neg + shift_, Direction::kLess)) return false;
        belief_pos_ = keep_pos;
        belief_neg_ = max_neg;
        return true;
      }
    }
    return false;
  }

  const CleanerModel& m_;
  EngineClient& c_;
  const StrategyOptions& o_;
  double shift_ = 0.0;
  double belief_pos_ = 0.0;
  double belief_neg_ = 0.0;
  std::vector<SimilarityPredicate> accepted_;
};

}  // namespace strategy_detail

// Runs one robot cleaner against `session` and scores its output on the
// bound training pairs. The exploration itself only goes through the
// engine; ground truth is read afterwards, for scoring.
inline StrategyRun run_strategy(const CleanerModel& model, Session& session,
                                const StrategyOptions& opts) {
  if (!(opts.alpha > 0.0)) invalid_argument("strategy tolerance alpha must be > 0");
  if (opts.max_relaxations < 0) invalid_argument("max_relaxations must be >= 0");
  StrategyRun run;
  run.strategy = model.strategy;
  run.model = model;
  run.alpha = opts.alpha;
  EngineClient client(session);
  strategy_detail::Explorer ex(model, client, opts);
  run.predicates = ex.run(run.partial);
  run.asked = client.asked();
  run.answered = client.answered();
  run.denied = client.denied();
  run.spent = client.spent();
  const Task task = is_blocking(model.strategy) ? Task::kBlocking : Task::kMatching;
  if (run.predicates.empty()) {
    run.quality = empty_quality(session.data(), task);
  } else {
    std::vector<Atom> atoms(run.predicates.begin(), run.predicates.end());
    run.output = task == Task::kBlocking ? Formula::disjunction(std::move(atoms))
                                         : Formula::conjunction(std::move(atoms));
    run.quality = quality_report(*run.output, session.data(), task);
  }
  return run;
}

}  // namespace erdp
