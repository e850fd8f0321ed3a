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
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "erdp/common.hpp"
#include "erdp/mechanisms/translate.hpp"
#include "json.hpp"

namespace erdp {

struct PrivacyParams {
  double budget = 1.0;  // B; may be +infinity
  double delta = 3e-7;

  void validate() const {
    if (!(budget > 0.0)) invalid_argument("privacy budget B must be > 0");
    if (!(delta > 0.0 && delta < 1.0)) invalid_argument("delta must lie in (0, 1)");
  }
};

enum class Composition { kSequential, kMoments };

// How a total moment curve becomes an (epsilon, delta) guarantee.
//   kRdpConversion: eps = min_l mu(l) + ln(1/delta) / (l - 1)
//   kLiteral:  eps = min_l (mu(l) - ln delta) / l
// The literal rule tends to 0 as l grows for any finite ledger, so it is only
// meaningful on a capped grid.
enum class TailRule { kRdpConversion, kLiteral };

inline const std::vector<double>& default_lambda_grid() {
  static const std::vector<double> grid = {1.25, 1.5, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64};
  return grid;
}

// Default grid extended to 384. On this grid the literal tail rule maps a
// ledger of sequential cost ~176 to ~0.5 at delta = e^-15.
inline std::vector<double> fidelity_lambda_grid() {
  auto g = default_lambda_grid();
  for (double l : {96.0, 128.0, 192.0, 256.0, 384.0}) g.push_back(l);
  return g;
}

struct AccountantMode {
  Composition composition = Composition::kMoments;
  std::vector<double> lambdas = default_lambda_grid();
  TailRule tail = TailRule::kRdpConversion;

  static AccountantMode sequential() {
    AccountantMode m;
    m.composition = Composition::kSequential;
    return m;
  }
  static AccountantMode moments(TailRule tail = TailRule::kRdpConversion) {
    AccountantMode m;
    m.tail = tail;
    return m;
  }
  static AccountantMode fidelity() {
    AccountantMode m;
    m.tail = TailRule::kLiteral;
    m.lambdas = fidelity_lambda_grid();
    return m;
  }

  void validate() const {
    if (composition == Composition::kSequential) return;
    if (lambdas.empty()) invalid_argument("moments accountant needs a non-empty lambda grid");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const double l = lambdas[i];
      if (!(l >= 1.0) || !std::isfinite(l)) invalid_argument("lambda orders must be finite and >= 1");
      if (tail == TailRule::kRdpConversion && !(l > 1.0)) {
        invalid_argument("RDP conversion needs lambda > 1");
      }
      if (i > 0 && !(l > lambdas[i - 1])) invalid_argument("lambda grid must be ascending");
    }
  }
};

// Log moment of the privacy loss of one sensitivity-1 Laplace mechanism
// Lap(b) at order lambda.
inline double mu_laplace(double b, double lambda) {
  if (!(b > 0.0)) invalid_argument("mu_laplace needs b > 0");
  if (!(lambda >= 1.0)) invalid_argument("mu_laplace needs lambda >= 1");
  const double inv_b = 1.0 / b;
  if (lambda == 1.0) return inv_b + std::exp(-inv_b) - 1.0;
  // Evaluate ln(w1 e^{x1} + w2 e^{x2}) stably.
  const double w1 = lambda / (2.0 * lambda - 1.0);
  const double w2 = (lambda - 1.0) / (2.0 * lambda - 1.0);
  const double x1 = (lambda - 1.0) * inv_b;
  const double x2 = -lambda * inv_b;
  const double hi = std::max(x1, x2);
  const double log_sum = hi + std::log(w1 * std::exp(x1 - hi) + w2 * std::exp(x2 - hi));
  return std::max(0.0, log_sum / (lambda - 1.0));
}

// Sum of component moments of a record at one order.
inline double mechanism_moment(const MechanismRecord& rec, double lambda, bool executed) {
  const auto& specs = executed ? rec.executed : rec.worst;
  double m = 0.0;
  for (const auto& s : specs) m += mu_laplace(s.unit_scale(), lambda);
  return m * rec.components;
}

inline double tail_bound(const std::vector<double>& total_moments, const AccountantMode& mode,
                         double delta) {
  double best = std::numeric_limits<double>::infinity();
  const double log_inv_delta = -std::log(delta);
  for (std::size_t i = 0; i < mode.lambdas.size(); ++i) {
    const double l = mode.lambdas[i];
    const double eps = mode.tail == TailRule::kRdpConversion
                           ? total_moments[i] + log_inv_delta / (l - 1.0)
                           : (total_moments[i] + log_inv_delta) / l;
    best = std::min(best, eps);
  }
  return best;
}

// Append-only list of executed mechanisms with running totals for both
// composition rules, so that checking a new mechanism is O(grid size).
class LossLedger {
 public:
  LossLedger() = default;
  explicit LossLedger(AccountantMode mode) : mode_(std::move(mode)) {
    mode_.validate();
    moments_.assign(mode_.lambdas.size(), 0.0);
  }

  const AccountantMode& mode() const { return mode_; }
  const std::vector<MechanismRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }

  void append(MechanismRecord rec) {
    sequential_ += sequential_epsilon(rec, true);
    for (std::size_t i = 0; i < moments_.size(); ++i) {
      moments_[i] += mechanism_moment(rec, mode_.lambdas[i], true);
    }
    records_.push_back(std::move(rec));
  }

  double sequential_total() const { return sequential_; }
  const std::vector<double>& moment_totals() const { return moments_; }

 private:
  AccountantMode mode_;
  std::vector<MechanismRecord> records_;
  double sequential_ = 0.0;
  std::vector<double> moments_ = std::vector<double>(default_lambda_grid().size(), 0.0);
};

// Sum of executed epsilons, plus the preview's worst case when given.
inline double sequential_loss(const LossLedger& ledger,
                              const MechanismRecord* preview = nullptr) {
  double eps = ledger.sequential_total();
  if (preview) eps += sequential_epsilon(*preview, false);
  return eps;
}

inline double moments_loss(const LossLedger& ledger, const MechanismRecord* preview,
                           double delta, const AccountantMode& mode) {
  if (!(delta > 0.0 && delta < 1.0)) invalid_argument("delta must lie in (0, 1)");
  if (mode.lambdas.empty()) invalid_argument("moments accountant needs a non-empty lambda grid");
  if (ledger.empty() && !preview) return 0.0;
  std::vector<double> totals;
  if (mode.lambdas == ledger.mode().lambdas) {
    totals = ledger.moment_totals();
  } else {
    totals.assign(mode.lambdas.size(), 0.0);
    for (const auto& r : ledger.records()) {
      for (std::size_t i = 0; i < totals.size(); ++i) {
        totals[i] += mechanism_moment(r, mode.lambdas[i], true);
      }
    }
  }
  if (preview) {
    for (std::size_t i = 0; i < totals.size(); ++i) {
      totals[i] += mechanism_moment(*preview, mode.lambdas[i], false);
    }
  }
  return tail_bound(totals, mode, delta);
}

inline double loss_for_mode(const LossLedger& ledger, const MechanismRecord* preview,
                            double delta, const AccountantMode& mode) {
  return mode.composition == Composition::kSequential
             ? sequential_loss(ledger, preview)
             : moments_loss(ledger, preview, delta, mode);
}

// Loss if `next` were executed on its worst-case path.
inline double estimate_loss(const LossLedger& ledger, const MechanismRecord& next,
                            double delta, const AccountantMode& mode) {
  return loss_for_mode(ledger, &next, delta, mode);
}

// Loss of the executed paths recorded so far.
inline double analyze_loss(const LossLedger& ledger, double delta, const AccountantMode& mode) {
  return loss_for_mode(ledger, nullptr, delta, mode);
}

// Public per-record metadata: mechanism kind, tolerance and noise scales.
// True counts and noise values are never part of a record.
inline nlohmann::json record_to_json(const MechanismRecord& r) {
  auto specs = [](const std::vector<LaplaceSpec>& v) {
    auto a = nlohmann::json::array();
    for (const auto& s : v) a.push_back({{"b", s.b}, {"epsilon", s.epsilon}});
    return a;
  };
  nlohmann::json j = {
      {"kind", to_string(r.kind)},         {"alpha", r.alpha},
      {"beta", r.beta},                    {"sensitivity", r.sensitivity},
      {"worst", specs(r.worst)},           {"executed", specs(r.executed)},
      {"epsilonWorst", sequential_epsilon(r, false)},
      {"epsilonExecuted", sequential_epsilon(r, true)},
  };
  if (r.kind == MechanismKind::kLTM) {
    j["components"] = r.components;
    j["k"] = r.k;
  }
  if (r.kind == MechanismKind::kLCMP) j["f"] = r.poke_fraction;
  if (r.kind == MechanismKind::kLCMMP) j["m"] = r.pokes;
  if (r.stop_iteration >= 0) j["stopIteration"] = r.stop_iteration;
  return j;
}

// One JSON object per line.
inline void export_ledger_jsonl(const LossLedger& ledger, std::ostream& out) {
  for (const auto& r : ledger.records()) out << record_to_json(r).dump() << '\n';
}

}  // namespace erdp
