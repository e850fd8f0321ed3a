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
#include <string>
#include <vector>

#include "erdp/common.hpp"

namespace erdp {

// (alpha, beta) error tolerance: the answer misses by alpha or more (in the
// query type's distance) with probability at most beta.
struct Tolerance {
  double alpha = 1.0;
  double beta = 0.05;

  void validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) invalid_argument("tolerance alpha must be > 0");
    if (!(beta > 0.0 && beta < 1.0)) invalid_argument("tolerance beta must lie in (0, 1)");
  }

  double log_inv_beta() const { return -std::log(beta); }
};

// Default failure probability e^-15.
inline const double kDefaultBeta = std::exp(-15.0);

// One Laplace noise source: scale b and the epsilon it costs for the
// query's sensitivity (epsilon * b == sensitivity).
struct LaplaceSpec {
  double b = 1.0;
  double epsilon = 1.0;

  static LaplaceSpec from_scale(double b, int sensitivity) {
    return {b, static_cast<double>(sensitivity) / b};
  }

  // Scale of the equivalent sensitivity-1 mechanism, 1/epsilon. Moments are
  // evaluated at this scale.
  double unit_scale() const { return 1.0 / epsilon; }

  bool operator==(const LaplaceSpec&) const = default;
};

enum class MechanismKind { kLM, kLCM, kLTM, kLCMP, kLCMMP };

inline const char* to_string(MechanismKind k) {
  switch (k) {
    case MechanismKind::kLM: return "LM";
    case MechanismKind::kLCM: return "LCM";
    case MechanismKind::kLTM: return "LTM";
    case MechanismKind::kLCMP: return "LCMP";
    case MechanismKind::kLCMMP: return "LCMMP";
  }
  return "?";
}

inline MechanismKind mechanism_kind_from_string(const std::string& s) {
  for (auto k : {MechanismKind::kLM, MechanismKind::kLCM, MechanismKind::kLTM,
                 MechanismKind::kLCMP, MechanismKind::kLCMMP}) {
    if (s == to_string(k)) return k;
  }
  invalid_argument("unknown mechanism kind: " + s);
}

// The accountant's unit of composition. worst lists every noise source any
// execution path may draw; executed lists the ones the run actually paid
// for. For LTM each noise source stands for `components` i.i.d. draws.
struct MechanismRecord {
  MechanismKind kind = MechanismKind::kLM;
  std::vector<LaplaceSpec> worst;
  std::vector<LaplaceSpec> executed;
  int components = 1;  // L for LTM
  int k = 0;           // LTM
  double alpha = 0.0;
  double beta = 0.0;
  double poke_fraction = 0.0;  // LCMP
  int pokes = 0;               // LCMMP m
  int stop_iteration = -1;     // LCMMP iteration that answered, LCMP 0 or 1
  int sensitivity = 1;

  // Record whose executed path equals its worst case, as for a mechanism
  // that has not run yet.
  MechanismRecord as_preview() const {
    MechanismRecord r = *this;
    r.executed = r.worst;
    r.stop_iteration = -1;
    return r;
  }
};

// Pure epsilon of a noise source list under sequential composition. LTM
// costs k/b per draw vector rather than L/b.
inline double sequential_epsilon(const MechanismRecord& rec, bool executed) {
  const auto& specs = executed ? rec.executed : rec.worst;
  double eps = 0.0;
  for (const auto& s : specs) eps += s.epsilon;
  if (rec.kind == MechanismKind::kLTM) eps *= rec.k;
  return eps;
}

// ---------------------------------------------------------------------------
// Closed-form translations. All return the noise scale and epsilon for the
// given query sensitivity; the scale depends only on the tolerance.

inline LaplaceSpec translate_lm(const Tolerance& tol, int sensitivity = 1) {
  tol.validate();
  if (sensitivity < 1) invalid_argument("sensitivity must be >= 1");
  return LaplaceSpec::from_scale(tol.alpha / tol.log_inv_beta(), sensitivity);
}

inline LaplaceSpec translate_lcm(const Tolerance& tol, int sensitivity = 1) {
  tol.validate();
  if (sensitivity < 1) invalid_argument("sensitivity must be >= 1");
  if (!(tol.beta < 0.5)) invalid_argument("LCM needs beta < 1/2");
  return LaplaceSpec::from_scale(tol.alpha / std::log(1.0 / (2.0 * tol.beta)), sensitivity);
}

// Per-count scale for top-k over L counts; the mechanism costs k/b.
inline LaplaceSpec translate_ltm(const Tolerance& tol, int L, int k, int sensitivity = 1) {
  tol.validate();
  if (sensitivity < 1) invalid_argument("sensitivity must be >= 1");
  if (L < 1 || k < 1 || k > L) invalid_argument("LTM needs 1 <= k <= L");
  const double b = tol.alpha / (2.0 * (std::log(static_cast<double>(L)) +
                                       std::log(static_cast<double>(k) / tol.beta)));
  if (!(b > 0.0)) invalid_argument("LTM tolerance yields a non-positive noise scale");
  return LaplaceSpec::from_scale(b, sensitivity);
}

inline double ltm_epsilon(const Tolerance& tol, int L, int k, int sensitivity = 1) {
  return k * translate_ltm(tol, L, k, sensitivity).epsilon;
}

// Parameters of LCM with poking.
struct PokingPlan {
  double lcm_rate = 0.0;     // ln(1/(2 beta)) / alpha
  double poke_rate = 0.0;    // f * lcm_rate
  double poke_alpha = 0.0;   // ln(1/beta) / poke_rate
  LaplaceSpec poke;          // Lap(1/poke_rate)
  LaplaceSpec escalation;    // LCM at (alpha, beta/2): Lap(alpha / ln(1/beta))
};

inline PokingPlan plan_lcmp(const Tolerance& tol, double f, int sensitivity = 1) {
  tol.validate();
  if (!(f > 0.0 && f < 1.0)) invalid_argument("poking fraction f must lie in (0, 1)");
  if (!(tol.beta < 0.5)) invalid_argument("LCMP needs beta < 1/2");
  PokingPlan p;
  p.lcm_rate = std::log(1.0 / (2.0 * tol.beta)) / tol.alpha;
  p.poke_rate = f * p.lcm_rate;
  p.poke_alpha = tol.log_inv_beta() / p.poke_rate;
  p.poke = LaplaceSpec::from_scale(1.0 / p.poke_rate, sensitivity);
  p.escalation = translate_lcm({tol.alpha, tol.beta / 2.0}, sensitivity);
  return p;
}

// Parameters of LCM with multi-poking: m pokes at rates (i+1) r_max / m.
struct MultiPokingPlan {
  double max_rate = 0.0;  // ln(m/(2 beta)) / alpha
  std::vector<double> rates;
  std::vector<double> alphas;  // ln(m/(2 beta)) / rate_i
};

inline MultiPokingPlan plan_lcmmp(const Tolerance& tol, int m) {
  tol.validate();
  if (m < 2) invalid_argument("LCMMP needs m >= 2 pokes");
  const double log_term = std::log(static_cast<double>(m) / (2.0 * tol.beta));
  if (!(log_term > 0.0)) invalid_argument("LCMMP needs m / (2 beta) > 1");
  MultiPokingPlan p;
  p.max_rate = log_term / tol.alpha;
  for (int i = 0; i < m; ++i) {
    const double r = (i + 1) * p.max_rate / m;
    p.rates.push_back(r);
    p.alphas.push_back(log_term / r);
  }
  return p;
}

// Tolerance obtained when an LCC is answered locally from an LM answer.
inline double derived_lcc_tolerance(const Tolerance& tol) {
  tol.validate();
  if (!(tol.beta < 0.5)) invalid_argument("derived LCC tolerance needs beta < 1/2");
  return (1.0 - std::log(2.0) / tol.log_inv_beta()) * tol.alpha;
}

// Tolerance obtained when an LCT is answered locally from L LM answers.
inline double derived_lct_tolerance(const Tolerance& tol, int L, int k) {
  tol.validate();
  if (static_cast<long>(L) * k < 1 || L < 1 || k < 1) {
    invalid_argument("derived LCT tolerance needs L * k >= 1");
  }
  return (1.0 + 2.0 * std::log(static_cast<double>(L) * k) / tol.log_inv_beta()) * tol.alpha;
}

}  // namespace erdp
