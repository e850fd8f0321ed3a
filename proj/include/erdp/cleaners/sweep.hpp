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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "erdp/cleaners/model.hpp"
#include "erdp/cleaners/strategies.hpp"
#include "erdp/cleaners/synthetic.hpp"
#include "erdp/common.hpp"
#include "erdp/engine/registry.hpp"
#include "erdp/engine/session.hpp"
#include "erdp/engine/wire.hpp"
#include "erdp/random.hpp"
#include "json.hpp"

namespace erdp {

// A grid of (t, B) cells, each run `runs` times. Run r of every cell uses the
// same cleaner model and the same session seed, so differences between cells
// come from the tolerance and the budget, not from resampling.
struct SweepConfig {
  StrategyKind strategy = StrategyKind::kBS1;
  std::optional<std::string> manifest;  // dataset on disk, else `synthetic`
  SyntheticSpec synthetic;
  std::vector<double> t_grid = {0.08};
  std::vector<double> budgets = {std::numeric_limits<double>::infinity()};
  int runs = 20;
  std::uint64_t seed = 1;
  std::string mode = "moments";
  double delta = 3e-7;
  Translator translator;
  std::optional<double> cutoff;  // default 0.55 |D_t|
  unsigned threads = 0;          // 0: hardware concurrency

  void validate() const {
    if (t_grid.empty() || budgets.empty()) invalid_argument("sweep grids must be non-empty");
    if (runs < 1) invalid_argument("sweep needs runs >= 1");
    for (double t : t_grid) {
      if (!(t > 0.0) || !std::isfinite(t)) invalid_argument("tolerance t must be finite and > 0");
    }
    for (double b : budgets) {
      if (!(b > 0.0)) invalid_argument("budgets must be > 0");
    }
    wire::mode_from_string(mode);
  }
};

inline Translator translator_from_string(const std::string& s, double f = 0.05, int m = 5) {
  if (s == "default" || s == "LCM" || s == "lcm") return {};
  if (s == "lcmp" || s == "LCMP") return Translator::poking(f);
  if (s == "lcmmp" || s == "LCMMP") return Translator::multi_poking(m);
  invalid_argument("unknown translator: " + s);
}

inline std::string translator_name(const Translator& t) {
  switch (t.kind) {
    case Translator::Kind::kDefault: return "LCM";
    case Translator::Kind::kPoking: return "LCMP";
    case Translator::Kind::kMultiPoking: return "LCMMP";
  }
  return "?";
}

inline SweepConfig sweep_config_from_json(const nlohmann::json& j,
                                          const std::filesystem::path& base = {}) {
  SweepConfig c;
  try {
    c.strategy = strategy_from_string(j.value("strategy", std::string("BS1")));
    if (j.contains("manifest")) {
      std::filesystem::path p = j["manifest"].get<std::string>();
      c.manifest = (p.is_relative() ? base / p : p).string();
    }
    if (j.contains("synthetic")) c.synthetic = synthetic_spec_from_json(j["synthetic"]);
    if (j.contains("t")) c.t_grid = j["t"].get<std::vector<double>>();
    if (j.contains("B")) {
      c.budgets.clear();
      for (const auto& b : j["B"]) c.budgets.push_back(wire::number_or_inf(b));
    }
    c.runs = j.value("runs", c.runs);
    c.seed = j.value("seed", c.seed);
    c.mode = j.value("mode", c.mode);
    c.delta = j.value("delta", c.delta);
    c.translator = translator_from_string(j.value("translator", std::string("default")),
                                          j.value("f", 0.05), j.value("m", 5));
    if (j.contains("cutoff")) c.cutoff = j["cutoff"].get<double>();
    c.threads = j.value("threads", 0u);
  } catch (const nlohmann::json::exception& e) {
    invalid_argument(std::string("bad sweep config: ") + e.what());
  }
  c.validate();
  return c;
}

struct SweepRow {
  double t = 0.0;
  double alpha = 0.0;
  double budget = 0.0;
  int run = 0;
  StrategyRun result;
};

struct CellSummary {
  double t = 0.0;
  double budget = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double answered_median = 0.0;
  double spent_median = 0.0;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;  // cell-major, then run
  std::vector<CellSummary> cells;
};

// Linear-interpolation quantile of an unsorted sample.
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) invalid_argument("quantile of an empty sample");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline double primary_metric(const StrategyRun& r) {
  return is_blocking(r.strategy) ? r.quality.recall : r.quality.f1;
}

inline std::uint64_t model_seed(std::uint64_t seed, int run) {
  return mix_seed(seed, static_cast<std::uint64_t>(run));
}

inline std::uint64_t session_seed(std::uint64_t seed, int run) {
  return mix_seed(seed ^ 0x5e55104e5eedULL, static_cast<std::uint64_t>(run));
}

inline SweepResult run_sweep(const SweepConfig& cfg,
                             std::shared_ptr<const DataBinding> data = nullptr) {
  cfg.validate();
  if (!data) {
    data = cfg.manifest ? load_binding(load_manifest(*cfg.manifest))
                        : synthetic_binding(cfg.synthetic);
  }
  const double n = static_cast<double>(data->pairs().size());
  const int d = static_cast<int>(data->schema().size());
  StrategyOptions base;
  base.cutoff = cfg.cutoff.value_or(0.55 * n);
  base.translator = cfg.translator;
  const AccountantMode mode = wire::mode_from_string(cfg.mode);

  std::vector<CleanerModel> models;
  for (int r = 0; r < cfg.runs; ++r) {
    Rng rng(model_seed(cfg.seed, r));
    models.push_back(sample_cleaner(cfg.strategy, rng, d));
  }

  SweepResult out;
  out.config = cfg;
  for (double t : cfg.t_grid) {
    for (double b : cfg.budgets) {
      for (int r = 0; r < cfg.runs; ++r) out.rows.push_back({t, t * n, b, r, {}});
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= out.rows.size()) return;
      auto& row = out.rows[i];
      Session s("sweep", data, {row.budget, cfg.delta}, mode, session_seed(cfg.seed, row.run));
      StrategyOptions o = base;
      o.alpha = row.alpha;
      row.result = run_strategy(models[static_cast<std::size_t>(row.run)], s, o);
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(out.rows.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  const auto per_cell = static_cast<std::size_t>(cfg.runs);
  for (std::size_t c = 0; c * per_cell < out.rows.size(); ++c) {
    std::vector<double> q, answered, spent;
    for (std::size_t k = 0; k < per_cell; ++k) {
      const auto& row = out.rows[c * per_cell + k];
      q.push_back(primary_metric(row.result));
      answered.push_back(static_cast<double>(row.result.answered));
      spent.push_back(row.result.spent);
    }
    const auto& first = out.rows[c * per_cell];
    out.cells.push_back({first.t, first.budget, quantile(q, 0.5), quantile(q, 0.25),
                         quantile(q, 0.75), quantile(answered, 0.5), quantile(spent, 0.5)});
  }
  return out;
}

inline std::string format_budget(double b) {
  if (std::isinf(b)) return "inf";
  std::ostringstream s;
  s << b;
  return s.str();
}

// One row per run; fixed column order.
inline void write_sweep_csv(std::ostream& out, const SweepResult& r) {
  out << "strategy,translator,t,alpha,B,run,recall,cost,precision,f1,asked,answered,denied,"
         "spent,partial,predicates\n";
  out.precision(10);
  for (const auto& row : r.rows) {
    const auto& s = row.result;
    out << to_string(s.strategy) << ',' << translator_name(r.config.translator) << ','
        << row.t << ',' << row.alpha << ',' << format_budget(row.budget) << ',' << row.run
        << ',' << s.quality.recall << ',' << s.quality.cost << ',' << s.quality.precision
        << ',' << s.quality.f1 << ',' << s.asked << ',' << s.answered << ',' << s.denied << ','
        << s.spent << ',' << (s.partial ? 1 : 0) << ',' << s.predicates.size() << '\n';
  }
}

inline nlohmann::json sweep_summary_json(const SweepResult& r) {
  auto cells = nlohmann::json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"t", c.t},
                     {"B", wire::finite_or_null(c.budget)},
                     {"median", c.median},
                     {"q1", c.q1},
                     {"q3", c.q3},
                     {"answeredMedian", c.answered_median},
                     {"spentMedian", c.spent_median}});
  }
  return {{"strategy", to_string(r.config.strategy)},
          {"metric", is_blocking(r.config.strategy) ? "recall" : "f1"},
          {"translator", translator_name(r.config.translator)},
          {"mode", r.config.mode},
          {"runs", r.config.runs},
          {"cells", std::move(cells)}};
}

}  // namespace erdp
