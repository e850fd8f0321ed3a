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

// Command-line front end: translations, sweeps, trace replay, synthetic data
// generation and the HTTP service.

#include <cmath>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "erdp/cleaners/sweep.hpp"
#include "erdp/cleaners/synthetic.hpp"
#include "erdp/engine/registry.hpp"
#include "erdp/engine/session.hpp"
#include "erdp/engine/wire.hpp"
#include "erdp/service/server.hpp"
#include "fmt/format.h"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace erdp;

namespace {

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) io_error("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    invalid_argument(path + " is not valid JSON: " + e.what());
  }
}

// Accepts plain numbers as well as "e^-15" and "exp(-15)".
double parse_beta(const std::string& s) {
  std::string body;
  if (s.rfind("e^", 0) == 0) {
    body = s.substr(2);
  } else if (s.rfind("exp(", 0) == 0 && s.back() == ')') {
    body = s.substr(4, s.size() - 5);
  }
  try {
    std::size_t used = 0;
    if (!body.empty()) {
      const double x = std::stod(body, &used);
      if (used == body.size()) return std::exp(x);
    } else {
      const double x = std::stod(s, &used);
      if (used == s.size()) return x;
    }
  } catch (const std::exception&) {
  }
  invalid_argument("cannot parse beta: " + s);
}

int cmd_translate(const std::string& type, double alpha, const std::string& beta_text, int L,
                  int k, const std::string& translator, double f, int m) {
  const auto qt = query_type_from_string(type);
  const Tolerance tol{alpha, parse_beta(beta_text)};
  const Translator tr = translator_from_string(translator, f, m);
  if (qt == QueryType::kLCT && L < k) invalid_argument("LCT needs --L >= --k");
  const auto rec = translation_record(qt, tol, L, k, tr);
  const double eps = sequential_epsilon(rec, false);
  std::string line = fmt::format("mechanism={}", to_string(rec.kind));
  switch (rec.kind) {
    case MechanismKind::kLTM:
      line += fmt::format(" L={} k={} b={:.4f}", L, k, rec.worst[0].b);
      break;
    case MechanismKind::kLCMP: {
      const auto plan = plan_lcmp(tol, f);
      line += fmt::format(" f={} poke_b={:.4f} poke_alpha={:.4f} escalation_b={:.4f}", f,
                          rec.worst[0].b, plan.poke_alpha, rec.worst[1].b);
      break;
    }
    case MechanismKind::kLCMMP: {
      const auto plan = plan_lcmmp(tol, m);
      line += fmt::format(" m={} max_b={:.4f} first_poke_alpha={:.4f}", m, rec.worst[0].b,
                          plan.alphas.front());
      break;
    }
    default:
      line += fmt::format(" b={:.4f}", rec.worst[0].b);
  }
  line += fmt::format(" epsilon={:.4f}", eps);
  std::cout << line << '\n';
  return 0;
}

int cmd_sweep(const std::string& config, std::string out_dir) {
  const auto j = read_json(config);
  const auto cfg = sweep_config_from_json(j, fs::path(config).parent_path());
  if (out_dir.empty()) out_dir = j.value("output", std::string("sweep-out"));
  const auto result = run_sweep(cfg);
  fs::create_directories(out_dir);
  {
    std::ofstream csv(fs::path(out_dir) / "runs.csv");
    if (!csv) io_error("cannot write " + out_dir + "/runs.csv");
    write_sweep_csv(csv, result);
  }
  std::ofstream js(fs::path(out_dir) / "summary.json");
  if (!js) io_error("cannot write " + out_dir + "/summary.json");
  js << sweep_summary_json(result).dump(2) << '\n';
  for (const auto& c : result.cells) {
    std::cout << fmt::format("t={} B={} median={:.3f} q1={:.3f} q3={:.3f} answered={}\n", c.t,
                             format_budget(c.budget), c.median, c.q1, c.q3, c.answered_median);
  }
  return 0;
}

int cmd_replay(const std::string& trace_path, const std::string& manifest,
               const std::string& out) {
  std::ifstream in(trace_path);
  if (!in) io_error("cannot open trace " + trace_path);
  const auto trace = read_trace(in);
  const auto data = load_binding(load_manifest(manifest));
  if (!trace.open.dataset.empty() && trace.open.dataset != data->id()) {
    invalid_argument("trace was recorded on dataset " + trace.open.dataset + ", not " +
                     data->id());
  }
  const auto csv = replay_trace(trace, data);
  if (out.empty() || out == "-") {
    std::cout << csv;
  } else {
    std::ofstream o(out);
    if (!o) io_error("cannot write " + out);
    o << csv;
  }
  return 0;
}

int cmd_gen_data(const std::string& spec_path, std::string out_dir) {
  const auto j = read_json(spec_path);
  const auto spec = synthetic_spec_from_json(j);
  if (out_dir.empty()) out_dir = j.value("out", std::string("data/synthetic"));
  const std::string id = j.value("id", std::string("synthetic"));
  write_synthetic(spec, id, out_dir);
  std::cout << fmt::format("wrote {} pairs ({} positive) to {}\n", spec.pairs, spec.positives,
                           out_dir);
  return 0;
}

httplib::Server* g_server = nullptr;

int cmd_serve(const std::string& config) {
  const auto cfg = service_config_from_json(read_json(config), fs::path(config).parent_path());
  if (!cfg.trace_dir.empty()) fs::create_directories(cfg.trace_dir);
  SessionRegistry registry(cfg.trace_dir);
  httplib::Server server;
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  std::cerr << fmt::format("listening on {}:{}\n", cfg.host, cfg.port);
  if (!serve(server, registry, cfg)) {
    std::cerr << "cannot listen on " << cfg.host << ':' << cfg.port << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private entity-resolution query engine"};
  app.require_subcommand(1);

  std::string type, beta_text, translator = "default";
  double alpha = 0.0, f = 0.05;
  int L = 1, k = 1, m = 5;
  auto* tr = app.add_subcommand("translate", "print the mechanism a tolerance translates to");
  tr->add_option("type", type, "LC, LCC or LCT")->required();
  tr->add_option("alpha", alpha, "error tolerance in count units")->required();
  tr->add_option("beta", beta_text, "failure probability, e.g. 1e-10 or e^-15")->required();
  tr->add_option("--L", L, "number of formulas (LCT)");
  tr->add_option("--k", k, "top-k size (LCT)");
  tr->add_option("--translator", translator, "LCC translator: default, lcmp or lcmmp");
  tr->add_option("--f", f, "poking fraction (lcmp)");
  tr->add_option("--m", m, "number of pokes (lcmmp)");

  std::string config, out;
  auto* sw = app.add_subcommand("sweep", "run a robot-cleaner sweep");
  sw->add_option("config", config, "sweep config (JSON)")->required()->check(CLI::ExistingFile);
  sw->add_option("--out", out, "output directory");

  std::string trace, manifest;
  auto* rp = app.add_subcommand("replay", "re-execute a recorded session trace");
  rp->add_option("trace", trace, "trace file (JSON lines)")->required()->check(CLI::ExistingFile);
  rp->add_option("--dataset", manifest, "dataset manifest the trace was recorded on")
      ->required()
      ->check(CLI::ExistingFile);
  rp->add_option("--out", out, "result CSV (default stdout)");

  std::string spec;
  auto* gd = app.add_subcommand("gen-data", "write a synthetic labeled dataset");
  gd->add_option("spec", spec, "generator spec (JSON)")->required()->check(CLI::ExistingFile);
  gd->add_option("--out", out, "output directory");

  auto* sv = app.add_subcommand("serve", "run the HTTP session service");
  sv->add_option("config", config, "service config (JSON)")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*tr) return cmd_translate(type, alpha, beta_text, L, k, translator, f, m);
    if (*sw) return cmd_sweep(config, out);
    if (*rp) return cmd_replay(trace, manifest, out);
    if (*gd) return cmd_gen_data(spec, out);
    if (*sv) return cmd_serve(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
