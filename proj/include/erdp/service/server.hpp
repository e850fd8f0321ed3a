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

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "erdp/cleaners/synthetic.hpp"
#include "erdp/common.hpp"
#include "erdp/engine/registry.hpp"
#include "erdp/engine/session.hpp"
#include "erdp/engine/wire.hpp"
#include "httplib.h"
#include "json.hpp"

namespace erdp {

// Service configuration (JSON):
//   {"host": "127.0.0.1", "port": 8080,
//    "datasets": ["data/restaurants/dataset.json",
//                 {"id": "toy", "synthetic": {"kind": "restaurants", "seed": 3}}],
//    "defaults": {"B": 1.0, "delta": 3e-7, "mode": "moments"},
//    "seed": 42, "seedPolicy": "fixed" | "random", "traceDir": "traces"}
// ERDP_PORT and ERDP_SEED override "port" and "seed".
struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::vector<std::shared_ptr<const DataBinding>> datasets;
  PrivacyParams defaults{1.0, 3e-7};
  std::string mode = "moments";
  std::uint64_t seed = 0;
  bool random_seeds = false;
  std::string trace_dir;
};

inline ServiceConfig service_config_from_json(const nlohmann::json& j,
                                              const std::filesystem::path& base = {}) {
  ServiceConfig c;
  try {
    c.host = j.value("host", c.host);
    c.port = j.value("port", c.port);
    if (j.contains("datasets")) {
      for (const auto& d : j["datasets"]) {
        if (d.is_string()) {
          std::filesystem::path p = d.get<std::string>();
          c.datasets.push_back(load_binding(load_manifest((p.is_relative() ? base / p : p).string())));
        } else if (d.contains("synthetic")) {
          c.datasets.push_back(synthetic_binding(synthetic_spec_from_json(d["synthetic"]),
                                                 d.at("id").get<std::string>()));
        } else {
          c.datasets.push_back(load_binding(manifest_from_json(d, base)));
        }
      }
    }
    if (j.contains("defaults")) {
      const auto& d = j["defaults"];
      if (d.contains("B")) c.defaults.budget = wire::number_or_inf(d["B"]);
      c.defaults.delta = d.value("delta", c.defaults.delta);
      c.mode = d.value("mode", c.mode);
    }
    c.seed = j.value("seed", c.seed);
    c.random_seeds = j.value("seedPolicy", std::string("fixed")) == "random";
    if (j.contains("traceDir")) {
      std::filesystem::path p = j["traceDir"].get<std::string>();
      c.trace_dir = (p.is_relative() ? base / p : p).string();
    }
  } catch (const nlohmann::json::exception& e) {
    invalid_argument(std::string("bad service config: ") + e.what());
  }
  if (const char* port = std::getenv("ERDP_PORT")) c.port = std::stoi(port);
  if (const char* seed = std::getenv("ERDP_SEED")) c.seed = std::stoull(seed);
  c.defaults.validate();
  wire::mode_from_string(c.mode);
  return c;
}

namespace service_detail {

inline int http_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::kInvalidArgument: return 400;
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kFailedPrecondition: return 409;
    case ErrorCode::kIo: return 500;
  }
  return 500;
}

inline void reply(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline nlohmann::json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(req.body);
  } catch (const nlohmann::json::exception& e) {
    invalid_argument(std::string("request body is not JSON: ") + e.what());
  }
}

// Runs a handler, mapping engine errors to HTTP statuses.
template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      reply(res, http_status(e.code()), {{"error", e.what()}});
    } catch (const nlohmann::json::exception& e) {
      reply(res, 400, {{"error", e.what()}});
    } catch (const std::exception& e) {
      reply(res, 500, {{"error", e.what()}});
    }
  };
}

}  // namespace service_detail

// Translation preview used by the console before a query is committed.
// Body: {"type", "alpha", "beta"?, "L"?, "k"?, "translator"?, "f"?, "m"?}.
inline nlohmann::json translation_json(const nlohmann::json& j) {
  const auto type = query_type_from_string(j.at("type").get<std::string>());
  const Tolerance tol{j.at("alpha").get<double>(), j.value("beta", kDefaultBeta)};
  Translator tr;
  if (j.contains("translator")) {
    const auto t = j["translator"].get<std::string>();
    if (t == "lcmp") tr = Translator::poking(j.value("f", 0.05));
    else if (t == "lcmmp") tr = Translator::multi_poking(j.value("m", 5));
    else if (t != "default") invalid_argument("unknown translator: " + t);
  }
  const auto rec = translation_record(type, tol, j.value("L", 1), j.value("k", 1), tr);
  auto out = record_to_json(rec);
  out["epsilon"] = sequential_epsilon(rec, false);
  return out;
}

// Registers every endpoint on `server`.
inline void install_routes(httplib::Server& server, SessionRegistry& registry,
                           const ServiceConfig& cfg) {
  using service_detail::guarded;
  using service_detail::parse_body;
  using service_detail::reply;
  auto counter = std::make_shared<std::atomic<std::uint64_t>>(0);

  server.Get("/datasets", guarded([&registry](const httplib::Request&, httplib::Response& res) {
    auto arr = nlohmann::json::array();
    for (const auto& d : registry.datasets()) arr.push_back(public_metadata(*d));
    reply(res, 200, arr);
  }));

  server.Post("/sessions", guarded([&registry, &cfg, counter](const httplib::Request& req,
                                                              httplib::Response& res) {
    const auto body = parse_body(req);
    if (!body.is_object() || !body.contains("dataset") || !body["dataset"].is_string()) {
      invalid_argument("session request needs a \"dataset\"");
    }
    SessionOptions o;
    o.dataset = body["dataset"].get<std::string>();
    o.privacy = cfg.defaults;
    if (body.contains("B")) o.privacy.budget = wire::number_or_inf(body["B"]);
    if (body.contains("delta")) {
      if (!body["delta"].is_number()) invalid_argument("delta must be a number");
      o.privacy.delta = body["delta"].get<double>();
    }
    o.mode = body.value("mode", cfg.mode);
    if (cfg.random_seeds) {
      std::random_device rd;
      o.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    } else {
      o.seed = mix_seed(cfg.seed, counter->fetch_add(1));
    }
    const auto id = registry.create(o);
    auto status = wire::status_to_json(registry.status(id));
    reply(res, 201, status);
  }));

  server.Get(R"(/sessions/([^/]+))",
             guarded([&registry](const httplib::Request& req, httplib::Response& res) {
               reply(res, 200, wire::status_to_json(registry.status(req.matches[1])));
             }));

  server.Delete(R"(/sessions/([^/]+))",
                guarded([&registry](const httplib::Request& req, httplib::Response& res) {
                  registry.close(req.matches[1]);
                  reply(res, 200, wire::status_to_json(registry.status(req.matches[1])));
                }));

  server.Post(R"(/sessions/([^/]+)/queries)",
              guarded([&registry](const httplib::Request& req, httplib::Response& res) {
                const std::string id = req.matches[1];
                registry.status(id);  // 404 before parsing
                const auto q = wire::request_from_json(parse_body(req));
                const auto resp = registry.submit(id, q);
                reply(res, 200, wire::response_to_json(resp, &q));
              }));

  server.Post(R"(/sessions/([^/]+)/estimate)",
              guarded([&registry](const httplib::Request& req, httplib::Response& res) {
                const std::string id = req.matches[1];
                const auto status = registry.status(id);
                const auto q = wire::request_from_json(parse_body(req));
                const double est = registry.estimate(id, q);
                reply(res, 200,
                      {{"estimate", wire::finite_or_null(est)},
                       {"spent", status.spent},
                       {"B", wire::finite_or_null(status.privacy.budget)},
                       {"wouldBeDenied", !within_budget(est, status.privacy.budget)}});
              }));

  server.Post("/translate", guarded([](const httplib::Request& req, httplib::Response& res) {
    reply(res, 200, translation_json(parse_body(req)));
  }));
}

// Blocks serving requests until `server.stop()` is called.
inline bool serve(httplib::Server& server, SessionRegistry& registry, const ServiceConfig& cfg) {
  for (const auto& d : cfg.datasets) registry.add_dataset(d);
  install_routes(server, registry, cfg);
  return server.listen(cfg.host, cfg.port);
}

}  // namespace erdp
