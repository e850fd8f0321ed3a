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

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "erdp/common.hpp"
#include "erdp/core/pairs.hpp"
#include "erdp/core/query.hpp"
#include "erdp/engine/session.hpp"
#include "erdp/engine/wire.hpp"
#include "json.hpp"

namespace erdp {

// On-disk description of one bound dataset:
//   {"id": "...", "schema": [...], "left": "left.csv", "right": "right.csv",
//    "labels": "labels.csv", "stability": 1}
// Relative paths resolve against the manifest's directory.
struct DatasetManifest {
  std::string id;
  Schema schema;
  std::string left;
  std::string right;
  std::string labels;
  int stability = 1;
};

inline DatasetManifest manifest_from_json(const nlohmann::json& j,
                                          const std::filesystem::path& base = {}) {
  DatasetManifest m;
  try {
    m.id = j.at("id").get<std::string>();
    if (j.contains("schema")) m.schema = Schema(j.at("schema").get<std::vector<std::string>>());
    auto resolve = [&](const char* key) {
      std::filesystem::path p = j.at(key).get<std::string>();
      return (p.is_relative() ? base / p : p).string();
    };
    m.left = resolve("left");
    m.right = resolve("right");
    m.labels = resolve("labels");
    m.stability = j.value("stability", 1);
  } catch (const nlohmann::json::exception& e) {
    invalid_argument(std::string("bad dataset manifest: ") + e.what());
  }
  if (m.id.empty()) invalid_argument("dataset manifest needs a non-empty id");
  return m;
}

inline DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) io_error("cannot open dataset manifest " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    invalid_argument("dataset manifest " + path + " is not JSON: " + e.what());
  }
  return manifest_from_json(j, std::filesystem::path(path).parent_path());
}

inline std::shared_ptr<const DataBinding> load_binding(const DatasetManifest& m) {
  Dataset left = load_dataset(m.left, m.schema);
  Dataset right = load_dataset(m.right, left.schema());
  return std::make_shared<const DataBinding>(m.id, std::move(left), std::move(right),
                                             load_labels(m.labels), m.stability);
}

// Public metadata only: schema and the public pair counts.
inline nlohmann::json public_metadata(const DataBinding& d) {
  return {{"id", d.id()},
          {"schema", d.schema().attributes()},
          {"pairs", d.pairs().size()},
          {"positives", d.pairs().positives()},
          {"negatives", d.pairs().negatives()},
          {"stability", d.pairs().stability()},
          {"baseTables", {"left", "right"}}};
}

struct SessionOptions {
  std::string dataset;
  PrivacyParams privacy;
  std::string mode = "moments";
  std::uint64_t seed = 0;
  double default_beta = kDefaultBeta;
};

// Owns datasets and live sessions for the service. Sessions are independent;
// each serialises its own requests, so the registry lock is held only for
// lookups. When a trace directory is set every session writes a replayable
// JSON-lines trace.
class SessionRegistry {
 public:
  explicit SessionRegistry(std::string trace_dir = {}) : trace_dir_(std::move(trace_dir)) {}

  void add_dataset(std::shared_ptr<const DataBinding> d) {
    if (!d) invalid_argument("null dataset binding");
    std::lock_guard<std::mutex> lock(mu_);
    datasets_[d->id()] = std::move(d);
  }

  std::shared_ptr<const DataBinding> dataset(const std::string& id) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = datasets_.find(id);
    if (it == datasets_.end()) not_found("unknown dataset: " + id);
    return it->second;
  }

  std::vector<std::shared_ptr<const DataBinding>> datasets() const {
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<std::shared_ptr<const DataBinding>> out;
    for (const auto& [id, d] : datasets_) out.push_back(d);
    return out;
  }

  std::string create(const SessionOptions& o) {
    auto data = dataset(o.dataset);
    const std::string id = "s" + std::to_string(next_id_.fetch_add(1) + 1);
    auto entry = std::make_shared<Entry>();
    entry->session = std::make_shared<Session>(id, std::move(data), o.privacy,
                                               wire::mode_from_string(o.mode), o.seed,
                                               o.default_beta);
    if (!trace_dir_.empty()) {
      const auto path = std::filesystem::path(trace_dir_) / (id + ".jsonl");
      entry->trace.open(path);
      if (!entry->trace) io_error("cannot open trace file " + path.string());
      write_trace_open(entry->trace, {o.dataset, o.privacy, o.mode, o.seed, o.default_beta});
      entry->trace.flush();
    }
    std::lock_guard<std::mutex> lock(mu_);
    sessions_[id] = std::move(entry);
    return id;
  }

  EngineResponse submit(const std::string& id, const QueryRequest& req) {
    auto e = entry(id);
    std::lock_guard<std::mutex> lock(e->mu);
    auto resp = e->session->submit(req);
    if (e->trace.is_open()) {
      write_trace_query(e->trace, req);
      e->trace.flush();
    }
    return resp;
  }

  double estimate(const std::string& id, const QueryRequest& req) const {
    auto e = entry(id);
    if (e->session->status().state == SessionState::kClosed) {
      failed_precondition("session " + id + " is closed");
    }
    return e->session->estimate(req);
  }

  SessionStatus status(const std::string& id) const { return entry(id)->session->status(); }

  void close(const std::string& id) {
    auto e = entry(id);
    std::lock_guard<std::mutex> lock(e->mu);
    e->session->close();
    if (e->trace.is_open()) e->trace.close();
  }

  std::shared_ptr<Session> session(const std::string& id) const { return entry(id)->session; }

 private:
  struct Entry {
    std::shared_ptr<Session> session;
    std::ofstream trace;
    std::mutex mu;
  };

  std::shared_ptr<Entry> entry(const std::string& id) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) not_found("unknown session: " + id);
    return it->second;
  }

  std::string trace_dir_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<const DataBinding>> datasets_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::atomic<unsigned long> next_id_{0};
};

}  // namespace erdp
