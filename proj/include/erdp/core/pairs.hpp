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

#include <cstddef>
#include <fstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "erdp/common.hpp"
#include "erdp/core/dataset.hpp"

namespace erdp {

enum class Label { kMatch, kNonMatch };

struct PairLabel {
  std::size_t left = 0;
  std::size_t right = 0;
  Label label = Label::kNonMatch;
};

struct LabeledPair {
  const Record* left = nullptr;
  const Record* right = nullptr;
  Label label = Label::kNonMatch;
};

// Labeled training view over two base datasets sharing a schema. Each base
// record appears in at most `stability` pairs, so adding or removing one base
// record changes any count over the view by at most `stability`.
class PairTable {
 public:
  PairTable() = default;

  PairTable(const Dataset& left, const Dataset& right, std::vector<PairLabel> labels,
            int stability)
      : schema_(left.schema()), stability_(stability), labels_(std::move(labels)) {
    if (stability < 1) invalid_argument("pair table stability must be >= 1");
    if (!(left.schema() == right.schema())) {
      invalid_argument("left and right datasets must share a schema");
    }
    std::unordered_map<std::size_t, int> left_uses, right_uses;
    pairs_.reserve(labels_.size());
    for (const auto& l : labels_) {
      if (l.left >= left.size()) {
        invalid_argument("unknown left record index " + std::to_string(l.left));
      }
      if (l.right >= right.size()) {
        invalid_argument("unknown right record index " + std::to_string(l.right));
      }
      if (++left_uses[l.left] > stability) {
        invalid_argument("left record " + std::to_string(l.left) +
                         " referenced more than " + std::to_string(stability) + " times");
      }
      if (++right_uses[l.right] > stability) {
        invalid_argument("right record " + std::to_string(l.right) +
                         " referenced more than " + std::to_string(stability) + " times");
      }
      pairs_.push_back({&left.row(l.left), &right.row(l.right), l.label});
      if (l.label == Label::kMatch) ++positives_;
    }
  }

  // The view keeps pointers into the base datasets; they must outlive it.
  PairTable(Dataset&&, const Dataset&, std::vector<PairLabel>, int) = delete;
  PairTable(const Dataset&, Dataset&&, std::vector<PairLabel>, int) = delete;

  const Schema& schema() const { return schema_; }
  int stability() const { return stability_; }
  const std::vector<LabeledPair>& pairs() const { return pairs_; }
  const std::vector<PairLabel>& labels() const { return labels_; }

  // Public counts |D_t| and |D_t+|; released without noise.
  std::size_t size() const { return pairs_.size(); }
  std::size_t positives() const { return positives_; }
  std::size_t negatives() const { return pairs_.size() - positives_; }

 private:
  Schema schema_;
  int stability_ = 1;
  std::vector<PairLabel> labels_;
  std::vector<LabeledPair> pairs_;
  std::size_t positives_ = 0;
};

inline PairTable build_pair_table(const Dataset& left, const Dataset& right,
                                  std::vector<PairLabel> labels, int stability) {
  return PairTable(left, right, std::move(labels), stability);
}

// Label file: header `leftIdx,rightIdx,label`, label is `+` or `-`.
inline std::vector<PairLabel> parse_labels(std::istream& in) {
  std::vector<std::string> f;
  std::vector<bool> q;
  if (!csv::read_record(in, f, q)) invalid_argument("label CSV is missing a header row");
  if (f.size() != 3) invalid_argument("label CSV header must have 3 columns");
  std::vector<PairLabel> out;
  std::size_t line = 1;
  while (csv::read_record(in, f, q)) {
    ++line;
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 3) {
      invalid_argument("malformed label row " + std::to_string(line));
    }
    PairLabel l;
    try {
      std::size_t pos = 0;
      l.left = std::stoul(f[0], &pos);
      if (pos != f[0].size()) throw std::invalid_argument("trailing");
      l.right = std::stoul(f[1], &pos);
      if (pos != f[1].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      invalid_argument("malformed index in label row " + std::to_string(line));
    }
    if (f[2] == "+") l.label = Label::kMatch;
    else if (f[2] == "-") l.label = Label::kNonMatch;
    else invalid_argument("label must be + or - in row " + std::to_string(line));
    out.push_back(l);
  }
  return out;
}

inline std::vector<PairLabel> load_labels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error("cannot read label file: " + path);
  return parse_labels(in);
}

inline void write_labels(std::ostream& out, const std::vector<PairLabel>& labels) {
  out << "leftIdx,rightIdx,label\n";
  for (const auto& l : labels) {
    out << l.left << ',' << l.right << ',' << (l.label == Label::kMatch ? '+' : '-') << '\n';
  }
}

}  // namespace erdp
