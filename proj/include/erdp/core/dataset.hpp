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
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "erdp/common.hpp"

namespace erdp {

using Value = std::optional<std::string>;  // nullopt is NULL
using Record = std::vector<Value>;

class Schema {
 public:
  Schema() = default;

  explicit Schema(std::vector<std::string> attributes)
      : attributes_(std::move(attributes)) {
    std::unordered_set<std::string> seen;
    for (const auto& a : attributes_) {
      if (a.empty()) invalid_argument("schema attribute names must be non-empty");
      if (!seen.insert(a).second) invalid_argument("duplicate schema attribute: " + a);
    }
  }

  const std::vector<std::string>& attributes() const { return attributes_; }
  std::size_t size() const { return attributes_.size(); }

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
      if (attributes_[i] == name) return i;
    }
    return std::nullopt;
  }

  std::size_t index_of(std::string_view name) const {
    auto idx = find(name);
    if (!idx) invalid_argument("unknown attribute: " + std::string(name));
    return *idx;
  }

  bool operator==(const Schema&) const = default;

 private:
  std::vector<std::string> attributes_;
};

class Dataset {
 public:
  Dataset() = default;

  Dataset(Schema schema, std::vector<Record> rows)
      : schema_(std::move(schema)), rows_(std::move(rows)) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (rows_[i].size() != schema_.size()) {
        invalid_argument("row " + std::to_string(i) + " has " +
                         std::to_string(rows_[i].size()) + " values, expected " +
                         std::to_string(schema_.size()));
      }
    }
  }

  const Schema& schema() const { return schema_; }
  const std::vector<Record>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  const Record& row(std::size_t i) const { return rows_.at(i); }

 private:
  Schema schema_;
  std::vector<Record> rows_;
};

namespace csv {

// Splits one logical CSV record (RFC 4180 quoting, quoted fields may span
// lines). Returns false at end of input.
inline bool read_record(std::istream& in, std::vector<std::string>& fields,
                        std::vector<bool>& quoted) {
  fields.clear();
  quoted.clear();
  std::string field;
  bool in_quotes = false;
  bool was_quoted = false;
  bool any = false;
  int ch;
  while ((ch = in.get()) != EOF) {
    any = true;
    const char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      quoted.push_back(was_quoted);
      field.clear();
      was_quoted = false;
    } else if (c == '\r') {
      // tolerate CRLF
    } else if (c == '\n') {
      break;
    } else {
      field.push_back(c);
    }
  }
  if (!any) return false;
  if (in_quotes) invalid_argument("unterminated quoted CSV field");
  fields.push_back(std::move(field));
  quoted.push_back(was_quoted);
  return true;
}

inline std::string escape(std::string_view s) {
  const bool needs = s.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

}  // namespace csv

// Parses a dataset from CSV text with a header row. An empty cell is NULL.
// With a non-empty expected schema the header must match it exactly;
// otherwise the schema is taken from the header.
inline Dataset parse_dataset(std::istream& in, const Schema& expected = {}) {
  std::vector<std::string> fields;
  std::vector<bool> quoted;
  if (!csv::read_record(in, fields, quoted)) {
    invalid_argument("dataset CSV is missing a header row");
  }
  Schema header(fields);
  if (expected.size() > 0 && !(header == expected)) {
    invalid_argument("dataset header does not match the declared schema");
  }
  std::vector<Record> rows;
  std::size_t line = 1;
  while (csv::read_record(in, fields, quoted)) {
    ++line;
    if (fields.size() == 1 && fields[0].empty() && !quoted[0]) continue;  // blank line
    if (fields.size() != header.size()) {
      invalid_argument("malformed CSV row " + std::to_string(line) + ": " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(header.size()));
    }
    Record rec;
    rec.reserve(fields.size());
    for (auto& f : fields) {
      if (f.empty()) rec.emplace_back(std::nullopt);
      else rec.emplace_back(std::move(f));
    }
    rows.push_back(std::move(rec));
  }
  return Dataset(std::move(header), std::move(rows));
}

inline Dataset load_dataset(const std::string& path, const Schema& expected = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error("cannot read dataset file: " + path);
  return parse_dataset(in, expected);
}

inline void write_dataset(std::ostream& out, const Dataset& d) {
  const auto& attrs = d.schema().attributes();
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (i) out << ',';
    out << csv::escape(attrs[i]);
  }
  out << '\n';
  for (const auto& row : d.rows()) {
    // A lone NULL would otherwise be an empty line, which readers skip.
    if (row.size() == 1 && !row[0]) {
      out << "\"\"\n";
      continue;
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (row[i]) out << csv::escape(*row[i]);
    }
    out << '\n';
  }
}

}  // namespace erdp
