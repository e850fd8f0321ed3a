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
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "erdp/common.hpp"
#include "erdp/core/dataset.hpp"
#include "erdp/core/similarity.hpp"
#include "json.hpp"

namespace erdp {

// sim(t(left.A), t(right.A)) > theta; false whenever either value is NULL.
struct SimilarityPredicate {
  std::string attribute;
  TransformSpec transform;
  SimilarityFunction sim = SimilarityFunction::kJaccard;
  double threshold = 0.5;

  bool operator==(const SimilarityPredicate&) const = default;
};

// True iff the record's value for `attribute` is NULL. Only valid on base
// records, not on pairs.
struct NullTest {
  std::string attribute;

  bool operator==(const NullTest&) const = default;
};

using Atom = std::variant<SimilarityPredicate, NullTest>;

enum class Shape { kDisjunction, kConjunction, kDnf };

enum class FormulaKind { kPair, kRecord };

inline void validate_predicate(const SimilarityPredicate& p) {
  if (p.attribute.empty()) invalid_argument("predicate attribute must be non-empty");
  if (!(p.threshold >= 0.0 && p.threshold <= 1.0)) {
    invalid_argument("predicate threshold must lie in [0, 1]");
  }
  if (p.transform.kind == Transformation::kQgram && p.transform.q < 1) {
    invalid_argument("q-gram size must be >= 1");
  }
}

inline bool evaluate_predicate(const SimilarityPredicate& p, const Schema& schema,
                               const Record& left, const Record& right) {
  const std::size_t i = schema.index_of(p.attribute);
  const Value& a = left.at(i);
  const Value& b = right.at(i);
  if (!a || !b) return false;
  const auto ta = apply_transform(p.transform, *a);
  const auto tb = apply_transform(p.transform, *b);
  return similarity(p.sim, ta, tb) > p.threshold;
}

// Boolean formula over atoms, stored as a DNF clause list: a disjunction is
// one single-atom clause per atom, a conjunction is one clause.
class Formula {
 public:
  Formula() = default;

  static Formula disjunction(std::vector<Atom> atoms) {
    Formula f;
    f.shape_ = Shape::kDisjunction;
    for (auto& a : atoms) f.clauses_.push_back({std::move(a)});
    f.validate();
    return f;
  }

  static Formula conjunction(std::vector<Atom> atoms) {
    Formula f;
    f.shape_ = Shape::kConjunction;
    f.clauses_.push_back(std::move(atoms));
    f.validate();
    return f;
  }

  static Formula dnf(std::vector<std::vector<Atom>> clauses) {
    Formula f;
    f.shape_ = Shape::kDnf;
    f.clauses_ = std::move(clauses);
    f.validate();
    return f;
  }

  static Formula single(Atom atom) { return disjunction({std::move(atom)}); }

  Shape shape() const { return shape_; }
  const std::vector<std::vector<Atom>>& clauses() const { return clauses_; }

  std::vector<Atom> atoms() const {
    std::vector<Atom> out;
    for (const auto& c : clauses_) out.insert(out.end(), c.begin(), c.end());
    return out;
  }

  FormulaKind kind() const {
    return std::holds_alternative<NullTest>(clauses_.front().front()) ? FormulaKind::kRecord
                                                                      : FormulaKind::kPair;
  }

  // Throws if any atom names an attribute outside `schema`.
  void check_schema(const Schema& schema) const {
    for (const auto& c : clauses_) {
      for (const auto& a : c) {
        std::visit([&](const auto& x) { schema.index_of(x.attribute); }, a);
      }
    }
  }

  bool operator==(const Formula&) const = default;

 private:
  void validate() const {
    if (clauses_.empty()) invalid_argument("formula must contain at least one atom");
    bool saw_pair = false, saw_record = false;
    for (const auto& c : clauses_) {
      if (c.empty()) invalid_argument("formula clause must contain at least one atom");
      for (const auto& a : c) {
        if (const auto* p = std::get_if<SimilarityPredicate>(&a)) {
          validate_predicate(*p);
          saw_pair = true;
        } else {
          if (std::get<NullTest>(a).attribute.empty()) {
            invalid_argument("isNull attribute must be non-empty");
          }
          saw_record = true;
        }
      }
    }
    if (saw_pair && saw_record) {
      invalid_argument("formula mixes pair predicates and isNull tests");
    }
  }

  Shape shape_ = Shape::kDisjunction;
  std::vector<std::vector<Atom>> clauses_;
};

inline bool evaluate_formula(const Formula& f, const Schema& schema, const Record& left,
                             const Record& right) {
  if (f.kind() != FormulaKind::kPair) {
    invalid_argument("isNull formula evaluated on a pair");
  }
  for (const auto& clause : f.clauses()) {
    bool all = true;
    for (const auto& a : clause) {
      if (!evaluate_predicate(std::get<SimilarityPredicate>(a), schema, left, right)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

inline bool evaluate_formula(const Formula& f, const Schema& schema, const Record& record) {
  if (f.kind() != FormulaKind::kRecord) {
    invalid_argument("pair predicate evaluated on a single record");
  }
  for (const auto& clause : f.clauses()) {
    bool all = true;
    for (const auto& a : clause) {
      if (record.at(schema.index_of(std::get<NullTest>(a).attribute))) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

inline std::string to_string(const Atom& a) {
  std::ostringstream os;
  if (const auto* p = std::get_if<SimilarityPredicate>(&a)) {
    os << to_string(p->sim) << '(' << to_string(p->transform) << '(' << p->attribute
       << "))>" << p->threshold;
  } else {
    os << "isNull(" << std::get<NullTest>(a).attribute << ')';
  }
  return os.str();
}

inline std::string to_string(const Formula& f) {
  std::string out;
  for (std::size_t i = 0; i < f.clauses().size(); ++i) {
    if (i) out += " OR ";
    const auto& c = f.clauses()[i];
    if (c.size() > 1 && f.clauses().size() > 1) out += '(';
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j) out += " AND ";
      out += to_string(c[j]);
    }
    if (c.size() > 1 && f.clauses().size() > 1) out += ')';
  }
  return out;
}

// JSON grammar:
//   atom    := {"attr", "transform", ["q"], "sim", "theta"} | {"isNull": attr}
//   formula := {"shape": "disjunction"|"conjunction", "atoms": [atom...]}
//            | {"shape": "dnf", "clauses": [[atom...]...]}
inline nlohmann::json atom_to_json(const Atom& a) {
  if (const auto* p = std::get_if<SimilarityPredicate>(&a)) {
    nlohmann::json j;
    j["attr"] = p->attribute;
    switch (p->transform.kind) {
      case Transformation::kLowercase: j["transform"] = "lowercase"; break;
      case Transformation::kSpaceTokenize: j["transform"] = "spaceTokenize"; break;
      case Transformation::kQgram:
        j["transform"] = "qgram";
        j["q"] = p->transform.q;
        break;
    }
    j["sim"] = to_string(p->sim);
    j["theta"] = p->threshold;
    return j;
  }
  return nlohmann::json{{"isNull", std::get<NullTest>(a).attribute}};
}

inline Atom atom_from_json(const nlohmann::json& j) {
  if (!j.is_object()) invalid_argument("formula atom must be a JSON object");
  if (j.contains("isNull")) {
    if (!j["isNull"].is_string()) invalid_argument("isNull must name an attribute");
    return NullTest{j["isNull"].get<std::string>()};
  }
  for (const char* key : {"attr", "transform", "sim", "theta"}) {
    if (!j.contains(key)) invalid_argument(std::string("formula atom is missing \"") + key + "\"");
  }
  if (!j["attr"].is_string() || !j["transform"].is_string() || !j["sim"].is_string() ||
      !j["theta"].is_number()) {
    invalid_argument("formula atom has a field of the wrong type");
  }
  int q = 2;
  if (j.contains("q")) {
    if (!j["q"].is_number_integer()) invalid_argument("q must be an integer");
    q = j["q"].get<int>();
  }
  SimilarityPredicate p;
  p.attribute = j["attr"].get<std::string>();
  p.transform = transform_from_string(j["transform"].get<std::string>(), q);
  p.sim = similarity_from_string(j["sim"].get<std::string>());
  p.threshold = j["theta"].get<double>();
  validate_predicate(p);
  return p;
}

inline nlohmann::json formula_to_json(const Formula& f) {
  nlohmann::json j;
  switch (f.shape()) {
    case Shape::kDisjunction:
    case Shape::kConjunction: {
      j["shape"] = f.shape() == Shape::kDisjunction ? "disjunction" : "conjunction";
      auto atoms = nlohmann::json::array();
      for (const auto& a : f.atoms()) atoms.push_back(atom_to_json(a));
      j["atoms"] = std::move(atoms);
      break;
    }
    case Shape::kDnf: {
      j["shape"] = "dnf";
      auto clauses = nlohmann::json::array();
      for (const auto& c : f.clauses()) {
        auto cj = nlohmann::json::array();
        for (const auto& a : c) cj.push_back(atom_to_json(a));
        clauses.push_back(std::move(cj));
      }
      j["clauses"] = std::move(clauses);
      break;
    }
  }
  return j;
}

inline Formula formula_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("shape") || !j["shape"].is_string()) {
    invalid_argument("formula must be an object with a \"shape\"");
  }
  const auto shape = j["shape"].get<std::string>();
  auto read_atoms = [](const nlohmann::json& arr) {
    if (!arr.is_array()) invalid_argument("formula atoms must be an array");
    std::vector<Atom> atoms;
    for (const auto& a : arr) atoms.push_back(atom_from_json(a));
    return atoms;
  };
  if (shape == "disjunction" || shape == "conjunction") {
    if (!j.contains("atoms")) invalid_argument("formula is missing \"atoms\"");
    auto atoms = read_atoms(j["atoms"]);
    return shape == "disjunction" ? Formula::disjunction(std::move(atoms))
                                  : Formula::conjunction(std::move(atoms));
  }
  if (shape == "dnf") {
    if (!j.contains("clauses") || !j["clauses"].is_array()) {
      invalid_argument("dnf formula needs a \"clauses\" array");
    }
    std::vector<std::vector<Atom>> clauses;
    for (const auto& c : j["clauses"]) clauses.push_back(read_atoms(c));
    return Formula::dnf(std::move(clauses));
  }
  invalid_argument("unknown formula shape: " + shape);
}

}  // namespace erdp
