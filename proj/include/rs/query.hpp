// Copyright 2026 The Sherlock Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The perception task language: detect, inspect and compound (track, scan,
// count) queries over object descriptions.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rs/ontology.hpp"

namespace rs {

enum class Determiner { A, An, The };

std::string_view to_string(Determiner d);

struct Description;

struct ConstraintValue {
  enum class Tag { Symbol, Number, Tuple, Nested };

  Tag tag = Tag::Symbol;
  std::string symbol;
  double number = 0.0;
  std::vector<double> tuple;
  /// Spatial relation written before a nested description: `in`, `on`, `near`.
  std::string relation;
  std::shared_ptr<const Description> nested;

  static ConstraintValue of_symbol(std::string s);
  static ConstraintValue of_number(double v);
  static ConstraintValue of_tuple(std::vector<double> v);
  static ConstraintValue of_description(Description d, std::string relation = {});

  friend bool operator==(const ConstraintValue& a, const ConstraintValue& b);
};

struct Constraint {
  std::string attribute;
  ConstraintValue value;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct Description {
  Determiner determiner = Determiner::An;
  std::string kind = "object";
  std::vector<Constraint> constraints;

  /// First constraint with this attribute, or nullptr.
  const ConstraintValue* find(std::string_view attribute) const;

  friend bool operator==(const Description&, const Description&) = default;
};

struct Detect {
  Description description;
  friend bool operator==(const Detect&, const Detect&) = default;
};

struct Inspect {
  std::string uid;
  std::vector<std::string> attributes;
  friend bool operator==(const Inspect&, const Inspect&) = default;
};

/// `(verb (w1 w2 (detect D)))`. `wrapper` holds the words around the inner
/// detect, e.g. `for object` in a scan query.
struct Compound {
  std::string verb;
  std::vector<std::string> wrapper;
  Description inner;
  friend bool operator==(const Compound&, const Compound&) = default;
};

using Query = std::variant<Detect, Inspect, Compound>;

enum class ParseMode {
  Strict,
  /// Closes lists left open at end of input.
  Lenient,
};

/// Attribute names accepted in descriptions and inspect lists.
class AttributeVocabulary {
 public:
  static AttributeVocabulary standard();

  void add(std::string name);
  bool contains(std::string_view name) const;
  /// Closest known name by edit distance, empty when nothing is close.
  std::string suggest(std::string_view name) const;
  const std::set<std::string>& names() const { return names_; }

 private:
  std::set<std::string> names_;
};

Query parse_query(std::string_view text, ParseMode mode = ParseMode::Strict,
                  const AttributeVocabulary& vocabulary = AttributeVocabulary::standard());

std::string format_query(const Query& q);
std::string format_description(const Description& d);
std::string format_value(const ConstraintValue& v);

/// Attribute names mentioned by the query, nested descriptions included.
/// Compound count adds pose and width.
std::set<std::string> required_attributes(const Query& q);

/// The description a query selects objects with, if any.
const Description* query_description(const Query& q);

/// The view of a belief-state object the matcher needs.
struct ObjectView {
  std::string id;
  /// attribute -> values the object's annotations assert (several when
  /// annotators disagree).
  std::map<std::string, std::vector<std::string>> symbols;
  std::map<std::string, double> numbers;
  std::string location;   // semantic region label, empty when unknown
  std::string whole_type; // part-of target class, empty when unknown
};

struct SemanticRegion {
  std::string label;
  std::string kind;  // ontology class of the region, e.g. Drawer
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open pixel rectangle

  bool contains(double x, double y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
  friend bool operator==(const SemanticRegion&, const SemanticRegion&) = default;
};

/// True iff every constraint of `desc` holds for `obj`.
bool match_object(const Description& desc, const ObjectView& obj, const KnowledgeBase& kb,
                  const std::vector<SemanticRegion>& semantic_map = {});

/// a/an: every match. the: exactly one, else AmbiguityError or NotFound.
std::vector<std::string> resolve_determiner(Determiner det, const std::vector<std::string>& matches);

}  // namespace rs
