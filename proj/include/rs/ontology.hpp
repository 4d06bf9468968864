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

// DL-lite knowledge representation: a named-class taxonomy with existential
// restrictions (TBox) and individuals with assertions (ABox).

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace rs {

/// Position in meters, orientation as a unit quaternion (x, y, z, w).
struct Pose {
  std::array<double, 3> position{0.0, 0.0, 0.0};
  std::array<double, 4> orientation{0.0, 0.0, 0.0, 1.0};

  friend bool operator==(const Pose&, const Pose&) = default;
};

/// Filler of a role assertion or annotation field. Strings carry symbols,
/// type names and individual ids alike.
using Value = std::variant<std::string, double, std::int64_t, Pose, std::vector<double>>;

std::string to_string(const Value& value);

enum class PrimitiveKind { String, Real, Integer, Pose, Vector };

struct Range {
  std::optional<PrimitiveKind> primitive;  // set for literal ranges
  std::string type;                        // set for class ranges

  friend bool operator==(const Range&, const Range&) = default;
};

struct Cardinality {
  std::optional<int> exact;
  std::optional<int> min;
  std::optional<int> max;

  bool empty() const { return !exact && !min && !max; }
  friend bool operator==(const Cardinality&, const Cardinality&) = default;
};

struct PropertyDefinition {
  std::string name;
  std::string domain;
  Range range;
  Cardinality cardinality;

  friend bool operator==(const PropertyDefinition&, const PropertyDefinition&) = default;
};

/// `(property p v)` inside a class: an existential restriction `∃p.v`,
/// used as a necessary condition only.
struct Restriction {
  std::string property;
  Value value;

  friend bool operator==(const Restriction&, const Restriction&) = default;
};

struct TypeSymbol {
  std::string name;
  std::vector<std::string> parents;
  std::vector<Restriction> restrictions;

  friend bool operator==(const TypeSymbol&, const TypeSymbol&) = default;
};

inline constexpr std::string_view kRootType = "Thing";

class TBox {
 public:
  void add_type(TypeSymbol type);
  void add_property(PropertyDefinition property);
  /// Appends restrictions to an already declared type.
  void add_restrictions(std::string_view type, const std::vector<Restriction>& restrictions);

  bool has_type(std::string_view name) const;
  const TypeSymbol& type(std::string_view name) const;  // throws UnknownType
  const PropertyDefinition* find_property(std::string_view name) const;
  const std::vector<TypeSymbol>& types() const { return types_; }
  const std::vector<PropertyDefinition>& properties() const { return properties_; }

  /// Reflexive-transitive parent closure. Throws UnknownType.
  bool is_subclass_of(std::string_view sub, std::string_view super) const;
  /// `name` followed by its ancestors in breadth-first order, each once.
  std::vector<std::string> ancestors(std::string_view name) const;
  /// Strict descendants in declaration order.
  std::vector<std::string> descendants(std::string_view name) const;

  /// Checks references, parent acyclicity and cardinalities. Throws
  /// UnknownReference, CycleError or UnsatisfiableDefinition.
  void validate() const;

  friend bool operator==(const TBox& a, const TBox& b) {
    return a.types_ == b.types_ && a.properties_ == b.properties_;
  }

 private:
  const std::set<std::string>& closure(std::string_view name) const;

  std::vector<TypeSymbol> types_;
  std::unordered_map<std::string, std::size_t> type_index_;
  std::vector<PropertyDefinition> properties_;
  std::unordered_map<std::string, std::size_t> property_index_;
  mutable std::unordered_map<std::string, std::set<std::string>> closure_cache_;
};

struct ConceptAssertion {
  std::string individual;
  std::string type;

  friend bool operator==(const ConceptAssertion&, const ConceptAssertion&) = default;
};

struct RoleAssertion {
  std::string property;
  std::string subject;
  Value object;

  friend bool operator==(const RoleAssertion&, const RoleAssertion&) = default;
};

struct ABox {
  std::vector<std::string> individuals;
  std::vector<ConceptAssertion> concepts;
  std::vector<RoleAssertion> roles;

  bool has_individual(std::string_view id) const;
  friend bool operator==(const ABox&, const ABox&) = default;
};

struct KnowledgeBase {
  TBox tbox;
  ABox abox;
  /// Colloquial names usable in `type` constraints, e.g. Food.
  std::map<std::string, std::string> type_aliases;

  /// Alias target when `name` is an alias, otherwise `name` itself.
  std::string resolve_type_name(std::string_view name) const;

  friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;
};

bool is_subclass_of(const TBox& tbox, std::string_view sub, std::string_view super);

/// Individuals with a concept assertion subsumed by `type`, in first-assertion order.
std::vector<std::string> individuals_of(const TBox& tbox, std::string_view type, const ABox& abox);

/// (attribute, value) pairs from the hasVisualProperty restrictions of a class
/// and its ancestors, own restrictions first.
std::vector<std::pair<std::string, std::string>> visual_properties_of(const TBox& tbox,
                                                                      std::string_view object_class);

/// Throws TypeCheckError when `value` does not conform to `property`'s range.
void check_value(const KnowledgeBase& kb, const PropertyDefinition& property, const Value& value);

/// Checks role assertions and TBox cardinalities over the ABox.
void validate_abox(const KnowledgeBase& kb);

/// Parses an ontology document. The built-in taxonomy is merged first.
KnowledgeBase load_ontology(std::string_view document, std::string_view source = "<memory>");
KnowledgeBase load_ontology_file(const std::string& path);
/// Adds a further document to an existing knowledge base.
void merge_ontology(KnowledgeBase& kb, std::string_view document, std::string_view source = "<memory>");

/// The annotation taxonomy, attribute value classes, component and capability
/// classes every knowledge base starts with.
std::string_view builtin_ontology();

}  // namespace rs
