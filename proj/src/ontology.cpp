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

#include "rs/ontology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include "rs/error.hpp"
#include "rs/sexpr.hpp"

namespace rs {

namespace {

constexpr std::string_view kBuiltin = R"onto(
; ---- roots ---------------------------------------------------------------
(class Thing)
(class RSType (parents Thing))
(class FeatureStructure (parents RSType))

; ---- sensor data and scene-level structures --------------------------------
(class RsSceneData (parents FeatureStructure))
(class RsColorImage (parents RsSceneData))
(class RsDepthImage (parents RsSceneData))
(class RsCameraInfo (parents RsSceneData))
(class RsAnnotationPlane (parents RsSceneData))
(class RsPclNormalsCloud (parents RsSceneData))
(class RsRegionOfInterest (parents RsSceneData))
(class RsObjectHypothesis (parents RsSceneData))
(class RsSceneCluster (parents RsObjectHypothesis))
(class RsTransparentCluster (parents RsObjectHypothesis))
(class RsImageSegment (parents RsObjectHypothesis))

; ---- annotations -----------------------------------------------------------
(class SemanticAnnotation (parents FeatureStructure))
(class ClassificationAnnotation (parents SemanticAnnotation))
(class ShapeAnnotation (parents SemanticAnnotation))
(class SemanticColorAnnotation (parents SemanticAnnotation))
(class LocationAnnotation (parents SemanticAnnotation))
(class SizeAnnotation (parents SemanticAnnotation))
(class PartAnnotation (parents SemanticAnnotation))
(class PartOfAnnotation (parents SemanticAnnotation))
(class ShelfFloorAnnotation (parents SemanticAnnotation))
(class SeparatorAnnotation (parents SemanticAnnotation))
(class CountAnnotation (parents SemanticAnnotation))
(class EvidenceAtom (parents SemanticAnnotation))
(class LogoAtom (parents EvidenceAtom))
(class TextAtom (parents EvidenceAtom))
(class LinemodAtom (parents EvidenceAtom))
(class BarcodeAtom (parents EvidenceAtom))
(class GeometricAnnotation (parents FeatureStructure))
(class PoseAnnotation (parents GeometricAnnotation))
(class DimensionAnnotation (parents GeometricAnnotation))
(class SacModelAnnotation (parents GeometricAnnotation))
(class VolumeAnnotation (parents GeometricAnnotation))
(class GraspPointAnnotation (parents GeometricAnnotation))
(class FeatureAnnotation (parents FeatureStructure))
(class ColorHistogramAnnotation (parents FeatureAnnotation))

; ---- perception components and robot capabilities --------------------------
(class Algorithm (parents Thing))
(class RoboSherlockComponent (parents Algorithm))
(class AnnotationComponent (parents RoboSherlockComponent))
(class HypothesisGeneratorComponent (parents RoboSherlockComponent))
(class Capability (parents Thing))
(class PerceptualCapability (parents Capability))
(class Perceive3DDepthCapability (parents PerceptualCapability))
(class PerceiveColorCapability (parents PerceptualCapability))
(class Robot (parents Thing))

; ---- visual appearance (attribute values of object descriptions) -----------
(class VisualAppearance (parents Thing))
(class ShapeProperty (parents VisualAppearance) (property attributeName shape))
(class BoxShape (parents ShapeProperty) (property attributeValue box))
(class RoundShape (parents ShapeProperty) (property attributeValue round))
(class FlatShape (parents ShapeProperty) (property attributeValue flat))
(class ColorProperty (parents VisualAppearance) (property attributeName color))
(class WhiteColor (parents ColorProperty) (property attributeValue white))
(class BlackColor (parents ColorProperty) (property attributeValue black))
(class RedColor (parents ColorProperty) (property attributeValue red))
(class GreenColor (parents ColorProperty) (property attributeValue green))
(class BlueColor (parents ColorProperty) (property attributeValue blue))
(class YellowColor (parents ColorProperty) (property attributeValue yellow))
(class OrangeColor (parents ColorProperty) (property attributeValue orange))
(class PurpleColor (parents ColorProperty) (property attributeValue purple))
(class PinkColor (parents ColorProperty) (property attributeValue pink))
(class CyanColor (parents ColorProperty) (property attributeValue cyan))
(class GrayColor (parents ColorProperty) (property attributeValue gray))
(class BrownColor (parents ColorProperty) (property attributeValue brown))
(class SizeProperty (parents VisualAppearance) (property attributeName size))
(class SmallSize (parents SizeProperty) (property attributeValue small))
(class MediumSize (parents SizeProperty) (property attributeValue medium))
(class BigSize (parents SizeProperty) (property attributeValue big))
(class LogoProperty (parents VisualAppearance) (property attributeName logo))
(class TextProperty (parents VisualAppearance) (property attributeName text))

; ---- property definitions --------------------------------------------------
(property-def hasVisualProperty (domain Thing) (range VisualAppearance))
(property-def attributeName (domain VisualAppearance) (range string))
(property-def attributeValue (domain VisualAppearance) (range string))
(property-def perceptualInputRequired (domain RoboSherlockComponent) (range FeatureStructure))
(property-def perceptualOutput (domain RoboSherlockComponent) (range FeatureStructure))
(property-def dependsOnCapability (domain RoboSherlockComponent) (range Capability))
(property-def outputDomain (domain RoboSherlockComponent) (range string))
(property-def hasCapability (domain Robot) (range Capability))
(property-def holds (domain Thing) (range Thing))
(property-def has (domain Thing) (range Thing))

(property-def classLabel (domain ClassificationAnnotation) (range Thing) (cardinality exact 1))
(property-def classConfidence (domain ClassificationAnnotation) (range real) (cardinality exact 1))
(property-def classifierName (domain ClassificationAnnotation) (range string) (cardinality exact 1))
(property-def shape (domain ShapeAnnotation) (range string) (cardinality exact 1))
(property-def color (domain SemanticColorAnnotation) (range string) (cardinality exact 1))
(property-def colorRatio (domain SemanticColorAnnotation) (range real))
(property-def histogram (domain ColorHistogramAnnotation) (range vector) (cardinality exact 1))
(property-def location (domain LocationAnnotation) (range string) (cardinality exact 1))
(property-def pose (domain PoseAnnotation) (range pose) (cardinality exact 1))
(property-def size (domain SizeAnnotation) (range string) (cardinality exact 1))
(property-def volumeEstimate (domain SizeAnnotation) (range real))
(property-def width (domain DimensionAnnotation) (range real) (cardinality exact 1))
(property-def depthExtent (domain DimensionAnnotation) (range real))
(property-def height (domain DimensionAnnotation) (range real))
(property-def part (domain PartAnnotation) (range string) (cardinality min 1))
(property-def wholeLabel (domain PartOfAnnotation) (range string) (cardinality exact 1))
(property-def wholeType (domain PartOfAnnotation) (range Thing) (cardinality exact 1))
(property-def model (domain SacModelAnnotation) (range string) (cardinality exact 1))
(property-def radius (domain SacModelAnnotation) (range real))
(property-def modelHeight (domain SacModelAnnotation) (range real))
(property-def liters (domain VolumeAnnotation) (range real) (cardinality exact 1))
(property-def logo (domain LogoAtom) (range string) (cardinality exact 1))
(property-def text (domain TextAtom) (range string) (cardinality exact 1))
(property-def linemod (domain LinemodAtom) (range string) (cardinality exact 1))
(property-def barcode (domain BarcodeAtom) (range string) (cardinality exact 1))
(property-def planeDepth (domain RsAnnotationPlane) (range real) (cardinality exact 1))
(property-def bounds (domain RsSceneData) (range vector))
(property-def view (domain RsSceneData) (range string))
(property-def source (domain RsObjectHypothesis) (range string) (cardinality exact 1))
(property-def regionLabel (domain RsRegionOfInterest) (range string))
(property-def lineRow (domain ShelfFloorAnnotation) (range real) (cardinality exact 1))
(property-def columnX (domain SeparatorAnnotation) (range real) (cardinality exact 1))
(property-def count (domain CountAnnotation) (range integer) (cardinality exact 1))
(property-def extent (domain CountAnnotation) (range real))
(property-def productWidth (domain CountAnnotation) (range real))
(property-def graspPoints (domain GraspPointAnnotation) (range vector))
)onto";

std::optional<PrimitiveKind> primitive_from(std::string_view s) {
  if (s == "string") return PrimitiveKind::String;
  if (s == "real") return PrimitiveKind::Real;
  if (s == "integer") return PrimitiveKind::Integer;
  if (s == "pose") return PrimitiveKind::Pose;
  if (s == "vector") return PrimitiveKind::Vector;
  return std::nullopt;
}

[[noreturn]] void fail(const sexpr::Node& at, const std::string& message) {
  throw ParseError(message, at.line, at.column);
}

const std::string& symbol(const sexpr::Node& n, const char* what) {
  if (!n.is_atom()) fail(n, std::string("expected ") + what);
  return n.text;
}

std::vector<double> numbers(const sexpr::Node& n) {
  std::vector<double> out;
  for (const auto& c : n.children) {
    auto v = c.as_number();
    if (!v) fail(c, "expected number");
    out.push_back(*v);
  }
  return out;
}

Value read_value(const sexpr::Node& n, const Range& range) {
  if (range.primitive) {
    switch (*range.primitive) {
      case PrimitiveKind::String:
        if (n.is_list()) fail(n, "expected string value");
        return n.text;
      case PrimitiveKind::Real: {
        auto v = n.as_number();
        if (!v) fail(n, "expected real value");
        return *v;
      }
      case PrimitiveKind::Integer: {
        auto v = n.as_number();
        if (!v || std::floor(*v) != *v) fail(n, "expected integer value");
        return static_cast<std::int64_t>(*v);
      }
      case PrimitiveKind::Pose: {
        if (!n.is_list()) fail(n, "expected pose (x y z qx qy qz qw)");
        auto v = numbers(n);
        if (v.size() != 7) fail(n, "pose needs 7 numbers");
        Pose p;
        std::copy(v.begin(), v.begin() + 3, p.position.begin());
        std::copy(v.begin() + 3, v.end(), p.orientation.begin());
        return p;
      }
      case PrimitiveKind::Vector:
        if (!n.is_list()) fail(n, "expected list of numbers");
        return numbers(n);
    }
  }
  if (!n.is_atom()) fail(n, "expected symbol value");
  return n.text;
}

std::string describe_range(const Range& r) {
  if (!r.primitive) return r.type;
  switch (*r.primitive) {
    case PrimitiveKind::String: return "string";
    case PrimitiveKind::Real: return "real";
    case PrimitiveKind::Integer: return "integer";
    case PrimitiveKind::Pose: return "pose";
    case PrimitiveKind::Vector: return "vector";
  }
  return "?";
}

struct Loader {
  KnowledgeBase& kb;
  std::string source;

  void load(std::string_view document) {
    std::vector<sexpr::Node> forms = sexpr::read_all(document);
    std::vector<const sexpr::Node*> classes, properties, individuals;
    for (const auto& f : forms) {
      if (!f.is_list() || f.children.empty() || !f.children[0].is_atom())
        fail(f, "expected (class ...), (property-def ...), (individual ...) or (type-alias ...)");
      const std::string& head = f.children[0].text;
      if (head == "class") classes.push_back(&f);
      else if (head == "property-def") properties.push_back(&f);
      else if (head == "individual") individuals.push_back(&f);
      else if (head == "type-alias") alias(f);
      else fail(f.children[0], "unknown form '" + head + "'");
    }
    // Properties first so class restrictions can be typed.
    for (auto* f : properties) property_def(*f);
    for (auto* f : classes) class_def(*f);
    kb.tbox.validate();
    for (auto* f : individuals) individual(*f);
    for (const auto& [name, target] : kb.type_aliases)
      if (!kb.tbox.has_type(target))
        throw UnknownReference("type-alias " + name + " -> undeclared type " + target);
    validate_abox(kb);
  }

  void alias(const sexpr::Node& f) {
    if (f.children.size() != 3) fail(f, "(type-alias <Name> <Type>)");
    kb.type_aliases[symbol(f.children[1], "alias name")] = symbol(f.children[2], "type name");
  }

  void property_def(const sexpr::Node& f) {
    if (f.children.size() < 2) fail(f, "property-def needs a name");
    PropertyDefinition p;
    p.name = symbol(f.children[1], "property name");
    bool has_domain = false, has_range = false;
    for (std::size_t i = 2; i < f.children.size(); ++i) {
      const auto& c = f.children[i];
      if (!c.is_list() || c.children.empty()) fail(c, "expected (domain ..), (range ..) or (cardinality ..)");
      const std::string& key = symbol(c.children[0], "clause name");
      if (key == "domain" && c.children.size() == 2) {
        p.domain = symbol(c.children[1], "domain type");
        has_domain = true;
      } else if (key == "range" && c.children.size() == 2) {
        const std::string& r = symbol(c.children[1], "range");
        if (auto prim = primitive_from(r)) p.range.primitive = prim;
        else p.range.type = r;
        has_range = true;
      } else if (key == "cardinality" && c.children.size() == 3) {
        const std::string& which = symbol(c.children[1], "exact|min|max");
        auto n = c.children[2].as_number();
        if (!n || std::floor(*n) != *n) fail(c.children[2], "cardinality must be an integer");
        int v = static_cast<int>(*n);
        if (which == "exact") p.cardinality.exact = v;
        else if (which == "min") p.cardinality.min = v;
        else if (which == "max") p.cardinality.max = v;
        else fail(c.children[1], "expected exact, min or max");
      } else {
        fail(c, "malformed clause '" + key + "'");
      }
    }
    if (!has_domain || !has_range) fail(f, "property-def " + p.name + " needs domain and range");
    if (kb.tbox.find_property(p.name)) throw DuplicateName("property " + p.name + " declared twice");
    kb.tbox.add_property(std::move(p));
  }

  void class_def(const sexpr::Node& f) {
    if (f.children.size() < 2) fail(f, "class needs a name");
    TypeSymbol t;
    t.name = symbol(f.children[1], "class name");
    for (std::size_t i = 2; i < f.children.size(); ++i) {
      const auto& c = f.children[i];
      if (!c.is_list() || c.children.empty()) fail(c, "expected (parents ..) or (property ..)");
      const std::string& key = symbol(c.children[0], "clause name");
      if (key == "parents") {
        for (std::size_t k = 1; k < c.children.size(); ++k)
          t.parents.push_back(symbol(c.children[k], "parent name"));
      } else if (key == "property" && c.children.size() == 3) {
        const std::string& prop = symbol(c.children[1], "property name");
        const PropertyDefinition* def = kb.tbox.find_property(prop);
        if (!def) throw UnknownReference("class " + t.name + " restricts undeclared property " + prop);
        t.restrictions.push_back({prop, read_value(c.children[2], def->range)});
      } else {
        fail(c, "malformed clause '" + key + "'");
      }
    }
    if (t.parents.empty() && t.name != kRootType) t.parents.emplace_back(kRootType);
    if (kb.tbox.has_type(t.name)) throw DuplicateName("type " + t.name + " declared twice");
    kb.tbox.add_type(std::move(t));
  }

  void individual(const sexpr::Node& f) {
    if (f.children.size() < 2) fail(f, "individual needs an id");
    const std::string& id = symbol(f.children[1], "individual id");
    if (kb.abox.has_individual(id)) throw DuplicateName("individual " + id + " declared twice");
    kb.abox.individuals.push_back(id);
    for (std::size_t i = 2; i < f.children.size(); ++i) {
      const auto& c = f.children[i];
      if (!c.is_list() || c.children.size() != 2) fail(c, "expected (type T) or (<property> <value>)");
      const std::string& key = symbol(c.children[0], "property name");
      if (key == "type") {
        const std::string& type = symbol(c.children[1], "type name");
        if (!kb.tbox.has_type(type))
          throw UnknownReference("individual " + id + " has undeclared type " + type);
        kb.abox.concepts.push_back({id, type});
        continue;
      }
      const PropertyDefinition* def = kb.tbox.find_property(key);
      if (!def) throw UnknownReference("individual " + id + " uses undeclared property " + key);
      kb.abox.roles.push_back({key, id, read_value(c.children[1], def->range)});
    }
  }
};

bool conforms_to_class(const KnowledgeBase& kb, const std::string& value, const std::string& range) {
  if (kb.tbox.has_type(value)) return kb.tbox.is_subclass_of(value, range);
  for (const auto& c : kb.abox.concepts)
    if (c.individual == value && kb.tbox.is_subclass_of(c.type, range)) return true;
  return false;
}

}  // namespace

std::string to_string(const Value& value) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double d) const {
      std::ostringstream os;
      os.precision(17);
      os << d;
      return os.str();
    }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(const Pose& p) const {
      std::ostringstream os;
      os.precision(17);
      os << '(' << p.position[0] << ' ' << p.position[1] << ' ' << p.position[2];
      for (double q : p.orientation) os << ' ' << q;
      os << ')';
      return os.str();
    }
    std::string operator()(const std::vector<double>& v) const {
      std::ostringstream os;
      os.precision(17);
      os << '(';
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
      os << ')';
      return os.str();
    }
  };
  return std::visit(Visitor{}, value);
}

// ---------------------------------------------------------------- TBox

void TBox::add_type(TypeSymbol type) {
  if (type_index_.count(type.name)) throw DuplicateName("type " + type.name + " declared twice");
  type_index_.emplace(type.name, types_.size());
  types_.push_back(std::move(type));
  closure_cache_.clear();
}

void TBox::add_property(PropertyDefinition property) {
  if (property_index_.count(property.name))
    throw DuplicateName("property " + property.name + " declared twice");
  property_index_.emplace(property.name, properties_.size());
  properties_.push_back(std::move(property));
}

void TBox::add_restrictions(std::string_view name, const std::vector<Restriction>& restrictions) {
  auto it = type_index_.find(std::string(name));
  if (it == type_index_.end()) throw UnknownType(std::string(name));
  auto& r = types_[it->second].restrictions;
  r.insert(r.end(), restrictions.begin(), restrictions.end());
}

bool TBox::has_type(std::string_view name) const { return type_index_.count(std::string(name)) > 0; }

const TypeSymbol& TBox::type(std::string_view name) const {
  auto it = type_index_.find(std::string(name));
  if (it == type_index_.end()) throw UnknownType(std::string(name));
  return types_[it->second];
}

const PropertyDefinition* TBox::find_property(std::string_view name) const {
  auto it = property_index_.find(std::string(name));
  return it == property_index_.end() ? nullptr : &properties_[it->second];
}

const std::set<std::string>& TBox::closure(std::string_view name) const {
  std::string key(name);
  if (auto it = closure_cache_.find(key); it != closure_cache_.end()) return it->second;
  std::set<std::string> seen;
  std::deque<std::string> queue{key};
  while (!queue.empty()) {
    std::string cur = std::move(queue.front());
    queue.pop_front();
    if (!seen.insert(cur).second) continue;
    auto it = type_index_.find(cur);
    if (it == type_index_.end()) continue;
    for (const auto& p : types_[it->second].parents) queue.push_back(p);
  }
  return closure_cache_.emplace(std::move(key), std::move(seen)).first->second;
}

bool TBox::is_subclass_of(std::string_view sub, std::string_view super) const {
  if (!has_type(sub)) throw UnknownType(std::string(sub));
  if (!has_type(super)) throw UnknownType(std::string(super));
  return closure(sub).count(std::string(super)) > 0;
}

std::vector<std::string> TBox::ancestors(std::string_view name) const {
  type(name);
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::deque<std::string> queue{std::string(name)};
  while (!queue.empty()) {
    std::string cur = std::move(queue.front());
    queue.pop_front();
    if (!seen.insert(cur).second) continue;
    out.push_back(cur);
    if (auto it = type_index_.find(cur); it != type_index_.end())
      for (const auto& p : types_[it->second].parents) queue.push_back(p);
  }
  return out;
}

std::vector<std::string> TBox::descendants(std::string_view name) const {
  type(name);
  std::vector<std::string> out;
  for (const auto& t : types_)
    if (t.name != name && closure(t.name).count(std::string(name))) out.push_back(t.name);
  return out;
}

void TBox::validate() const {
  for (const auto& t : types_) {
    if (t.name == kRootType) {
      if (!t.parents.empty()) throw CycleError("root type Thing may not have parents");
      continue;
    }
    if (t.parents.empty()) throw UnknownReference("type " + t.name + " has no parent");
    for (const auto& p : t.parents)
      if (!has_type(p)) throw UnknownReference("type " + t.name + " has undeclared parent " + p);
  }
  // Parent graph must be acyclic: iterative DFS with colors.
  enum class Mark { White, Grey, Black };
  std::vector<Mark> mark(types_.size(), Mark::White);
  std::vector<std::size_t> path;
  auto visit = [&](auto&& self, std::size_t i) -> void {
    mark[i] = Mark::Grey;
    path.push_back(i);
    for (const auto& p : types_[i].parents) {
      std::size_t j = type_index_.at(p);
      if (mark[j] == Mark::Grey) {
        std::string cycle;
        auto start = std::find(path.begin(), path.end(), j);
        for (auto it = start; it != path.end(); ++it) cycle += types_[*it].name + " -> ";
        throw CycleError(cycle + types_[j].name);
      }
      if (mark[j] == Mark::White) self(self, j);
    }
    path.pop_back();
    mark[i] = Mark::Black;
  };
  for (std::size_t i = 0; i < types_.size(); ++i)
    if (mark[i] == Mark::White) visit(visit, i);

  if (!types_.empty() && !has_type(kRootType)) throw UnknownReference("root type Thing missing");
  for (const auto& t : types_)
    if (!closure(t.name).count(std::string(kRootType)))
      throw UnknownReference("type " + t.name + " is not reachable from Thing");

  for (const auto& p : properties_) {
    if (!has_type(p.domain)) throw UnknownReference("property " + p.name + " has undeclared domain " + p.domain);
    if (!p.range.primitive && !has_type(p.range.type))
      throw UnknownReference("property " + p.name + " has undeclared range " + p.range.type);
    const auto& c = p.cardinality;
    bool bad = (c.exact && *c.exact < 0) || (c.min && *c.min < 0) || (c.max && *c.max < 0) ||
               (c.min && c.max && *c.min > *c.max) || (c.exact && c.min && *c.exact < *c.min) ||
               (c.exact && c.max && *c.exact > *c.max);
    if (bad) throw UnsatisfiableDefinition("property " + p.name + " has contradictory cardinalities");
  }
  for (const auto& t : types_) {
    for (const auto& r : t.restrictions) {
      const PropertyDefinition* def = find_property(r.property);
      if (!def) throw UnknownReference("class " + t.name + " restricts undeclared property " + r.property);
      if (!def->range.primitive) {
        const auto* v = std::get_if<std::string>(&r.value);
        if (!v || !has_type(*v))
          throw UnknownReference("class " + t.name + " restriction " + r.property + " names undeclared type " +
                                 to_string(r.value));
        if (!is_subclass_of(*v, def->range.type))
          throw TypeCheckError("class " + t.name + " restriction " + r.property + " value " + *v +
                               " is not a " + def->range.type);
      }
    }
  }
}

// ---------------------------------------------------------------- ABox / KB

bool ABox::has_individual(std::string_view id) const {
  return std::find(individuals.begin(), individuals.end(), id) != individuals.end();
}

std::string KnowledgeBase::resolve_type_name(std::string_view name) const {
  auto it = type_aliases.find(std::string(name));
  return it == type_aliases.end() ? std::string(name) : it->second;
}

bool is_subclass_of(const TBox& tbox, std::string_view sub, std::string_view super) {
  return tbox.is_subclass_of(sub, super);
}

std::vector<std::string> individuals_of(const TBox& tbox, std::string_view type, const ABox& abox) {
  tbox.type(type);
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& c : abox.concepts)
    if (tbox.is_subclass_of(c.type, type) && seen.insert(c.individual).second) out.push_back(c.individual);
  return out;
}

std::vector<std::pair<std::string, std::string>> visual_properties_of(const TBox& tbox,
                                                                      std::string_view object_class) {
  std::vector<std::pair<std::string, std::string>> out;
  auto lookup = [&](const std::string& appearance, std::string_view prop) -> std::optional<std::string> {
    for (const auto& a : tbox.ancestors(appearance))
      for (const auto& r : tbox.type(a).restrictions)
        if (r.property == prop)
          if (auto* s = std::get_if<std::string>(&r.value)) return *s;
    return std::nullopt;
  };
  for (const auto& cls : tbox.ancestors(object_class)) {
    for (const auto& r : tbox.type(cls).restrictions) {
      if (r.property != "hasVisualProperty") continue;
      const auto* appearance = std::get_if<std::string>(&r.value);
      if (!appearance) continue;
      auto attr = lookup(*appearance, "attributeName");
      auto val = lookup(*appearance, "attributeValue");
      if (!attr || !val) continue;
      std::pair<std::string, std::string> pair{*attr, *val};
      if (std::find(out.begin(), out.end(), pair) == out.end()) out.push_back(std::move(pair));
    }
  }
  return out;
}

void check_value(const KnowledgeBase& kb, const PropertyDefinition& property, const Value& value) {
  auto mismatch = [&] {
    throw TypeCheckError("property " + property.name + " expects " + describe_range(property.range) + ", got " +
                         to_string(value));
  };
  if (property.range.primitive) {
    switch (*property.range.primitive) {
      case PrimitiveKind::String:
        if (!std::holds_alternative<std::string>(value)) mismatch();
        break;
      case PrimitiveKind::Real:
        if (!std::holds_alternative<double>(value) && !std::holds_alternative<std::int64_t>(value)) mismatch();
        break;
      case PrimitiveKind::Integer:
        if (!std::holds_alternative<std::int64_t>(value)) mismatch();
        break;
      case PrimitiveKind::Pose:
        if (!std::holds_alternative<Pose>(value)) mismatch();
        break;
      case PrimitiveKind::Vector:
        if (!std::holds_alternative<std::vector<double>>(value)) mismatch();
        break;
    }
    return;
  }
  const auto* s = std::get_if<std::string>(&value);
  if (!s || !conforms_to_class(kb, *s, property.range.type)) mismatch();
}

void validate_abox(const KnowledgeBase& kb) {
  const auto& abox = kb.abox;
  for (const auto& c : abox.concepts) {
    if (!abox.has_individual(c.individual)) throw UnknownReference("assertion about undeclared individual " + c.individual);
    if (!kb.tbox.has_type(c.type)) throw UnknownReference("undeclared type " + c.type);
  }
  for (const auto& r : abox.roles) {
    if (!abox.has_individual(r.subject)) throw UnknownReference("assertion about undeclared individual " + r.subject);
    const PropertyDefinition* def = kb.tbox.find_property(r.property);
    if (!def) throw UnknownReference("undeclared property " + r.property);
    check_value(kb, *def, r.object);
  }
  for (const auto& id : abox.individuals) {
    std::vector<std::string> types;
    for (const auto& c : abox.concepts)
      if (c.individual == id) types.push_back(c.type);
    for (const auto& p : kb.tbox.properties()) {
      if (p.cardinality.empty()) continue;
      bool applies = std::any_of(types.begin(), types.end(),
                                 [&](const std::string& t) { return kb.tbox.is_subclass_of(t, p.domain); });
      if (!applies) continue;
      int n = static_cast<int>(std::count_if(abox.roles.begin(), abox.roles.end(), [&](const RoleAssertion& r) {
        return r.subject == id && r.property == p.name;
      }));
      const auto& c = p.cardinality;
      if ((c.exact && n != *c.exact) || (c.min && n < *c.min) || (c.max && n > *c.max))
        throw TypeCheckError("individual " + id + " has " + std::to_string(n) + " " + p.name +
                             " assertions, violating its cardinality");
    }
  }
}

void merge_ontology(KnowledgeBase& kb, std::string_view document, std::string_view source) {
  Loader{kb, std::string(source)}.load(document);
}

KnowledgeBase load_ontology(std::string_view document, std::string_view source) {
  KnowledgeBase kb;
  merge_ontology(kb, kBuiltin, "<builtin>");
  merge_ontology(kb, document, source);
  return kb;
}

KnowledgeBase load_ontology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ontology " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_ontology(ss.str(), path);
}

std::string_view builtin_ontology() { return kBuiltin; }

}  // namespace rs
