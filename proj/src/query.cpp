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

#include "rs/query.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>

#include "rs/error.hpp"
#include "rs/sexpr.hpp"

namespace rs {

namespace {

using sexpr::Node;

const std::vector<std::string> kVerbs{"detect", "inspect", "track", "scan", "count"};
const std::vector<std::string> kDeterminers{"a", "an", "the"};
const std::vector<std::string> kTopKinds{"object", "object-part", "scene"};
const std::set<std::string> kRelations{"on", "in", "near"};

bool nests(std::string_view attribute, bool in_location) {
  return attribute == "location" || attribute == "part-of" ||
         (in_location && kRelations.count(std::string(attribute)));
}

[[noreturn]] void syntax(const Node& at, const std::string& msg, std::vector<std::string> expected = {}) {
  throw SyntaxError(msg, at.line, at.column, std::move(expected));
}

std::string strip_prefix(std::string s, char c) {
  if (!s.empty() && s.front() == c) s.erase(0, 1);
  return s;
}

class Parser {
 public:
  explicit Parser(const AttributeVocabulary& vocabulary) : vocab_(vocabulary) {}

  Query query(const Node& root) {
    if (!root.is_list()) syntax(root, "query must be a list", {"("});
    if (root.children.empty() || !root.children[0].is_atom()) syntax(root, "missing verb", kVerbs);
    const Node& verb = root.children[0];
    if (verb.is_symbol("detect")) {
      if (root.children.size() != 2) throw ArityError("detect takes exactly one description");
      return Detect{description(root.children[1], true, false)};
    }
    if (verb.is_symbol("inspect")) return inspect(root);
    if (verb.is_symbol("track") || verb.is_symbol("scan") || verb.is_symbol("count")) return compound(root);
    syntax(verb, "unknown verb '" + verb.text + "'", kVerbs);
  }

 private:
  Inspect inspect(const Node& root) {
    std::vector<const Node*> items;
    for (std::size_t i = 1; i < root.children.size(); ++i) {
      const Node& c = root.children[i];
      if (c.is_list()) {
        for (const auto& k : c.children) items.push_back(&k);
      } else {
        items.push_back(&c);
      }
    }
    if (items.empty()) throw ArityError("inspect needs an object id");
    Inspect q;
    for (const Node* n : items)
      if (!n->is_atom()) syntax(*n, "inspect takes an id and attribute names");
    q.uid = strip_prefix(items[0]->text, '#');
    if (q.uid.empty()) syntax(*items[0], "empty object id");
    for (std::size_t i = 1; i < items.size(); ++i) {
      std::string a = strip_prefix(items[i]->text, ':');
      check_attribute(a);
      q.attributes.push_back(std::move(a));
    }
    if (q.attributes.empty()) throw ArityError("inspect needs at least one attribute");
    return q;
  }

  Compound compound(const Node& root) {
    Compound q;
    q.verb = root.children[0].text;
    const Node* inner = nullptr;
    auto take = [&](const Node& list_or_atom, auto&& self) -> void {
      if (list_or_atom.is_atom()) {
        if (inner) syntax(list_or_atom, "words after the inner detect");
        q.wrapper.push_back(list_or_atom.text);
        return;
      }
      if (inner) syntax(list_or_atom, "more than one inner detect");
      const auto& ch = list_or_atom.children;
      if (!ch.empty() && ch[0].is_symbol("detect")) {
        if (ch.size() != 2) throw ArityError("detect takes exactly one description");
        inner = &ch[1];
      } else if (!ch.empty() && ch[0].is_atom() && is_determiner(ch[0])) {
        inner = &list_or_atom;
      } else {
        for (const auto& c : ch) self(c, self);
      }
    };
    for (std::size_t i = 1; i < root.children.size(); ++i) take(root.children[i], take);
    if (!inner) syntax(root, q.verb + " needs an inner detect", {"(detect"});
    q.inner = description(*inner, true, false);
    return q;
  }

  static bool is_determiner(const Node& n) {
    return n.is_symbol("a") || n.is_symbol("an") || n.is_symbol("the");
  }

  Description description(const Node& n, bool top, bool in_location) {
    if (!n.is_list() || n.children.empty()) syntax(n, "expected description", {"(a", "(an", "(the"});
    const Node& det = n.children[0];
    if (!is_determiner(det)) syntax(det, "expected determiner", kDeterminers);
    if (n.children.size() < 2 || !n.children[1].is_atom() || n.children[1].as_number())
      syntax(n, "expected kind after determiner", top ? kTopKinds : std::vector<std::string>{});
    Description d;
    d.determiner = det.text == "a" ? Determiner::A : det.text == "an" ? Determiner::An : Determiner::The;
    d.kind = n.children[1].text;
    if (top && std::find(kTopKinds.begin(), kTopKinds.end(), d.kind) == kTopKinds.end())
      syntax(n.children[1], "unknown kind '" + d.kind + "'", kTopKinds);
    bool loc = in_location || d.kind == "location";
    const auto& ch = n.children;
    for (std::size_t i = 2; i < ch.size(); ++i) {
      const Node& c = ch[i];
      if (c.is_atom()) {
        // bare `attr value` pair
        if (i + 1 >= ch.size() || !ch[i + 1].is_atom()) syntax(c, "attribute '" + c.text + "' has no value");
        d.constraints.push_back(pair(c, {&ch[i + 1]}, loc));
        ++i;
        continue;
      }
      if (!c.children.empty() && c.children[0].is_list()) {
        // parenthesised group of constraints
        for (const auto& g : c.children) d.constraints.push_back(constraint(g, loc));
        continue;
      }
      d.constraints.push_back(constraint(c, loc));
    }
    return d;
  }

  Constraint constraint(const Node& c, bool in_location) {
    if (!c.is_list() || c.children.empty() || !c.children[0].is_atom())
      syntax(c, "expected (attribute value)");
    std::vector<const Node*> rest;
    for (std::size_t i = 1; i < c.children.size(); ++i) rest.push_back(&c.children[i]);
    return pair(c.children[0], rest, in_location);
  }

  Constraint pair(const Node& attr_node, const std::vector<const Node*>& rest, bool in_location) {
    Constraint k;
    k.attribute = attr_node.text;
    check_attribute(k.attribute);
    if (rest.empty()) throw ArityError("attribute '" + k.attribute + "' has no value");
    bool nested_ok = nests(k.attribute, in_location);
    bool child_loc = in_location || k.attribute == "location";
    const Node& last = *rest.back();
    if (last.is_list() && !last.children.empty() && last.children[0].is_atom() && is_determiner(last.children[0])) {
      if (!nested_ok) syntax(last, "nested description not allowed under '" + k.attribute + "'");
      std::string relation;
      if (rest.size() == 2) {
        if (!rest[0]->is_atom() || !kRelations.count(rest[0]->text))
          syntax(*rest[0], "expected relation", {"in", "on", "near"});
        relation = rest[0]->text;
      } else if (rest.size() > 2) {
        throw ArityError("attribute '" + k.attribute + "' takes one value");
      }
      k.value = ConstraintValue::of_description(description(last, false, child_loc), relation);
      return k;
    }
    if (rest.size() == 1 && rest[0]->is_list()) {
      std::vector<double> tuple;
      for (const auto& e : rest[0]->children) {
        auto v = e.as_number();
        if (!v) syntax(e, "tuple elements must be numbers");
        tuple.push_back(*v);
      }
      k.value = ConstraintValue::of_tuple(std::move(tuple));
      return k;
    }
    if (rest.size() == 1) {
      if (auto v = rest[0]->as_number()) k.value = ConstraintValue::of_number(*v);
      else k.value = ConstraintValue::of_symbol(rest[0]->text);
      return k;
    }
    std::vector<double> tuple;
    for (const Node* e : rest) {
      auto v = e->as_number();
      if (!v) throw ArityError("attribute '" + k.attribute + "' takes one value");
      tuple.push_back(*v);
    }
    k.value = ConstraintValue::of_tuple(std::move(tuple));
    return k;
  }

  void check_attribute(const std::string& a) const {
    if (vocab_.contains(a)) return;
    std::string hint = vocab_.suggest(a);
    throw UnknownAttribute(a + (hint.empty() ? "" : " (did you mean '" + hint + "'?)"));
  }

  const AttributeVocabulary& vocab_;
};

std::string format_number(double v) {
  char buf[64];
  for (int p = 1; p <= 17; ++p) {
    std::snprintf(buf, sizeof buf, "%.*g", p, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string format_symbol(const std::string& s) {
  Node n;
  n.text = s;
  n.quoted = !sexpr::is_bare_symbol(s);
  return sexpr::to_string(n);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace

// ---------------------------------------------------------------- AST

std::string_view to_string(Determiner d) {
  switch (d) {
    case Determiner::A: return "a";
    case Determiner::An: return "an";
    case Determiner::The: return "the";
  }
  return "an";
}

ConstraintValue ConstraintValue::of_symbol(std::string s) {
  ConstraintValue v;
  v.tag = Tag::Symbol;
  v.symbol = std::move(s);
  return v;
}

ConstraintValue ConstraintValue::of_number(double x) {
  ConstraintValue v;
  v.tag = Tag::Number;
  v.number = x;
  return v;
}

ConstraintValue ConstraintValue::of_tuple(std::vector<double> t) {
  ConstraintValue v;
  v.tag = Tag::Tuple;
  v.tuple = std::move(t);
  return v;
}

ConstraintValue ConstraintValue::of_description(Description d, std::string relation) {
  ConstraintValue v;
  v.tag = Tag::Nested;
  v.relation = std::move(relation);
  v.nested = std::make_shared<const Description>(std::move(d));
  return v;
}

bool operator==(const ConstraintValue& a, const ConstraintValue& b) {
  if (a.tag != b.tag) return false;
  switch (a.tag) {
    case ConstraintValue::Tag::Symbol: return a.symbol == b.symbol;
    case ConstraintValue::Tag::Number: return a.number == b.number;
    case ConstraintValue::Tag::Tuple: return a.tuple == b.tuple;
    case ConstraintValue::Tag::Nested:
      return a.relation == b.relation && a.nested && b.nested && *a.nested == *b.nested;
  }
  return false;
}

const ConstraintValue* Description::find(std::string_view attribute) const {
  for (const auto& c : constraints)
    if (c.attribute == attribute) return &c.value;
  return nullptr;
}

// ---------------------------------------------------------------- vocabulary

AttributeVocabulary AttributeVocabulary::standard() {
  AttributeVocabulary v;
  for (const char* n : {"shape", "color", "type", "location", "class", "pose", "cad-model", "obj-part", "size",
                        "part-of", "logo", "text", "capacity", "volume", "width", "command", "category",
                        "grasp-points", "linemod", "on", "in", "near"})
    v.add(n);
  return v;
}

void AttributeVocabulary::add(std::string name) { names_.insert(std::move(name)); }

bool AttributeVocabulary::contains(std::string_view name) const { return names_.count(std::string(name)) > 0; }

std::string AttributeVocabulary::suggest(std::string_view name) const {
  std::string best;
  std::size_t best_d = std::max<std::size_t>(2, name.size() / 3) + 1;
  for (const auto& n : names_) {
    std::size_t d = edit_distance(name, n);
    if (d < best_d) {
      best_d = d;
      best = n;
    }
  }
  return best;
}

// ---------------------------------------------------------------- parse / format

Query parse_query(std::string_view text, ParseMode mode, const AttributeVocabulary& vocabulary) {
  sexpr::ReadOptions opts;
  opts.close_unbalanced = mode == ParseMode::Lenient;
  opts.allow_comments = false;
  Node root;
  try {
    root = sexpr::read_one(text, opts);
  } catch (const SyntaxError&) {
    throw;
  } catch (const ParseError& e) {
    throw SyntaxError(e.message(), e.line(), e.column(), {")"});
  }
  return Parser(vocabulary).query(root);
}

std::string format_value(const ConstraintValue& v) {
  switch (v.tag) {
    case ConstraintValue::Tag::Symbol: return format_symbol(v.symbol);
    case ConstraintValue::Tag::Number: return format_number(v.number);
    case ConstraintValue::Tag::Tuple: {
      std::string s = "(";
      for (std::size_t i = 0; i < v.tuple.size(); ++i) s += (i ? " " : "") + format_number(v.tuple[i]);
      return s + ")";
    }
    case ConstraintValue::Tag::Nested:
      return (v.relation.empty() ? "" : v.relation + " ") + format_description(*v.nested);
  }
  return {};
}

std::string format_description(const Description& d) {
  std::string s = "(" + std::string(to_string(d.determiner)) + " " + format_symbol(d.kind);
  for (const auto& c : d.constraints) s += " (" + c.attribute + " " + format_value(c.value) + ")";
  return s + ")";
}

std::string format_query(const Query& q) {
  if (const auto* d = std::get_if<Detect>(&q)) return "(detect " + format_description(d->description) + ")";
  if (const auto* i = std::get_if<Inspect>(&q)) {
    std::string s = "(inspect " + format_symbol("#" + i->uid);
    for (const auto& a : i->attributes) s += " :" + a;
    return s + ")";
  }
  const auto& c = std::get<Compound>(q);
  std::string inner = "(detect " + format_description(c.inner) + ")";
  if (c.wrapper.empty()) return "(" + c.verb + " " + inner + ")";
  std::string s = "(" + c.verb + " (";
  for (const auto& w : c.wrapper) s += format_symbol(w) + " ";
  return s + inner + "))";
}

// ---------------------------------------------------------------- semantics

namespace {

void collect(const Description& d, std::set<std::string>& out) {
  for (const auto& c : d.constraints) {
    out.insert(c.attribute);
    if (c.value.tag == ConstraintValue::Tag::Nested) collect(*c.value.nested, out);
  }
}

bool subsumed(const KnowledgeBase& kb, const std::string& sub, const std::string& super_name) {
  std::string super = kb.resolve_type_name(super_name);
  std::string s = kb.resolve_type_name(sub);
  if (s == super) return true;
  if (!kb.tbox.has_type(s) || !kb.tbox.has_type(super)) return false;
  return kb.tbox.is_subclass_of(s, super);
}

bool region_matches(const Description& d, const SemanticRegion& r, const KnowledgeBase& kb) {
  if (kb.tbox.has_type(kb.resolve_type_name(d.kind)) && !subsumed(kb, r.kind, d.kind)) return false;
  for (const auto& c : d.constraints) {
    const auto& v = c.value;
    if (c.attribute == "category") {
      if (v.tag != ConstraintValue::Tag::Symbol || v.symbol != r.label) return false;
    } else if (c.attribute == "type" || c.attribute == "class") {
      if (v.tag != ConstraintValue::Tag::Symbol || !subsumed(kb, r.kind, v.symbol)) return false;
    } else if (v.tag == ConstraintValue::Tag::Nested) {
      if (!region_matches(*v.nested, r, kb)) return false;
    } else {
      return false;
    }
  }
  return true;
}

bool has_symbol(const ObjectView& o, const std::string& attr, const std::string& value) {
  auto it = o.symbols.find(attr);
  return it != o.symbols.end() && std::find(it->second.begin(), it->second.end(), value) != it->second.end();
}

bool holds(const Constraint& c, const ObjectView& o, const KnowledgeBase& kb,
           const std::vector<SemanticRegion>& map) {
  const auto& v = c.value;
  const std::string& a = c.attribute;
  if (a == "command" || a == "width" || a == "grasp-points") return true;
  if (a == "pose") return v.tag != ConstraintValue::Tag::Symbol || has_symbol(o, a, v.symbol);
  if (a == "type" || a == "category") {
    if (v.tag != ConstraintValue::Tag::Symbol) return false;
    auto it = o.symbols.find("class");
    if (it == o.symbols.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](const std::string& label) { return subsumed(kb, label, v.symbol); });
  }
  if (a == "location") {
    if (o.location.empty()) return false;
    if (v.tag == ConstraintValue::Tag::Symbol) return o.location == v.symbol;
    if (v.tag != ConstraintValue::Tag::Nested) return false;
    return std::any_of(map.begin(), map.end(), [&](const SemanticRegion& r) {
      return r.label == o.location && region_matches(*v.nested, r, kb);
    });
  }
  if (a == "part-of") {
    if (o.whole_type.empty()) return false;
    if (v.tag == ConstraintValue::Tag::Symbol) return subsumed(kb, o.whole_type, v.symbol);
    if (v.tag != ConstraintValue::Tag::Nested) return false;
    for (const auto& k : v.nested->constraints) {
      if ((k.attribute == "type" || k.attribute == "class") && k.value.tag == ConstraintValue::Tag::Symbol) {
        if (!subsumed(kb, o.whole_type, k.value.symbol)) return false;
      } else {
        return false;
      }
    }
    return true;
  }
  std::string key = a == "volume" ? "capacity" : a;
  if (v.tag == ConstraintValue::Tag::Number) {
    auto it = o.numbers.find(key);
    return it != o.numbers.end() && it->second >= v.number;
  }
  if (v.tag == ConstraintValue::Tag::Symbol) return has_symbol(o, key, v.symbol);
  return false;
}

}  // namespace

std::set<std::string> required_attributes(const Query& q) {
  std::set<std::string> out;
  if (const auto* d = std::get_if<Detect>(&q)) {
    collect(d->description, out);
  } else if (const auto* i = std::get_if<Inspect>(&q)) {
    out.insert(i->attributes.begin(), i->attributes.end());
  } else {
    const auto& c = std::get<Compound>(q);
    collect(c.inner, out);
    if (c.verb == "count") {
      out.insert("pose");
      out.insert("width");
    }
  }
  return out;
}

const Description* query_description(const Query& q) {
  if (const auto* d = std::get_if<Detect>(&q)) return &d->description;
  if (const auto* c = std::get_if<Compound>(&q)) return &c->inner;
  return nullptr;
}

bool match_object(const Description& desc, const ObjectView& obj, const KnowledgeBase& kb,
                  const std::vector<SemanticRegion>& semantic_map) {
  return std::all_of(desc.constraints.begin(), desc.constraints.end(),
                     [&](const Constraint& c) { return holds(c, obj, kb, semantic_map); });
}

std::vector<std::string> resolve_determiner(Determiner det, const std::vector<std::string>& matches) {
  if (det != Determiner::The) return matches;
  if (matches.empty()) throw NotFound("no object matches the description");
  if (matches.size() > 1) throw AmbiguityError(matches);
  return matches;
}

}  // namespace rs
