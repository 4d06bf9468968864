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

#include "rs/planner.hpp"

#include <algorithm>
#include <cctype>
#include <queue>
#include <tuple>

#include "rs/error.hpp"

namespace rs {

bool Pipeline::contains(std::string_view name) const {
  return std::find(annotators.begin(), annotators.end(), name) != annotators.end();
}

const std::map<std::string, std::string>& attribute_types() {
  static const std::map<std::string, std::string> table{
      {"shape", "ShapeAnnotation"},
      {"color", "SemanticColorAnnotation"},
      {"location", "LocationAnnotation"},
      {"on", "LocationAnnotation"},
      {"in", "LocationAnnotation"},
      {"near", "LocationAnnotation"},
      {"class", "ClassificationAnnotation"},
      {"type", "ClassificationAnnotation"},
      {"category", "ClassificationAnnotation"},
      {"pose", "PoseAnnotation"},
      {"size", "SizeAnnotation"},
      {"obj-part", "PartAnnotation"},
      {"part-of", "PartOfAnnotation"},
      {"cad-model", "SacModelAnnotation"},
      {"logo", "LogoAtom"},
      {"text", "TextAtom"},
      {"linemod", "LinemodAtom"},
      {"capacity", "VolumeAnnotation"},
      {"volume", "VolumeAnnotation"},
      {"width", "DimensionAnnotation"},
      {"grasp-points", "GraspPointAnnotation"},
  };
  return table;
}

std::vector<Requirement> requirements_of(const Query& q) {
  std::vector<Requirement> out;
  const auto& table = attribute_types();
  auto add = [&](const std::string& attribute, const std::string& value) {
    auto it = table.find(attribute);
    if (it != table.end()) out.push_back({attribute, it->second, value});
  };
  if (const auto* inspect = std::get_if<Inspect>(&q)) {
    for (const auto& a : inspect->attributes) add(a, "");
    return out;
  }
  if (const Description* d = query_description(q))
    for (const auto& c : d->constraints)
      add(c.attribute, c.value.tag == ConstraintValue::Tag::Symbol ? c.value.symbol : "");
  return out;
}

namespace {

bool satisfies(const TBox& tbox, const std::string& produced, const std::string& needed) {
  if (produced == needed) return true;
  return tbox.has_type(produced) && tbox.has_type(needed) && tbox.is_subclass_of(produced, needed);
}

bool from_reader(const TBox& tbox, const std::string& type) {
  const auto& reader = reader_types();
  return std::any_of(reader.begin(), reader.end(), [&](const std::string& r) { return satisfies(tbox, r, type); });
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

std::string missing_capability(const AnnotatorDescriptor& d, const RobotProfile& robot) {
  for (const auto& c : d.capabilities)
    if (!robot.capabilities.count(c)) return c;
  return {};
}

class Search {
 public:
  Search(const Registry& reg, const RobotProfile& robot, const std::vector<Requirement>& reqs)
      : reg_(reg), tbox_(reg.kb().tbox), robot_(robot), reqs_(reqs) {
    const auto& all = reg.descriptors();
    usable_.resize(all.size());
    level_.assign(all.size(), -1);
    for (std::size_t i = 0; i < all.size(); ++i) usable_[i] = admissible(all[i]) && feasible_on_robot(all[i], robot);
    for (int round = 0;; ++round) {
      std::vector<std::size_t> fresh;
      for (std::size_t i = 0; i < all.size(); ++i) {
        if (!usable_[i] || level_[i] >= 0) continue;
        bool ready = std::all_of(all[i].inputs.begin(), all[i].inputs.end(),
                                 [&](const std::string& t) { return available(t, round); });
        if (ready) fresh.push_back(i);
      }
      if (fresh.empty()) break;
      for (auto i : fresh) level_[i] = round;
    }
  }

  bool admissible(const AnnotatorDescriptor& d) const {
    if (!d.task_specific) return true;
    for (const auto& r : reqs_) {
      if (r.value.empty()) continue;
      for (const auto& v : d.output_domain) {
        bool semantic = r.attribute == "type" || r.attribute == "class" || r.attribute == "category";
        if (semantic && tbox_.has_type(v) && tbox_.has_type(r.value) && tbox_.is_subclass_of(v, r.value)) return true;
        if (iequals(v, r.value)) return true;
      }
    }
    return false;
  }

  bool produces(std::size_t i, const std::string& type) const {
    const auto& outs = reg_.descriptors()[i].outputs;
    return std::any_of(outs.begin(), outs.end(), [&](const std::string& o) { return satisfies(tbox_, o, type); });
  }

  /// Producible by the reader or by an annotator reachable before `round`.
  bool available(const std::string& type, int round) const {
    if (from_reader(tbox_, type)) return true;
    for (std::size_t i = 0; i < level_.size(); ++i)
      if (level_[i] >= 0 && level_[i] < round && produces(i, type)) return true;
    return false;
  }

  bool reachable(const std::string& type) const { return available(type, static_cast<int>(level_.size()) + 1); }

  /// Already produced by the reader or by a selected annotator below `max_level`.
  bool present(const std::string& type, const std::vector<std::size_t>& selected, int max_level) const {
    if (from_reader(tbox_, type)) return true;
    return std::any_of(selected.begin(), selected.end(),
                       [&](std::size_t i) { return level_[i] >= 0 && level_[i] < max_level && produces(i, type); });
  }

  using Added = std::vector<std::pair<std::size_t, std::string>>;

  /// Annotators that must join `selected` so that `type` becomes available,
  /// drawing only on providers below `max_level`.
  Added close(const std::string& type, int max_level, const std::vector<std::size_t>& selected,
              const std::string& reason) const {
    if (present(type, selected, max_level)) return {};
    const auto& all = reg_.descriptors();
    std::optional<Added> best;
    std::tuple<std::size_t, double, std::string> best_key;
    for (std::size_t c = 0; c < all.size(); ++c) {
      if (level_[c] < 0 || level_[c] >= max_level || !produces(c, type)) continue;
      Added added{{c, reason}};
      std::vector<std::size_t> sel = selected;
      sel.push_back(c);
      for (const auto& in : all[c].inputs)
        for (auto& [k, why] : close(in, level_[c], sel, "precondition-of " + all[c].name)) {
          sel.push_back(k);
          added.emplace_back(k, why);
        }
      auto key = std::make_tuple(added.size(), reg_.cost(all[c]), all[c].name);
      if (!best || key < best_key) {
        best = std::move(added);
        best_key = key;
      }
    }
    return best.value_or(Added{});
  }

  int top() const { return static_cast<int>(level_.size()) + 1; }
  bool usable(std::size_t i) const { return usable_[i]; }
  int level(std::size_t i) const { return level_[i]; }

  [[noreturn]] void diagnose(const Requirement& req) const {
    std::set<std::string> seen;
    diagnose(req.type, req.attribute, seen);
    throw NoProvider("no annotator can produce " + req.type + " for attribute " + req.attribute);
  }

 private:
  void diagnose(const std::string& type, const std::string& attribute, std::set<std::string>& seen) const {
    if (!seen.insert(type).second) return;
    const auto& all = reg_.descriptors();
    std::vector<std::size_t> producers, admitted, runnable;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (!produces(i, type)) continue;
      producers.push_back(i);
      if (!admissible(all[i])) continue;
      admitted.push_back(i);
      if (feasible_on_robot(all[i], robot_)) runnable.push_back(i);
    }
    if (producers.empty()) throw NoProvider("no annotator produces " + type + " (attribute " + attribute + ")");
    if (admitted.empty())
      throw NoProvider("only task-specific annotators produce " + type + " and the query does not call for them");
    if (runnable.empty()) {
      const auto& d = all[admitted.front()];
      throw CapabilityMissing(d.name + " needs " + missing_capability(d, robot_));
    }
    for (auto i : runnable)
      for (const auto& in : all[i].inputs)
        if (!reachable(in)) diagnose(in, attribute, seen);
  }

  const Registry& reg_;
  const TBox& tbox_;
  const RobotProfile& robot_;
  const std::vector<Requirement>& reqs_;
  std::vector<bool> usable_;
  std::vector<int> level_;
};

/// Kahn's algorithm over "output satisfies input" edges, ties broken by
/// registration order. Edges only run from a lower to a higher level of the
/// reachability fixpoint over the chosen set, so mutual satisfaction between
/// two annotators never blocks the order.
std::vector<std::string> order(const Registry& reg, const std::vector<std::size_t>& chosen) {
  const TBox& tbox = reg.kb().tbox;
  const auto& all = reg.descriptors();
  std::vector<std::size_t> nodes = chosen;
  std::sort(nodes.begin(), nodes.end());
  std::map<std::size_t, int> level;
  for (int round = 0;; ++round) {
    std::vector<std::size_t> fresh;
    for (auto b : nodes) {
      if (level.count(b)) continue;
      bool ready = std::all_of(all[b].inputs.begin(), all[b].inputs.end(), [&](const std::string& in) {
        return from_reader(tbox, in) || std::any_of(level.begin(), level.end(), [&](const auto& kv) {
                 return std::any_of(all[kv.first].outputs.begin(), all[kv.first].outputs.end(),
                                    [&](const std::string& o) { return satisfies(tbox, o, in); });
               });
      });
      if (ready) fresh.push_back(b);
    }
    if (fresh.empty()) break;
    for (auto b : fresh) level[b] = round;
  }
  if (level.size() != nodes.size()) throw CycleError("planned annotators depend on each other cyclically");
  std::map<std::size_t, std::vector<std::size_t>> next;
  std::map<std::size_t, int> indegree;
  for (auto b : nodes) indegree[b] = 0;
  for (auto a : nodes)
    for (auto b : nodes) {
      if (level[a] >= level[b]) continue;
      bool edge = false;
      for (const auto& o : all[a].outputs)
        for (const auto& in : all[b].inputs) edge = edge || satisfies(tbox, o, in);
      if (edge) {
        next[a].push_back(b);
        ++indegree[b];
      }
    }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (auto [n, d] : indegree)
    if (d == 0) ready.push(n);
  std::vector<std::string> out;
  while (!ready.empty()) {
    auto n = ready.top();
    ready.pop();
    out.push_back(all[n].name);
    for (auto m : next[n])
      if (--indegree[m] == 0) ready.push(m);
  }
  if (out.size() != nodes.size()) throw CycleError("planned annotators depend on each other cyclically");
  return out;
}

}  // namespace

bool validate_pipeline(const Registry& registry, const RobotProfile& robot, const Pipeline& p) {
  const TBox& tbox = registry.kb().tbox;
  std::set<std::string> seen;
  std::vector<std::string> produced;
  for (const auto& name : p.annotators) {
    if (!seen.insert(name).second || !registry.contains(name)) return false;
    const auto& d = registry.descriptor(name);
    if (!feasible_on_robot(d, robot)) return false;
    for (const auto& in : d.inputs) {
      bool ok = from_reader(tbox, in) || std::any_of(produced.begin(), produced.end(), [&](const std::string& o) {
                  return satisfies(tbox, o, in);
                });
      if (!ok) return false;
    }
    produced.insert(produced.end(), d.outputs.begin(), d.outputs.end());
  }
  return true;
}

bool covers(const Registry& registry, const Pipeline& p, const std::vector<std::string>& types) {
  const TBox& tbox = registry.kb().tbox;
  return std::all_of(types.begin(), types.end(), [&](const std::string& t) {
    return std::any_of(p.annotators.begin(), p.annotators.end(), [&](const std::string& name) {
      const auto& outs = registry.descriptor(name).outputs;
      return std::any_of(outs.begin(), outs.end(), [&](const std::string& o) { return satisfies(tbox, o, t); });
    });
  });
}

Planner::Planner(const Registry& registry, RobotProfile robot, std::vector<std::string> continuous_base)
    : registry_(&registry), robot_(std::move(robot)), base_(std::move(continuous_base)) {}

bool Planner::feasible(const std::string& annotator) const {
  return feasible_on_robot(registry_->descriptor(annotator), robot_);
}

Pipeline Planner::plan(const std::vector<Requirement>& requirements, const PlannerOptions& options) const {
  Pipeline base;
  base.annotators = base_;
  for (const auto& n : base_) base.provenance[n] = "continuous-base";
  if (requirements.empty()) return base;

  std::vector<std::string> types;
  for (const auto& r : requirements) types.push_back(r.type);
  bool base_ok = validate_pipeline(*registry_, robot_, base);
  if (base_ok && covers(*registry_, base, types) && !options.include_all_activated) return base;

  Search search(*registry_, robot_, requirements);
  const auto& all = registry_->descriptors();
  std::vector<std::size_t> selected;
  std::map<std::size_t, std::string> why;
  if (base_ok)
    for (const auto& n : base_) {
      selected.push_back(registry_->rank(n));
      why[selected.back()] = "continuous-base";
    }
  auto take = [&](const Search::Added& added) {
    for (const auto& [k, reason] : added) {
      if (std::find(selected.begin(), selected.end(), k) != selected.end()) continue;
      selected.push_back(k);
      why[k] = reason;
    }
  };
  for (const auto& r : requirements) {
    if (!search.reachable(r.type)) search.diagnose(r);
    take(search.close(r.type, search.top(), selected, "query-attribute"));
  }
  if (options.include_all_activated)
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (!all[i].task_specific || !search.usable(i) || search.level(i) < 0) continue;
      if (std::find(selected.begin(), selected.end(), i) != selected.end()) continue;
      selected.push_back(i);
      why[i] = "query-attribute";
      for (const auto& in : all[i].inputs)
        take(search.close(in, search.level(i), selected, "precondition-of " + all[i].name));
    }

  Pipeline p;
  p.annotators = order(*registry_, selected);
  for (auto& [k, reason] : why) p.provenance[all[k].name] = reason;
  return p;
}

Pipeline Planner::plan_for_query(const Query& q, const PlannerOptions& options) const {
  return plan(requirements_of(q), options);
}

Pipeline Planner::plan_for_attributes(const std::set<std::string>& attributes) const {
  std::vector<Requirement> reqs;
  const auto& table = attribute_types();
  for (const auto& a : attributes) {
    if (a == "command") continue;
    auto it = table.find(a);
    if (it == table.end()) throw UnknownAttribute("no annotation type for attribute " + a);
    reqs.push_back({a, it->second, ""});
  }
  return plan(reqs);
}

Pipeline Planner::plan_for_types(const std::vector<std::string>& types) const {
  std::vector<Requirement> reqs;
  for (const auto& t : types) reqs.push_back({t, t, ""});
  return plan(reqs);
}

Pipeline Planner::plan_for_object(const std::string& object_class) const {
  const auto& kb = registry_->kb();
  std::string cls = kb.resolve_type_name(object_class);
  auto props = visual_properties_of(kb.tbox, cls);
  if (props.empty()) throw NoDescription(cls + " has no visual properties");
  std::set<std::string> attributes;
  for (const auto& [attr, value] : props) attributes.insert(attr);
  return plan_for_attributes(attributes);
}

std::map<std::string, Pipeline> Planner::plan_for_subclasses(const std::string& super_class) const {
  const auto& kb = registry_->kb();
  std::string cls = kb.resolve_type_name(super_class);
  kb.tbox.type(cls);
  std::map<std::string, Pipeline> out;
  for (const auto& sub : kb.tbox.descendants(cls))
    if (!visual_properties_of(kb.tbox, sub).empty()) out.emplace(sub, plan_for_object(sub));
  return out;
}

Pipeline Planner::plan_inspection(const std::map<std::string, ObjectView>& objects, const std::string& id,
                                  const std::vector<std::string>& attributes) const {
  auto it = objects.find(id);
  if (it == objects.end()) throw UnknownObject("no object " + id + " in the belief state");
  const ObjectView& obj = it->second;
  const TBox& tbox = registry_->kb().tbox;
  auto values = [&](const std::string& attr) {
    auto s = obj.symbols.find(attr);
    return s == obj.symbols.end() ? std::vector<std::string>{} : s->second;
  };
  std::vector<Requirement> reqs;
  const auto& table = attribute_types();
  for (const auto& a : attributes) {
    if (a == "capacity" || a == "volume") {
      auto classes = values("class");
      bool container = tbox.has_type("Container") &&
                       std::any_of(classes.begin(), classes.end(), [&](const std::string& c) {
                         return tbox.has_type(c) && tbox.is_subclass_of(c, "Container");
                       });
      auto shapes = values("shape");
      bool round = std::find(shapes.begin(), shapes.end(), "round") != shapes.end();
      if (!container || !round) throw Unsupported("volume is estimated only for round containers, not " + id);
      reqs.push_back({a, "SacModelAnnotation", ""});
      continue;
    }
    auto t = table.find(a);
    if (t == table.end()) throw UnknownAttribute("no annotation type for attribute " + a);
    reqs.push_back({a, t->second, ""});
  }
  return plan(reqs);
}

std::optional<Pipeline> Planner::plan_with_dependents(const std::string& object_class,
                                                      const std::string& dependent_class,
                                                      const ABox& belief) const {
  const auto& kb = registry_->kb();
  std::string dep = kb.resolve_type_name(dependent_class);
  kb.tbox.type(dep);
  if (individuals_of(kb.tbox, dep, belief).empty()) return std::nullopt;
  return plan_for_object(object_class);
}

}  // namespace rs
