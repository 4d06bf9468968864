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

#include "rs/registry.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rs/error.hpp"

namespace rs {

std::string_view to_string(AnnotatorKind k) {
  switch (k) {
    case AnnotatorKind::HypothesisGenerator: return "hypothesisGenerator";
    case AnnotatorKind::Annotator: return "annotator";
    case AnnotatorKind::Both: return "both";
  }
  return "annotator";
}

bool AnnotatorDescriptor::produces(std::string_view type) const {
  return std::find(outputs.begin(), outputs.end(), type) != outputs.end();
}

bool feasible_on_robot(const AnnotatorDescriptor& d, const RobotProfile& robot) {
  return std::all_of(d.capabilities.begin(), d.capabilities.end(),
                     [&](const std::string& c) { return robot.capabilities.count(c) > 0; });
}

RobotProfile robot_profile_from(const KnowledgeBase& kb) {
  for (const auto& c : kb.abox.concepts) {
    if (!kb.tbox.is_subclass_of(c.type, "Robot")) continue;
    RobotProfile r;
    r.name = c.individual;
    for (const auto& role : kb.abox.roles) {
      if (role.subject != r.name || role.property != "hasCapability") continue;
      const auto& cap = std::get<std::string>(role.object);
      if (!kb.tbox.has_type(cap) || !kb.tbox.is_subclass_of(cap, "Capability"))
        throw UnknownReference("robot " + r.name + " lists " + cap + ", which is not a Capability");
      r.capabilities.insert(cap);
    }
    return r;
  }
  throw NotFound("no individual of type Robot");
}

RobotProfile load_robot_profile(const KnowledgeBase& base, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open robot profile " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  KnowledgeBase kb = base;
  merge_ontology(kb, ss.str(), path);
  return robot_profile_from(kb);
}

double ExpertContext::param(const std::string& annotator, const std::string& key, double fallback) const {
  auto a = params.find(annotator);
  if (a == params.end()) return fallback;
  auto k = a->second.find(key);
  return k == a->second.end() ? fallback : k->second;
}

// ---------------------------------------------------------------- registry

namespace {

void check_acyclic(const std::vector<AnnotatorDescriptor>& all) {
  std::map<std::string, std::set<std::string>> edges;
  for (const auto& d : all)
    for (const auto& in : d.inputs)
      for (const auto& out : d.outputs) edges[in].insert(out);
  std::map<std::string, int> mark;
  std::vector<std::string> path;
  auto visit = [&](auto&& self, const std::string& t) -> void {
    mark[t] = 1;
    path.push_back(t);
    for (const auto& n : edges[t]) {
      if (mark[n] == 1) {
        std::string cycle;
        for (auto it = std::find(path.begin(), path.end(), n); it != path.end(); ++it) cycle += *it + " -> ";
        throw CycleError("annotator dependency cycle " + cycle + n);
      }
      if (mark[n] == 0) self(self, n);
    }
    path.pop_back();
    mark[t] = 2;
  };
  for (const auto& [t, _] : edges)
    if (mark[t] == 0) visit(visit, t);
}

}  // namespace

void Registry::add(AnnotatorDescriptor d, AnnotatorFn fn) {
  TBox& tbox = kb_->tbox;
  if (contains(d.name) || tbox.has_type(d.name)) throw DuplicateName("annotator " + d.name + " already registered");
  if (d.outputs.empty()) throw UnsatisfiableDefinition("annotator " + d.name + " produces nothing");
  for (const auto* list : {&d.inputs, &d.outputs})
    for (const auto& t : *list) {
      tbox.type(t);
      if (!tbox.is_subclass_of(t, "FeatureStructure"))
        throw TypeCheckError("annotator " + d.name + ": " + t + " is not an annotation type");
    }
  for (const auto& c : d.capabilities) {
    tbox.type(c);
    if (!tbox.is_subclass_of(c, "Capability"))
      throw TypeCheckError("annotator " + d.name + ": " + c + " is not a capability");
  }
  if (!d.output_domain.empty() &&
      std::none_of(d.outputs.begin(), d.outputs.end(),
                   [&](const std::string& t) { return tbox.is_subclass_of(t, "SemanticAnnotation"); }))
    throw UnsatisfiableDefinition("annotator " + d.name + " has an output domain but no symbolic output");
  if (d.cost_hint < 0.0) d.cost_hint = d.task_specific ? 2.0 : d.kind == AnnotatorKind::Annotator ? 0.5 : 1.0;

  std::vector<AnnotatorDescriptor> all = descriptors_;
  all.push_back(d);
  check_acyclic(all);

  TypeSymbol cls;
  cls.name = d.name;
  cls.parents = {d.kind == AnnotatorKind::Annotator ? "AnnotationComponent" : "HypothesisGeneratorComponent"};
  for (const auto& t : d.inputs) cls.restrictions.push_back({"perceptualInputRequired", t});
  for (const auto& t : d.outputs) cls.restrictions.push_back({"perceptualOutput", t});
  for (const auto& c : d.capabilities) cls.restrictions.push_back({"dependsOnCapability", c});
  for (const auto& v : d.output_domain) cls.restrictions.push_back({"outputDomain", v});
  tbox.add_type(std::move(cls));

  descriptors_.push_back(std::move(d));
  impls_.push_back(std::move(fn));
}

bool Registry::contains(std::string_view name) const {
  return std::any_of(descriptors_.begin(), descriptors_.end(), [&](const auto& d) { return d.name == name; });
}

std::size_t Registry::rank(std::string_view name) const {
  for (std::size_t i = 0; i < descriptors_.size(); ++i)
    if (descriptors_[i].name == name) return i;
  throw NotFound("no annotator named " + std::string(name));
}

const AnnotatorDescriptor& Registry::descriptor(std::string_view name) const { return descriptors_[rank(name)]; }

double Registry::cost(const AnnotatorDescriptor& d) const { return d.cost_hint; }

void Registry::run(std::string_view name, Cas& cas, const ExpertContext& ctx) const {
  std::size_t i = rank(name);
  const auto& d = descriptors_[i];
  std::vector<std::string> missing;
  for (const auto& t : d.inputs)
    if (!cas.has_type(kb_->tbox, t)) missing.push_back(t);
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw PreconditionUnmet(d.name + " needs " + list);
  }
  std::vector<std::pair<std::string, std::size_t>> before;
  for (const auto& h : cas.hypotheses) before.emplace_back(h.id, h.annotations.size());
  std::size_t scene_before = cas.scene.size();
  ExpertContext local = ctx;
  if (!local.kb) local.kb = kb_;
  impls_[i](cas, local);
  bool ok = cas.hypotheses.size() >= before.size() && cas.scene.size() >= scene_before;
  for (std::size_t k = 0; ok && k < before.size(); ++k)
    ok = cas.hypotheses[k].id == before[k].first && cas.hypotheses[k].annotations.size() >= before[k].second;
  if (!ok) throw Error("MonotonicityViolation", d.name + " removed hypotheses or annotations");
}

}  // namespace rs
