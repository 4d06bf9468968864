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

#include "rs/cas.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "rs/error.hpp"

namespace rs {

using nlohmann::json;

void Observation::validate() const {
  if (width <= 0 || height <= 0) throw InvalidObservation("raster must be at least 1x1");
  if (color.size() != size())
    throw InvalidObservation("color raster has " + std::to_string(color.size()) + " pixels, expected " +
                             std::to_string(size()));
  if (depth.size() != size())
    throw InvalidObservation("depth raster has " + std::to_string(depth.size()) + " pixels, expected " +
                             std::to_string(size()));
  double n = 0.0;
  for (double q : camera_pose.orientation) n += q * q;
  if (std::abs(std::sqrt(n) - 1.0) > 1e-6) throw InvalidObservation("camera orientation is not a unit quaternion");
  if (!(blur_score >= 0.0)) throw InvalidObservation("blur score must be non-negative");
}

const Value* Annotation::get(std::string_view property) const {
  for (const auto& [k, v] : fields)
    if (k == property) return &v;
  return nullptr;
}

std::string Annotation::text(std::string_view property) const {
  const Value* v = get(property);
  const auto* s = v ? std::get_if<std::string>(v) : nullptr;
  return s ? *s : std::string();
}

std::optional<double> Annotation::number(std::string_view property) const {
  const Value* v = get(property);
  if (!v) return std::nullopt;
  if (const auto* d = std::get_if<double>(v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(v)) return static_cast<double>(*i);
  return std::nullopt;
}

Annotation make_annotation(std::string type, std::vector<std::pair<std::string, Value>> fields) {
  return Annotation{{}, std::move(type), std::move(fields)};
}

const Hypothesis& Cas::hypothesis(std::string_view id) const {
  for (const auto& h : hypotheses)
    if (h.id == id) return h;
  throw UnknownHypothesis(std::string(id));
}

Hypothesis& Cas::hypothesis(std::string_view id) {
  return const_cast<Hypothesis&>(static_cast<const Cas&>(*this).hypothesis(id));
}

const std::vector<std::string>& reader_types() {
  static const std::vector<std::string> types{"RsColorImage", "RsDepthImage", "RsCameraInfo"};
  return types;
}

bool Cas::has_type(const TBox& tbox, std::string_view type) const {
  auto sub = [&](const std::string& t) { return t == type || (tbox.has_type(t) && tbox.is_subclass_of(t, type)); };
  if (std::any_of(reader_types().begin(), reader_types().end(), sub)) return true;
  for (const auto& a : scene)
    if (sub(a.type)) return true;
  for (const auto& h : hypotheses) {
    if (sub(h.type)) return true;
    for (const auto& a : h.annotations)
      if (sub(a.type)) return true;
  }
  return false;
}

bool operator==(const Cas& a, const Cas& b) {
  return a.observation == b.observation && a.hypotheses == b.hypotheses && a.scene == b.scene &&
         a.views == b.views && a.query == b.query && a.next_id == b.next_id;
}

Cas init_cas(Observation obs) {
  obs.validate();
  Cas cas;
  cas.observation = std::move(obs);
  return cas;
}

std::string add_hypothesis(Cas& cas, Region region, std::string type) {
  if (region.empty()) throw RegionOutOfBounds("empty region");
  std::sort(region.begin(), region.end());
  region.erase(std::unique(region.begin(), region.end()), region.end());
  if (region.back() >= cas.observation.size())
    throw RegionOutOfBounds("pixel " + std::to_string(region.back()) + " outside " +
                            std::to_string(cas.observation.width) + "x" + std::to_string(cas.observation.height));
  Hypothesis h;
  h.id = "h" + std::to_string(cas.next_id++);
  h.type = std::move(type);
  h.region = std::move(region);
  cas.hypotheses.push_back(std::move(h));
  return cas.hypotheses.back().id;
}

void check_annotation(const KnowledgeBase& kb, const Annotation& a) {
  if (!kb.tbox.has_type(a.type)) throw TypeCheckError("undeclared annotation type " + a.type);
  std::map<std::string, int> counts;
  for (const auto& [prop, value] : a.fields) {
    const PropertyDefinition* def = kb.tbox.find_property(prop);
    if (!def) throw TypeCheckError("undeclared property " + prop + " on " + a.type);
    if (!kb.tbox.is_subclass_of(a.type, def->domain))
      throw TypeCheckError("property " + prop + " does not apply to " + a.type);
    check_value(kb, *def, value);
    ++counts[prop];
  }
  for (const auto& p : kb.tbox.properties()) {
    if (p.cardinality.empty() || !kb.tbox.is_subclass_of(a.type, p.domain)) continue;
    int n = counts.count(p.name) ? counts[p.name] : 0;
    const auto& c = p.cardinality;
    if ((c.exact && n != *c.exact) || (c.min && n < *c.min) || (c.max && n > *c.max))
      throw TypeCheckError("property " + p.name + " appears " + std::to_string(n) + " times on " + a.type);
  }
}

namespace {

bool append(std::vector<Annotation>& list, Cas& cas, const KnowledgeBase& kb, Annotation a) {
  check_annotation(kb, a);
  for (const auto& existing : list)
    if (existing.same_content(a)) return false;
  if (a.id.empty()) a.id = "a" + std::to_string(cas.next_id++);
  list.push_back(std::move(a));
  return true;
}

std::vector<const Annotation*> filter(const std::vector<Annotation>& list, const KnowledgeBase& kb,
                                      std::string_view type) {
  kb.tbox.type(type);
  std::vector<const Annotation*> out;
  for (const auto& a : list)
    if (kb.tbox.is_subclass_of(a.type, type)) out.push_back(&a);
  return out;
}

}  // namespace

bool annotate(Cas& cas, const KnowledgeBase& kb, std::string_view hypothesis, Annotation a) {
  return append(cas.hypothesis(hypothesis).annotations, cas, kb, std::move(a));
}

bool annotate_scene(Cas& cas, const KnowledgeBase& kb, Annotation a) {
  return append(cas.scene, cas, kb, std::move(a));
}

std::vector<const Annotation*> query_annotations(const Cas& cas, const KnowledgeBase& kb, std::string_view hypothesis,
                                                 std::string_view type) {
  return filter(cas.hypothesis(hypothesis).annotations, kb, type);
}

std::vector<const Annotation*> scene_annotations(const Cas& cas, const KnowledgeBase& kb, std::string_view type) {
  return filter(cas.scene, kb, type);
}

std::pair<double, double> centroid(const Region& region, int width) {
  if (region.empty()) return {0.0, 0.0};
  double sx = 0.0, sy = 0.0;
  for (auto i : region) {
    sx += static_cast<double>(i % width) + 0.5;
    sy += static_cast<double>(i / width) + 0.5;
  }
  return {sx / region.size(), sy / region.size()};
}

// ---------------------------------------------------------------- JSON

json value_to_json(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* d = std::get_if<double>(&v)) return json{{"real", *d}};
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (const auto* p = std::get_if<Pose>(&v)) return json{{"position", p->position}, {"orientation", p->orientation}};
  return json{{"vector", std::get<std::vector<double>>(v)}};
}

Value value_from_json(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_object() && j.contains("real")) return j.at("real").get<double>();
  if (j.is_object() && j.contains("vector")) return j.at("vector").get<std::vector<double>>();
  if (j.is_object() && j.contains("position")) {
    Pose p;
    p.position = j.at("position").get<std::array<double, 3>>();
    p.orientation = j.at("orientation").get<std::array<double, 4>>();
    return p;
  }
  throw TypeCheckError("cannot read value " + j.dump());
}

json annotation_to_json(const Annotation& a) {
  json fields = json::array();
  for (const auto& [k, v] : a.fields) fields.push_back(json::array({k, value_to_json(v)}));
  return json{{"id", a.id}, {"type", a.type}, {"fields", fields}};
}

Annotation annotation_from_json(const json& j) {
  Annotation a;
  a.id = j.at("id").get<std::string>();
  a.type = j.at("type").get<std::string>();
  for (const auto& f : j.at("fields")) a.fields.emplace_back(f.at(0).get<std::string>(), value_from_json(f.at(1)));
  return a;
}

json to_json(const Cas& cas) {
  const auto& o = cas.observation;
  json color = json::array();
  for (const auto& c : o.color) color.push_back(json::array({c[0], c[1], c[2]}));
  json obs{{"timestamp", o.timestamp},
           {"width", o.width},
           {"height", o.height},
           {"cameraPose", value_to_json(o.camera_pose)},
           {"blurScore", o.blur_score},
           {"sourceEpisode", o.source_episode},
           {"color", color},
           {"depth", o.depth}};
  json hyps = json::array();
  for (const auto& h : cas.hypotheses) {
    json anns = json::array();
    for (const auto& a : h.annotations) anns.push_back(annotation_to_json(a));
    hyps.push_back(json{{"id", h.id}, {"type", h.type}, {"region", h.region}, {"annotations", anns}});
  }
  json scene = json::array();
  for (const auto& a : cas.scene) scene.push_back(annotation_to_json(a));
  json out{{"observation", obs}, {"hypotheses", hyps}, {"scene", scene}, {"views", cas.views},
           {"nextId", cas.next_id}};
  out["query"] = cas.query ? json(format_query(*cas.query)) : json();
  return out;
}

Cas cas_from_json(const json& j) {
  Cas cas;
  const auto& o = j.at("observation");
  auto& obs = cas.observation;
  obs.timestamp = o.at("timestamp").get<std::int64_t>();
  obs.width = o.at("width").get<int>();
  obs.height = o.at("height").get<int>();
  obs.camera_pose = std::get<Pose>(value_from_json(o.at("cameraPose")));
  obs.blur_score = o.at("blurScore").get<double>();
  obs.source_episode = o.at("sourceEpisode").get<std::string>();
  for (const auto& c : o.at("color")) obs.color.push_back({c.at(0).get<std::uint8_t>(), c.at(1).get<std::uint8_t>(),
                                                          c.at(2).get<std::uint8_t>()});
  obs.depth = o.at("depth").get<std::vector<std::uint16_t>>();
  obs.validate();
  for (const auto& h : j.at("hypotheses")) {
    Hypothesis hyp;
    hyp.id = h.at("id").get<std::string>();
    hyp.type = h.at("type").get<std::string>();
    hyp.region = h.at("region").get<Region>();
    for (const auto& a : h.at("annotations")) hyp.annotations.push_back(annotation_from_json(a));
    cas.hypotheses.push_back(std::move(hyp));
  }
  for (const auto& a : j.at("scene")) cas.scene.push_back(annotation_from_json(a));
  cas.views = j.at("views").get<std::map<std::string, std::vector<float>>>();
  cas.next_id = j.at("nextId").get<std::uint64_t>();
  if (!j.at("query").is_null()) cas.query = parse_query(j.at("query").get<std::string>());
  return cas;
}

}  // namespace rs
