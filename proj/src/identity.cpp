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

#include "rs/identity.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <nlohmann/json.hpp>

#include "rs/error.hpp"
#include "rs/kernels.hpp"

namespace rs {

FilterConfig FilterConfig::all_off() {
  FilterConfig f;
  f.roi_enabled = false;
  f.static_skip_enabled = false;
  f.motion_enabled = false;
  return f;
}

void FilterConfig::validate() const {
  if (static_epsilon_mm < 0 || max_translation_m < 0 || max_rotation_rad < 0 || max_blur < 0)
    throw UnsatisfiableDefinition("filter thresholds must be non-negative");
}

void MatchConfig::validate() const {
  for (double w : {pose_weight, histogram_weight, shape_weight, class_weight})
    if (w < 0) throw UnsatisfiableDefinition("match weights must be non-negative");
  if (pose_weight + histogram_weight + shape_weight + class_weight <= 0)
    throw UnsatisfiableDefinition("at least one match weight must be positive");
  if (pose_scale_mm <= 0) throw UnsatisfiableDefinition("pose scale must be positive");
  if (tau < 0) throw UnsatisfiableDefinition("match threshold must be non-negative");
}

std::string BeliefObject::class_label() const {
  auto it = latest.find("ClassificationAnnotation");
  if (it == latest.end()) return {};
  std::string best;
  double best_conf = -1.0;
  for (const auto& a : it->second) {
    double c = a.number("classConfidence").value_or(0.0);
    std::string label = a.text("classLabel");
    if (c > best_conf || (c == best_conf && label < best)) {
      best = label;
      best_conf = c;
    }
  }
  return best;
}

const BeliefObject* BeliefState::find(std::string_view id) const {
  for (const auto& o : objects)
    if (o.id == id) return &o;
  return nullptr;
}

BeliefObject* BeliefState::find(std::string_view id) {
  for (auto& o : objects)
    if (o.id == id) return &o;
  return nullptr;
}

ObjectView object_view(const BeliefObject& o) {
  static const std::vector<std::tuple<const char*, const char*, const char*>> symbolic{
      {"ShapeAnnotation", "shape", "shape"},
      {"SemanticColorAnnotation", "color", "color"},
      {"ClassificationAnnotation", "classLabel", "class"},
      {"SizeAnnotation", "size", "size"},
      {"LocationAnnotation", "location", "location"},
      {"LogoAtom", "logo", "logo"},
      {"TextAtom", "text", "text"},
      {"LinemodAtom", "linemod", "linemod"},
      {"PartAnnotation", "part", "obj-part"},
      {"PartOfAnnotation", "wholeLabel", "part-of"},
  };
  ObjectView v;
  v.id = o.id;
  for (const auto& [type, field, attr] : symbolic) {
    auto it = o.latest.find(type);
    if (it == o.latest.end()) continue;
    auto& values = v.symbols[attr];
    for (const auto& a : it->second)
      for (const auto& [k, value] : a.fields)
        if (k == field)
          if (const auto* s = std::get_if<std::string>(&value))
            if (std::find(values.begin(), values.end(), *s) == values.end()) values.push_back(*s);
  }
  if (auto it = v.symbols.find("location"); it != v.symbols.end() && !it->second.empty())
    v.location = it->second.front();
  if (auto it = o.latest.find("PartOfAnnotation"); it != o.latest.end() && !it->second.empty())
    v.whole_type = it->second.front().text("wholeType");
  if (auto it = o.latest.find("VolumeAnnotation"); it != o.latest.end() && !it->second.empty())
    if (auto l = it->second.front().number("liters")) v.numbers["capacity"] = *l;
  if (auto it = o.latest.find("DimensionAnnotation"); it != o.latest.end() && !it->second.empty())
    if (auto w = it->second.front().number("width")) v.numbers["width"] = *w / 1000.0;
  return v;
}

std::map<std::string, ObjectView> object_views(const BeliefState& belief) {
  std::map<std::string, ObjectView> out;
  for (const auto& o : belief.objects) out.emplace(o.id, object_view(o));
  return out;
}

ABox belief_abox(const BeliefState& belief, const KnowledgeBase& kb) {
  ABox box;
  for (const auto& o : belief.objects) {
    box.individuals.push_back(o.id);
    std::string cls = o.class_label();
    if (!cls.empty() && kb.tbox.has_type(cls)) box.concepts.push_back({o.id, cls});
  }
  return box;
}

nlohmann::json belief_to_json(const BeliefState& belief) {
  nlohmann::json objects = nlohmann::json::array();
  for (const auto& o : belief.objects) {
    nlohmann::json annotations = nlohmann::json::object();
    for (const auto& [type, list] : o.latest) {
      auto& arr = annotations[type] = nlohmann::json::array();
      for (const auto& a : list) arr.push_back(annotation_to_json(a));
    }
    std::string cls = o.class_label();
    objects.push_back({{"id", o.id},
                       {"class", cls.empty() ? nlohmann::json(nullptr) : nlohmann::json(cls)},
                       {"annotations", annotations},
                       {"firstSeen", o.first_seen},
                       {"lastSeen", o.last_seen}});
  }
  return {{"objects", objects}};
}

std::string dump_belief(const BeliefState& belief) { return belief_to_json(belief).dump(2); }

namespace {

double rotation_between(const Pose& a, const Pose& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (int i = 0; i < 4; ++i) {
    dot += a.orientation[i] * b.orientation[i];
    na += a.orientation[i] * a.orientation[i];
    nb += b.orientation[i] * b.orientation[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  double c = std::min(1.0, std::abs(dot) / std::sqrt(na * nb));
  return 2.0 * std::acos(c);
}

const Annotation* first(const Hypothesis& h, const std::string& type) {
  for (const auto& a : h.annotations)
    if (a.type == type) return &a;
  return nullptr;
}

const Annotation* first(const BeliefObject& o, const std::string& type) {
  auto it = o.latest.find(type);
  return it == o.latest.end() || it->second.empty() ? nullptr : &it->second.front();
}

std::array<double, 3> position_of(const Hypothesis& h, const Observation& obs, double mm) {
  auto [cx, cy] = centroid(h.region, obs.width);
  std::vector<std::uint16_t> d;
  for (auto i : h.region)
    if (obs.depth[i]) d.push_back(obs.depth[i]);
  double z = 0.0;
  if (!d.empty()) {
    std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
    z = d[d.size() / 2];
  }
  return {cx * mm, cy * mm, z};
}

}  // namespace

std::optional<std::string> frame_rejection(const FrameMeta& frame, const BeliefState& belief,
                                           const FilterConfig& filters) {
  if (filters.motion_enabled) {
    if (frame.blur_score > filters.max_blur) return "blur " + std::to_string(frame.blur_score);
    if (belief.last_camera_pose) {
      const auto& p = *belief.last_camera_pose;
      double dx = 0.0;
      for (int i = 0; i < 3; ++i) dx += std::pow(frame.camera_pose.position[i] - p.position[i], 2);
      if (std::sqrt(dx) > filters.max_translation_m) return "camera translation";
      if (rotation_between(frame.camera_pose, p) > filters.max_rotation_rad) return "camera rotation";
    }
  }
  if (filters.static_skip_enabled && frame.depth && !belief.last_depth.empty() &&
      belief.last_depth.size() == frame.depth->size() &&
      kernels::mean_abs_depth_delta(belief.last_depth, *frame.depth) < filters.static_epsilon_mm)
    return "static frame";
  return std::nullopt;
}

double match_distance(const Hypothesis& h, const std::array<double, 3>& position, const BeliefObject& o,
                      const MatchConfig& cfg) {
  double sum = 0.0, weight = 0.0;
  double dp = 0.0;
  for (int i = 0; i < 3; ++i) dp += std::pow(position[i] - o.position[i], 2);
  sum += cfg.pose_weight * std::min(1.0, std::sqrt(dp) / cfg.pose_scale_mm);
  weight += cfg.pose_weight;
  const Annotation* ha = first(h, "ColorHistogramAnnotation");
  const Annotation* oa = first(o, "ColorHistogramAnnotation");
  if (ha && oa) {
    const auto* x = std::get_if<std::vector<double>>(ha->get("histogram"));
    const auto* y = std::get_if<std::vector<double>>(oa->get("histogram"));
    if (x && y && x->size() == y->size()) {
      double inter = 0.0;
      for (std::size_t i = 0; i < x->size(); ++i) inter += std::min((*x)[i], (*y)[i]);
      sum += cfg.histogram_weight * std::max(0.0, 1.0 - inter);
      weight += cfg.histogram_weight;
    }
  }
  ha = first(h, "ShapeAnnotation");
  oa = first(o, "ShapeAnnotation");
  if (ha && oa) {
    sum += cfg.shape_weight * (ha->text("shape") == oa->text("shape") ? 0.0 : 1.0);
    weight += cfg.shape_weight;
  }
  ha = first(h, "ClassificationAnnotation");
  if (ha && o.has("ClassificationAnnotation")) {
    sum += cfg.class_weight * (ha->text("classLabel") == o.class_label() ? 0.0 : 1.0);
    weight += cfg.class_weight;
  }
  return weight > 0.0 ? sum / weight : 0.0;
}

IdentityReport resolve_identity(const std::vector<Hypothesis>& hypotheses, const Observation& obs,
                                BeliefState& belief, const MatchConfig& cfg, const FilterConfig& filters,
                                const FrameMeta& frame) {
  IdentityReport report;
  report.skipped = frame_rejection(frame, belief, filters);
  belief.last_camera_pose = frame.camera_pose;
  if (report.skipped) return report;
  if (frame.depth) belief.last_depth = *frame.depth;

  std::vector<const Hypothesis*> kept;
  std::vector<std::array<double, 3>> positions;
  for (const auto& h : hypotheses) {
    if (h.region.empty()) continue;
    if (filters.roi_enabled && !filters.task_regions.empty()) {
      auto [cx, cy] = centroid(h.region, obs.width);
      bool inside = std::any_of(filters.task_regions.begin(), filters.task_regions.end(),
                                [&](const SemanticRegion& r) { return r.contains(cx, cy); });
      if (!inside) {
        ++report.dropped_by_roi;
        continue;
      }
    }
    kept.push_back(&h);
    positions.push_back(position_of(h, obs, frame.mm_per_pixel));
  }

  std::vector<std::tuple<double, std::string, std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k < kept.size(); ++k)
    for (std::size_t j = 0; j < belief.objects.size(); ++j) {
      double d = match_distance(*kept[k], positions[k], belief.objects[j], cfg);
      if (d <= cfg.tau) pairs.emplace_back(d, belief.objects[j].id, k, j);
    }
  std::sort(pairs.begin(), pairs.end());
  std::vector<int> assigned(kept.size(), -1);
  std::vector<bool> taken(belief.objects.size(), false);
  for (const auto& [d, id, k, j] : pairs) {
    if (assigned[k] >= 0 || taken[j]) continue;
    assigned[k] = static_cast<int>(j);
    taken[j] = true;
  }

  auto absorb = [&](BeliefObject& o, const Hypothesis& h, const std::array<double, 3>& pos) {
    std::map<std::string, std::vector<Annotation>> fresh;
    for (const auto& a : h.annotations) fresh[a.type].push_back(a);
    if (!fresh.count("LocationAnnotation") && !fresh.count("PoseAnnotation")) {
      Pose p;
      p.position = {pos[0] / 1000.0, pos[1] / 1000.0, pos[2] / 1000.0};
      fresh["PoseAnnotation"].push_back(make_annotation("PoseAnnotation", {{"pose", p}}));
    }
    for (auto& [type, list] : fresh) {
      for (const auto& a : list) o.history.emplace_back(frame.tick, a);
      o.latest[type] = std::move(list);
    }
    o.last_seen = frame.tick;
    o.lineage.push_back(std::to_string(frame.tick) + ":" + h.id);
    o.position = pos;
    auto [cx, cy] = centroid(h.region, obs.width);
    o.pixel = {cx, cy};
  };

  for (std::size_t k = 0; k < kept.size(); ++k) {
    if (assigned[k] < 0) continue;
    auto& o = belief.objects[static_cast<std::size_t>(assigned[k])];
    absorb(o, *kept[k], positions[k]);
    report.matched.emplace_back(kept[k]->id, o.id);
  }
  for (std::size_t k = 0; k < kept.size(); ++k) {
    if (assigned[k] >= 0) continue;
    BeliefObject o;
    o.id = "obj_" + std::to_string(belief.next_id++);
    o.first_seen = frame.tick;
    absorb(o, *kept[k], positions[k]);
    report.created.push_back(o.id);
    report.matched.emplace_back(kept[k]->id, o.id);
    belief.objects.push_back(std::move(o));
  }
  return report;
}

}  // namespace rs
