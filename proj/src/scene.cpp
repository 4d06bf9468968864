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

#include "rs/scene.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "rs/error.hpp"

namespace rs {

using nlohmann::json;

const Palette& Palette::standard() {
  static const Palette p{
      {"white", "black", "red", "green", "blue", "yellow", "orange", "purple", "pink", "cyan", "gray", "brown"},
      {{240, 240, 240},
       {20, 20, 20},
       {200, 30, 30},
       {30, 160, 50},
       {30, 60, 200},
       {230, 210, 40},
       {240, 140, 30},
       {130, 50, 160},
       {240, 130, 180},
       {40, 200, 210},
       {128, 128, 128},
       {120, 75, 40}}};
  return p;
}

int Palette::index(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

kernels::Rgb Palette::rgb(const std::string& name) const {
  int i = index(name);
  if (i < 0) throw NotFound("no palette color named " + name);
  return colors[i];
}

// ---------------------------------------------------------------- scene

void SceneDocument::validate() const {
  if (width <= 0 || height <= 0) throw InvalidObservation("scene " + name + " has an empty raster");
  std::set<std::string> ids;
  auto inside = [&](const Rect& r) { return r.x0 >= 0 && r.y0 >= 0 && r.x1 <= width && r.y1 <= height && r.x0 < r.x1 && r.y0 < r.y1; };
  for (const auto& o : objects) {
    if (!ids.insert(o.id).second) throw InvalidObservation("scene " + name + ": duplicate object id " + o.id);
    if (!inside(o.footprint)) throw InvalidObservation("scene " + name + ": footprint of " + o.id + " leaves the raster");
    if (!o.transparent) Palette::standard().rgb(o.color);
  }
  for (const auto& p : planes)
    if (!inside(p.rect)) throw InvalidObservation("scene " + name + ": plane " + p.label + " leaves the raster");
}

const SceneObject* SceneDocument::find(const std::string& id) const {
  for (const auto& o : objects)
    if (o.id == id) return &o;
  return nullptr;
}

int SceneDocument::support_depth(const SceneObject& o) const {
  if (!o.placed_on.empty())
    for (const auto& p : planes)
      if (p.label == o.placed_on) return p.depth_mm;
  double cx = (o.footprint.x0 + o.footprint.x1) / 2.0, cy = (o.footprint.y0 + o.footprint.y1) / 2.0;
  for (auto it = planes.rbegin(); it != planes.rend(); ++it)
    if (it->rect.contains(cx, cy)) return it->depth_mm;
  return background_depth;
}

kernels::RenderSpec SceneDocument::render_spec(double sigma, std::uint64_t seed) const {
  kernels::RenderSpec s;
  s.width = width;
  s.height = height;
  s.background_depth = static_cast<std::uint16_t>(background_depth);
  s.background_color = background_color;
  s.sigma = sigma;
  s.seed = seed;
  for (const auto& p : planes)
    s.planes.push_back({p.rect.x0, p.rect.y0, p.rect.x1, p.rect.y1, static_cast<std::uint16_t>(p.depth_mm), p.color});
  const auto& palette = Palette::standard();
  for (const auto& o : objects) {
    kernels::RenderObject r;
    r.footprint = o.ellipse ? kernels::RenderObject::Footprint::Ellipse : kernels::RenderObject::Footprint::Rect;
    r.x0 = o.footprint.x0;
    r.y0 = o.footprint.y0;
    r.x1 = o.footprint.x1;
    r.y1 = o.footprint.y1;
    r.depth = o.transparent ? 0 : static_cast<std::uint16_t>(std::max(1, support_depth(o) - o.height_mm));
    r.color = palette.index(o.color) >= 0 ? palette.rgb(o.color) : kernels::Rgb{200, 200, 200};
    s.objects.push_back(r);
  }
  return s;
}

Region SceneDocument::visible_region(const SceneObject& o) const {
  kernels::RenderSpec spec = render_spec(0.0, 0);
  std::size_t k = static_cast<std::size_t>(&o - objects.data());
  Region out;
  for (int y = o.footprint.y0; y < o.footprint.y1; ++y)
    for (int x = o.footprint.x0; x < o.footprint.x1; ++x) {
      if (!kernels::in_footprint(spec.objects[k], x, y)) continue;
      bool covered = false;
      for (std::size_t j = k + 1; j < spec.objects.size() && !covered; ++j)
        covered = kernels::in_footprint(spec.objects[j], x, y);
      if (!covered) out.push_back(static_cast<std::uint32_t>(y * width + x));
    }
  return out;
}

// ---------------------------------------------------------------- episode

void Episode::validate() const {
  std::int64_t last = 0;
  bool first = true;
  for (const auto& f : frames) {
    if (!first && f.tick <= last) throw InvalidObservation("episode " + name + ": ticks must strictly increase");
    first = false;
    last = f.tick;
    scene_of(f).validate();
  }
}

const SceneDocument& Episode::scene_of(const EpisodeFrame& f) const {
  auto it = scenes.find(f.scene);
  if (it == scenes.end()) throw NotFound("episode " + name + " has no scene " + f.scene);
  return it->second;
}

Observation render_observation(const SceneDocument& scene, const Pose& camera_pose, double blur_score,
                               std::int64_t tick, std::uint64_t seed, double sigma,
                               const std::string& source_episode) {
  Observation obs;
  obs.timestamp = tick;
  obs.width = scene.width;
  obs.height = scene.height;
  obs.camera_pose = camera_pose;
  obs.blur_score = blur_score;
  obs.source_episode = source_episode;
  std::uint64_t frame_seed = seed * 0x100000001B3ULL + static_cast<std::uint64_t>(tick);
  kernels::render(scene.render_spec(sigma, frame_seed), obs.color, obs.depth);
  obs.validate();
  return obs;
}

// ---------------------------------------------------------------- JSON

namespace {

Rect rect_from(const json& j) {
  auto v = j.get<std::vector<int>>();
  if (v.size() != 4) throw InvalidObservation("rectangles are [x0, y0, x1, y1]");
  return {v[0], v[1], v[2], v[3]};
}

kernels::Rgb color_from(const json& j) {
  if (j.is_string()) return Palette::standard().rgb(j.get<std::string>());
  auto v = j.get<std::vector<int>>();
  return {static_cast<std::uint8_t>(v.at(0)), static_cast<std::uint8_t>(v.at(1)), static_cast<std::uint8_t>(v.at(2))};
}

Pose pose_from(const json& j) {
  auto v = j.get<std::vector<double>>();
  if (v.size() != 7) throw InvalidObservation("camera poses are [x, y, z, qx, qy, qz, qw]");
  Pose p;
  std::copy(v.begin(), v.begin() + 3, p.position.begin());
  std::copy(v.begin() + 3, v.end(), p.orientation.begin());
  return p;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path + ": " + e.what());
  }
}

}  // namespace

SceneDocument scene_from_json(const json& j) {
  SceneDocument s;
  s.name = j.value("name", "");
  s.width = j.at("width").get<int>();
  s.height = j.at("height").get<int>();
  s.mm_per_pixel = j.value("mmPerPixel", 5.0);
  if (j.contains("background")) {
    s.background_depth = j["background"].value("depthMm", 0);
    if (j["background"].contains("color")) s.background_color = color_from(j["background"]["color"]);
  }
  for (const auto& p : j.value("supportingPlanes", json::array())) {
    SupportingPlane sp;
    sp.label = p.at("label").get<std::string>();
    sp.rect = rect_from(p.at("rect"));
    sp.depth_mm = p.at("depthMm").get<int>();
    if (p.contains("color")) sp.color = color_from(p["color"]);
    s.planes.push_back(sp);
  }
  for (const auto& o : j.value("objects", json::array())) {
    SceneObject so;
    so.id = o.at("id").get<std::string>();
    so.class_label = o.value("classLabel", "");
    so.shape = o.value("shape", "box");
    so.color = o.value("color", "white");
    so.ellipse = o.value("ellipse", false);
    so.footprint = rect_from(o.at("footprint"));
    so.height_mm = o.value("heightMm", 0);
    so.transparent = o.value("transparent", false);
    so.location = o.value("location", "");
    so.placed_on = o.value("placedOn", "");
    so.logo = o.value("logo", "");
    so.text = o.value("text", "");
    if (o.contains("partOf")) {
      so.whole_label = o["partOf"].at("label").get<std::string>();
      so.whole_type = o["partOf"].at("type").get<std::string>();
    }
    s.objects.push_back(so);
  }
  for (const auto& r : j.value("semanticRegions", json::array())) {
    Rect rc = rect_from(r.at("rect"));
    s.regions.push_back({r.at("label").get<std::string>(), r.value("kind", ""), rc.x0, rc.y0, rc.x1, rc.y1});
  }
  s.validate();
  return s;
}

Episode episode_from_json(const json& j, const std::string& base_dir) {
  Episode e;
  e.name = j.value("name", "");
  e.task_regions = j.value("taskRegions", std::vector<std::string>{});
  e.ground_truth_objects = j.value("groundTruthObjects", -1);
  const json scenes = j.value("scenes", json::object());
  for (const auto& [key, value] : scenes.items()) {
    if (value.is_string())
      e.scenes.emplace(key, load_scene((std::filesystem::path(base_dir) / value.get<std::string>()).string()));
    else
      e.scenes.emplace(key, scene_from_json(value));
  }
  for (const auto& f : j.at("frames")) {
    EpisodeFrame fr;
    fr.scene = f.at("scene").get<std::string>();
    fr.tick = f.at("tick").get<std::int64_t>();
    if (f.contains("cameraPose")) fr.camera_pose = pose_from(f["cameraPose"]);
    fr.blur_score = f.value("blurScore", 0.0);
    e.frames.push_back(fr);
  }
  e.validate();
  return e;
}

SceneDocument load_scene(const std::string& path) { return scene_from_json(read_json(path)); }

Episode load_episode(const std::string& path) {
  return episode_from_json(read_json(path), std::filesystem::path(path).parent_path().string());
}

Episode single_frame_episode(const SceneDocument& scene, std::vector<std::string> task_regions) {
  Episode e;
  e.name = scene.name;
  e.task_regions = std::move(task_regions);
  e.scenes.emplace(scene.name, scene);
  e.frames.push_back({scene.name, 0, Pose{}, 0.0});
  return e;
}

}  // namespace rs
