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

// Synthetic ground truth: scene documents, episodes and the renderer that
// turns them into observations.

#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rs/cas.hpp"
#include "rs/kernels.hpp"
#include "rs/query.hpp"

namespace rs {

struct Palette {
  std::vector<std::string> names;
  std::vector<kernels::Rgb> colors;

  static const Palette& standard();
  /// Throws NotFound for unknown names.
  kernels::Rgb rgb(const std::string& name) const;
  int index(const std::string& name) const;  // -1 when unknown
};

struct Rect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool contains(double x, double y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct SupportingPlane {
  std::string label;
  Rect rect;
  int depth_mm = 1000;
  kernels::Rgb color{120, 75, 40};
};

struct SceneObject {
  std::string id;
  std::string class_label;
  std::string shape;  // box | round | flat
  std::string color;  // palette name
  bool ellipse = false;
  Rect footprint;
  int height_mm = 0;
  bool transparent = false;
  std::string location;   // semantic region label
  std::string placed_on;  // supporting plane label; empty = plane under the centroid
  std::string logo;
  std::string text;
  std::string whole_label;  // for parts, e.g. a handle on drawer#1
  std::string whole_type;
};

struct SceneDocument {
  std::string name;
  int width = 0;
  int height = 0;
  double mm_per_pixel = 5.0;
  int background_depth = 0;
  kernels::Rgb background_color{60, 60, 60};
  std::vector<SupportingPlane> planes;
  std::vector<SceneObject> objects;
  std::vector<SemanticRegion> regions;

  /// Throws InvalidObservation when a footprint leaves the raster or ids repeat.
  void validate() const;
  const SceneObject* find(const std::string& id) const;
  int support_depth(const SceneObject& o) const;
  /// Pixels where `o` is the topmost primitive.
  Region visible_region(const SceneObject& o) const;
  kernels::RenderSpec render_spec(double sigma, std::uint64_t seed) const;
};

struct EpisodeFrame {
  std::string scene;  // key into Episode::scenes
  std::int64_t tick = 0;
  Pose camera_pose;
  double blur_score = 0.0;
};

struct Episode {
  std::string name;
  std::vector<std::string> task_regions;
  std::map<std::string, SceneDocument> scenes;
  std::vector<EpisodeFrame> frames;
  /// Ground-truth object count, when the episode is authored with one.
  int ground_truth_objects = -1;

  void validate() const;
  const SceneDocument& scene_of(const EpisodeFrame& f) const;
};

inline constexpr double kDefaultSigma = 4.0 / 255.0;

Observation render_observation(const SceneDocument& scene, const Pose& camera_pose, double blur_score,
                               std::int64_t tick = 0, std::uint64_t seed = 0, double sigma = kDefaultSigma,
                               const std::string& source_episode = {});

SceneDocument scene_from_json(const nlohmann::json& j);
Episode episode_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
SceneDocument load_scene(const std::string& path);
Episode load_episode(const std::string& path);
/// Wraps one scene in a single-frame episode.
Episode single_frame_episode(const SceneDocument& scene, std::vector<std::string> task_regions = {});

}  // namespace rs
