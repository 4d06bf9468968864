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

// The belief state and the consumer that resolves new hypotheses to the
// objects already in it.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rs/cas.hpp"
#include "rs/ontology.hpp"
#include "rs/query.hpp"

namespace rs {

struct FilterConfig {
  bool roi_enabled = true;
  /// Hypotheses whose centroid lies outside every task region are dropped.
  std::vector<SemanticRegion> task_regions;
  bool static_skip_enabled = true;
  double static_epsilon_mm = 2.0;
  bool motion_enabled = true;
  double max_translation_m = 0.05;
  double max_rotation_rad = 0.1;
  double max_blur = 100.0;

  static FilterConfig all_off();
  void validate() const;  // throws UnsatisfiableDefinition
};

struct MatchConfig {
  double pose_weight = 1.0;
  double pose_scale_mm = 500.0;
  double histogram_weight = 1.0;
  double shape_weight = 1.0;
  double class_weight = 1.0;
  double tau = 0.5;

  void validate() const;  // throws UnsatisfiableDefinition
};

struct BeliefObject {
  std::string id;
  /// Annotations by type, from the latest cycle that produced that type.
  std::map<std::string, std::vector<Annotation>> latest;
  std::vector<std::pair<std::int64_t, Annotation>> history;
  std::int64_t first_seen = 0;
  std::int64_t last_seen = 0;
  /// "<tick>:<hypothesis id>" for every hypothesis merged into the object.
  std::vector<std::string> lineage;
  /// Image-plane centroid and median depth, millimeters.
  std::array<double, 3> position{};
  std::array<double, 2> pixel{};

  /// Most confident classification, empty when unclassified.
  std::string class_label() const;
  bool has(const std::string& type) const { return latest.count(type) > 0; }
  friend bool operator==(const BeliefObject&, const BeliefObject&) = default;
};

struct BeliefState {
  std::vector<BeliefObject> objects;
  std::uint64_t next_id = 1;
  std::optional<Pose> last_camera_pose;
  std::vector<std::uint16_t> last_depth;

  const BeliefObject* find(std::string_view id) const;
  BeliefObject* find(std::string_view id);
  friend bool operator==(const BeliefState&, const BeliefState&) = default;
};

ObjectView object_view(const BeliefObject& o);
std::map<std::string, ObjectView> object_views(const BeliefState& belief);
/// One individual per classified object, typed with its class when the
/// class is declared.
ABox belief_abox(const BeliefState& belief, const KnowledgeBase& kb);

nlohmann::json belief_to_json(const BeliefState& belief);
/// Stable, pretty-printed JSON text.
std::string dump_belief(const BeliefState& belief);

struct FrameMeta {
  std::int64_t tick = 0;
  Pose camera_pose;
  double blur_score = 0.0;
  const std::vector<std::uint16_t>* depth = nullptr;
  int width = 0;
  double mm_per_pixel = 5.0;
};

/// Why the frame-level filters reject this frame, if they do.
std::optional<std::string> frame_rejection(const FrameMeta& frame, const BeliefState& belief,
                                           const FilterConfig& filters);

/// Weighted mean of the per-type distances both sides carry.
double match_distance(const Hypothesis& h, const std::array<double, 3>& position, const BeliefObject& o,
                      const MatchConfig& cfg);

struct IdentityReport {
  std::optional<std::string> skipped;
  std::vector<std::pair<std::string, std::string>> matched;  // hypothesis -> object
  std::vector<std::string> created;
  std::size_t dropped_by_roi = 0;
};

/// Frame filters, then the ROI filter, then greedy one-to-one matching under
/// tau by (distance, object id). Unmatched hypotheses become new objects.
IdentityReport resolve_identity(const std::vector<Hypothesis>& hypotheses, const Observation& obs,
                                BeliefState& belief, const MatchConfig& cfg, const FilterConfig& filters,
                                const FrameMeta& frame);

}  // namespace rs
