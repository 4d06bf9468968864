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

// The per-cycle blackboard: one observation and the hypotheses annotators
// attach to it.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rs/kernels.hpp"
#include "rs/ontology.hpp"
#include "rs/query.hpp"

namespace rs {

struct Observation {
  std::int64_t timestamp = 0;
  int width = 0;
  int height = 0;
  std::vector<kernels::Rgb> color;
  std::vector<std::uint16_t> depth;  // millimeters, 0 = invalid
  Pose camera_pose;
  double blur_score = 0.0;
  std::string source_episode;

  /// Throws InvalidObservation.
  void validate() const;
  std::size_t size() const { return static_cast<std::size_t>(width) * height; }

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// Sorted, duplicate-free row-major pixel indices.
using Region = std::vector<std::uint32_t>;

struct Annotation {
  std::string id;
  std::string type;
  std::vector<std::pair<std::string, Value>> fields;

  const Value* get(std::string_view property) const;
  std::string text(std::string_view property) const;  // empty when absent or not a string
  std::optional<double> number(std::string_view property) const;

  /// Type and fields; ids are not compared.
  bool same_content(const Annotation& other) const { return type == other.type && fields == other.fields; }
  friend bool operator==(const Annotation&, const Annotation&) = default;
};

Annotation make_annotation(std::string type, std::vector<std::pair<std::string, Value>> fields);

struct Hypothesis {
  std::string id;
  std::string type = "RsSceneCluster";
  Region region;
  std::vector<Annotation> annotations;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

struct Cas {
  Observation observation;
  std::vector<Hypothesis> hypotheses;
  /// Scene-level annotations (support planes, regions of interest, ...).
  std::vector<Annotation> scene;
  /// Derived per-pixel rasters referenced by scene annotations, e.g. normals.
  std::map<std::string, std::vector<float>> views;
  std::optional<Query> query;
  std::uint64_t next_id = 1;

  const Hypothesis& hypothesis(std::string_view id) const;  // throws UnknownHypothesis
  Hypothesis& hypothesis(std::string_view id);
  /// True when `type` is produced by the reader or present on the scene or
  /// on any hypothesis (as hypothesis type or annotation type).
  bool has_type(const TBox& tbox, std::string_view type) const;

  friend bool operator==(const Cas& a, const Cas& b);
};

/// Types the collection reader provides with every observation.
const std::vector<std::string>& reader_types();

Cas init_cas(Observation obs);

/// Throws RegionOutOfBounds for empty or out-of-range regions. The region is
/// sorted and deduplicated.
std::string add_hypothesis(Cas& cas, Region region, std::string type = "RsSceneCluster");

/// Type-checks `a` against the TBox and appends it unless an annotation with
/// equal content is already present. Returns false on dedup.
bool annotate(Cas& cas, const KnowledgeBase& kb, std::string_view hypothesis, Annotation a);
bool annotate_scene(Cas& cas, const KnowledgeBase& kb, Annotation a);

/// Throws TypeCheckError naming the offending property.
void check_annotation(const KnowledgeBase& kb, const Annotation& a);

std::vector<const Annotation*> query_annotations(const Cas& cas, const KnowledgeBase& kb, std::string_view hypothesis,
                                                 std::string_view type);
std::vector<const Annotation*> scene_annotations(const Cas& cas, const KnowledgeBase& kb, std::string_view type);

/// Centroid (x, y) of a region in pixel coordinates.
std::pair<double, double> centroid(const Region& region, int width);

nlohmann::json value_to_json(const Value& v);
Value value_from_json(const nlohmann::json& j);
nlohmann::json annotation_to_json(const Annotation& a);
Annotation annotation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Cas& cas);
Cas cas_from_json(const nlohmann::json& j);

}  // namespace rs
