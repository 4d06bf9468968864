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

// Annotator descriptors, robot profiles and the registry the planner and
// engine draw from.

#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rs/cas.hpp"
#include "rs/ontology.hpp"
#include "rs/query.hpp"

namespace rs {

struct SceneDocument;

enum class AnnotatorKind { HypothesisGenerator, Annotator, Both };

std::string_view to_string(AnnotatorKind k);

struct AnnotatorDescriptor {
  std::string name;
  AnnotatorKind kind = AnnotatorKind::Annotator;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::string> capabilities;
  std::vector<std::string> output_domain;
  /// Negative means "use the default for the kind".
  double cost_hint = -1.0;
  bool continuous_eligible = false;
  /// Only planned when a query value falls into the output domain.
  bool task_specific = false;
  bool experimental = false;

  bool produces(std::string_view type) const;
};

struct RobotProfile {
  std::string name;
  std::set<std::string> capabilities;
};

/// Reads the first individual typed Robot from an ontology document merged
/// over `base`. Capabilities must be subclasses of Capability.
RobotProfile load_robot_profile(const KnowledgeBase& base, const std::string& path);
RobotProfile robot_profile_from(const KnowledgeBase& kb);

/// Everything an annotator may read besides the Cas.
struct ExpertContext {
  const KnowledgeBase* kb = nullptr;
  std::vector<SemanticRegion> semantic_map;
  /// Ground truth for the evidence stubs that stand in for recognisers.
  const SceneDocument* truth = nullptr;
  std::map<std::string, std::map<std::string, double>> params;
  std::uint64_t seed = 0;
  double mm_per_pixel = 5.0;

  double param(const std::string& annotator, const std::string& key, double fallback) const;
};

using AnnotatorFn = std::function<void(Cas&, const ExpertContext&)>;

class Registry {
 public:
  /// Descriptors are mirrored into `kb` as component classes.
  explicit Registry(KnowledgeBase& kb) : kb_(&kb) {}

  /// Throws DuplicateName, UnknownType, UnsatisfiableDefinition (bad
  /// descriptor) or CycleError (type-level dependency cycle).
  void add(AnnotatorDescriptor desc, AnnotatorFn fn);

  const std::vector<AnnotatorDescriptor>& descriptors() const { return descriptors_; }
  const AnnotatorDescriptor& descriptor(std::string_view name) const;  // throws NotFound
  bool contains(std::string_view name) const;
  /// Position in registration order.
  std::size_t rank(std::string_view name) const;
  double cost(const AnnotatorDescriptor& d) const;

  /// Throws PreconditionUnmet listing the missing input types. Verifies that
  /// the annotator only added hypotheses and annotations.
  void run(std::string_view name, Cas& cas, const ExpertContext& ctx) const;

  const KnowledgeBase& kb() const { return *kb_; }

 private:
  KnowledgeBase* kb_;
  std::vector<AnnotatorDescriptor> descriptors_;
  std::vector<AnnotatorFn> impls_;
};

bool feasible_on_robot(const AnnotatorDescriptor& d, const RobotProfile& robot);

/// Registers the synthetic expert suite in its canonical order.
void register_standard_experts(Registry& registry);

/// The continuous pipeline configured at start-up.
std::vector<std::string> default_continuous_pipeline();

}  // namespace rs
