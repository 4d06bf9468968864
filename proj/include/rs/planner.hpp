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

// Pipeline generation: from a query, an attribute set or an object class to
// an ordered list of annotators the robot can run.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rs/ontology.hpp"
#include "rs/query.hpp"
#include "rs/registry.hpp"

namespace rs {

struct Pipeline {
  std::vector<std::string> annotators;
  /// Why each annotator is in the pipeline: "query-attribute",
  /// "precondition-of <name>" or "continuous-base".
  std::map<std::string, std::string> provenance;

  bool contains(std::string_view name) const;
  friend bool operator==(const Pipeline&, const Pipeline&) = default;
};

/// Attribute name -> annotation type. Attributes absent here (command) need
/// no annotator.
const std::map<std::string, std::string>& attribute_types();

/// One annotation type a plan must produce, with the query value that asked
/// for it (used to activate task-specific annotators).
struct Requirement {
  std::string attribute;
  std::string type;
  std::string value;
};

/// Requirements from the top-level constraints of the query's description,
/// or from the attribute list of an inspect query.
std::vector<Requirement> requirements_of(const Query& q);

/// True iff `p` has no duplicates, names registered annotators the robot can
/// run, and orders them so every input is produced earlier or by the reader.
bool validate_pipeline(const Registry& registry, const RobotProfile& robot, const Pipeline& p);

/// True iff the pipeline's outputs include a subtype of every type.
bool covers(const Registry& registry, const Pipeline& p, const std::vector<std::string>& types);

struct PlannerOptions {
  /// Adds every task-specific annotator a query value activates, not just
  /// the cheapest provider. Used when swapping in an expert pipeline.
  bool include_all_activated = false;
};

class Planner {
 public:
  Planner(const Registry& registry, RobotProfile robot, std::vector<std::string> continuous_base = {});

  /// Throws NoProvider or CapabilityMissing.
  Pipeline plan(const std::vector<Requirement>& requirements, const PlannerOptions& options = {}) const;
  Pipeline plan_for_query(const Query& q, const PlannerOptions& options = {}) const;
  /// Throws UnknownAttribute for names outside the attribute table.
  Pipeline plan_for_attributes(const std::set<std::string>& attributes) const;
  Pipeline plan_for_types(const std::vector<std::string>& types) const;
  /// Throws NoDescription when the class has no visual properties.
  Pipeline plan_for_object(const std::string& object_class) const;
  std::map<std::string, Pipeline> plan_for_subclasses(const std::string& super_class) const;
  /// `objects` is the belief state keyed by object id. Throws UnknownObject,
  /// or Unsupported when a volume is asked of something that is not a round
  /// container.
  Pipeline plan_inspection(const std::map<std::string, ObjectView>& objects, const std::string& id,
                           const std::vector<std::string>& attributes) const;
  /// A plan for `object_class` only when `belief` holds an individual of
  /// `dependent_class`.
  std::optional<Pipeline> plan_with_dependents(const std::string& object_class, const std::string& dependent_class,
                                               const ABox& belief) const;

  bool feasible(const std::string& annotator) const;
  bool validate(const Pipeline& p) const { return validate_pipeline(*registry_, robot_, p); }
  const RobotProfile& robot() const { return robot_; }
  const std::vector<std::string>& continuous_base() const { return base_; }

 private:
  const Registry* registry_;
  RobotProfile robot_;
  std::vector<std::string> base_;
};

}  // namespace rs
