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

// The processing engine: reader, annotator pipeline and consumers (fusion,
// identity) per cycle, plus the tasked query modes on top.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rs/config.hpp"
#include "rs/fusion.hpp"
#include "rs/identity.hpp"
#include "rs/planner.hpp"
#include "rs/registry.hpp"
#include "rs/scene.hpp"

namespace rs {

struct EngineOptions {
  std::uint64_t seed = 0;
  double sigma = kDefaultSigma;
  EngineConfig config;
  bool fuse = true;
  /// Keep the Cas of the most recent cycle for inspection.
  bool keep_last_cas = false;
};

struct CycleReport {
  std::int64_t tick = 0;
  std::optional<std::string> skipped;
  IdentityReport identity;
  /// The short-term memory of the cycle, kept only when asked for.
  std::optional<Cas> cas;
};

struct QueryResult {
  std::vector<std::string> ids;
  Pipeline pipeline;
  /// True when the belief state already covered the query.
  bool direct = false;
};

struct TrackStep {
  std::int64_t tick = 0;
  std::optional<std::string> id;
  std::array<double, 3> position{};  // meters
};

struct ScanLine {
  std::string id;
  std::string kind;  // ShelfFloor or ShelfSeparator
  double coordinate = 0.0;  // row or column, pixels
  std::size_t detections = 0;
};

struct CompoundResult {
  std::string verb;
  std::vector<TrackStep> track;
  std::vector<ScanLine> scan;
  std::optional<std::int64_t> count;
  Pipeline pipeline;
};

class Engine {
 public:
  Engine(const Registry& registry, RobotProfile robot, EngineOptions options = {},
         std::vector<std::string> continuous_base = default_continuous_pipeline());

  const Registry& registry() const { return *registry_; }
  const Planner& planner() const { return planner_; }
  const BeliefState& belief() const { return belief_; }
  BeliefState& belief() { return belief_; }
  const EngineOptions& options() const { return options_; }
  Pipeline base_pipeline() const;

  Observation observe(const Episode& episode, std::size_t frame) const;

  /// Runs one cycle over frame `frame` of `episode`. An empty pipeline
  /// leaves the belief state untouched.
  CycleReport run_cycle(const Episode& episode, std::size_t frame, const Pipeline& pipeline,
                        const std::optional<Query>& query, const FilterConfig& filters, bool keep_cas = false);

  /// One cycle per frame with the continuous base pipeline and no query.
  std::vector<CycleReport> run_continuous(const Episode& episode, const Pipeline& base);
  std::vector<CycleReport> run_continuous(const Episode& episode) { return run_continuous(episode, base_pipeline()); }

  /// Answers from the belief state when it covers the query, otherwise plans,
  /// runs a cycle on the episode's last frame and answers. Throws
  /// AmbiguityError, NotFound, UnknownObject and planning errors.
  QueryResult answer_query(const Query& q, const Episode& episode);

  /// Throws UnknownCommand or MissingParameter.
  CompoundResult run_compound(const Compound& q, const Episode& episode);

  /// The result set as S-expressions, one object per line.
  std::string describe(const std::vector<std::string>& ids) const;
  const std::optional<Cas>& last_cas() const { return last_cas_; }

 private:
  FilterConfig filters_for(const SceneDocument& scene, const Episode& episode, bool tasked) const;
  bool covered(const std::vector<Requirement>& requirements) const;
  std::vector<std::string> select(const Description& d, const std::vector<SemanticRegion>& map) const;

  const Registry* registry_;
  Planner planner_;
  EngineOptions options_;
  BeliefState belief_;
  std::optional<Cas> last_cas_;
};

}  // namespace rs
