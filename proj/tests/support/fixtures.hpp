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

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rs/engine.hpp"
#include "rs/ontology.hpp"
#include "rs/registry.hpp"
#include "rs/scene.hpp"

namespace rs::testing {

inline std::string data_path(const std::string& relative) {
  return (std::filesystem::path(SHERLOCK_DATA_DIR) / relative).string();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Kitchen, retail and chemlab ontologies over the built-in taxonomy.
inline KnowledgeBase shipped_kb() {
  KnowledgeBase kb = load_ontology_file(data_path("ontologies/kitchen.onto"));
  for (const char* name : {"retail", "chemlab"}) {
    std::string path = data_path(std::string("ontologies/") + name + ".onto");
    merge_ontology(kb, read_file(path), path);
  }
  return kb;
}

/// Owns everything an Engine points into.
struct World {
  KnowledgeBase kb = shipped_kb();
  Registry registry{kb};
  RobotProfile robot;

  explicit World(const std::string& robot_name = "pr2") {
    register_standard_experts(registry);
    robot = load_robot_profile(kb, data_path("robots/" + robot_name + ".onto"));
  }

  World(const World&) = delete;
  World& operator=(const World&) = delete;

  Engine engine(EngineOptions options = {}) const { return Engine(registry, robot, std::move(options)); }
  Planner planner() const { return Planner(registry, robot, default_continuous_pipeline()); }
};

}  // namespace rs::testing
