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

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "rs/error.hpp"
#include "rs/identity.hpp"
#include "support/episodes.hpp"
#include "support/fixtures.hpp"

namespace rs {
namespace {

TEST(Filters, FrameRejection) {
  FilterConfig f;
  BeliefState b;
  FrameMeta m;
  EXPECT_FALSE(frame_rejection(m, b, f).has_value());
  m.blur_score = 150;
  EXPECT_TRUE(frame_rejection(m, b, f).has_value());
  m.blur_score = 10;
  b.last_camera_pose = Pose{};
  m.camera_pose.position = {0.2, 0.0, 0.0};
  EXPECT_TRUE(frame_rejection(m, b, f).has_value());
  m.camera_pose.position = {0.01, 0.0, 0.0};
  EXPECT_FALSE(frame_rejection(m, b, f).has_value());
  std::vector<std::uint16_t> depth(100, 1000);
  b.last_depth = depth;
  m.depth = &depth;
  m.width = 10;
  EXPECT_TRUE(frame_rejection(m, b, f).has_value());
  std::vector<std::uint16_t> moved = depth;
  for (int i = 0; i < 40; ++i) moved[i] = 900;
  m.depth = &moved;
  EXPECT_FALSE(frame_rejection(m, b, f).has_value());
  EXPECT_FALSE(frame_rejection(m, b, FilterConfig::all_off()).has_value());
}

TEST(Filters, ConfigValidation) {
  FilterConfig f;
  f.static_epsilon_mm = -1;
  EXPECT_THROW(f.validate(), UnsatisfiableDefinition);
  MatchConfig m;
  m.tau = -0.1;
  EXPECT_THROW(m.validate(), UnsatisfiableDefinition);
}

TEST(Identity, FiltersKeepGroundTruth) {
  testing::World w;
  for (const auto& file : testing::identity_episodes()) {
    auto r = testing::run_identity(w, file);
    EXPECT_EQ(r.with_filters, static_cast<std::size_t>(r.ground_truth)) << file;
    EXPECT_GT(r.without_filters, r.with_filters) << file;
  }
}

TEST(Identity, ReobservationKeepsIds) {
  testing::World w;
  Episode ep = load_episode(testing::data_path("episodes/kitchen.episode.json"));
  EngineOptions opts;
  opts.config.filters = FilterConfig::all_off();
  Engine once = w.engine(opts);
  once.run_continuous(ep);
  ep.frames.push_back(ep.frames.front());
  ep.frames.back().tick = 1;
  Engine e = w.engine(opts);
  e.run_continuous(ep);
  EXPECT_GT(e.belief().objects.size(), 4u);
  EXPECT_EQ(e.belief().objects.size(), once.belief().objects.size());
  for (const auto& o : e.belief().objects) {
    EXPECT_EQ(o.first_seen, 0);
    EXPECT_EQ(o.last_seen, 1);
  }
}

TEST(Identity, BeliefJsonShape) {
  testing::World w;
  Engine e = w.engine();
  e.run_continuous(load_episode(testing::data_path("episodes/kitchen.episode.json")));
  auto j = belief_to_json(e.belief());
  ASSERT_TRUE(j.contains("objects"));
  for (const auto& o : j["objects"])
    for (const char* key : {"id", "class", "annotations", "firstSeen", "lastSeen"}) EXPECT_TRUE(o.contains(key)) << key;
}

}  // namespace
}  // namespace rs
