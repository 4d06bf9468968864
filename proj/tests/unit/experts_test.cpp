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

#include "rs/error.hpp"
#include "rs/registry.hpp"
#include "rs/scene.hpp"
#include "support/fixtures.hpp"
#include "support/segmentation.hpp"

namespace rs {
namespace {

SceneDocument kitchen() { return load_scene(testing::data_path("scenes/kitchen.scene.json")); }

ExpertContext context(const testing::World& w, const SceneDocument& s) {
  ExpertContext ctx;
  ctx.kb = &w.kb;
  ctx.semantic_map = s.regions;
  ctx.truth = &s;
  ctx.mm_per_pixel = s.mm_per_pixel;
  return ctx;
}

TEST(Scene, RenderingBasics) {
  SceneDocument s = kitchen();
  Observation a = render_observation(s, Pose{}, 0.0, 0, 42);
  Observation b = render_observation(s, Pose{}, 0.0, 0, 42);
  Observation c = render_observation(s, Pose{}, 0.0, 0, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.color, c.color);
  EXPECT_EQ(a.depth, c.depth);
  const SceneObject* glass = s.find("glass_1");
  ASSERT_NE(glass, nullptr);
  for (auto px : testing::footprint(*glass, s.width)) EXPECT_EQ(a.depth[px], 0);
  const SceneObject* cereal = s.find("cereal_1");
  Observation exact = render_observation(s, Pose{}, 0.0, 0, 42, 0.0);
  for (auto px : testing::footprint(*cereal, s.width)) {
    EXPECT_EQ(exact.color[px], Palette::standard().rgb("green"));
    EXPECT_EQ(exact.depth[px], s.support_depth(*cereal) - cereal->height_mm);
  }
}

TEST(Scene, RejectsBadDocuments) {
  SceneDocument s = kitchen();
  s.objects.push_back(s.objects.front());
  EXPECT_THROW(s.validate(), InvalidObservation);
  SceneDocument t = kitchen();
  t.objects.front().footprint.x1 = t.width + 5;
  EXPECT_THROW(t.validate(), InvalidObservation);
}

TEST(Experts, ZeroNoiseSegmentation) {
  testing::World w;
  auto rep = testing::check_segmentation(w, kitchen(), "table-top#3", "glass_1", "knife_1");
  EXPECT_GT(rep.expected_clusters, 4u);
  for (const auto& p : rep.problems) ADD_FAILURE() << p;
}

TEST(Experts, PreconditionUnmet) {
  testing::World w;
  SceneDocument s = kitchen();
  Cas cas = init_cas(render_observation(s, Pose{}, 0.0));
  EXPECT_THROW(w.registry.run("PointCloudClusterExtractor", cas, context(w, s)), PreconditionUnmet);
}

TEST(Experts, TabletopPipelineAnnotates) {
  testing::World w;
  SceneDocument s = kitchen();
  Cas cas = init_cas(render_observation(s, Pose{}, 0.0, 0, 5));
  auto ctx = context(w, s);
  for (const auto& name : default_continuous_pipeline()) w.registry.run(name, cas, ctx);
  const SceneObject* cereal = s.find("cereal_1");
  Region truth = testing::footprint(*cereal, s.width);
  const Hypothesis* h = nullptr;
  for (const auto& x : cas.hypotheses)
    if (x.region == truth) h = &x;
  ASSERT_NE(h, nullptr);
  auto value = [&](const std::string& type, const std::string& field) {
    for (const auto& a : h->annotations)
      if (a.type == type) return a.text(field);
    return std::string();
  };
  EXPECT_EQ(value("ShapeAnnotation", "shape"), "box");
  EXPECT_EQ(value("SemanticColorAnnotation", "color"), "green");
  EXPECT_EQ(value("LocationAnnotation", "location"), "table-top#3");
}

std::int64_t count_on(const testing::World& w, const std::string& scene_file, double width) {
  SceneDocument s = load_scene(testing::data_path(scene_file));
  Cas cas = init_cas(render_observation(s, Pose{}, 0.0));
  auto ctx = context(w, s);
  const SceneObject* first = nullptr;
  for (const auto& o : s.objects)
    if (o.class_label == "CerealProduct" && (!first || o.footprint.x0 < first->footprint.x0)) first = &o;
  EXPECT_NE(first, nullptr);
  ctx.params["VolumetricCounter"] = {{"productWidth", width},
                                     {"poseX", (first->footprint.x0 + 1) * s.mm_per_pixel / 1000.0},
                                     {"poseY", (first->footprint.y0 + 1) * s.mm_per_pixel / 1000.0}};
  w.registry.run("ShelfScanner", cas, ctx);
  w.registry.run("VolumetricCounter", cas, ctx);
  for (const auto& h : cas.hypotheses)
    for (const auto& a : h.annotations)
      if (a.type == "CountAnnotation") return static_cast<std::int64_t>(*a.number("count"));
  return -1;
}

TEST(Experts, VolumetricCount) {
  testing::World w;
  EXPECT_EQ(count_on(w, "scenes/retail_facing_25cm.scene.json", 0.05), 5);
  EXPECT_EQ(count_on(w, "scenes/retail_facing_24cm.scene.json", 0.05), 4);
}

}  // namespace
}  // namespace rs
