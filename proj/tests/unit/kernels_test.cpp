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
#include <omp.h>

#include <random>

#include "rs/kernels.hpp"

namespace rs::kernels {
namespace {

RenderSpec random_spec(std::mt19937_64& rng) {
  auto u = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  RenderSpec s;
  s.width = u(1, 160);
  s.height = u(1, 120);
  s.background_depth = static_cast<std::uint16_t>(u(0, 3000));
  s.sigma = u(0, 1) ? 0.0 : 0.02;
  s.seed = rng();
  for (int i = 0, n = u(0, 3); i < n; ++i) {
    int x0 = u(-10, s.width), y0 = u(-10, s.height);
    s.planes.push_back({x0, y0, x0 + u(0, 80), y0 + u(0, 60), static_cast<std::uint16_t>(u(500, 1500)),
                        {static_cast<std::uint8_t>(u(0, 255)), 40, 90}});
  }
  for (int i = 0, n = u(0, 8); i < n; ++i) {
    RenderObject o;
    o.footprint = u(0, 1) ? RenderObject::Footprint::Ellipse : RenderObject::Footprint::Rect;
    o.x0 = u(-5, s.width);
    o.y0 = u(-5, s.height);
    o.x1 = o.x0 + u(1, 40);
    o.y1 = o.y0 + u(1, 40);
    o.depth = static_cast<std::uint16_t>(u(0, 1) ? 0 : u(300, 1400));
    o.color = {static_cast<std::uint8_t>(u(0, 255)), static_cast<std::uint8_t>(u(0, 255)), 7};
    s.objects.push_back(o);
  }
  return s;
}

class Threads : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    saved_ = omp_get_max_threads();
    omp_set_num_threads(GetParam());
  }
  void TearDown() override { omp_set_num_threads(saved_); }
  int saved_ = 1;
};

TEST_P(Threads, RenderMatchesReference) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 60; ++i) {
    RenderSpec s = random_spec(rng);
    std::vector<Rgb> c1, c2;
    std::vector<std::uint16_t> d1, d2;
    render(s, c1, d1);
    reference::render(s, c2, d2);
    ASSERT_EQ(c1, c2);
    ASSERT_EQ(d1, d2);
  }
}

TEST_P(Threads, NormalsMatchReference) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 40; ++i) {
    RenderSpec s = random_spec(rng);
    std::vector<Rgb> c;
    std::vector<std::uint16_t> d;
    reference::render(s, c, d);
    std::vector<float> n1, n2;
    normals(s.width, s.height, d, 5.0, n1);
    reference::normals(s.width, s.height, d, 5.0, n2);
    ASSERT_EQ(n1, n2);
  }
}

TEST_P(Threads, PaletteAndDeltaMatchReference) {
  std::mt19937_64 rng(13);
  std::vector<Rgb> palette{{0, 0, 0}, {255, 255, 255}, {200, 30, 30}, {30, 200, 30}, {30, 30, 200}, {128, 128, 128}};
  for (int i = 0; i < 40; ++i) {
    RenderSpec a = random_spec(rng);
    RenderSpec b = a;
    b.seed = rng();
    if (!b.objects.empty()) b.objects.pop_back();
    std::vector<Rgb> ca, cb;
    std::vector<std::uint16_t> da, db;
    reference::render(a, ca, da);
    reference::render(b, cb, db);
    std::vector<std::uint8_t> l1, l2;
    nearest_palette(ca, palette, l1);
    reference::nearest_palette(ca, palette, l2);
    ASSERT_EQ(l1, l2);
    ASSERT_EQ(mean_abs_depth_delta(da, db), reference::mean_abs_depth_delta(da, db));
  }
}

INSTANTIATE_TEST_SUITE_P(Kernels, Threads, ::testing::Values(1, 2, 4, 7));

TEST(Kernels, EllipseFootprint) {
  RenderObject o;
  o.footprint = RenderObject::Footprint::Ellipse;
  o.x0 = 0;
  o.y0 = 0;
  o.x1 = 10;
  o.y1 = 10;
  EXPECT_TRUE(in_footprint(o, 5, 5));
  EXPECT_FALSE(in_footprint(o, 0, 0));
  EXPECT_FALSE(in_footprint(o, 10, 5));
}

TEST(Kernels, ZeroNoiseIsExactPalette) {
  RenderSpec s;
  s.width = 20;
  s.height = 20;
  s.background_depth = 1000;
  s.objects.push_back({RenderObject::Footprint::Rect, 2, 2, 8, 8, 900, {10, 200, 30}});
  std::vector<Rgb> c;
  std::vector<std::uint16_t> d;
  render(s, c, d);
  for (int y = 2; y < 8; ++y)
    for (int x = 2; x < 8; ++x) {
      EXPECT_EQ(c[y * 20 + x], (Rgb{10, 200, 30}));
      EXPECT_EQ(d[y * 20 + x], 900);
    }
}

TEST(Kernels, GaussianIsStateless) {
  EXPECT_EQ(gaussian(5, 17), gaussian(5, 17));
  EXPECT_NE(gaussian(5, 17), gaussian(6, 17));
  double sum = 0.0, sq = 0.0;
  for (std::uint64_t i = 0; i < 20000; ++i) {
    double g = gaussian(3, i);
    sum += g;
    sq += g * g;
  }
  EXPECT_NEAR(sum / 20000, 0.0, 0.05);
  EXPECT_NEAR(sq / 20000, 1.0, 0.05);
}

}  // namespace
}  // namespace rs::kernels
