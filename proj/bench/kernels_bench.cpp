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

// Parallel kernels against their serial reference. Arg is the raster width;
// height is three quarters of it.

#include <benchmark/benchmark.h>

#include <random>

#include "rs/kernels.hpp"

namespace {

using namespace rs::kernels;

RenderSpec scene(int width) {
  RenderSpec s;
  s.width = width;
  s.height = width * 3 / 4;
  s.background_depth = 1500;
  s.background_color = {60, 60, 60};
  s.sigma = 4.0 / 255.0;
  s.seed = 7;
  s.planes.push_back({width / 20, s.height / 20, width * 19 / 20, s.height * 2 / 3, 1000, {120, 75, 40}});
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> x(0, width - width / 8), y(0, s.height / 2), size(width / 40, width / 8);
  for (int i = 0; i < 40; ++i) {
    RenderObject o;
    o.footprint = i % 2 ? RenderObject::Footprint::Ellipse : RenderObject::Footprint::Rect;
    o.x0 = x(rng);
    o.y0 = y(rng);
    o.x1 = o.x0 + size(rng);
    o.y1 = o.y0 + size(rng);
    o.depth = static_cast<std::uint16_t>(850 + i);
    o.color = {static_cast<std::uint8_t>(i * 6), 200, static_cast<std::uint8_t>(255 - i * 6)};
    s.objects.push_back(o);
  }
  return s;
}

template <void (*Render)(const RenderSpec&, std::vector<Rgb>&, std::vector<std::uint16_t>&)>
void BM_Render(benchmark::State& state) {
  RenderSpec s = scene(static_cast<int>(state.range(0)));
  std::vector<Rgb> color;
  std::vector<std::uint16_t> depth;
  for (auto _ : state) {
    Render(s, color, depth);
    benchmark::DoNotOptimize(color.data());
  }
  state.SetItemsProcessed(state.iterations() * s.width * s.height);
}

template <void (*Normals)(int, int, const std::vector<std::uint16_t>&, double, std::vector<float>&)>
void BM_Normals(benchmark::State& state) {
  RenderSpec s = scene(static_cast<int>(state.range(0)));
  std::vector<Rgb> color;
  std::vector<std::uint16_t> depth;
  reference::render(s, color, depth);
  std::vector<float> out;
  for (auto _ : state) {
    Normals(s.width, s.height, depth, 5.0, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * s.width * s.height);
}

template <void (*Nearest)(const std::vector<Rgb>&, const std::vector<Rgb>&, std::vector<std::uint8_t>&)>
void BM_Palette(benchmark::State& state) {
  RenderSpec s = scene(static_cast<int>(state.range(0)));
  std::vector<Rgb> color;
  std::vector<std::uint16_t> depth;
  reference::render(s, color, depth);
  std::vector<Rgb> palette{{245, 245, 245}, {20, 20, 20},  {200, 30, 30},   {40, 160, 60},
                           {40, 80, 200},   {230, 210, 40}, {240, 140, 30}, {130, 60, 160},
                           {240, 150, 190}, {60, 200, 210}, {128, 128, 128}, {120, 75, 40}};
  std::vector<std::uint8_t> labels;
  for (auto _ : state) {
    Nearest(color, palette, labels);
    benchmark::DoNotOptimize(labels.data());
  }
  state.SetItemsProcessed(state.iterations() * s.width * s.height);
}

template <double (*Delta)(const std::vector<std::uint16_t>&, const std::vector<std::uint16_t>&)>
void BM_DepthDelta(benchmark::State& state) {
  RenderSpec a = scene(static_cast<int>(state.range(0)));
  RenderSpec b = a;
  b.objects.pop_back();
  std::vector<Rgb> color;
  std::vector<std::uint16_t> da, db;
  reference::render(a, color, da);
  reference::render(b, color, db);
  for (auto _ : state) benchmark::DoNotOptimize(Delta(da, db));
  state.SetItemsProcessed(state.iterations() * a.width * a.height);
}

}  // namespace

BENCHMARK(BM_Render<render>)->Name("render/parallel")->Arg(320)->Arg(1280)->Arg(2560);
BENCHMARK(BM_Render<reference::render>)->Name("render/reference")->Arg(320)->Arg(1280)->Arg(2560);
BENCHMARK(BM_Normals<normals>)->Name("normals/parallel")->Arg(320)->Arg(1280)->Arg(2560);
BENCHMARK(BM_Normals<reference::normals>)->Name("normals/reference")->Arg(320)->Arg(1280)->Arg(2560);
BENCHMARK(BM_Palette<nearest_palette>)->Name("palette/parallel")->Arg(320)->Arg(1280)->Arg(2560);
BENCHMARK(BM_Palette<reference::nearest_palette>)->Name("palette/reference")->Arg(320)->Arg(1280)->Arg(2560);
BENCHMARK(BM_DepthDelta<mean_abs_depth_delta>)->Name("depth_delta/parallel")->Arg(320)->Arg(1280)->Arg(2560);
BENCHMARK(BM_DepthDelta<reference::mean_abs_depth_delta>)->Name("depth_delta/reference")->Arg(320)->Arg(1280)->Arg(2560);

BENCHMARK_MAIN();
