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

// Raster kernels. The functions in rs::kernels are OpenMP-parallel; the ones
// in rs::kernels::reference are plain serial loops kept for testing and
// benchmarking. Both produce bit-identical output for any thread count.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace rs::kernels {

using Rgb = std::array<std::uint8_t, 3>;

struct RenderPlane {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open
  std::uint16_t depth = 0;
  Rgb color{0, 0, 0};
};

struct RenderObject {
  enum class Footprint { Rect, Ellipse };
  Footprint footprint = Footprint::Rect;
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open bounding box
  std::uint16_t depth = 0;             // 0 for transparent objects
  Rgb color{0, 0, 0};
};

struct RenderSpec {
  int width = 0;
  int height = 0;
  std::uint16_t background_depth = 0;
  Rgb background_color{0, 0, 0};
  std::vector<RenderPlane> planes;    // painted in order
  std::vector<RenderObject> objects;  // painted in order, after planes
  double sigma = 0.0;                 // color noise, fraction of full scale
  std::uint64_t seed = 0;
};

bool in_footprint(const RenderObject& o, int x, int y);

/// Standard normal variate for (seed, counter); stateless.
double gaussian(std::uint64_t seed, std::uint64_t counter);

void render(const RenderSpec& spec, std::vector<Rgb>& color, std::vector<std::uint16_t>& depth);

/// Unit surface normals (nx, ny, nz per pixel) from depth central differences.
/// Pixels with invalid depth or an invalid neighbour get (0, 0, 0).
void normals(int width, int height, const std::vector<std::uint16_t>& depth, double mm_per_pixel,
             std::vector<float>& out);

/// Mean absolute difference in millimeters over pixels valid in both rasters.
double mean_abs_depth_delta(const std::vector<std::uint16_t>& a, const std::vector<std::uint16_t>& b);

/// Index of the nearest palette entry (squared RGB distance, lowest index on ties).
void nearest_palette(const std::vector<Rgb>& color, const std::vector<Rgb>& palette,
                     std::vector<std::uint8_t>& labels);

namespace reference {

void render(const RenderSpec& spec, std::vector<Rgb>& color, std::vector<std::uint16_t>& depth);
void normals(int width, int height, const std::vector<std::uint16_t>& depth, double mm_per_pixel,
             std::vector<float>& out);
double mean_abs_depth_delta(const std::vector<std::uint16_t>& a, const std::vector<std::uint16_t>& b);
void nearest_palette(const std::vector<Rgb>& color, const std::vector<Rgb>& palette,
                     std::vector<std::uint8_t>& labels);

}  // namespace reference

}  // namespace rs::kernels
