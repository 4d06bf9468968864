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

#include "rs/kernels.hpp"

#include <cmath>
#include <cstdlib>

#include "kernels_common.hpp"

namespace rs::kernels {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

double gaussian(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t a = splitmix64(seed ^ splitmix64(counter * 2 + 1));
  std::uint64_t b = splitmix64(a ^ 0xD1B54A32D192ED03ULL);
  double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

bool in_footprint(const RenderObject& o, int x, int y) {
  if (x < o.x0 || x >= o.x1 || y < o.y0 || y >= o.y1) return false;
  if (o.footprint == RenderObject::Footprint::Rect) return true;
  double rx = (o.x1 - o.x0) / 2.0, ry = (o.y1 - o.y0) / 2.0;
  double dx = (x + 0.5 - (o.x0 + rx)) / rx, dy = (y + 0.5 - (o.y0 + ry)) / ry;
  return dx * dx + dy * dy <= 1.0;
}

void render(const RenderSpec& spec, std::vector<Rgb>& color, std::vector<std::uint16_t>& depth) {
  const int w = spec.width, h = spec.height;
  color.assign(static_cast<std::size_t>(w) * h, spec.background_color);
  depth.assign(static_cast<std::size_t>(w) * h, spec.background_depth);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    for (const auto& p : spec.planes) {
      if (y < p.y0 || y >= p.y1) continue;
      for (int x = std::max(p.x0, 0); x < std::min(p.x1, w); ++x) {
        color[row + x] = p.color;
        depth[row + x] = p.depth;
      }
    }
    for (const auto& o : spec.objects) {
      if (y < o.y0 || y >= o.y1) continue;
      for (int x = std::max(o.x0, 0); x < std::min(o.x1, w); ++x)
        if (in_footprint(o, x, y)) {
          color[row + x] = o.color;
          depth[row + x] = o.depth;
        }
    }
    for (std::size_t i = row; i < row + w; ++i)
      for (int ch = 0; ch < 3; ++ch) color[i][ch] = detail::noisy(color[i][ch], spec.sigma, spec.seed, i * 3 + ch);
  }
}

void normals(int width, int height, const std::vector<std::uint16_t>& depth, double mm_per_pixel,
             std::vector<float>& out) {
  out.assign(static_cast<std::size_t>(width) * height * 3, 0.0f);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      detail::normal_at(width, height, depth.data(), mm_per_pixel, x, y,
                        &out[(static_cast<std::size_t>(y) * width + x) * 3]);
}

double mean_abs_depth_delta(const std::vector<std::uint16_t>& a, const std::vector<std::uint16_t>& b) {
  const long n = static_cast<long>(std::min(a.size(), b.size()));
  unsigned long long sum = 0, count = 0;
#pragma omp parallel for reduction(+ : sum, count) schedule(static)
  for (long i = 0; i < n; ++i) {
    if (a[i] && b[i]) {
      sum += static_cast<unsigned long long>(std::abs(static_cast<int>(a[i]) - static_cast<int>(b[i])));
      ++count;
    }
  }
  return count ? static_cast<double>(sum) / static_cast<double>(count) : 0.0;
}

void nearest_palette(const std::vector<Rgb>& color, const std::vector<Rgb>& palette,
                     std::vector<std::uint8_t>& labels) {
  const long n = static_cast<long>(color.size());
  labels.resize(color.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) labels[i] = detail::nearest(color[i], palette);
}

}  // namespace rs::kernels
