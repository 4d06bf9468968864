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

#include <cstdlib>

#include "kernels_common.hpp"
#include "rs/kernels.hpp"

namespace rs::kernels::reference {

// Painter's algorithm: planes, then objects, each overwriting what is below.
void render(const RenderSpec& spec, std::vector<Rgb>& color, std::vector<std::uint16_t>& depth) {
  const int w = spec.width, h = spec.height;
  color.assign(static_cast<std::size_t>(w) * h, spec.background_color);
  depth.assign(static_cast<std::size_t>(w) * h, spec.background_depth);
  for (const auto& p : spec.planes)
    for (int y = std::max(p.y0, 0); y < std::min(p.y1, h); ++y)
      for (int x = std::max(p.x0, 0); x < std::min(p.x1, w); ++x) {
        color[static_cast<std::size_t>(y) * w + x] = p.color;
        depth[static_cast<std::size_t>(y) * w + x] = p.depth;
      }
  for (const auto& o : spec.objects)
    for (int y = std::max(o.y0, 0); y < std::min(o.y1, h); ++y)
      for (int x = std::max(o.x0, 0); x < std::min(o.x1, w); ++x)
        if (in_footprint(o, x, y)) {
          color[static_cast<std::size_t>(y) * w + x] = o.color;
          depth[static_cast<std::size_t>(y) * w + x] = o.depth;
        }
  for (std::size_t i = 0; i < color.size(); ++i)
    for (int ch = 0; ch < 3; ++ch) color[i][ch] = detail::noisy(color[i][ch], spec.sigma, spec.seed, i * 3 + ch);
}

void normals(int width, int height, const std::vector<std::uint16_t>& depth, double mm_per_pixel,
             std::vector<float>& out) {
  out.assign(static_cast<std::size_t>(width) * height * 3, 0.0f);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      detail::normal_at(width, height, depth.data(), mm_per_pixel, x, y,
                        &out[(static_cast<std::size_t>(y) * width + x) * 3]);
}

double mean_abs_depth_delta(const std::vector<std::uint16_t>& a, const std::vector<std::uint16_t>& b) {
  unsigned long long sum = 0, count = 0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (!a[i] || !b[i]) continue;
    sum += static_cast<unsigned long long>(std::abs(static_cast<int>(a[i]) - static_cast<int>(b[i])));
    ++count;
  }
  return count ? static_cast<double>(sum) / static_cast<double>(count) : 0.0;
}

void nearest_palette(const std::vector<Rgb>& color, const std::vector<Rgb>& palette,
                     std::vector<std::uint8_t>& labels) {
  labels.resize(color.size());
  for (std::size_t i = 0; i < color.size(); ++i) labels[i] = detail::nearest(color[i], palette);
}

}  // namespace rs::kernels::reference
