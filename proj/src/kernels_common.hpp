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

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "rs/kernels.hpp"

namespace rs::kernels::detail {

inline std::uint8_t noisy(std::uint8_t c, double sigma, std::uint64_t seed, std::uint64_t counter) {
  if (sigma <= 0.0) return c;
  double v = c + sigma * 255.0 * gaussian(seed, counter);
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

inline void normal_at(int w, int h, const std::uint16_t* d, double mmpp, int x, int y, float* n) {
  n[0] = n[1] = n[2] = 0.0f;
  if (x == 0 || y == 0 || x == w - 1 || y == h - 1) return;
  std::size_t i = static_cast<std::size_t>(y) * w + x;
  std::uint16_t l = d[i - 1], r = d[i + 1], u = d[i - w], b = d[i + w];
  if (!d[i] || !l || !r || !u || !b) return;
  double dx = (static_cast<double>(r) - l) / (2.0 * mmpp);
  double dy = (static_cast<double>(b) - u) / (2.0 * mmpp);
  double len = std::sqrt(dx * dx + dy * dy + 1.0);
  n[0] = static_cast<float>(-dx / len);
  n[1] = static_cast<float>(-dy / len);
  n[2] = static_cast<float>(1.0 / len);
}

inline std::uint8_t nearest(const Rgb& c, const std::vector<Rgb>& palette) {
  int best = 0;
  long best_d = -1;
  for (std::size_t k = 0; k < palette.size(); ++k) {
    long d = 0;
    for (int ch = 0; ch < 3; ++ch) {
      long e = static_cast<long>(c[ch]) - palette[k][ch];
      d += e * e;
    }
    if (best_d < 0 || d < best_d) {
      best_d = d;
      best = static_cast<int>(k);
    }
  }
  return static_cast<std::uint8_t>(best);
}

}  // namespace rs::kernels::detail
