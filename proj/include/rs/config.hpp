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

// Override files:
//
//   (annotator PointCloudClusterExtractor (threshold 12) (minPixels 20))
//   (filters (roi off) (static-epsilon 3))
//   (match (tau 0.4) (pose-scale 400))

#pragma once

#include <map>
#include <string>
#include <string_view>

#include "rs/identity.hpp"

namespace rs {

struct EngineConfig {
  std::map<std::string, std::map<std::string, double>> params;
  FilterConfig filters;
  MatchConfig match;
};

/// Applies the overrides in `text` on top of `base`. Throws ParseError.
EngineConfig parse_config(std::string_view text, EngineConfig base = {});
EngineConfig load_config(const std::string& path, EngineConfig base = {});

}  // namespace rs
