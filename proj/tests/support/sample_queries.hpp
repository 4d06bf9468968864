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

#include <string>
#include <vector>

namespace rs::testing {

/// Query strings as users write them, parenthesis-balanced.
inline const std::vector<std::string>& balanced_queries() {
  static const std::vector<std::string> q{
      "(detect (an object (shape flat) (color black) (location in (a container (category drawer#3)))))",
      "(inspect #obj_id :pose :grasp-points)",
      "(track (an object (type `Spatula`) command `start`))",
      "(detect ( an object( (type 'Handle') (part-of (an object ( type 'Drawer')) ))))",
      "(detect ( an object( (class 'KnusperHonig'))))",
  };
  return q;
}

/// Query strings missing closing parentheses; these need lenient parsing.
inline const std::vector<std::string>& unbalanced_queries() {
  static const std::vector<std::string> q{
      "(detect (an object (shape round) (color black) (location (a location ( on (a table (category "
      "table-top#3)))))",
      "(inspect (#uid :pose,:obj-part)",
      "(detect ( an object( (shape box) (color green)))",
      "(detect ( an object( (type 'Food')))",
      "(scan (for object (detect ( an object ( (type 'Shelf') (command 'start') ))))",
  };
  return q;
}

}  // namespace rs::testing
