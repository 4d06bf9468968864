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

#include <map>
#include <string>
#include <vector>

namespace rs::testing {

/// P(atom | class) for Cereal, Chips, Cup, Pot, written out independently
/// of the shipped model.
inline const std::map<std::string, std::vector<double>>& expected_cpt() {
  static const std::map<std::string, std::vector<double>> t{
      {"color=yellow", {0.4264, 0.3484, 0.4422, 0.2936}},   {"text=VITALIS_A", {0.623, 0.0000, 0.0000, 0.0004}},
      {"logo=Kellogg's", {0.3734, 0.0000, 0.0000, 0.0008}}, {"linemod=Popcorn", {0.7392, 0.0006, 0.0000, 0.0010}},
      {"linemod=Pot", {0.0008, 0.0004, 0.0004, 0.9994}},    {"linemod=PringlesSalt", {0.0002, 0.4986, 0.0010, 0.0006}},
      {"shape=box", {0.4806, 0.3870, 0.2810, 0.3556}},      {"shape=cylinder", {0.3722, 0.4540, 0.4010, 0.4266}},
      {"shape=round", {0.3176, 0.4092, 0.5182, 0.4068}},    {"size=big", {0.368, 0.3442, 0.3768, 0.3292}},
  };
  return t;
}

/// Naive Bayes with a uniform prior, normalised.
inline std::vector<double> naive_bayes(const std::vector<std::string>& atoms) {
  std::vector<double> p(4, 0.25);
  for (const auto& a : atoms) {
    const auto& row = expected_cpt().at(a);
    for (std::size_t c = 0; c < 4; ++c) p[c] *= row[c];
  }
  double z = 0.0;
  for (double v : p) z += v;
  for (double& v : p) v /= z;
  return p;
}

}  // namespace rs::testing
