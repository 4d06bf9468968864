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

#include <numeric>

#include "rs/error.hpp"
#include "rs/fusion.hpp"
#include "support/fusion_oracle.hpp"

namespace rs {
namespace {

Atom atom(const std::string& key) {
  auto eq = key.find('=');
  return {key.substr(0, eq), key.substr(eq + 1)};
}

TEST(Fusion, ShippedTableMatchesExpected) {
  const auto& m = FusionModel::standard();
  EXPECT_EQ(m.classes, (std::vector<std::string>{"Cereal", "Chips", "Cup", "Pot"}));
  ASSERT_EQ(m.atoms.size(), testing::expected_cpt().size());
  for (const auto& [key, row] : testing::expected_cpt()) {
    int i = m.atom_index(atom(key));
    ASSERT_GE(i, 0) << key;
    EXPECT_EQ(m.cpt[static_cast<std::size_t>(i)], row) << key;
  }
}

TEST(Fusion, SingleAtomArgmax) {
  const auto& m = FusionModel::standard();
  EXPECT_EQ(fuse({atom("linemod=Pot")}, m).label, "Pot");
  EXPECT_EQ(fuse({atom("text=VITALIS_A")}, m).label, "Cereal");
  EXPECT_EQ(fuse({atom("logo=Kellogg's")}, m).label, "Cereal");
  EXPECT_EQ(fuse({atom("color=yellow")}, m).label, "Cup");
}

TEST(Fusion, PosteriorMatchesOracle) {
  const auto& m = FusionModel::standard();
  std::vector<std::vector<std::string>> cases{
      {"color=yellow"}, {"shape=box", "color=yellow"}, {"shape=round", "size=big", "linemod=PringlesSalt"},
      {"text=VITALIS_A", "shape=box"}, {"shape=cylinder", "shape=round", "color=yellow", "size=big"}};
  for (const auto& c : cases) {
    std::vector<Atom> atoms;
    for (const auto& k : c) atoms.push_back(atom(k));
    auto r = fuse(atoms, m);
    auto expected = testing::naive_bayes(c);
    double total = std::accumulate(r.posterior.begin(), r.posterior.end(), 0.0);
    EXPECT_NEAR(total, 1.0, 1e-9);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(r.posterior[k], expected[k], 1e-12);
  }
}

TEST(Fusion, ArgmaxInvariantUnderRowScaling) {
  FusionModel m = FusionModel::standard();
  std::vector<Atom> atoms{atom("shape=box"), atom("color=yellow"), atom("size=big")};
  std::string before = fuse(atoms, m).label;
  for (double s : {0.5, 0.1, 1e-3}) {
    FusionModel scaled = m;
    for (auto& p : scaled.cpt[static_cast<std::size_t>(m.atom_index(atom("color=yellow")))]) p *= s;
    EXPECT_EQ(fuse(atoms, scaled).label, before);
  }
}

TEST(Fusion, Errors) {
  const auto& m = FusionModel::standard();
  EXPECT_THROW(fuse({}, m), NoEvidence);
  EXPECT_THROW(fuse({{"color", "ultraviolet"}}, m), NoEvidence);
  FusionModel blind = m;
  for (auto& p : blind.cpt[0]) p = 0.0;
  EXPECT_THROW(fuse({blind.atoms[0]}, blind), NoEvidence);
  FusionModel bad = m;
  bad.prior = {0.5, 0.5, 0.5, 0.5};
  EXPECT_THROW(bad.validate(), UnsatisfiableDefinition);
}

}  // namespace
}  // namespace rs
