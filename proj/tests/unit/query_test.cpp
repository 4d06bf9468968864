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

#include "rs/error.hpp"
#include "rs/query.hpp"
#include "rs/sexpr.hpp"
#include "support/fixtures.hpp"
#include "support/sample_queries.hpp"
#include "support/random_query.hpp"

namespace rs {
namespace {

TEST(Sexpr, QuotesRoundTrip) {
  for (std::string s : {"plain", "with space", "it's", "back`tick", "3", "-2.5e3", "a\"b", "x\\y"}) {
    sexpr::Node n;
    n.text = s;
    n.quoted = !sexpr::is_bare_symbol(s);
    auto back = sexpr::read_one(sexpr::to_string(n));
    EXPECT_EQ(back.text, s);
    EXPECT_EQ(back.as_number().has_value(), false) << s;
  }
}

TEST(Sexpr, ReportsPosition) {
  try {
    sexpr::read_one("(detect\n  (an object ))  )");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Parse, ShippedQueries) {
  for (const auto& q : testing::balanced_queries()) EXPECT_NO_THROW(parse_query(q)) << q;
  for (const auto& q : testing::unbalanced_queries()) {
    EXPECT_THROW(parse_query(q), SyntaxError) << q;
    EXPECT_NO_THROW(parse_query(q, ParseMode::Lenient)) << q;
  }
}

TEST(Parse, DetectStructure) {
  auto q = parse_query("(detect (an object (shape flat) (color black) (location in (a container (category drawer#3)))))");
  const auto& d = std::get<Detect>(q).description;
  EXPECT_EQ(d.determiner, Determiner::An);
  ASSERT_EQ(d.constraints.size(), 3u);
  const auto* loc = d.find("location");
  ASSERT_NE(loc, nullptr);
  EXPECT_EQ(loc->tag, ConstraintValue::Tag::Nested);
  EXPECT_EQ(loc->relation, "in");
  EXPECT_EQ(loc->nested->kind, "container");
  EXPECT_EQ(loc->nested->find("category")->symbol, "drawer#3");
}

TEST(Parse, GroupedAndQuotedConstraints) {
  auto q = parse_query("(detect ( an object( (type 'Handle') (part-of (an object ( type 'Drawer')) ))))");
  const auto& d = std::get<Detect>(q).description;
  EXPECT_EQ(d.find("type")->symbol, "Handle");
  EXPECT_EQ(d.find("part-of")->nested->find("type")->symbol, "Drawer");
}

TEST(Parse, InspectStripsMarkers) {
  auto q = std::get<Inspect>(parse_query("(inspect #obj_id :pose :grasp-points)"));
  EXPECT_EQ(q.uid, "obj_id");
  EXPECT_EQ(q.attributes, (std::vector<std::string>{"pose", "grasp-points"}));
}

TEST(Parse, CompoundWrappers) {
  auto q = std::get<Compound>(
      parse_query("(scan (for object (detect ( an object ( (type 'Shelf') (command 'start') ))))", ParseMode::Lenient));
  EXPECT_EQ(q.verb, "scan");
  EXPECT_EQ(q.wrapper, (std::vector<std::string>{"for", "object"}));
  EXPECT_EQ(q.inner.find("command")->symbol, "start");
  auto t = std::get<Compound>(parse_query("(track (an object (type `Spatula`) command `start`))"));
  EXPECT_EQ(t.inner.find("type")->symbol, "Spatula");
  EXPECT_EQ(t.inner.find("command")->symbol, "start");
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_query("(detect (an object (colour red)))"), UnknownAttribute);
  try {
    parse_query("(detect (an object (colour red)))");
  } catch (const UnknownAttribute& e) {
    EXPECT_NE(std::string(e.what()).find("color"), std::string::npos);
  }
  EXPECT_THROW(parse_query("(destroy (an object))"), SyntaxError);
  EXPECT_THROW(parse_query("(detect (an object (shape)))"), ArityError);
  EXPECT_THROW(parse_query("(detect (an object (shape box)"), SyntaxError);
  EXPECT_THROW(parse_query("(inspect #x)"), ArityError);
  EXPECT_THROW(parse_query("(count (for shelf))"), SyntaxError);
  try {
    parse_query("(detect (some object))");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(Parse, RandomRoundTrip) {
  testing::QueryGenerator gen(7);
  for (int i = 0; i < 2000; ++i) {
    Query q = gen.query();
    std::string text = format_query(q);
    Query back = parse_query(text);
    ASSERT_TRUE(back == q) << text;
    EXPECT_EQ(format_query(back), text);
  }
}

TEST(Semantics, RequiredAttributes) {
  auto q = parse_query("(detect (an object (shape box) (location on (a table (category table-top#3)))))");
  EXPECT_EQ(required_attributes(q), (std::set<std::string>{"shape", "location", "category"}));
}

TEST(Semantics, Determiner) {
  EXPECT_EQ(resolve_determiner(Determiner::An, {"a", "b"}).size(), 2u);
  EXPECT_EQ(resolve_determiner(Determiner::The, {"a"}), std::vector<std::string>{"a"});
  EXPECT_THROW(resolve_determiner(Determiner::The, {}), NotFound);
  EXPECT_TRUE(resolve_determiner(Determiner::A, {}).empty());
  try {
    resolve_determiner(Determiner::The, {"cup_1", "cup_2"});
    FAIL();
  } catch (const AmbiguityError& e) {
    EXPECT_EQ(e.candidates(), (std::vector<std::string>{"cup_1", "cup_2"}));
  }
}

TEST(Semantics, MatchObjectUsesSubsumption) {
  KnowledgeBase kb = testing::shipped_kb();
  ObjectView v;
  v.id = "o";
  v.symbols["class"] = {"KnusperHonig"};
  v.symbols["shape"] = {"box"};
  v.symbols["color"] = {"green"};
  auto desc = [](const std::string& text) { return std::get<Detect>(parse_query(text)).description; };
  EXPECT_TRUE(match_object(desc("(detect (an object (type Food)))"), v, kb));
  EXPECT_TRUE(match_object(desc("(detect (an object (type Cereal)))"), v, kb));
  EXPECT_FALSE(match_object(desc("(detect (an object (type Container)))"), v, kb));
  EXPECT_TRUE(match_object(desc("(detect (an object (class KnusperHonig)))"), v, kb));
  EXPECT_FALSE(match_object(desc("(detect (an object (class Cereal)))"), v, kb));
  EXPECT_FALSE(match_object(desc("(detect (an object (shape box) (color red)))"), v, kb));
}

TEST(Semantics, SpatialNesting) {
  KnowledgeBase kb = testing::shipped_kb();
  std::vector<SemanticRegion> map{{"table-top#3", "Table", 0, 0, 10, 10}, {"drawer#3", "Drawer", 0, 10, 10, 20}};
  ObjectView v;
  v.id = "o";
  v.symbols["shape"] = {"flat"};
  v.location = "drawer#3";
  auto d = std::get<Detect>(parse_query("(detect (an object (location in (a container (category drawer#3)))))"));
  EXPECT_TRUE(match_object(d.description, v, kb, map));
  v.location = "table-top#3";
  EXPECT_FALSE(match_object(d.description, v, kb, map));
}

}  // namespace
}  // namespace rs
