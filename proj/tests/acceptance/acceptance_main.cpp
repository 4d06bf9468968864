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

// One line per acceptance criterion: "PASS <n> <name>: <detail>" or
// "FAIL ...". Exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "rs/engine.hpp"
#include "rs/error.hpp"
#include "rs/fusion.hpp"
#include "rs/planner.hpp"
#include "rs/query.hpp"
#include "support/episodes.hpp"
#include "support/fixtures.hpp"
#include "support/fusion_oracle.hpp"
#include "support/sample_queries.hpp"
#include "support/planner_oracle.hpp"
#include "support/random_query.hpp"
#include "support/segmentation.hpp"
#include "support/subsumption.hpp"

namespace {

using namespace rs;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = false;
  std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

std::string timing(double s) {
  std::ostringstream os;
  os.precision(3);
  os << s << " s";
  return os.str();
}

const std::vector<std::string> kExpectedPlan{"PlaneAnnotator",          "PointCloudClusterExtractor",
                                             "NormalEstimator",         "PrimitiveShapeAnnotator",
                                             "ClusterColorHistogramCalculator", "ClusterLocationAnnotator"};

Outcome pipeline_reproduction() {
  auto t0 = Clock::now();
  testing::World w;
  Planner fresh(w.registry, w.robot);
  Planner with_base = w.planner();
  auto a = fresh.plan_for_attributes({"color", "shape", "location"});
  auto b = with_base.plan_for_attributes({"color", "shape", "location"});
  std::vector<std::string> registered;
  for (std::size_t i = 0; i < kExpectedPlan.size(); ++i) registered.push_back(w.registry.descriptors()[i].name);
  double s = seconds_since(t0);
  bool ok = a.annotators == kExpectedPlan && b.annotators == kExpectedPlan && fresh.validate(a) &&
            registered == kExpectedPlan && s < 1.0;
  return {ok, join(a.annotators) + " in " + timing(s)};
}

Outcome planner_oracle() {
  auto t0 = Clock::now();
  auto r = testing::run_planner_oracle(1000, 20260401);
  double s = seconds_since(t0);
  std::string detail = std::to_string(r.cases) + " registries, " + std::to_string(r.solvable) + " solvable, " +
                       std::to_string(r.mismatches) + " mismatches in " + timing(s);
  if (!r.first_mismatch.empty()) detail += "; " + r.first_mismatch;
  return {r.cases >= 1000 && r.mismatches == 0 && s < 60.0, detail};
}

std::vector<std::string> ask(const testing::World& w, const Episode& ep, const std::string& q) {
  Engine e = w.engine();
  e.run_continuous(ep);
  return e.answer_query(parse_query(q, ParseMode::Lenient), ep).ids;
}

SceneDocument kitchen() { return load_scene(testing::data_path("scenes/kitchen.scene.json")); }

Outcome query_equivalence() {
  testing::World w;
  Episode ep = single_frame_episode(kitchen());
  auto a = ask(w, ep, "(detect ( an object( (shape box) (color green)))");
  auto b = ask(w, ep, "(detect ( an object( (class 'KnusperHonig'))))");
  auto c = ask(w, ep, "(detect ( an object( (type 'Food')))");
  return {a.size() == 1 && a == b && a == c, join(a) + " / " + join(b) + " / " + join(c)};
}

Outcome determiner_contract() {
  testing::World w;
  const std::string q = "(detect (the object (type Cup)))";
  SceneDocument two = kitchen();
  std::string detail;
  bool ok = true;
  try {
    ask(w, single_frame_episode(two), q);
    ok = false;
    detail += "two cups: no error; ";
  } catch (const AmbiguityError& e) {
    ok = ok && e.candidates().size() == 2;
    detail += "two cups: ambiguous {" + join(e.candidates()) + "}; ";
  }
  SceneDocument one = two;
  std::erase_if(one.objects, [](const SceneObject& o) { return o.id == "cup_2"; });
  auto single = ask(w, single_frame_episode(one), q);
  ok = ok && single.size() == 1;
  detail += "one cup: " + join(single) + "; ";
  SceneDocument none = one;
  std::erase_if(none.objects, [](const SceneObject& o) { return o.class_label == "Cup"; });
  try {
    ask(w, single_frame_episode(none), q);
    ok = false;
    detail += "no cup: no error";
  } catch (const NotFound&) {
    detail += "no cup: NotFound";
  }
  return {ok, detail};
}

Outcome fusion_fixture() {
  const auto& m = FusionModel::standard();
  bool ok = true;
  std::string detail;
  for (auto [atom, want] : {std::pair<Atom, std::string>{{"linemod", "Pot"}, "Pot"},
                            {{"text", "VITALIS_A"}, "Cereal"},
                            {{"logo", "Kellogg's"}, "Cereal"},
                            {{"color", "yellow"}, "Cup"}}) {
    auto r = fuse({atom}, m);
    double total = std::accumulate(r.posterior.begin(), r.posterior.end(), 0.0);
    auto oracle = testing::naive_bayes({atom.predicate + "=" + atom.value});
    bool agrees = true;
    for (std::size_t k = 0; k < oracle.size(); ++k) agrees = agrees && std::abs(oracle[k] - r.posterior[k]) < 1e-12;
    ok = ok && r.label == want && std::abs(total - 1.0) <= 1e-9 && agrees;
    detail += atom.predicate + "=" + atom.value + "->" + r.label + " ";
  }
  for (const auto& [key, row] : testing::expected_cpt()) {
    auto eq = key.find('=');
    int i = m.atom_index({key.substr(0, eq), key.substr(eq + 1)});
    ok = ok && i >= 0 && m.cpt[static_cast<std::size_t>(i)] == row;
  }
  std::vector<Atom> atoms{{"shape", "box"}, {"color", "yellow"}, {"size", "big"}};
  std::string before = fuse(atoms, m).label;
  for (std::size_t row = 0; row < m.atoms.size(); ++row)
    for (double s : {0.5, 1e-3}) {
      FusionModel scaled = m;
      for (auto& p : scaled.cpt[row]) p *= s;
      ok = ok && fuse(atoms, scaled).label == before;
    }
  return {ok, detail + "(argmax stable under row scaling)"};
}

Outcome identity_resolution() {
  auto t0 = Clock::now();
  testing::World w;
  bool ok = true;
  std::string detail;
  for (const auto& file : testing::identity_episodes()) {
    auto r = testing::run_identity(w, file);
    ok = ok && r.with_filters == static_cast<std::size_t>(r.ground_truth) && r.without_filters > r.with_filters;
    detail += std::to_string(r.ground_truth) + ":" + std::to_string(r.with_filters) + "/" +
              std::to_string(r.without_filters) + " ";
  }
  double s = seconds_since(t0);
  return {ok && s < 30.0, "truth:on/off " + detail + "in " + timing(s)};
}

Outcome segmentation_recovery() {
  testing::World w;
  auto rep = testing::check_segmentation(w, kitchen(), "table-top#3", "glass_1", "knife_1");
  std::string detail = std::to_string(rep.clusters) + " clusters for " + std::to_string(rep.expected_clusters) +
                       " opaque objects, glass and knife recovered";
  if (!rep.problems.empty()) detail = join(rep.problems);
  return {rep.problems.empty() && rep.expected_clusters > 0, detail};
}

Outcome subsumption_properties() {
  auto r = testing::check_subsumption(testing::shipped_kb());
  return {r.violations == 0, std::to_string(r.pairs) + " pairs, " + std::to_string(r.violations) + " violations" +
                                 (r.first.empty() ? "" : "; " + r.first)};
}

Outcome parser_round_trip() {
  testing::QueryGenerator gen(20260402);
  std::size_t failures = 0;
  std::string first;
  const std::size_t n = 10000;
  for (std::size_t i = 0; i < n; ++i) {
    Query q = gen.query();
    std::string text = format_query(q);
    try {
      if (!(parse_query(text) == q)) throw std::runtime_error("different tree");
    } catch (const std::exception& e) {
      if (!failures++) first = text + ": " + e.what();
    }
  }
  std::size_t verbatim = 0;
  for (const auto& q : testing::balanced_queries()) try {
      parse_query(q);
      ++verbatim;
    } catch (const Error& e) {
      if (!failures++) first = q + ": " + e.what();
    }
  for (const auto& q : testing::unbalanced_queries()) try {
      parse_query(q, ParseMode::Lenient);
      ++verbatim;
    } catch (const Error& e) {
      if (!failures++) first = q + ": " + e.what();
    }
  return {failures == 0, std::to_string(n) + " random trees, " + std::to_string(verbatim) + " verbatim queries, " +
                             std::to_string(failures) + " failures" + (first.empty() ? "" : "; " + first)};
}

Outcome compound_count() {
  testing::World w;
  bool ok = true;
  std::string detail;
  for (auto [file, want] : {std::pair{"scenes/retail_facing_25cm.scene.json", 5},
                            std::pair{"scenes/retail_facing_24cm.scene.json", 4}}) {
    Episode ep = single_frame_episode(load_scene(testing::data_path(file)));
    Engine e = w.engine();
    e.run_continuous(ep);
    auto r = e.run_compound(std::get<Compound>(parse_query("(count (an object (type CerealProduct) (width 0.05)))")),
                            ep);
    ok = ok && r.count && *r.count == want;
    detail += std::string(file) + " -> " + (r.count ? std::to_string(*r.count) : "none") + " ";
  }
  return {ok, detail};
}

Outcome determinism() {
  testing::World w;
  auto dump = [&](std::uint64_t seed) {
    EngineOptions opts;
    opts.seed = seed;
    Engine e = w.engine(opts);
    Episode ep = load_episode(testing::data_path("episodes/identity_ep3.episode.json"));
    e.run_continuous(ep);
    e.answer_query(parse_query("(detect (an object (shape round)))"), ep);
    return dump_belief(e.belief());
  };
  std::string a = dump(77), b = dump(77);
  return {a == b && !a.empty(), std::to_string(a.size()) + " bytes, identical: " + (a == b ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"pipeline reproduction", pipeline_reproduction},
      {"planner oracle equivalence", planner_oracle},
      {"query equivalence", query_equivalence},
      {"determiner contract", determiner_contract},
      {"fusion fixture", fusion_fixture},
      {"identity resolution", identity_resolution},
      {"segmentation recovery", segmentation_recovery},
      {"subsumption properties", subsumption_properties},
      {"parser round-trip", parser_round_trip},
      {"compound count", compound_count},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw ") + e.what()};
    }
    failed += !o.ok;
    std::cout << (o.ok ? "PASS " : "FAIL ") << i + 1 << " " << criteria[i].first << ": " << o.detail << std::endl;
  }
  return failed ? 1 : 0;
}
