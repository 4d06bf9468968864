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

// Randomised registries and a brute-force planner: every ordering of every
// subset of the registered annotators is tried until one runs on the robot,
// satisfies each input before it is consumed and covers the request.

#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rs/error.hpp"
#include "rs/ontology.hpp"
#include "rs/planner.hpp"
#include "rs/registry.hpp"

namespace rs::testing {

struct RandomCase {
  std::unique_ptr<KnowledgeBase> kb;
  std::unique_ptr<Registry> registry;
  RobotProfile robot;
  std::vector<std::string> request;
  /// type -> its ancestors including itself, computed from the generated parents
  std::map<std::string, std::set<std::string>> up;
};

inline const std::vector<std::string>& oracle_capabilities() {
  static const std::vector<std::string> caps{"Perceive3DDepthCapability", "PerceiveColorCapability"};
  return caps;
}

inline RandomCase random_case(std::mt19937_64& rng) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };

  RandomCase rc;
  const std::size_t n_types = 3 + pick(6);
  std::vector<std::string> types;
  std::string doc;
  for (std::size_t i = 0; i < n_types; ++i) {
    std::string name = "Q" + std::to_string(i);
    std::string parent = coin(0.5) ? "SemanticAnnotation" : "GeometricAnnotation";
    rc.up[name] = {name};
    if (i > 0 && coin(0.3)) {
      parent = types[pick(i)];
      rc.up[name].insert(rc.up[parent].begin(), rc.up[parent].end());
    }
    doc += "(class " + name + " (parents " + parent + "))\n";
    types.push_back(name);
  }
  rc.kb = std::make_unique<KnowledgeBase>(load_ontology(doc, "<random>"));
  rc.registry = std::make_unique<Registry>(*rc.kb);

  // Inputs only come from lower-numbered types or the reader, so the
  // dependency graph is acyclic up to subsumption; the registry rejects the
  // rest and those annotators are simply left out.
  const std::size_t n_annotators = 1 + pick(8);
  for (std::size_t a = 0; a < n_annotators; ++a) {
    AnnotatorDescriptor d;
    d.name = "Ann" + std::to_string(a);
    d.kind = static_cast<AnnotatorKind>(pick(3));
    std::size_t lo = pick(n_types);
    for (std::size_t k = 0, n = 1 + pick(2); k < n; ++k) {
      std::string t = types[lo + pick(n_types - lo)];
      if (std::find(d.outputs.begin(), d.outputs.end(), t) == d.outputs.end()) d.outputs.push_back(t);
    }
    for (std::size_t k = 0, n = pick(3); k < n; ++k) {
      std::string t = lo > 0 && coin(0.8) ? types[pick(lo)] : (coin(0.5) ? "RsDepthImage" : "RsColorImage");
      if (std::find(d.inputs.begin(), d.inputs.end(), t) == d.inputs.end()) d.inputs.push_back(t);
    }
    for (const auto& c : oracle_capabilities())
      if (coin(0.3)) d.capabilities.push_back(c);
    d.cost_hint = static_cast<double>(pick(4));
    try {
      rc.registry->add(d, [](Cas&, const ExpertContext&) {});
    } catch (const CycleError&) {
    }
  }
  rc.robot.name = "random";
  for (const auto& c : oracle_capabilities())
    if (coin(0.7)) rc.robot.capabilities.insert(c);
  for (std::size_t k = 0, n = 1 + pick(3); k < n; ++k) {
    std::string t = types[pick(n_types)];
    if (std::find(rc.request.begin(), rc.request.end(), t) == rc.request.end()) rc.request.push_back(t);
  }
  return rc;
}

class BruteForcePlanner {
 public:
  explicit BruteForcePlanner(const RandomCase& rc) : rc_(rc) {
    for (const auto& d : rc.registry->descriptors())
      if (std::all_of(d.capabilities.begin(), d.capabilities.end(),
                      [&](const std::string& c) { return rc.robot.capabilities.count(c) > 0; }))
        runnable_.push_back(&d);
  }

  bool satisfies(const std::string& produced, const std::string& needed) const {
    auto it = rc_.up.find(produced);
    return produced == needed || (it != rc_.up.end() && it->second.count(needed));
  }

  bool from_reader(const std::string& t) const { return t.rfind("Rs", 0) == 0; }

  /// Checks an ordering the way the engine would run it.
  bool runs(const std::vector<const AnnotatorDescriptor*>& order) const {
    std::vector<std::string> produced;
    for (const auto* d : order) {
      if (std::find(runnable_.begin(), runnable_.end(), d) == runnable_.end()) return false;
      for (const auto& in : d->inputs)
        if (!from_reader(in) && std::none_of(produced.begin(), produced.end(),
                                             [&](const std::string& o) { return satisfies(o, in); }))
          return false;
      produced.insert(produced.end(), d->outputs.begin(), d->outputs.end());
    }
    return true;
  }

  bool covers(const std::vector<const AnnotatorDescriptor*>& order) const {
    return std::all_of(rc_.request.begin(), rc_.request.end(), [&](const std::string& t) {
      return std::any_of(order.begin(), order.end(), [&](const AnnotatorDescriptor* d) {
        return std::any_of(d->outputs.begin(), d->outputs.end(), [&](const std::string& o) { return satisfies(o, t); });
      });
    });
  }

  /// Some valid covering ordering, if any exists.
  std::optional<std::vector<std::string>> search() const {
    const std::size_t n = runnable_.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<const AnnotatorDescriptor*> subset;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) subset.push_back(runnable_[i]);
      if (!covers(subset)) continue;
      std::sort(subset.begin(), subset.end());
      do {
        if (runs(subset)) {
          std::vector<std::string> names;
          for (const auto* d : subset) names.push_back(d->name);
          return names;
        }
      } while (std::next_permutation(subset.begin(), subset.end()));
    }
    return std::nullopt;
  }

  bool accepts(const Pipeline& p) const {
    std::vector<const AnnotatorDescriptor*> order;
    std::set<std::string> seen;
    for (const auto& name : p.annotators) {
      if (!seen.insert(name).second || !rc_.registry->contains(name)) return false;
      order.push_back(&rc_.registry->descriptor(name));
    }
    return runs(order) && covers(order);
  }

 private:
  const RandomCase& rc_;
  std::vector<const AnnotatorDescriptor*> runnable_;
};

struct OracleOutcome {
  std::size_t cases = 0;
  std::size_t solvable = 0;
  std::size_t mismatches = 0;
  std::string first_mismatch;
};

/// Runs the planner and the brute-force search on `n` random cases.
inline OracleOutcome run_planner_oracle(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  OracleOutcome out;
  for (std::size_t i = 0; i < n; ++i) {
    RandomCase rc = random_case(rng);
    BruteForcePlanner oracle(rc);
    auto expected = oracle.search();
    Planner planner(*rc.registry, rc.robot);
    std::optional<Pipeline> got;
    std::string error;
    try {
      got = planner.plan_for_types(rc.request);
    } catch (const Error& e) {
      error = e.what();
    }
    ++out.cases;
    if (expected) ++out.solvable;
    bool ok = expected ? got && validate_pipeline(*rc.registry, rc.robot, *got) && oracle.accepts(*got) : !got;
    if (!ok) {
      ++out.mismatches;
      if (out.first_mismatch.empty())
        out.first_mismatch = "case " + std::to_string(i) + ": oracle " + (expected ? "found a plan" : "found none") +
                             ", planner " + (got ? "returned one" : "failed: " + error);
    }
  }
  return out;
}

}  // namespace rs::testing
