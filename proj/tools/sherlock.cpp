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

// sherlock: plan, explain and run perception tasks over synthetic episodes.
//
// Exit codes: 0 ok, 1 usage, input or parse error, 2 NotFound,
// 3 AmbiguityError, 4 planning error, 5 any other failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rs/config.hpp"
#include "rs/engine.hpp"
#include "rs/error.hpp"
#include "rs/ontology.hpp"
#include "rs/planner.hpp"
#include "rs/query.hpp"
#include "rs/registry.hpp"
#include "rs/scene.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::vector<std::string> ontologies;
  std::string robot = "pr2";
  std::string episode;
  std::string scene;
  std::string query;
  std::string object;
  std::string config;
  std::string filters = "on";
  std::uint64_t seed = 0;
  bool dump_cas = false;
  bool as_json = false;
  bool explain = false;
};

std::string data_path(const std::string& relative) { return (fs::path(SHERLOCK_DATA_DIR) / relative).string(); }

std::string robot_path(const std::string& robot) {
  if (fs::exists(robot)) return robot;
  return data_path("robots/" + robot + ".onto");
}

rs::KnowledgeBase load_kb(const Options& o) {
  std::vector<std::string> files = o.ontologies;
  if (files.empty())
    for (const char* name : {"kitchen", "retail", "chemlab"}) files.push_back(data_path(std::string("ontologies/") + name + ".onto"));
  rs::KnowledgeBase kb = rs::load_ontology_file(files.front());
  for (std::size_t i = 1; i < files.size(); ++i) {
    std::ifstream in(files[i]);
    if (!in) throw rs::IoError("cannot open " + files[i]);
    std::stringstream ss;
    ss << in.rdbuf();
    rs::merge_ontology(kb, ss.str(), files[i]);
  }
  return kb;
}

rs::Episode load_input(const Options& o) {
  if (!o.episode.empty()) return rs::load_episode(o.episode);
  if (!o.scene.empty()) return rs::single_frame_episode(rs::load_scene(o.scene));
  throw rs::MissingParameter("give --episode or --scene");
}

rs::EngineOptions engine_options(const Options& o) {
  rs::EngineOptions e;
  e.seed = o.seed;
  if (!o.config.empty()) e.config = rs::load_config(o.config);
  if (o.filters == "off") e.config.filters = rs::FilterConfig::all_off();
  e.keep_last_cas = o.dump_cas;
  return e;
}

void print_pipeline(const rs::Pipeline& p, bool explain, bool as_json) {
  if (as_json) {
    json j = {{"pipeline", p.annotators}, {"provenance", p.provenance}};
    std::cout << j.dump(2) << "\n";
    return;
  }
  for (std::size_t i = 0; i < p.annotators.size(); ++i) {
    std::cout << i + 1 << ". " << p.annotators[i];
    if (explain) std::cout << "  [" << p.provenance.at(p.annotators[i]) << "]";
    std::cout << "\n";
  }
}

int cmd_plan(const Options& o, bool explain) {
  rs::KnowledgeBase kb = load_kb(o);
  rs::Registry registry(kb);
  rs::register_standard_experts(registry);
  rs::Planner planner(registry, rs::load_robot_profile(kb, robot_path(o.robot)), rs::default_continuous_pipeline());
  rs::Pipeline p;
  if (!o.object.empty()) {
    p = planner.plan_for_object(o.object);
  } else {
    rs::Query q = rs::parse_query(o.query.empty() ? "(detect (an object))" : o.query, rs::ParseMode::Lenient);
    rs::PlannerOptions opts;
    if (const auto* c = std::get_if<rs::Compound>(&q); c && c->verb == "scan") opts.include_all_activated = true;
    p = planner.plan_for_query(q, opts);
  }
  print_pipeline(p, explain || o.explain, o.as_json);
  return 0;
}

void dump_cas(const rs::Engine& engine) {
  if (engine.last_cas()) std::cout << rs::to_json(*engine.last_cas()).dump(2) << "\n";
}

int cmd_run(const Options& o) {
  rs::KnowledgeBase kb = load_kb(o);
  rs::Registry registry(kb);
  rs::register_standard_experts(registry);
  rs::Engine engine(registry, rs::load_robot_profile(kb, robot_path(o.robot)), engine_options(o));
  rs::Episode episode = load_input(o);
  if (o.query.empty()) throw rs::MissingParameter("run needs --query");
  rs::Query q = rs::parse_query(o.query, rs::ParseMode::Lenient);
  engine.run_continuous(episode);

  if (const auto* c = std::get_if<rs::Compound>(&q)) {
    rs::CompoundResult r = engine.run_compound(*c, episode);
    if (o.as_json) {
      json j = {{"verb", r.verb}, {"pipeline", r.pipeline.annotators}};
      if (r.count) j["count"] = *r.count;
      for (const auto& s : r.track)
        j["track"].push_back({{"tick", s.tick}, {"id", s.id ? json(*s.id) : json(nullptr)}, {"position", s.position}});
      for (const auto& l : r.scan)
        j["scan"].push_back({{"id", l.id}, {"kind", l.kind}, {"at", l.coordinate}, {"detections", l.detections}});
      std::cout << j.dump(2) << "\n";
    } else {
      if (o.explain) print_pipeline(r.pipeline, true, false);
      if (r.count) std::cout << "(count " << *r.count << ")\n";
      for (const auto& s : r.track)
        std::cout << "(tick " << s.tick << " " << (s.id ? *s.id : "nil") << " (pose (" << s.position[0] << " "
                  << s.position[1] << " " << s.position[2] << ")))\n";
      for (const auto& l : r.scan)
        std::cout << "(" << l.id << " (type " << l.kind << ") (at " << l.coordinate << ") (seen " << l.detections
                  << "))\n";
    }
  } else {
    rs::QueryResult r = engine.answer_query(q, episode);
    if (o.as_json) {
      json j = {{"ids", r.ids}, {"direct", r.direct}, {"pipeline", r.pipeline.annotators}};
      json objects = json::array();
      json all = rs::belief_to_json(engine.belief())["objects"];
      for (const auto& id : r.ids)
        for (const auto& obj : all)
          if (obj["id"] == id) objects.push_back(obj);
      j["objects"] = objects;
      std::cout << j.dump(2) << "\n";
    } else {
      if (o.explain) print_pipeline(r.pipeline, true, false);
      std::cout << engine.describe(r.ids);
    }
  }
  if (o.dump_cas) dump_cas(engine);
  return 0;
}

int cmd_continuous(const Options& o) {
  rs::KnowledgeBase kb = load_kb(o);
  rs::Registry registry(kb);
  rs::register_standard_experts(registry);
  rs::Engine engine(registry, rs::load_robot_profile(kb, robot_path(o.robot)), engine_options(o));
  rs::Episode episode = load_input(o);
  auto reports = engine.run_continuous(episode);
  if (o.as_json) {
    json frames = json::array();
    for (const auto& r : reports)
      frames.push_back({{"tick", r.tick},
                        {"skipped", r.skipped ? json(*r.skipped) : json(nullptr)},
                        {"created", r.identity.created},
                        {"droppedByRoi", r.identity.dropped_by_roi}});
    std::cout << json{{"frames", frames}, {"objects", engine.belief().objects.size()}}.dump(2) << "\n";
  } else {
    for (const auto& r : reports) {
      std::cout << "tick " << r.tick << ": ";
      if (r.skipped) std::cout << "skipped (" << *r.skipped << ")\n";
      else
        std::cout << r.identity.matched.size() << " hypotheses, " << r.identity.created.size() << " new, "
                  << r.identity.dropped_by_roi << " outside task regions\n";
    }
    std::cout << "objects: " << engine.belief().objects.size() << "\n";
  }
  if (o.dump_cas) dump_cas(engine);
  return 0;
}

int cmd_belief(const Options& o) {
  rs::KnowledgeBase kb = load_kb(o);
  rs::Registry registry(kb);
  rs::register_standard_experts(registry);
  rs::Engine engine(registry, rs::load_robot_profile(kb, robot_path(o.robot)), engine_options(o));
  rs::Episode episode = load_input(o);
  engine.run_continuous(episode);
  if (!o.query.empty()) {
    rs::Query q = rs::parse_query(o.query, rs::ParseMode::Lenient);
    if (const auto* c = std::get_if<rs::Compound>(&q)) engine.run_compound(*c, episode);
    else engine.answer_query(q, episode);
  }
  std::cout << rs::dump_belief(engine.belief()) << "\n";
  if (o.dump_cas) dump_cas(engine);
  return 0;
}

int exit_code(const rs::Error& e) {
  const std::string& k = e.kind();
  if (k == "NotFound") return 2;
  if (k == "AmbiguityError") return 3;
  if (k == "NoProvider" || k == "CapabilityMissing" || k == "NoDescription" || k == "Unsupported" ||
      k == "UnknownObject" || k == "CycleError")
    return 4;
  if (k == "SyntaxError" || k == "ParseError" || k == "UnknownAttribute" || k == "ArityError" || k == "IoError" ||
      k == "MissingParameter" || k == "UnknownCommand" || k == "UnknownType" || k == "UnknownReference")
    return 1;
  return 5;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge-driven perception task planning over synthetic scenes"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--ontology", o.ontologies, "Ontology files (default: the shipped ones)");
    sub->add_option("--robot", o.robot, "Robot profile name or file")->capture_default_str();
    sub->add_option("--query", o.query, "Query text");
    sub->add_option("--config", o.config, "Annotator, filter and match overrides");
    sub->add_option("--seed", o.seed, "Noise seed")->capture_default_str();
    sub->add_flag("--json", o.as_json, "Machine-readable output");
  };
  auto input = [&](CLI::App* sub) {
    sub->add_option("--episode", o.episode, "Episode file");
    sub->add_option("--scene", o.scene, "Scene file, run as a one-frame episode");
    sub->add_option("--filters", o.filters, "Knowledge filters")->check(CLI::IsMember({"on", "off"}));
    sub->add_flag("--dump-cas", o.dump_cas, "Print the last cycle's Cas as JSON");
  };
  auto* plan = app.add_subcommand("plan", "Print the pipeline for a query");
  common(plan);
  plan->add_option("--object", o.object, "Plan for an object class instead of a query");
  plan->add_flag("--explain", o.explain, "Show why each annotator is included");
  auto* explain = app.add_subcommand("explain", "Print the pipeline with the reason for every annotator");
  common(explain);
  explain->add_option("--object", o.object, "Plan for an object class instead of a query");
  auto* run = app.add_subcommand("run", "Answer a query over an episode");
  common(run);
  input(run);
  run->add_flag("--explain", o.explain, "Also print the pipeline and provenance");
  auto* continuous = app.add_subcommand("continuous", "Run the continuous pipeline over an episode");
  common(continuous);
  input(continuous);
  auto* belief = app.add_subcommand("belief", "Dump the belief state after an episode");
  common(belief);
  input(belief);

  CLI11_PARSE(app, argc, argv);
  try {
    if (plan->parsed()) return cmd_plan(o, false);
    if (explain->parsed()) return cmd_plan(o, true);
    if (run->parsed()) return cmd_run(o);
    if (continuous->parsed()) return cmd_continuous(o);
    if (belief->parsed()) return cmd_belief(o);
  } catch (const rs::AmbiguityError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const rs::Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
  return 1;
}
