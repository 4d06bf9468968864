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

#include "rs/engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rs/error.hpp"

namespace rs {

Engine::Engine(const Registry& registry, RobotProfile robot, EngineOptions options,
               std::vector<std::string> continuous_base)
    : registry_(&registry),
      planner_(registry, std::move(robot), std::move(continuous_base)),
      options_(std::move(options)) {
  options_.config.filters.validate();
  options_.config.match.validate();
}

Pipeline Engine::base_pipeline() const {
  Pipeline p;
  p.annotators = planner_.continuous_base();
  for (const auto& n : p.annotators) p.provenance[n] = "continuous-base";
  return p;
}

Observation Engine::observe(const Episode& episode, std::size_t frame) const {
  const auto& f = episode.frames.at(frame);
  return render_observation(episode.scene_of(f), f.camera_pose, f.blur_score, f.tick, options_.seed,
                            options_.sigma, episode.name);
}

FilterConfig Engine::filters_for(const SceneDocument& scene, const Episode& episode, bool tasked) const {
  FilterConfig f = options_.config.filters;
  for (const auto& r : scene.regions)
    if (std::find(episode.task_regions.begin(), episode.task_regions.end(), r.label) != episode.task_regions.end())
      f.task_regions.push_back(r);
  if (tasked) {
    f.static_skip_enabled = false;
    f.motion_enabled = false;
  }
  return f;
}

CycleReport Engine::run_cycle(const Episode& episode, std::size_t frame, const Pipeline& pipeline,
                              const std::optional<Query>& query, const FilterConfig& filters, bool keep_cas) {
  const auto& f = episode.frames.at(frame);
  CycleReport report;
  report.tick = f.tick;
  if (pipeline.annotators.empty()) return report;

  const SceneDocument& scene = episode.scene_of(f);
  Observation obs = observe(episode, frame);
  FrameMeta meta{f.tick, f.camera_pose, f.blur_score, &obs.depth, obs.width, scene.mm_per_pixel};
  if (auto why = frame_rejection(meta, belief_, filters)) {
    belief_.last_camera_pose = f.camera_pose;
    report.skipped = why;
    return report;
  }

  const KnowledgeBase& kb = registry_->kb();
  Cas cas = init_cas(std::move(obs));
  cas.query = query;
  ExpertContext ctx;
  ctx.kb = &kb;
  ctx.semantic_map = scene.regions;
  ctx.truth = &scene;
  ctx.params = options_.config.params;
  ctx.seed = options_.seed;
  ctx.mm_per_pixel = scene.mm_per_pixel;
  for (const auto& name : pipeline.annotators) registry_->run(name, cas, ctx);

  if (options_.fuse) {
    const FusionModel& model = FusionModel::standard();
    for (auto& h : cas.hypotheses) {
      bool evidence = std::any_of(h.annotations.begin(), h.annotations.end(), [&](const Annotation& a) {
        return kb.tbox.has_type(a.type) && kb.tbox.is_subclass_of(a.type, "EvidenceAtom");
      });
      if (!evidence) continue;
      try {
        Annotation fused = fuse_annotations(h, model);
        if (kb.tbox.has_type(fused.text("classLabel"))) annotate(cas, kb, h.id, fused);
      } catch (const NoEvidence&) {
      }
    }
  }

  meta.depth = &cas.observation.depth;
  report.identity = resolve_identity(cas.hypotheses, cas.observation, belief_, options_.config.match, filters, meta);
  if (options_.keep_last_cas) last_cas_ = cas;
  if (keep_cas) report.cas = std::move(cas);
  return report;
}

std::vector<CycleReport> Engine::run_continuous(const Episode& episode, const Pipeline& base) {
  for (const auto& name : base.annotators)
    if (!registry_->descriptor(name).continuous_eligible)
      throw Unsupported(name + " cannot run in the continuous pipeline");
  std::vector<CycleReport> reports;
  for (std::size_t i = 0; i < episode.frames.size(); ++i)
    reports.push_back(
        run_cycle(episode, i, base, std::nullopt, filters_for(episode.scene_of(episode.frames[i]), episode, false)));
  return reports;
}

bool Engine::covered(const std::vector<Requirement>& requirements) const {
  if (belief_.objects.empty()) return false;
  const TBox& tbox = registry_->kb().tbox;
  return std::all_of(requirements.begin(), requirements.end(), [&](const Requirement& r) {
    return std::any_of(belief_.objects.begin(), belief_.objects.end(), [&](const BeliefObject& o) {
      return std::any_of(o.latest.begin(), o.latest.end(), [&](const auto& entry) {
        return entry.first == r.type || (tbox.has_type(entry.first) && tbox.has_type(r.type) &&
                                         tbox.is_subclass_of(entry.first, r.type));
      });
    });
  });
}

std::vector<std::string> Engine::select(const Description& d, const std::vector<SemanticRegion>& map) const {
  std::vector<std::string> out;
  for (const auto& o : belief_.objects)
    if (match_object(d, object_view(o), registry_->kb(), map)) out.push_back(o.id);
  return out;
}

QueryResult Engine::answer_query(const Query& q, const Episode& episode) {
  if (episode.frames.empty()) throw InvalidObservation("episode " + episode.name + " has no frames");
  std::size_t last = episode.frames.size() - 1;
  const SceneDocument& scene = episode.scene_of(episode.frames[last]);
  QueryResult result;
  auto reqs = requirements_of(q);

  if (const auto* inspect = std::get_if<Inspect>(&q)) {
    const BeliefObject* o = belief_.find(inspect->uid);
    if (!o) throw UnknownObject("no object " + inspect->uid + " in the belief state");
    bool have = std::all_of(reqs.begin(), reqs.end(), [&](const Requirement& r) { return o->has(r.type); });
    result.direct = have;
    if (!have) {
      result.pipeline = planner_.plan_inspection(object_views(belief_), inspect->uid, inspect->attributes);
      run_cycle(episode, last, result.pipeline, q, filters_for(scene, episode, true));
    }
    result.ids = {inspect->uid};
    return result;
  }

  const Description* d = query_description(q);
  result.direct = covered(reqs);
  if (!result.direct) {
    result.pipeline = planner_.plan_for_query(q);
    run_cycle(episode, last, result.pipeline, q, filters_for(scene, episode, true));
  }
  result.ids = resolve_determiner(d->determiner, select(*d, scene.regions));
  return result;
}

CompoundResult Engine::run_compound(const Compound& q, const Episode& episode) {
  if (episode.frames.empty()) throw InvalidObservation("episode " + episode.name + " has no frames");
  CompoundResult result;
  result.verb = q.verb;
  const Query query{q};

  if (q.verb == "track") {
    result.pipeline = planner_.plan_for_query(query);
    for (std::size_t i = 0; i < episode.frames.size(); ++i) {
      const auto& scene = episode.scene_of(episode.frames[i]);
      run_cycle(episode, i, result.pipeline, query, filters_for(scene, episode, true));
      TrackStep step;
      step.tick = episode.frames[i].tick;
      auto ids = select(q.inner, scene.regions);
      if (!ids.empty()) {
        step.id = ids.front();
        const auto* o = belief_.find(ids.front());
        for (int k = 0; k < 3; ++k) step.position[k] = o->position[k] / 1000.0;
      }
      result.track.push_back(step);
    }
    return result;
  }

  if (q.verb == "scan") {
    std::string command = "start";
    if (const auto* c = q.inner.find("command")) command = c->symbol;
    if (command == "stop") return result;
    if (command != "start") throw UnknownCommand("scan understands start and stop, not " + command);
    PlannerOptions opts;
    opts.include_all_activated = true;
    result.pipeline = planner_.plan_for_query(query, opts);
    const double merge = options_.config.params.count("scan") && options_.config.params.at("scan").count("mergeDistance")
                             ? options_.config.params.at("scan").at("mergeDistance")
                             : 50.0;
    std::size_t floors = 0, separators = 0;
    for (std::size_t i = 0; i < episode.frames.size(); ++i) {
      const auto& scene = episode.scene_of(episode.frames[i]);
      auto report = run_cycle(episode, i, result.pipeline, query, filters_for(scene, episode, true), true);
      if (!report.cas) continue;
      for (const auto& h : report.cas->hypotheses)
        for (const auto& a : h.annotations) {
          std::string kind;
          std::optional<double> at;
          if (a.type == "ShelfFloorAnnotation") {
            kind = "ShelfFloor";
            at = a.number("lineRow");
          } else if (a.type == "SeparatorAnnotation") {
            kind = "ShelfSeparator";
            at = a.number("columnX");
          }
          if (!at) continue;
          auto line = std::find_if(result.scan.begin(), result.scan.end(), [&](const ScanLine& l) {
            return l.kind == kind && std::abs(l.coordinate - *at) <= merge;
          });
          if (line == result.scan.end()) {
            std::size_t n = kind == "ShelfFloor" ? ++floors : ++separators;
            result.scan.push_back({(kind == "ShelfFloor" ? "floor_" : "separator_") + std::to_string(n), kind, *at, 1});
          } else {
            line->coordinate = (line->coordinate * line->detections + *at) / (line->detections + 1);
            ++line->detections;
          }
        }
    }
    return result;
  }

  if (q.verb == "count") {
    const ConstraintValue* width = q.inner.find("width");
    if (!width || width->tag != ConstraintValue::Tag::Number || width->number <= 0)
      throw MissingParameter("count needs a positive (width <meters>)");
    std::size_t last = episode.frames.size() - 1;
    const auto& scene = episode.scene_of(episode.frames[last]);
    double x = 0.0, y = 0.0;
    if (const ConstraintValue* pose = q.inner.find("pose");
        pose && pose->tag == ConstraintValue::Tag::Tuple && pose->tuple.size() >= 2) {
      x = pose->tuple[0];
      y = pose->tuple[1];
    } else {
      Description inner;
      inner.determiner = q.inner.determiner;
      inner.kind = q.inner.kind;
      for (const auto& c : q.inner.constraints)
        if (c.attribute != "width" && c.attribute != "pose") inner.constraints.push_back(c);
      auto found = answer_query(Detect{inner}, episode);
      if (found.ids.empty()) throw NotFound("nothing to count");
      const auto* o = belief_.find(found.ids.front());
      x = o->position[0] / 1000.0;
      y = o->position[1] / 1000.0;
    }
    Pipeline p;
    p.annotators = {"ShelfScanner", "VolumetricCounter"};
    p.provenance = {{"ShelfScanner", "precondition-of VolumetricCounter"}, {"VolumetricCounter", "query-attribute"}};
    for (const auto& name : p.annotators)
      if (!planner_.feasible(name)) {
        const auto& desc = registry_->descriptor(name);
        for (const auto& cap : desc.capabilities)
          if (!planner_.robot().capabilities.count(cap)) throw CapabilityMissing(name + " needs " + cap);
      }
    result.pipeline = p;
    auto saved = options_.config.params;
    auto& vc = options_.config.params["VolumetricCounter"];
    vc["productWidth"] = width->number;
    vc["poseX"] = x;
    vc["poseY"] = y;
    CycleReport report;
    try {
      report = run_cycle(episode, last, p, query, filters_for(scene, episode, true), true);
    } catch (...) {
      options_.config.params = saved;
      throw;
    }
    options_.config.params = saved;
    if (report.cas)
      for (const auto& h : report.cas->hypotheses)
        for (const auto& a : h.annotations)
          if (a.type == "CountAnnotation")
            if (const auto* n = std::get_if<std::int64_t>(a.get("count"))) result.count = *n;
    if (!result.count) throw NotFound("no product facing at the given pose");
    return result;
  }

  throw UnknownCommand("unknown compound verb " + q.verb);
}

std::string Engine::describe(const std::vector<std::string>& ids) const {
  static const std::vector<std::string> order{"class", "shape", "color", "size", "location",
                                              "logo",  "text",  "linemod", "obj-part", "part-of"};
  std::string out;
  for (const auto& id : ids) {
    const BeliefObject* o = belief_.find(id);
    if (!o) continue;
    ObjectView v = object_view(*o);
    std::string line = "(" + id;
    for (const auto& attr : order) {
      auto it = v.symbols.find(attr);
      if (it == v.symbols.end()) continue;
      for (const auto& s : it->second) line += " (" + attr + " " + format_value(ConstraintValue::of_symbol(s)) + ")";
    }
    for (const auto& [attr, value] : v.numbers)
      line += " (" + attr + " " + format_value(ConstraintValue::of_number(value)) + ")";
    out += line + ")\n";
  }
  return out;
}

}  // namespace rs
