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

// The synthetic expert suite. Every expert reads the raster observation and
// the hypotheses already on the Cas and only ever adds to it.

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>

#include "rs/error.hpp"
#include "rs/fusion.hpp"
#include "rs/kernels.hpp"
#include "rs/registry.hpp"
#include "rs/scene.hpp"

namespace rs {

namespace {

constexpr const char* kDepth = "Perceive3DDepthCapability";
constexpr const char* kColor = "PerceiveColorCapability";

using Fields = std::vector<std::pair<std::string, Value>>;

struct PlaneInfo {
  double depth = 0.0;
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

std::optional<PlaneInfo> plane_of(const Cas& cas) {
  for (const auto& a : cas.scene) {
    if (a.type != "RsAnnotationPlane") continue;
    PlaneInfo p;
    p.depth = a.number("planeDepth").value_or(0.0);
    if (const auto* b = a.get("bounds"))
      if (const auto* v = std::get_if<std::vector<double>>(b); v && v->size() == 4) {
        p.x0 = static_cast<int>((*v)[0]);
        p.y0 = static_cast<int>((*v)[1]);
        p.x1 = static_cast<int>((*v)[2]);
        p.y1 = static_cast<int>((*v)[3]);
      }
    return p;
  }
  return std::nullopt;
}

/// 4-connected components of `mask`, each sorted, in order of first pixel.
std::vector<Region> components(int w, int h, const std::vector<std::uint8_t>& mask, std::size_t min_pixels) {
  std::vector<Region> out;
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t start = 0; start < mask.size(); ++start) {
    if (!mask[start] || seen[start]) continue;
    Region r;
    seen[start] = 1;
    queue.push_back(start);
    while (!queue.empty()) {
      std::uint32_t i = queue.front();
      queue.pop_front();
      r.push_back(i);
      int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
      auto push = [&](int nx, int ny) {
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) return;
        std::uint32_t j = static_cast<std::uint32_t>(ny * w + nx);
        if (mask[j] && !seen[j]) {
          seen[j] = 1;
          queue.push_back(j);
        }
      };
      push(x - 1, y);
      push(x + 1, y);
      push(x, y - 1);
      push(x, y + 1);
    }
    if (r.size() < min_pixels) continue;
    std::sort(r.begin(), r.end());
    out.push_back(std::move(r));
  }
  return out;
}

std::size_t overlap(const Region& a, const Region& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

/// True when more than half of `r` already belongs to some hypothesis.
bool already_covered(const Cas& cas, const Region& r) {
  return std::any_of(cas.hypotheses.begin(), cas.hypotheses.end(),
                     [&](const Hypothesis& h) { return 2 * overlap(r, h.region) > r.size(); });
}

bool already_annotated(const Cas& cas, const Region& r, const std::string& type) {
  return std::any_of(cas.hypotheses.begin(), cas.hypotheses.end(), [&](const Hypothesis& h) {
    return 2 * overlap(r, h.region) > r.size() &&
           std::any_of(h.annotations.begin(), h.annotations.end(), [&](const Annotation& a) { return a.type == type; });
  });
}

void add_regions(Cas& cas, const std::vector<Region>& regions, const std::string& type) {
  for (const auto& r : regions)
    if (!already_covered(cas, r)) add_hypothesis(cas, r, type);
}

struct Box {
  int x0, y0, x1, y1;
  int w() const { return x1 - x0; }
  int h() const { return y1 - y0; }
};

Box bbox(const Region& r, int width) {
  Box b{width, 1 << 30, -1, -1};
  for (auto i : r) {
    int x = static_cast<int>(i % width), y = static_cast<int>(i / width);
    b.x0 = std::min(b.x0, x);
    b.y0 = std::min(b.y0, y);
    b.x1 = std::max(b.x1, x + 1);
    b.y1 = std::max(b.y1, y + 1);
  }
  return b;
}

std::optional<double> median_depth(const Region& r, const std::vector<std::uint16_t>& depth) {
  std::vector<std::uint16_t> v;
  for (auto i : r)
    if (depth[i]) v.push_back(depth[i]);
  if (v.empty()) return std::nullopt;
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

std::uint16_t depth_mode(const std::vector<std::uint16_t>& depth, const Box& area, int width) {
  std::map<std::uint16_t, std::size_t> hist;
  for (int y = area.y0; y < area.y1; ++y)
    for (int x = area.x0; x < area.x1; ++x)
      if (auto d = depth[static_cast<std::size_t>(y) * width + x]) ++hist[d];
  std::uint16_t best = 0;
  std::size_t best_n = 0;
  for (const auto& [d, n] : hist)
    if (n > best_n) {
      best = d;
      best_n = n;
    }
  return best;
}

/// Object height above the support plane, when depth is valid.
std::optional<double> height_above(const Hypothesis& h, const Cas& cas) {
  auto plane = plane_of(cas);
  auto med = median_depth(h.region, cas.observation.depth);
  if (!plane || !med) return std::nullopt;
  return plane->depth - *med;
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return static_cast<double>(mix(seed ^ mix(a * 0x1000003ULL + b)) >> 11) * 0x1.0p-53;
}

std::uint64_t hash_text(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

/// Ground-truth object covering most of `r`, when it covers at least half.
const SceneObject* truth_for(const Region& r, const ExpertContext& ctx) {
  if (!ctx.truth) return nullptr;
  const SceneObject* best = nullptr;
  std::size_t best_n = 0;
  for (const auto& o : ctx.truth->objects) {
    std::size_t n = overlap(r, ctx.truth->visible_region(o));
    if (n > best_n) {
      best = &o;
      best_n = n;
    }
  }
  return 2 * best_n >= r.size() ? best : nullptr;
}

// ---------------------------------------------------------------- generators

void plane_annotator(Cas& cas, const ExpertContext& ctx) {
  const auto& obs = cas.observation;
  std::uint16_t mode = depth_mode(obs.depth, {0, 0, obs.width, obs.height}, obs.width);
  if (!mode) return;
  double tol = ctx.param("PlaneAnnotator", "tolerance", 5.0);
  Box b{obs.width, obs.height, -1, -1};
  for (int y = 0; y < obs.height; ++y)
    for (int x = 0; x < obs.width; ++x) {
      std::uint16_t d = obs.depth[static_cast<std::size_t>(y) * obs.width + x];
      if (d && std::abs(static_cast<double>(d) - mode) <= tol) {
        b.x0 = std::min(b.x0, x);
        b.y0 = std::min(b.y0, y);
        b.x1 = std::max(b.x1, x + 1);
        b.y1 = std::max(b.y1, y + 1);
      }
    }
  annotate_scene(cas, *ctx.kb,
                 make_annotation("RsAnnotationPlane",
                                 {{"planeDepth", static_cast<double>(mode)},
                                  {"bounds", std::vector<double>{double(b.x0), double(b.y0), double(b.x1), double(b.y1)}}}));
}

std::vector<std::uint8_t> plane_mask(const Cas& cas, const PlaneInfo& p) {
  const auto& obs = cas.observation;
  std::vector<std::uint8_t> mask(obs.size(), 0);
  for (int y = std::max(p.y0, 0); y < std::min(p.y1, obs.height); ++y)
    for (int x = std::max(p.x0, 0); x < std::min(p.x1, obs.width); ++x) mask[static_cast<std::size_t>(y) * obs.width + x] = 1;
  return mask;
}

void cluster_extractor(Cas& cas, const ExpertContext& ctx) {
  auto plane = plane_of(cas);
  if (!plane) return;
  const auto& obs = cas.observation;
  double thr = ctx.param("PointCloudClusterExtractor", "threshold", 10.0);
  auto min_px = static_cast<std::size_t>(ctx.param("PointCloudClusterExtractor", "minPixels", 10.0));
  auto mask = plane_mask(cas, *plane);
  for (std::size_t i = 0; i < mask.size(); ++i)
    mask[i] = mask[i] && obs.depth[i] && std::abs(obs.depth[i] - plane->depth) > thr;
  add_regions(cas, components(obs.width, obs.height, mask, min_px), "RsSceneCluster");
}

void transparent_segmentation(Cas& cas, const ExpertContext& ctx) {
  auto plane = plane_of(cas);
  if (!plane) return;
  const auto& obs = cas.observation;
  auto min_px = static_cast<std::size_t>(ctx.param("TransparentSegmentation", "minPixels", 10.0));
  auto mask = plane_mask(cas, *plane);
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = mask[i] && obs.depth[i] == 0;
  add_regions(cas, components(obs.width, obs.height, mask, min_px), "RsTransparentCluster");
}

std::vector<std::uint8_t> palette_labels(const Observation& obs) {
  std::vector<std::uint8_t> labels;
  kernels::nearest_palette(obs.color, Palette::standard().colors, labels);
  return labels;
}

void image_segmentation(Cas& cas, const ExpertContext& ctx) {
  const auto& obs = cas.observation;
  auto plane = plane_of(cas);
  std::vector<std::uint8_t> area = plane ? plane_mask(cas, *plane) : std::vector<std::uint8_t>(obs.size(), 1);
  auto labels = palette_labels(obs);
  std::vector<std::size_t> hist(Palette::standard().colors.size(), 0);
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (area[i]) ++hist[labels[i]];
  auto dominant = static_cast<std::uint8_t>(std::max_element(hist.begin(), hist.end()) - hist.begin());
  std::vector<std::uint8_t> mask(obs.size(), 0);
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = area[i] && labels[i] != dominant;
  auto min_px = static_cast<std::size_t>(ctx.param("ImageSegmentation", "minPixels", 10.0));
  add_regions(cas, components(obs.width, obs.height, mask, min_px), "RsImageSegment");
}

void region_filter(Cas& cas, const ExpertContext& ctx) {
  std::set<std::string> wanted;
  if (cas.query)
    if (const Description* d = query_description(*cas.query)) {
      auto walk = [&](const Description& desc, auto&& self) -> void {
        for (const auto& c : desc.constraints) {
          if (c.attribute == "category" && c.value.tag == ConstraintValue::Tag::Symbol) wanted.insert(c.value.symbol);
          if (c.value.tag == ConstraintValue::Tag::Nested) self(*c.value.nested, self);
        }
      };
      if (const auto* loc = d->find("location"); loc && loc->tag == ConstraintValue::Tag::Nested)
        walk(*loc->nested, walk);
      else if (loc && loc->tag == ConstraintValue::Tag::Symbol)
        wanted.insert(loc->symbol);
    }
  for (const auto& r : ctx.semantic_map) {
    if (!wanted.empty() && !wanted.count(r.label)) continue;
    annotate_scene(cas, *ctx.kb,
                   make_annotation("RsRegionOfInterest",
                                   {{"regionLabel", r.label},
                                    {"bounds", std::vector<double>{double(r.x0), double(r.y0), double(r.x1), double(r.y1)}}}));
  }
}

void normal_estimator(Cas& cas, const ExpertContext& ctx) {
  const auto& obs = cas.observation;
  kernels::normals(obs.width, obs.height, obs.depth, ctx.mm_per_pixel, cas.views["normals"]);
  annotate_scene(cas, *ctx.kb, make_annotation("RsPclNormalsCloud", {{"view", std::string("normals")}}));
}

// ---------------------------------------------------------------- annotators

std::string shape_of(const Hypothesis& h, const Cas& cas, const ExpertContext& ctx) {
  Box b = bbox(h.region, cas.observation.width);
  double fill = static_cast<double>(h.region.size()) / (static_cast<double>(b.w()) * b.h());
  double aspect = static_cast<double>(std::max(b.w(), b.h())) / std::min(b.w(), b.h());
  auto height = height_above(h, cas);
  if ((height && *height < ctx.param("PrimitiveShapeAnnotator", "flatHeight", 30.0)) ||
      aspect > ctx.param("PrimitiveShapeAnnotator", "flatAspect", 4.0))
    return "flat";
  return fill > ctx.param("PrimitiveShapeAnnotator", "boxFill", 0.9) ? "box" : "round";
}

void primitive_shape(Cas& cas, const ExpertContext& ctx) {
  for (auto& h : cas.hypotheses) {
    std::string s = shape_of(h, cas, ctx);
    annotate(cas, *ctx.kb, h.id, make_annotation("ShapeAnnotation", {{"shape", s}}));
  }
}

std::vector<double> histogram(const Region& r, const std::vector<std::uint8_t>& labels, std::size_t bins) {
  std::vector<double> hist(bins, 0.0);
  for (auto i : r) hist[labels[i]] += 1.0;
  for (auto& v : hist) v /= static_cast<double>(r.size());
  return hist;
}

void color_histogram(Cas& cas, const ExpertContext& ctx) {
  const auto& palette = Palette::standard();
  auto labels = palette_labels(cas.observation);
  for (auto& h : cas.hypotheses) {
    auto hist = histogram(h.region, labels, palette.colors.size());
    auto top = static_cast<std::size_t>(std::max_element(hist.begin(), hist.end()) - hist.begin());
    annotate(cas, *ctx.kb, h.id,
             make_annotation("SemanticColorAnnotation", {{"color", palette.names[top]}, {"colorRatio", hist[top]}}));
    annotate(cas, *ctx.kb, h.id, make_annotation("ColorHistogramAnnotation", {{"histogram", hist}}));
  }
}

void location_annotator(Cas& cas, const ExpertContext& ctx) {
  for (auto& h : cas.hypotheses) {
    auto [cx, cy] = centroid(h.region, cas.observation.width);
    const SemanticRegion* best = nullptr;
    for (const auto& r : ctx.semantic_map)
      if (r.contains(cx, cy) &&
          (!best || (r.x1 - r.x0) * (r.y1 - r.y0) < (best->x1 - best->x0) * (best->y1 - best->y0)))
        best = &r;
    if (best) annotate(cas, *ctx.kb, h.id, make_annotation("LocationAnnotation", {{"location", best->label}}));
  }
}

std::string size_class(double liters, const ExpertContext& ctx) {
  if (liters < ctx.param("Cluster3DGeometryAnnotator", "smallBelow", 1.0)) return "small";
  if (liters < ctx.param("Cluster3DGeometryAnnotator", "bigFrom", 5.0)) return "medium";
  return "big";
}

void geometry_annotator(Cas& cas, const ExpertContext& ctx) {
  const auto& obs = cas.observation;
  auto plane = plane_of(cas);
  const double mm = ctx.mm_per_pixel;
  for (auto& h : cas.hypotheses) {
    auto [cx, cy] = centroid(h.region, obs.width);
    auto med = median_depth(h.region, obs.depth);
    double z = med ? *med : plane ? plane->depth : 0.0;
    Pose p;
    p.position = {cx * mm / 1000.0, cy * mm / 1000.0, z / 1000.0};
    annotate(cas, *ctx.kb, h.id, make_annotation("PoseAnnotation", {{"pose", p}}));
    Box b = bbox(h.region, obs.width);
    auto height = height_above(h, cas);
    Fields dim{{"width", b.w() * mm}, {"depthExtent", b.h() * mm}};
    if (height) dim.emplace_back("height", *height);
    annotate(cas, *ctx.kb, h.id, make_annotation("DimensionAnnotation", dim));
    if (!height) continue;
    double liters = static_cast<double>(h.region.size()) * mm * mm * std::max(*height, 0.0) / 1e6;
    annotate(cas, *ctx.kb, h.id,
             make_annotation("SizeAnnotation", {{"size", size_class(liters, ctx)}, {"volumeEstimate", liters}}));
  }
}

const Annotation* first_of(const Hypothesis& h, const std::string& type) {
  for (const auto& a : h.annotations)
    if (a.type == type) return &a;
  return nullptr;
}

struct Model {
  std::string cls;
  std::string shape, color, size;
};

std::vector<Model> model_db(const KnowledgeBase& kb) {
  std::vector<Model> out;
  for (const auto& t : kb.tbox.types()) {
    auto props = visual_properties_of(kb.tbox, t.name);
    if (props.empty()) continue;
    Model m{t.name, {}, {}, {}};
    for (const auto& [attr, value] : props) {
      if (attr == "shape" && m.shape.empty()) m.shape = value;
      if (attr == "color" && m.color.empty()) m.color = value;
      if (attr == "size" && m.size.empty()) m.size = value;
    }
    if (!m.shape.empty() || !m.color.empty() || !m.size.empty()) out.push_back(m);
  }
  return out;
}

void classification_annotator(Cas& cas, const ExpertContext& ctx) {
  const auto models = model_db(*ctx.kb);
  const auto& palette = Palette::standard();
  const double reject = ctx.param("ClassificationAnnotator", "rejectAbove", 0.6);
  for (auto& h : cas.hypotheses) {
    const Annotation* hist_a = first_of(h, "ColorHistogramAnnotation");
    const Annotation* shape_a = first_of(h, "ShapeAnnotation");
    const Annotation* size_a = first_of(h, "SizeAnnotation");
    const std::vector<double>* hist =
        hist_a ? std::get_if<std::vector<double>>(hist_a->get("histogram")) : nullptr;
    std::string shape = shape_a ? shape_a->text("shape") : "";
    std::string size = size_a ? size_a->text("size") : "";
    const Model* best = nullptr;
    double best_d = 0.0;
    for (const auto& m : models) {
      double d = 0.0;
      int ci = m.color.empty() ? -1 : palette.index(m.color);
      d += (ci < 0 || !hist) ? 0.5 : 1.0 - (*hist)[ci];
      d += (m.shape.empty() || shape.empty()) ? 0.5 : (m.shape == shape ? 0.0 : 1.0);
      d += (m.size.empty() || size.empty()) ? 0.5 : (m.size == size ? 0.0 : 0.5);
      if (!best || d < best_d || (d == best_d && m.cls < best->cls)) {
        best = &m;
        best_d = d;
      }
    }
    if (!best || best_d > reject) continue;
    annotate(cas, *ctx.kb, h.id,
             make_annotation("ClassificationAnnotation", {{"classLabel", best->cls},
                                                          {"classConfidence", std::max(0.0, 1.0 - best_d)},
                                                          {"classifierName", std::string("ClassificationAnnotator")}}));
  }
}

// ---------------------------------------------------------------- evidence stubs

void evidence_stub(Cas& cas, const ExpertContext& ctx, const std::string& predicate, const std::string& type) {
  const auto& model = FusionModel::standard();
  const auto& tbox = ctx.kb->tbox;
  for (auto& h : cas.hypotheses) {
    const SceneObject* o = truth_for(h.region, ctx);
    if (!o || !tbox.has_type(o->class_label)) continue;
    int cls = -1;
    for (std::size_t c = 0; c < model.classes.size() && cls < 0; ++c)
      if (tbox.has_type(model.classes[c]) && tbox.is_subclass_of(o->class_label, model.classes[c]))
        cls = static_cast<int>(c);
    if (cls < 0) continue;
    std::uint64_t key = hash_text(o->id) ^ static_cast<std::uint64_t>(cas.observation.timestamp);
    for (std::size_t row = 0; row < model.atoms.size(); ++row) {
      if (model.atoms[row].predicate != predicate) continue;
      if (uniform(ctx.seed ^ hash_text(type), key, row) < model.cpt[row][cls])
        annotate(cas, *ctx.kb, h.id, make_annotation(type, {{predicate, model.atoms[row].value}}));
    }
  }
}

// ---------------------------------------------------------------- task-specific experts

void handle_detector(Cas& cas, const ExpertContext& ctx) {
  const auto& obs = cas.observation;
  const auto& tbox = ctx.kb->tbox;
  double thr = ctx.param("HandleDetector", "threshold", 10.0);
  for (const auto& r : ctx.semantic_map) {
    bool front = tbox.has_type(r.kind) &&
                 ((tbox.has_type("Drawer") && tbox.is_subclass_of(r.kind, "Drawer")) ||
                  (tbox.has_type("Cupboard") && tbox.is_subclass_of(r.kind, "Cupboard")));
    if (!front) continue;
    Box area{std::max(r.x0, 0), std::max(r.y0, 0), std::min(r.x1, obs.width), std::min(r.y1, obs.height)};
    std::uint16_t mode = depth_mode(obs.depth, area, obs.width);
    if (!mode) continue;
    std::vector<std::uint8_t> mask(obs.size(), 0);
    for (int y = area.y0; y < area.y1; ++y)
      for (int x = area.x0; x < area.x1; ++x) {
        std::size_t i = static_cast<std::size_t>(y) * obs.width + x;
        mask[i] = obs.depth[i] && obs.depth[i] < mode - thr;
      }
    for (const auto& region : components(obs.width, obs.height, mask, 4)) {
      Box b = bbox(region, obs.width);
      if (std::max(b.w(), b.h()) < 2 * std::min(b.w(), b.h())) continue;  // not a ridge
      if (already_covered(cas, region)) continue;
      std::string id = add_hypothesis(cas, region, "RsSceneCluster");
      annotate(cas, *ctx.kb, id,
               make_annotation("ClassificationAnnotation", {{"classLabel", std::string("Handle")},
                                                            {"classConfidence", 0.9},
                                                            {"classifierName", std::string("HandleDetector")}}));
      annotate(cas, *ctx.kb, id,
               make_annotation("PartOfAnnotation", {{"wholeLabel", r.label}, {"wholeType", r.kind}}));
    }
  }
}

void sac_model(Cas& cas, const ExpertContext& ctx) {
  const double mm = ctx.mm_per_pixel;
  for (auto& h : cas.hypotheses) {
    auto height = height_above(h, cas);
    if (!height || *height <= 0.0) continue;
    double area = static_cast<double>(h.region.size()) * mm * mm;
    double radius = std::sqrt(area / M_PI);
    double liters = M_PI * radius * radius * *height / 1e6;
    annotate(cas, *ctx.kb, h.id,
             make_annotation("SacModelAnnotation",
                             {{"model", std::string("cylinder")}, {"radius", radius}, {"modelHeight", *height}}));
    annotate(cas, *ctx.kb, h.id, make_annotation("VolumeAnnotation", {{"liters", liters}}));
  }
}

void over_segmentation(Cas& cas, const ExpertContext& ctx) {
  const auto& obs = cas.observation;
  const auto& palette = Palette::standard();
  auto labels = palette_labels(obs);
  for (auto& h : cas.hypotheses) {
    std::vector<std::uint8_t> mask(obs.size(), 0);
    Fields parts;
    for (std::size_t c = 0; c < palette.colors.size(); ++c) {
      std::fill(mask.begin(), mask.end(), 0);
      for (auto i : h.region) mask[i] = labels[i] == c;
      auto segs = components(obs.width, obs.height, mask, 4);
      for (std::size_t k = 0; k < segs.size(); ++k)
        parts.emplace_back("part", palette.names[c] + "-segment-" + std::to_string(k + 1));
    }
    if (!parts.empty()) annotate(cas, *ctx.kb, h.id, make_annotation("PartAnnotation", parts));
  }
}

void grasp_points(Cas& cas, const ExpertContext& ctx) {
  const double mm = ctx.mm_per_pixel / 1000.0;
  for (auto& h : cas.hypotheses) {
    Box b = bbox(h.region, cas.observation.width);
    double cy = (b.y0 + b.y1) / 2.0 * mm;
    annotate(cas, *ctx.kb, h.id,
             make_annotation("GraspPointAnnotation", {{"graspPoints", std::vector<double>{b.x0 * mm, cy, b.x1 * mm, cy}}}));
  }
}

/// Rows whose pixels mostly lie in the front depth band, grouped into floors.
std::vector<std::pair<int, int>> floor_rows(const Observation& obs, double max_depth, double fraction) {
  std::vector<std::pair<int, int>> floors;
  int start = -1;
  for (int y = 0; y <= obs.height; ++y) {
    bool hit = false;
    if (y < obs.height) {
      int n = 0;
      for (int x = 0; x < obs.width; ++x) {
        auto d = obs.depth[static_cast<std::size_t>(y) * obs.width + x];
        if (d && d <= max_depth) ++n;
      }
      hit = n >= fraction * obs.width;
    }
    if (hit && start < 0) start = y;
    if (!hit && start >= 0) {
      floors.emplace_back(start, y);
      start = -1;
    }
  }
  return floors;
}

Region rows_region(const Observation& obs, int y0, int y1) {
  Region r;
  for (int y = y0; y < y1; ++y)
    for (int x = 0; x < obs.width; ++x) r.push_back(static_cast<std::uint32_t>(y * obs.width + x));
  return r;
}

void shelf_scanner(Cas& cas, const ExpertContext& ctx) {
  const auto& obs = cas.observation;
  double max_depth = ctx.param("ShelfScanner", "frontDepth", 1120.0);
  double fraction = ctx.param("ShelfScanner", "rowFraction", 0.8);
  for (auto [y0, y1] : floor_rows(obs, max_depth, fraction)) {
    Region r = rows_region(obs, y0, y1);
    if (already_annotated(cas, r, "ShelfFloorAnnotation")) continue;
    std::string id = add_hypothesis(cas, r, "RsSceneCluster");
    annotate(cas, *ctx.kb, id, make_annotation("ShelfFloorAnnotation", {{"lineRow", (y0 + y1 - 1) / 2.0}}));
    annotate(cas, *ctx.kb, id,
             make_annotation("ClassificationAnnotation", {{"classLabel", std::string("ShelfFloor")},
                                                          {"classConfidence", 1.0},
                                                          {"classifierName", std::string("ShelfScanner")}}));
  }
}

void separator_detector(Cas& cas, const ExpertContext& ctx) {
  const auto& obs = cas.observation;
  double lo = ctx.param("SeparatorDetector", "minDepth", 1130.0);
  double hi = ctx.param("SeparatorDetector", "maxDepth", 1170.0);
  double fraction = ctx.param("SeparatorDetector", "columnFraction", 0.3);
  int start = -1;
  for (int x = 0; x <= obs.width; ++x) {
    bool hit = false;
    if (x < obs.width) {
      int n = 0;
      for (int y = 0; y < obs.height; ++y) {
        auto d = obs.depth[static_cast<std::size_t>(y) * obs.width + x];
        if (d >= lo && d <= hi) ++n;
      }
      hit = n >= fraction * obs.height;
    }
    if (hit && start < 0) start = x;
    if (hit || start < 0) continue;
    Region r;
    for (int y = 0; y < obs.height; ++y)
      for (int c = start; c < x; ++c) {
        std::size_t i = static_cast<std::size_t>(y) * obs.width + c;
        if (obs.depth[i] >= lo && obs.depth[i] <= hi) r.push_back(static_cast<std::uint32_t>(i));
      }
    double column = (start + x - 1) / 2.0;
    start = -1;
    if (r.empty() || already_annotated(cas, r, "SeparatorAnnotation")) continue;
    std::string id = add_hypothesis(cas, r, "RsSceneCluster");
    annotate(cas, *ctx.kb, id, make_annotation("SeparatorAnnotation", {{"columnX", column}}));
    annotate(cas, *ctx.kb, id,
             make_annotation("ClassificationAnnotation", {{"classLabel", std::string("ShelfSeparator")},
                                                          {"classConfidence", 1.0},
                                                          {"classifierName", std::string("SeparatorDetector")}}));
  }
}

void barcode_stub(Cas& cas, const ExpertContext& ctx) {
  if (!ctx.truth) return;
  for (auto& h : cas.hypotheses) {
    const SceneObject* o = truth_for(h.region, ctx);
    if (o && !o->text.empty() && ctx.kb->tbox.has_type("ShelfBarcode") && ctx.kb->tbox.has_type(o->class_label) &&
        ctx.kb->tbox.is_subclass_of(o->class_label, "ShelfBarcode"))
      annotate(cas, *ctx.kb, h.id, make_annotation("BarcodeAtom", {{"barcode", o->text}}));
  }
}

void volumetric_counter(Cas& cas, const ExpertContext& ctx) {
  const auto& obs = cas.observation;
  double width_m = ctx.param("VolumetricCounter", "productWidth", 0.0);
  if (width_m <= 0.0) return;
  double mm = ctx.mm_per_pixel;
  int px = static_cast<int>(std::floor(ctx.param("VolumetricCounter", "poseX", 0.0) * 1000.0 / mm));
  int py = static_cast<int>(std::floor(ctx.param("VolumetricCounter", "poseY", 0.0) * 1000.0 / mm));
  if (px < 0 || py < 0 || px >= obs.width || py >= obs.height) return;
  std::size_t seed_i = static_cast<std::size_t>(py) * obs.width + px;
  int seed_d = obs.depth[seed_i];
  if (!seed_d) return;
  double band = ctx.param("VolumetricCounter", "band", 20.0);
  std::vector<std::uint8_t> mask(obs.size(), 0);
  for (std::size_t i = 0; i < mask.size(); ++i)
    mask[i] = obs.depth[i] && std::abs(static_cast<int>(obs.depth[i]) - seed_d) <= band;
  for (const auto& r : components(obs.width, obs.height, mask, 1)) {
    if (!std::binary_search(r.begin(), r.end(), static_cast<std::uint32_t>(seed_i))) continue;
    Box b = bbox(r, obs.width);
    double extent_mm = b.w() * mm;
    auto count = static_cast<std::int64_t>(std::floor(extent_mm / (width_m * 1000.0) + 1e-9));
    std::string id = add_hypothesis(cas, r, "RsSceneCluster");
    annotate(cas, *ctx.kb, id,
             make_annotation("CountAnnotation",
                             {{"count", count}, {"extent", extent_mm / 1000.0}, {"productWidth", width_m}}));
  }
}

std::vector<std::string> model_classes(const KnowledgeBase& kb) {
  std::vector<std::string> out;
  for (const auto& m : model_db(kb)) out.push_back(m.cls);
  return out;
}

}  // namespace

std::vector<std::string> default_continuous_pipeline() {
  return {"PlaneAnnotator",          "PointCloudClusterExtractor",      "NormalEstimator",
          "PrimitiveShapeAnnotator", "ClusterColorHistogramCalculator", "ClusterLocationAnnotator"};
}

void register_standard_experts(Registry& reg) {
  using K = AnnotatorKind;
  auto add = [&](AnnotatorDescriptor d, AnnotatorFn fn) { reg.add(std::move(d), std::move(fn)); };
  auto desc = [](std::string name, K kind, std::vector<std::string> in, std::vector<std::string> out,
                 std::vector<std::string> caps) {
    AnnotatorDescriptor d;
    d.name = std::move(name);
    d.kind = kind;
    d.inputs = std::move(in);
    d.outputs = std::move(out);
    d.capabilities = std::move(caps);
    d.continuous_eligible = true;
    return d;
  };

  add(desc("PlaneAnnotator", K::Annotator, {"RsDepthImage"}, {"RsAnnotationPlane"}, {kDepth}), plane_annotator);
  {
    auto d = desc("PointCloudClusterExtractor", K::HypothesisGenerator, {"RsAnnotationPlane"}, {"RsSceneCluster"},
                  {kDepth});
    add(d, cluster_extractor);
  }
  add(desc("NormalEstimator", K::Annotator, {"RsDepthImage"}, {"RsPclNormalsCloud"}, {kDepth}), normal_estimator);
  {
    auto d = desc("PrimitiveShapeAnnotator", K::Annotator, {"RsPclNormalsCloud", "RsAnnotationPlane", "RsSceneCluster"},
                  {"ShapeAnnotation"}, {kDepth});
    d.output_domain = {"box", "round", "flat"};
    add(d, primitive_shape);
  }
  {
    auto d = desc("ClusterColorHistogramCalculator", K::Annotator, {"RsSceneCluster", "RsColorImage"},
                  {"SemanticColorAnnotation", "ColorHistogramAnnotation"}, {kColor});
    d.output_domain = Palette::standard().names;
    add(d, color_histogram);
  }
  add(desc("ClusterLocationAnnotator", K::Annotator, {"RsSceneCluster"}, {"LocationAnnotation"}, {}),
      location_annotator);
  {
    auto d = desc("Cluster3DGeometryAnnotator", K::Annotator, {"RsSceneCluster", "RsDepthImage"},
                  {"PoseAnnotation", "SizeAnnotation", "DimensionAnnotation"}, {kDepth});
    d.output_domain = {"small", "medium", "big"};
    add(d, geometry_annotator);
  }
  add(desc("TransparentSegmentation", K::HypothesisGenerator, {"RsAnnotationPlane"}, {"RsTransparentCluster"},
           {kDepth}),
      transparent_segmentation);
  add(desc("ImageSegmentation", K::HypothesisGenerator, {"RsColorImage"}, {"RsImageSegment"}, {kColor}),
      image_segmentation);
  add(desc("RegionFilter", K::Annotator, {"RsCameraInfo"}, {"RsRegionOfInterest"}, {}), region_filter);
  {
    auto d = desc("ClassificationAnnotator", K::Annotator,
                  {"ColorHistogramAnnotation", "ShapeAnnotation", "SizeAnnotation"}, {"ClassificationAnnotation"}, {});
    d.output_domain = model_classes(reg.kb());
    add(d, classification_annotator);
  }
  for (auto [name, predicate, type] : {std::tuple{"LineModStub", "linemod", "LinemodAtom"},
                                       std::tuple{"TextStub", "text", "TextAtom"},
                                       std::tuple{"LogoStub", "logo", "LogoAtom"}}) {
    auto d = desc(name, K::Annotator, {"RsSceneCluster"}, {type}, {kColor});
    d.continuous_eligible = false;
    std::string p = predicate, t = type;
    add(d, [p, t](Cas& cas, const ExpertContext& ctx) { evidence_stub(cas, ctx, p, t); });
  }
  {
    auto d = desc("HandleDetector", K::Both, {"RsDepthImage"}, {"RsSceneCluster", "ClassificationAnnotation", "PartOfAnnotation"},
                  {kDepth});
    d.output_domain = {"Handle"};
    d.task_specific = true;
    d.continuous_eligible = false;
    add(d, handle_detector);
  }
  {
    auto d = desc("SacModelAnnotator", K::Annotator, {"RsSceneCluster", "RsAnnotationPlane"},
                  {"SacModelAnnotation", "VolumeAnnotation"}, {kDepth});
    d.cost_hint = 2.0;
    d.continuous_eligible = false;
    add(d, sac_model);
  }
  {
    auto d = desc("OverSegmentationAnnotator", K::Annotator, {"RsSceneCluster", "RsColorImage"}, {"PartAnnotation"},
                  {kColor});
    d.continuous_eligible = false;
    add(d, over_segmentation);
  }
  {
    auto d = desc("GraspPointStub", K::Annotator, {"RsSceneCluster"}, {"GraspPointAnnotation"}, {});
    d.experimental = true;
    d.continuous_eligible = false;
    add(d, grasp_points);
  }
  {
    auto d = desc("ShelfScanner", K::Both, {"RsDepthImage"}, {"RsSceneCluster", "ShelfFloorAnnotation", "ClassificationAnnotation"},
                  {kDepth});
    d.output_domain = {"ShelfFloor"};
    d.task_specific = true;
    d.continuous_eligible = false;
    add(d, shelf_scanner);
  }
  {
    auto d = desc("SeparatorDetector", K::Both, {"RsDepthImage"}, {"RsSceneCluster", "SeparatorAnnotation", "ClassificationAnnotation"},
                  {kDepth});
    d.output_domain = {"ShelfSeparator"};
    d.task_specific = true;
    d.continuous_eligible = false;
    add(d, separator_detector);
  }
  {
    auto d = desc("BarcodeStub", K::Annotator, {"RsSceneCluster"}, {"BarcodeAtom"}, {kColor});
    d.output_domain = {"ShelfBarcode"};
    d.task_specific = true;
    d.continuous_eligible = false;
    add(d, barcode_stub);
  }
  {
    auto d = desc("VolumetricCounter", K::Both, {"ShelfFloorAnnotation"}, {"RsSceneCluster", "CountAnnotation"}, {kDepth});
    d.task_specific = true;
    d.continuous_eligible = false;
    add(d, volumetric_counter);
  }
}

}  // namespace rs
