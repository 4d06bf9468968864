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

#include "rs/fusion.hpp"

#include <cmath>

#include "rs/error.hpp"

namespace rs {

const FusionModel& FusionModel::standard() {
  static const FusionModel m = [] {
    FusionModel f;
    f.classes = {"Cereal", "Chips", "Cup", "Pot"};
    f.atoms = {{"color", "yellow"},   {"text", "VITALIS_A"},   {"logo", "Kellogg's"}, {"linemod", "Popcorn"},
               {"linemod", "Pot"},    {"linemod", "PringlesSalt"}, {"shape", "box"},  {"shape", "cylinder"},
               {"shape", "round"},    {"size", "big"}};
    f.cpt = {{0.4264, 0.3484, 0.4422, 0.2936}, {0.623, 0.0000, 0.0000, 0.0004}, {0.3734, 0.0000, 0.0000, 0.0008},
             {0.7392, 0.0006, 0.0000, 0.0010}, {0.0008, 0.0004, 0.0004, 0.9994}, {0.0002, 0.4986, 0.0010, 0.0006},
             {0.4806, 0.3870, 0.2810, 0.3556}, {0.3722, 0.4540, 0.4010, 0.4266}, {0.3176, 0.4092, 0.5182, 0.4068},
             {0.368, 0.3442, 0.3768, 0.3292}};
    f.prior.assign(f.classes.size(), 1.0 / f.classes.size());
    f.validate();
    return f;
  }();
  return m;
}

void FusionModel::validate() const {
  if (classes.empty()) throw UnsatisfiableDefinition("fusion model has no classes");
  if (prior.size() != classes.size() || cpt.size() != atoms.size())
    throw UnsatisfiableDefinition("fusion model tables do not match its classes and atoms");
  double total = 0.0;
  for (double p : prior) {
    if (p < 0.0 || p > 1.0) throw UnsatisfiableDefinition("prior outside [0, 1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw UnsatisfiableDefinition("prior does not sum to 1");
  for (const auto& row : cpt) {
    if (row.size() != classes.size()) throw UnsatisfiableDefinition("cpt row has the wrong width");
    for (double p : row)
      if (p < 0.0 || p > 1.0) throw UnsatisfiableDefinition("cpt entry outside [0, 1]");
  }
}

int FusionModel::atom_index(const Atom& a) const {
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (atoms[i] == a) return static_cast<int>(i);
  return -1;
}

FusionResult fuse(const std::vector<Atom>& atoms, const FusionModel& model) {
  std::vector<double> post = model.prior;
  int known = 0;
  for (const auto& a : atoms) {
    int i = model.atom_index(a);
    if (i < 0) continue;
    ++known;
    for (std::size_t c = 0; c < post.size(); ++c) post[c] *= model.cpt[i][c];
  }
  if (known == 0) throw NoEvidence("no atom known to the fusion model");
  double z = 0.0;
  for (double p : post) z += p;
  if (!(z > 0.0)) throw NoEvidence("every class has zero likelihood");
  FusionResult r;
  std::size_t best = 0;
  for (std::size_t c = 0; c < post.size(); ++c) {
    post[c] /= z;
    if (post[c] > post[best] || (post[c] == post[best] && model.classes[c] < model.classes[best])) best = c;
  }
  r.label = model.classes[best];
  r.confidence = post[best];
  r.posterior = std::move(post);
  return r;
}

std::vector<Atom> atoms_of(const std::vector<Annotation>& annotations) {
  static const std::vector<std::pair<std::string, std::string>> kSources{
      {"SemanticColorAnnotation", "color"}, {"ShapeAnnotation", "shape"}, {"SizeAnnotation", "size"},
      {"TextAtom", "text"},                 {"LogoAtom", "logo"},         {"LinemodAtom", "linemod"}};
  std::vector<Atom> out;
  for (const auto& a : annotations)
    for (const auto& [type, field] : kSources)
      if (a.type == type) {
        std::string v = a.text(field);
        if (!v.empty()) out.push_back({field, v});
      }
  return out;
}

Annotation fuse_annotations(const Hypothesis& h, const FusionModel& model) {
  FusionResult r = fuse(atoms_of(h.annotations), model);
  return make_annotation("ClassificationAnnotation", {{"classLabel", r.label},
                                                      {"classConfidence", r.confidence},
                                                      {"classifierName", std::string("fusion")}});
}

}  // namespace rs
