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

// Naive-Bayes fusion of evidence atoms into a class label.

#pragma once

#include <string>
#include <vector>

#include "rs/cas.hpp"

namespace rs {

struct Atom {
  std::string predicate;  // color, shape, size, text, logo, linemod
  std::string value;

  friend bool operator==(const Atom&, const Atom&) = default;
};

struct FusionModel {
  std::vector<std::string> classes;
  std::vector<Atom> atoms;
  /// cpt[atom][class] = P(atom | class)
  std::vector<std::vector<double>> cpt;
  std::vector<double> prior;

  /// P(atom | class) for Cereal, Chips, Cup and Pot, uniform prior.
  static const FusionModel& standard();
  /// Throws UnsatisfiableDefinition on bad shapes, probabilities or priors.
  void validate() const;
  int atom_index(const Atom& a) const;  // -1 when unknown
};

struct FusionResult {
  std::string label;
  double confidence = 0.0;
  std::vector<double> posterior;  // aligned with FusionModel::classes
};

/// Posterior over classes given the atoms; unknown atoms are ignored.
/// Throws NoEvidence when no atom is known or every class has zero likelihood.
FusionResult fuse(const std::vector<Atom>& atoms, const FusionModel& model);

/// Evidence atoms asserted on a hypothesis.
std::vector<Atom> atoms_of(const std::vector<Annotation>& annotations);

/// ClassificationAnnotation for the argmax class, classifier "fusion".
Annotation fuse_annotations(const Hypothesis& h, const FusionModel& model);

}  // namespace rs
