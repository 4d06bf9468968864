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

#include "rs/config.hpp"

#include <fstream>
#include <sstream>

#include "rs/error.hpp"
#include "rs/sexpr.hpp"

namespace rs {

namespace {

[[noreturn]] void fail(const sexpr::Node& n, const std::string& message) { throw ParseError(message, n.line, n.column); }

std::pair<std::string, const sexpr::Node*> entry(const sexpr::Node& n) {
  if (!n.is_list() || n.children.size() != 2 || !n.children[0].is_atom() || !n.children[1].is_atom())
    fail(n, "expected (<name> <value>)");
  return {n.children[0].text, &n.children[1]};
}

double number(const sexpr::Node& n) {
  auto v = n.as_number();
  if (!v) fail(n, "expected a number, got " + n.text);
  return *v;
}

bool flag(const sexpr::Node& n) {
  if (n.text == "on" || n.text == "true") return true;
  if (n.text == "off" || n.text == "false") return false;
  fail(n, "expected on or off, got " + n.text);
}

}  // namespace

EngineConfig parse_config(std::string_view text, EngineConfig cfg) {
  for (const auto& block : sexpr::read_all(text)) {
    if (!block.is_list() || block.children.empty() || !block.children[0].is_atom())
      fail(block, "expected (annotator ...), (filters ...) or (match ...)");
    const std::string& head = block.children[0].text;
    if (head == "annotator") {
      if (block.children.size() < 2 || !block.children[1].is_atom()) fail(block, "annotator block needs a name");
      auto& params = cfg.params[block.children[1].text];
      for (std::size_t i = 2; i < block.children.size(); ++i) {
        auto [key, value] = entry(block.children[i]);
        params[key] = number(*value);
      }
    } else if (head == "filters") {
      auto& f = cfg.filters;
      for (std::size_t i = 1; i < block.children.size(); ++i) {
        auto [key, value] = entry(block.children[i]);
        if (key == "roi") f.roi_enabled = flag(*value);
        else if (key == "static-skip") f.static_skip_enabled = flag(*value);
        else if (key == "motion") f.motion_enabled = flag(*value);
        else if (key == "static-epsilon") f.static_epsilon_mm = number(*value);
        else if (key == "max-translation") f.max_translation_m = number(*value);
        else if (key == "max-rotation") f.max_rotation_rad = number(*value);
        else if (key == "max-blur") f.max_blur = number(*value);
        else fail(block.children[i], "unknown filter setting " + key);
      }
      f.validate();
    } else if (head == "match") {
      auto& m = cfg.match;
      for (std::size_t i = 1; i < block.children.size(); ++i) {
        auto [key, value] = entry(block.children[i]);
        double v = number(*value);
        if (key == "pose") m.pose_weight = v;
        else if (key == "pose-scale") m.pose_scale_mm = v;
        else if (key == "histogram") m.histogram_weight = v;
        else if (key == "shape") m.shape_weight = v;
        else if (key == "class") m.class_weight = v;
        else if (key == "tau") m.tau = v;
        else fail(block.children[i], "unknown match setting " + key);
      }
      m.validate();
    } else {
      fail(block, "unknown config block " + head);
    }
  }
  return cfg;
}

EngineConfig load_config(const std::string& path, EngineConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

}  // namespace rs
