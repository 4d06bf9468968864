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

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rs::sexpr {

/// One node of an S-expression tree. Atoms keep whether they were quoted so
/// grammars can tell `'3'` (a symbol) from `3` (a number).
struct Node {
  enum class Kind { Atom, List };

  Kind kind = Kind::Atom;
  std::string text;  // atom text with quotes stripped
  bool quoted = false;
  std::vector<Node> children;
  int line = 1;
  int column = 1;

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_list() const { return kind == Kind::List; }
  bool is_symbol(std::string_view s) const { return is_atom() && !quoted && text == s; }
  std::optional<double> as_number() const;
};

struct ReadOptions {
  /// Close lists left open at end of input instead of failing.
  bool close_unbalanced = false;
  /// `;` starts a comment running to end of line.
  bool allow_comments = true;
};

/// Reads every top-level form in `text`. ',' is whitespace; ', " and ` open a
/// quoted atom closed by the same character.
std::vector<Node> read_all(std::string_view text, const ReadOptions& options = {});

/// Reads exactly one form; trailing non-whitespace is an error.
Node read_one(std::string_view text, const ReadOptions& options = {});

/// True when `text` can be written bare and read back as the same unquoted atom.
bool is_bare_symbol(std::string_view text);

std::string to_string(const Node& node);

}  // namespace rs::sexpr
