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

#include "rs/sexpr.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

#include "rs/error.hpp"

namespace rs::sexpr {

namespace {

bool is_quote(char c) { return c == '\'' || c == '"' || c == '`'; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) || c == ','; }
bool is_delim(char c) { return is_space(c) || c == '(' || c == ')' || c == ';'; }

class Reader {
 public:
  Reader(std::string_view text, const ReadOptions& options)
      : text_(text), options_(options) {}

  std::vector<Node> all() {
    std::vector<Node> out;
    skip();
    while (pos_ < text_.size()) {
      out.push_back(form());
      skip();
    }
    return out;
  }

  int line() const { return line_; }
  int column() const { return col_; }

  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }

  Node form() {
    skip();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, col_);
    char c = text_[pos_];
    if (c == ')') throw ParseError("unexpected ')'", line_, col_);
    if (c == '(') return list();
    return atom();
  }

 private:
  Node list() {
    Node node;
    node.kind = Node::Kind::List;
    node.line = line_;
    node.column = col_;
    advance();  // '('
    for (;;) {
      skip();
      if (pos_ >= text_.size()) {
        if (options_.close_unbalanced) return node;
        throw ParseError("unterminated list opened", node.line, node.column);
      }
      if (text_[pos_] == ')') {
        advance();
        return node;
      }
      node.children.push_back(form());
    }
  }

  Node atom() {
    Node node;
    node.line = line_;
    node.column = col_;
    char c = text_[pos_];
    if (is_quote(c)) {
      advance();
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != c) {
        s.push_back(text_[pos_]);
        advance();
      }
      if (pos_ >= text_.size())
        throw ParseError("unterminated quoted atom", node.line, node.column);
      advance();
      node.text = std::move(s);
      node.quoted = true;
      return node;
    }
    std::string s;
    while (pos_ < text_.size() && !is_delim(text_[pos_])) {
      if (is_quote(text_[pos_]) && text_[pos_] != '\'')
        throw ParseError("quote inside bare atom", line_, col_);
      s.push_back(text_[pos_]);
      advance();
    }
    node.text = std::move(s);
    return node;
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (is_space(c)) {
        advance();
      } else if (c == ';' && options_.allow_comments) {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  ReadOptions options_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::optional<double> Node::as_number() const {
  if (!is_atom() || quoted || text.empty()) return std::nullopt;
  const char* begin = text.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + text.size()) return std::nullopt;
  // reject inf/nan spellings, they are symbols here
  char first = text[0];
  if (!(std::isdigit(static_cast<unsigned char>(first)) || first == '-' ||
        first == '+' || first == '.'))
    return std::nullopt;
  return v;
}

std::vector<Node> read_all(std::string_view text, const ReadOptions& options) {
  return Reader(text, options).all();
}

Node read_one(std::string_view text, const ReadOptions& options) {
  Reader reader(text, options);
  if (reader.at_end()) throw ParseError("empty input", 1, 1);
  Node node = reader.form();
  if (!reader.at_end()) throw ParseError("trailing input after form", reader.line(), reader.column());
  return node;
}

bool is_bare_symbol(std::string_view text) {
  if (text.empty()) return false;
  for (char c : text)
    if (is_delim(c) || is_quote(c)) return false;
  Node probe;
  probe.text = std::string(text);
  return !probe.as_number().has_value();
}

std::string to_string(const Node& node) {
  if (node.is_atom()) {
    if (node.quoted || !is_bare_symbol(node.text)) {
      Node probe;
      probe.text = node.text;
      if (!node.quoted && probe.as_number()) return node.text;
      char q = node.text.find('\'') == std::string::npos ? '\'' : '"';
      return q + node.text + q;
    }
    return node.text;
  }
  std::string s = "(";
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    if (i) s += ' ';
    s += to_string(node.children[i]);
  }
  return s + ")";
}

}  // namespace rs::sexpr
