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

#include <stdexcept>
#include <string>
#include <vector>

namespace rs {

/// Base class of every error raised by the library. `kind()` is a stable
/// identifier used by the CLI and by tests.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define RS_DECLARE_ERROR(Name)                                         \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

// ontology
RS_DECLARE_ERROR(UnknownType);
RS_DECLARE_ERROR(CycleError);
RS_DECLARE_ERROR(UnknownReference);
RS_DECLARE_ERROR(DuplicateName);
RS_DECLARE_ERROR(UnsatisfiableDefinition);

// cas
RS_DECLARE_ERROR(InvalidObservation);
RS_DECLARE_ERROR(RegionOutOfBounds);
RS_DECLARE_ERROR(UnknownHypothesis);
RS_DECLARE_ERROR(TypeCheckError);

// query
RS_DECLARE_ERROR(UnknownAttribute);
RS_DECLARE_ERROR(ArityError);
RS_DECLARE_ERROR(NotFound);
RS_DECLARE_ERROR(Unsupported);

// registry / planner
RS_DECLARE_ERROR(PreconditionUnmet);
RS_DECLARE_ERROR(NoProvider);
RS_DECLARE_ERROR(CapabilityMissing);
RS_DECLARE_ERROR(NoDescription);
RS_DECLARE_ERROR(UnknownObject);

// engine
RS_DECLARE_ERROR(NoEvidence);
RS_DECLARE_ERROR(UnknownCommand);
RS_DECLARE_ERROR(MissingParameter);
RS_DECLARE_ERROR(FilterSkipped);
RS_DECLARE_ERROR(IoError);

#undef RS_DECLARE_ERROR

/// Raised by the S-expression reader and by grammar checks on top of it.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column,
             std::string kind = "ParseError")
      : Error(std::move(kind), message + " at " + std::to_string(line) + ":" +
                                   std::to_string(column)),
        message_(message),
        line_(line),
        column_(column) {}

  /// The message without kind and position.
  const std::string& message() const noexcept { return message_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

/// Query syntax error; carries the tokens that would have been accepted.
class SyntaxError : public ParseError {
 public:
  SyntaxError(const std::string& message, int line, int column,
              std::vector<std::string> expected = {})
      : ParseError(message + expected_suffix(expected), line, column,
                   "SyntaxError"),
        expected_(std::move(expected)) {}

  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string expected_suffix(const std::vector<std::string>& expected) {
    if (expected.empty()) return {};
    std::string s = " (expected one of:";
    for (const auto& e : expected) s += " " + e;
    return s + ")";
  }
  std::vector<std::string> expected_;
};

/// `the` determiner matched more than one object. Carries every candidate.
class AmbiguityError : public Error {
 public:
  explicit AmbiguityError(std::vector<std::string> candidates)
      : Error("AmbiguityError", describe(candidates)),
        candidates_(std::move(candidates)) {}

  const std::vector<std::string>& candidates() const noexcept {
    return candidates_;
  }

 private:
  static std::string describe(const std::vector<std::string>& c) {
    std::string s = "determiner 'the' matched " + std::to_string(c.size()) +
                    " objects:";
    for (const auto& id : c) s += " " + id;
    return s;
  }
  std::vector<std::string> candidates_;
};

}  // namespace rs
