// Copyright 2026 The superfcm Authors.
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

#ifndef SUPERFCM_ERRORS_HPP
#define SUPERFCM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace superfcm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

class FreeRhsVariable : public Error {
 public:
  using Error::Error;
};

/// An s- or t-variable was bound outside its range.
class SortViolation : public Error {
 public:
  using Error::Error;
};

/// A program or rule falls outside the fragment the encoder can translate.
class UnsupportedShape : public Error {
 public:
  UnsupportedShape(const std::string& message, long rule_index)
      : Error(message), rule_index_(rule_index) {}

  /// Zero-based rule index, or -1 for the initial term.
  long rule_index() const { return rule_index_; }

 private:
  long rule_index_;
};

class OpenGraph : public Error {
 public:
  using Error::Error;
};

}  // namespace superfcm

#endif  // SUPERFCM_ERRORS_HPP
