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

#ifndef SUPERFCM_PROGRAM_HPP
#define SUPERFCM_PROGRAM_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "superfcm/term.hpp"

namespace superfcm {

/// f(p1, ..., pk) = r. Rule order within a program is significant.
struct Rule {
  Term lhs;
  Term rhs;
  std::size_t index = 0;

  const std::string& function() const { return lhs.atom().function(); }
  std::size_t arity() const { return lhs.atom().args().size(); }
  std::span<const Term> patterns() const { return lhs.atom().args(); }

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// An initial term plus an ordered list of rewrite rules.
struct Program {
  Term initial;
  std::vector<Rule> rules;
  /// Declared characters first, then inferred ones in textual order.
  std::vector<char> alphabet;

  std::vector<const Rule*> rules_for(const std::string& function) const;
  /// Arity of every function that is defined or called.
  std::map<std::string, std::size_t> arities() const;
  bool defines(const std::string& function) const;

  friend bool operator==(const Program&, const Program&) = default;
};

/// Builds a program and checks its well-formedness: every lhs is a call with
/// passive arguments, rhs variables occur in the lhs, and each function is
/// used with a single arity. Throws ArityMismatch, FreeRhsVariable or Error.
Program make_program(Term initial, std::vector<std::pair<Term, Term>> rules,
                     std::vector<char> declared_alphabet = {});

/// Characters of the initial term and rules, in textual order.
std::vector<char> inferred_alphabet(const Term& initial, const std::vector<Rule>& rules);

}  // namespace superfcm

#endif  // SUPERFCM_PROGRAM_HPP
