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

// Concrete syntax.
//
//   start: Fib(e.n);
//   alphabet: 'ab';            // optional, adds to the inferred alphabet
//   Fib(e.n) = F(e.n, 'b', 'a');
//   F(ε, e.xs, e.ys) = (e.xs):(e.ys);
//
// Concatenation is ':', parentheses are the unary constructor, 'aba' is
// sugar for 'a':'b':'a', and ε (or '') is the empty sequence.

#ifndef SUPERFCM_SYNTAX_HPP
#define SUPERFCM_SYNTAX_HPP

#include <optional>
#include <string>
#include <string_view>

#include "superfcm/program.hpp"
#include "superfcm/term.hpp"

namespace superfcm {

/// Throws SyntaxError, ArityMismatch or FreeRhsVariable. When the text has
/// no `start:` line, `initial` supplies the initial term.
Program parse_program(std::string_view text, std::optional<Term> initial = std::nullopt);
Term parse_term(std::string_view text);

std::string print_term(const Term& t);
std::string print_program(const Program& p);
std::string print_rule(const Rule& r);

/// Quoted character literal body, with escapes.
std::string escape_char(char c);

}  // namespace superfcm

#endif  // SUPERFCM_SYNTAX_HPP
