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

// Reference implementations used by the tests. None of them calls the
// library's matcher, interpreter or supercompiler.

#ifndef SUPERFCM_TESTS_ORACLES_HPP
#define SUPERFCM_TESTS_ORACLES_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "superfcm/program.hpp"
#include "superfcm/supercompiler.hpp"
#include "superfcm/term.hpp"

namespace oracle {

using superfcm::Program;
using superfcm::Substitution;
using superfcm::Term;

/// Every substitution with apply(theta, patterns[i]) == values[i], listed
/// with the leftmost variable shortest first. Values must be ground.
std::vector<Substitution> brute_matches(const std::vector<Term>& values, const std::vector<Term>& patterns);
/// First entry of brute_matches: Markov's choice.
std::optional<Substitution> markov(const std::vector<Term>& values, const std::vector<Term>& patterns);

/// w0 = 'b', w1 = 'a', w(k+1) = w(k-1) w(k).
std::vector<std::string> fibonacci_words(std::size_t count);

/// Leftmost innermost call whose arguments are object terms.
std::optional<Term> redex(const Term& state);
/// Replaces that call.
Term plug(const Term& state, const Term& replacement);

/// Successors under any rule that matches, with every matching substitution.
std::vector<Term> nd_successors(const Program& p, const Term& state);
/// First matching rule, Markov substitution.
struct Outcome {
  enum Kind { Value, Stuck, Fuel } kind = Fuel;
  Term value;
  std::size_t steps = 0;
};
Outcome run(const Program& p, Term state, std::size_t fuel);

/// Character strings of length <= max_len.
std::vector<Term> words(const std::vector<char>& alphabet, std::size_t max_len);
/// Object instances of the variables of t (e: words, s: letters, t: letters
/// and one-level parentheses of short words) with total size <= max_size.
std::vector<Substitution> instances(const Term& t, const std::vector<char>& alphabet, std::size_t max_size);

/// States reachable by nondeterministic steps within `depth` steps.
std::set<Term> reachable(const Program& p, const Term& start, std::size_t depth, std::size_t max_states = 200000);

/// Nodes of `g` that a concrete run from input theta enters, following the
/// graph edges with nondeterministic steps, up to `depth` steps. Also
/// reports rules the graph pruned at a node but that match there.
struct Walk {
  std::set<std::size_t> visited;
  std::vector<std::string> violations;
};
Walk walk_graph(const Program& p, const superfcm::UnfoldGraph& g, const Substitution& theta, std::size_t depth);

/// Random object term: characters, occasionally parenthesized.
Term random_object(std::mt19937_64& rng, const std::vector<char>& alphabet, std::size_t max_len, bool parens = true);
/// Random object value for a variable of the given kind.
Term random_value(std::mt19937_64& rng, superfcm::VarKind kind, const std::vector<char>& alphabet,
                  std::size_t max_len);
/// Random pattern over e/s/t variables, characters and parentheses.
Term random_pattern(std::mt19937_64& rng, const std::vector<char>& alphabet, std::size_t max_atoms,
                    std::vector<superfcm::Var>& pool);
/// Random flat tail program: initial call f0(e.x), rules whose right-hand
/// sides are passive or a single call with passive arguments.
Program random_flat_program(std::mt19937_64& rng);

}  // namespace oracle

#endif  // SUPERFCM_TESTS_ORACLES_HPP
