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

// MACE-style finite model search over the monoid signature, model
// evaluation, and the term-automaton view of a model.

#ifndef SUPERFCM_MODEL_FINDER_HPP
#define SUPERFCM_MODEL_FINDER_HPP

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "superfcm/logic.hpp"
#include "superfcm/term.hpp"

namespace superfcm {

struct PredicateTable {
  std::size_t arity = 0;
  /// Row-major truth values, size^arity entries.
  std::vector<char> truth;

  friend bool operator==(const PredicateTable&, const PredicateTable&) = default;
};

struct FiniteModel {
  std::size_t size = 0;
  /// concat[a * size + b] is a:b.
  std::vector<int> concat;
  std::vector<int> beta;
  int epsilon = 0;
  /// Character constants in declaration order.
  std::vector<std::pair<char, int>> chars;
  std::map<std::string, PredicateTable> predicates;

  int op(int a, int b) const { return concat[static_cast<std::size_t>(a) * size + b]; }
  /// Throws Error for a character the model does not interpret.
  int character(char c) const;
  bool holds(const std::string& pred, std::span<const int> args) const;

  friend bool operator==(const FiniteModel&, const FiniteModel&) = default;
};

/// Value of an object term.
int eval_term(const FiniteModel& m, const Term& t);
/// Value of a first-order term under an assignment of its variables.
int eval_fterm(const FiniteModel& m, const FTerm& t, const std::map<std::string, int>& env);

/// Truth of a closed formula, by enumeration of all assignments.
bool check_model(const FiniteModel& m, const Formula& f);
/// All axioms true and, when present, the goal false.
bool check_theory(const FiniteModel& m, const Theory& th);
bool is_associative(const FiniteModel& m);

struct FinderOptions {
  std::size_t min_size = 2;
  std::size_t max_size = 16;
  std::chrono::milliseconds deadline{120000};
};

enum class FindStatus { Found, ExhaustedSizes, DeadlineExceeded };

std::string status_name(FindStatus s);

struct FindResult {
  FindStatus status = FindStatus::ExhaustedSizes;
  std::optional<FiniteModel> model;
  /// Largest size whose search started.
  std::size_t last_size = 0;
  std::size_t nodes = 0;
  double seconds = 0;
};

/// Smallest model of the axioms in which the goal is false, searched by
/// ascending size. Only models generated by the constants are explored;
/// this is complete whenever the axioms are universal and the goal is
/// existential, and the search falls back to all tables otherwise.
FindResult find_model(const Theory& th, const FinderOptions& options = {});

struct TermAutomaton {
  std::size_t size = 0;
  std::vector<int> concat;
  std::vector<int> beta;
  int epsilon = 0;
  std::vector<std::pair<char, int>> chars;
  /// Number of terms read in parallel.
  std::size_t arity = 1;
  /// Indexed like PredicateTable::truth by the tuple of final states.
  std::vector<char> accepting;
};

/// Accepting state tuples are those where the predicate holds (positive
/// polarity) or fails (negative polarity).
TermAutomaton model_to_automaton(const FiniteModel& m, const std::string& pred, bool positive = true);
/// Final state for an object term; characters outside the automaton's
/// alphabet throw Error.
int run_automaton(const TermAutomaton& a, const Term& t);
bool accepts(const TermAutomaton& a, const Term& t);
/// One term per component; throws Error on an arity mismatch.
bool accepts(const TermAutomaton& a, std::span<const Term> tuple);

/// Layout after Mace4's interpretation blocks.
std::string print_model(const FiniteModel& m);

}  // namespace superfcm

#endif  // SUPERFCM_MODEL_FINDER_HPP
