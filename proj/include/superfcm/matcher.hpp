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

#ifndef SUPERFCM_MATCHER_HPP
#define SUPERFCM_MATCHER_HPP

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "superfcm/model_finder.hpp"
#include "superfcm/term.hpp"

namespace superfcm {

/// One way an instance of a configuration can match a rule: the narrowing
/// of the configuration's parameters and the rule-variable binding, which
/// is written over the narrowed parameters.
struct MatchSolution {
  Substitution narrowing;
  Substitution binding;
};

struct MatchOutcome {
  enum class Kind { Solution, Solutions, NoSolution, Unknown };

  Kind kind = Kind::NoSolution;
  std::vector<MatchSolution> solutions;
  std::string reason;

  bool matched() const { return kind == Kind::Solution || kind == Kind::Solutions; }
};

std::string kind_name(MatchOutcome::Kind kind);

/// (t1)(t2)…(tn): several arguments as one term.
Term tuple_term(const std::vector<Term>& parts);

/// Markov's rule over object values: the leftmost e-variable takes the
/// shortest value, recursively. Patterns may share variables.
MatchOutcome markov_match(const std::vector<Term>& values, const std::vector<Term>& patterns,
                          MatchWork* work = nullptr);

/// Every matching substitution, in Markov order.
std::vector<Substitution> all_matches(const std::vector<Term>& values,
                                      const std::vector<Term>& patterns);

struct ExtendedOptions {
  std::size_t max_steps = 400;
  std::size_t max_splits = 24;
};

/// Matches a parameterized call against a rule lhs with variables renamed
/// apart. Solutions are listed in Markov order and together cover exactly
/// the instances of config that match lhs; an instance covered twice takes
/// the first. Unknown outside the supported class. Fresh parameters avoid
/// every name in `avoid`.
MatchOutcome extended_match(const Term& config, const Term& lhs, const ExtendedOptions& options = {},
                            const Term& avoid = Term());

struct Equation {
  Term lhs;
  Term rhs;
};

struct NoSolOptions {
  std::vector<char> alphabet;
  std::size_t lattice_limit = 64;
  std::size_t instance_limit = 4096;
  bool use_parikh = true;
  bool use_fcm = true;
  FinderOptions finder{2, 16, std::chrono::milliseconds(10000)};
};

struct NoSolResult {
  enum class Verdict { Inconsistent, Unknown };

  Verdict verdict = Verdict::Unknown;
  /// "first-character clash", "parikh", "instantiation", "model" or the
  /// reason the check gave up.
  std::string certificate;
  std::optional<FiniteModel> model;

  bool inconsistent() const { return verdict == Verdict::Inconsistent; }
};

/// Letter-count arithmetic, then instantiation of finite Parikh images.
NoSolResult parikh_check(const std::vector<Equation>& system, const std::vector<char>& alphabet,
                         std::size_t lattice_limit = 64, std::size_t instance_limit = 4096);

/// Parikh first, then a countermodel of T_D plus the existential closure.
NoSolResult no_solution_check(const std::vector<Equation>& system, const NoSolOptions& options = {});

}  // namespace superfcm

#endif  // SUPERFCM_MATCHER_HPP
