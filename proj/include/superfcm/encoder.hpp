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

// Translation of programs and reachability questions into first-order
// theories over the data monoid.

#ifndef SUPERFCM_ENCODER_HPP
#define SUPERFCM_ENCODER_HPP

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "superfcm/logic.hpp"
#include "superfcm/program.hpp"

namespace superfcm {

/// Monoid axioms, distinctness of ε and the characters, and the closure
/// axioms of the data predicate R.
Theory encode_data_theory(const std::vector<char>& alphabet);

/// Sort guard of an ℒ variable: R(x) for e-variables, a disjunction of the
/// character constants for s-variables, characters or β(R) for t-variables.
Formula sort_guard(const Var& v, const std::vector<char>& alphabet);

/// Drops Horn axioms whose head predicate the goal cannot depend on.
/// Any model of the rest extends by reading those predicates as true.
Theory slice_for_goal(const Theory& th);

/// Rebuilds the data axioms over the characters that the remaining axioms
/// and the goal mention. Unused characters may be read as ε in any model.
Theory trim_alphabet(const Theory& th);

struct EncodeOptions {
  /// Drop argument positions whose contents only ever flow into other
  /// dropped positions (unary counters and the like).
  bool project_counters = false;
  /// Functions whose positions are never dropped, such as those a goal
  /// will constrain.
  std::set<std::string> keep_functions;
};

struct ReachabilityEncoding {
  Program program;
  /// T_D plus the seed and one axiom per rule; no goal.
  Theory theory;
  /// Function name to its reachability predicate.
  std::map<std::string, std::string> predicate;
  /// Function name to the argument positions kept in its predicate.
  std::map<std::string, std::vector<std::size_t>> kept;
  std::string out_predicate = "Out";

  /// Reachability atom for f(args); dropped positions are skipped.
  Formula reach_atom(const std::string& function, const std::vector<Term>& args) const;
};

/// Every rhs must be passive or one call with passive arguments, and the
/// initial term likewise. Throws UnsupportedShape otherwise.
ReachabilityEncoding encode_program_overapprox(const Program& p, const EncodeOptions& options = {});

/// True when the program is in the shape encode_program_overapprox accepts.
bool is_flat_tail(const Program& p);

enum class GoalForm { Decomposed, Tuple };

/// ∃ parameters, rule variables. guards ∧ (u1)…(uk) = (p1)…(pk). The
/// decomposed form states one equation per argument and eliminates rule
/// e-variables standing alone as an argument. Throws ArityMismatch.
Formula encode_one_step_goal(const Term& config, const Rule& rule,
                             const std::vector<char>& alphabet,
                             GoalForm form = GoalForm::Decomposed);

/// The first-matching reachability condition of rule `index` among
/// `rules`: the config tuple must fail to match every earlier rule and
/// match this one. Not used for refutation.
Formula encode_ordered_goal(const Term& config, const std::vector<const Rule*>& rules,
                            std::size_t index);

struct Target {
  enum class Kind { Reach, Value, Out };

  Kind kind = Kind::Reach;
  std::string function;
  /// Argument patterns for Reach.
  std::vector<Term> patterns;
  /// Result pattern for Value and Out.
  Term value;
};

/// "F(e.xs, e.ys:'bb':e.zs)" for a reachable call, "B='F'" for a result of
/// B, "Out('F')" for a result of the whole run.
Target parse_target(std::string_view text);
std::string print_target(const Target& t);

/// Existential closure of the target over the encoding's predicates.
Formula encode_exit_goal(const ReachabilityEncoding& enc, const Target& target);

/// Renames the variables of `t` apart from everything reserved in `names`.
Term rename_apart(const Term& t, NameSupply& names, std::map<Var, Var>* renaming = nullptr);

}  // namespace superfcm

#endif  // SUPERFCM_ENCODER_HPP
