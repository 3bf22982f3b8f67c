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

// First-order formulas over the data monoid signature: binary ':', unary
// β, the constant ε and one constant per character.

#ifndef SUPERFCM_LOGIC_HPP
#define SUPERFCM_LOGIC_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "superfcm/term.hpp"

namespace superfcm {

class FTerm {
 public:
  enum class Kind : std::uint8_t { Var, Eps, Char, Concat, Beta };

  static FTerm variable(std::string name);
  static FTerm eps() { return FTerm(Kind::Eps); }
  static FTerm character(char c);
  static FTerm concat(FTerm left, FTerm right);
  static FTerm beta(FTerm inner);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  char ch() const { return ch_; }
  const std::vector<FTerm>& args() const { return args_; }

  friend bool operator==(const FTerm&, const FTerm&) = default;

 private:
  explicit FTerm(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::string name_;
  char ch_ = 0;
  std::vector<FTerm> args_;
};

/// Right-nested concatenation; ε for an empty list.
FTerm concat_all(std::vector<FTerm> parts);

/// Translation of a passive term. Variables keep their printed names.
FTerm to_fterm(const Term& passive);

struct Formula {
  enum class Kind : std::uint8_t { True, False, Eq, Pred, Not, And, Or, Implies, Forall, Exists };

  Kind kind = Kind::True;
  std::string pred;
  std::vector<FTerm> terms;
  std::vector<Formula> subs;
  std::vector<std::string> vars;

  static Formula truth() { return {}; }
  static Formula falsity();
  static Formula eq(FTerm a, FTerm b);
  static Formula atom(std::string pred, std::vector<FTerm> args);
  static Formula negate(Formula f);
  /// Flattening conjunction; a single part is returned as is.
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);
  static Formula implies(Formula a, Formula b);
  static Formula forall(std::vector<std::string> vars, Formula body);
  static Formula exists(std::vector<std::string> vars, Formula body);

  friend bool operator==(const Formula&, const Formula&) = default;
};

/// Free variables in order of first occurrence.
std::vector<std::string> free_variables(const Formula& f);
std::vector<std::string> term_variables(const FTerm& t);

enum class AxiomRole : std::uint8_t {
  Associativity,
  LeftUnit,
  RightUnit,
  Distinct,
  RBase,
  RBeta,
  RConcat,
  Seed,
  Program,
  Other
};

std::string role_name(AxiomRole role);

struct Axiom {
  AxiomRole role = AxiomRole::Other;
  Formula formula;
};

struct Theory {
  std::vector<char> alphabet;
  /// Predicate symbols and arities; R is unary.
  std::map<std::string, std::size_t> predicates;
  std::vector<Axiom> axioms;
  std::optional<Formula> goal;

  void add(AxiomRole role, Formula f) { axioms.push_back({role, std::move(f)}); }
  bool has_role(AxiomRole role) const;
};

/// Readable rendering: ∀, ∃, ∧, ∨, ¬, →, ':' for concatenation and
/// parentheses for β.
std::string print_fterm(const FTerm& t);
std::string print_formula(const Formula& f);
/// One axiom per line, then the goal after "goal:".
std::string print_theory(const Theory& th);

/// Mace4 input: ':' as '*', β as b1, ε as e0, character c as c_c
/// (c_xHH for characters outside [A-Za-z0-9]).
std::string mace4_constant(char c);
std::string export_mace4(const Theory& th);

}  // namespace superfcm

#endif  // SUPERFCM_LOGIC_HPP
