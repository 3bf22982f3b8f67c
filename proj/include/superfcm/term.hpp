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

// Terms of the sequence language: characters, e/s/t variables, the
// parenthesis constructor and n-ary calls, kept in flattened canonical form.

#ifndef SUPERFCM_TERM_HPP
#define SUPERFCM_TERM_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace superfcm {

enum class VarKind : std::uint8_t { E, S, T };

char kind_prefix(VarKind kind);

struct Var {
  VarKind kind = VarKind::E;
  std::string name;

  friend bool operator==(const Var&, const Var&) = default;
  friend auto operator<=>(const Var&, const Var&) = default;
};

/// "e.x", "s.c", "t.y".
std::string to_string(const Var& v);

class Term;

/// One element of a canonical sequence. Concatenation and the empty
/// sequence are never atoms, which is what makes the representation
/// canonical.
class Atom {
 public:
  enum class Kind : std::uint8_t { Char, Var, Paren, Call };

  static Atom character(char c);
  static Atom variable(Var v);
  static Atom paren(Term inner);
  static Atom call(std::string function, std::vector<Term> args);

  Kind kind() const { return kind_; }
  bool is_char() const { return kind_ == Kind::Char; }
  bool is_var() const { return kind_ == Kind::Var; }
  bool is_paren() const { return kind_ == Kind::Paren; }
  bool is_call() const { return kind_ == Kind::Call; }
  bool is_var(VarKind k) const { return kind_ == Kind::Var && var_.kind == k; }

  char ch() const { return ch_; }
  const Var& var() const { return var_; }
  const std::string& function() const { return function_; }
  /// Call arguments; a parenthesis holds exactly one child.
  const std::vector<Term>& args() const { return args_; }
  const Term& inner() const;

  friend bool operator==(const Atom& a, const Atom& b);
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);

 private:
  Kind kind_ = Kind::Char;
  char ch_ = 0;
  Var var_;
  std::string function_;
  std::vector<Term> args_;
};

class Term {
 public:
  enum class Kind : std::uint8_t { Empty, Char, Var, Paren, Call, Concat };

  Term() = default;
  explicit Term(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}
  explicit Term(Atom atom) { atoms_.push_back(std::move(atom)); }

  static Term ch(char c) { return Term(Atom::character(c)); }
  /// String sugar: word("aba") is 'a':'b':'a'.
  static Term word(std::string_view chars);
  static Term var(VarKind kind, std::string name) {
    return Term(Atom::variable(Var{kind, std::move(name)}));
  }
  static Term var(Var v) { return Term(Atom::variable(std::move(v))); }
  static Term e(std::string name) { return var(VarKind::E, std::move(name)); }
  static Term s(std::string name) { return var(VarKind::S, std::move(name)); }
  static Term t(std::string name) { return var(VarKind::T, std::move(name)); }
  static Term paren(Term inner) { return Term(Atom::paren(std::move(inner))); }
  static Term call(std::string function, std::vector<Term> args) {
    return Term(Atom::call(std::move(function), std::move(args)));
  }

  Kind kind() const;
  std::span<const Atom> atoms() const { return atoms_; }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  /// A single-atom view; precondition size() == 1.
  const Atom& atom() const { return atoms_.front(); }

  bool is_passive() const;
  bool is_ground() const;
  bool is_object() const { return is_passive() && is_ground(); }

  /// Number of constructor nodes: characters, variables, parentheses and
  /// calls, counted at every depth.
  std::size_t weight() const;

  Term slice(std::size_t begin, std::size_t end) const;
  void append(const Term& tail);
  void append(Atom atom) { atoms_.push_back(std::move(atom)); }

  friend bool operator==(const Term& a, const Term& b) { return a.atoms_ == b.atoms_; }
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  std::vector<Atom> atoms_;
};

Term concat(std::initializer_list<Term> parts);
Term concat(std::span<const Term> parts);

/// Syntax tree before canonicalization: binary/n-ary concatenation nodes and
/// explicit empty nodes are allowed here.
struct RawTerm {
  enum class Kind : std::uint8_t { Empty, Char, Var, Paren, Call, Concat };

  Kind kind = Kind::Empty;
  char ch = 0;
  Var var;
  std::string function;
  std::vector<RawTerm> children;

  static RawTerm empty() { return {}; }
  static RawTerm character(char c);
  static RawTerm variable(Var v);
  static RawTerm paren(RawTerm inner);
  static RawTerm call(std::string function, std::vector<RawTerm> args);
  static RawTerm concat(std::vector<RawTerm> parts);
};

/// Flattens associativity and drops unit elements. Idempotent.
Term normalize(const RawTerm& raw);
/// Right-nested binary concatenation view of a canonical term.
RawTerm to_raw(const Term& t);

struct VarSets {
  std::vector<Var> e;
  std::vector<Var> s;
  std::vector<Var> t;
  /// All variables by first occurrence in left-to-right preorder.
  std::vector<Var> order;

  bool contains(const Var& v) const;
};

VarSets vars(const Term& t);
std::size_t multiplicity(const Var& v, const Term& t);
bool has_call(const Term& t);

/// Whether `value` may be bound to a variable of kind `kind`.
bool in_range(VarKind kind, const Term& value);

class Substitution {
 public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<Var, Term>> bindings);

  /// Throws SortViolation when the value is outside the variable's range.
  void bind(const Var& v, Term value);
  void erase(const Var& v) { bindings_.erase(v); }
  const Term* find(const Var& v) const;
  bool contains(const Var& v) const { return bindings_.count(v) != 0; }
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }
  const std::map<Var, Term>& bindings() const { return bindings_; }

  /// The substitution x -> apply(other, this(x)), extended by other's
  /// bindings for variables this one leaves free.
  Substitution then(const Substitution& other) const;
  Substitution restricted_to(std::span<const Var> keep) const;

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::map<Var, Term> bindings_;
};

/// Homomorphic replacement of bound variables.
Term apply(const Substitution& theta, const Term& t);

/// Elementary operation counter for the matcher. Every atom comparison and
/// every tentative e-variable length counts once.
struct MatchWork {
  std::size_t comparisons = 0;
};

/// Enumerates the substitutions theta with apply(theta, pattern) == value in
/// Markov order: e-variables are decided in order of first occurrence, each
/// trying its shortest value first. Variables occurring in `value` are
/// treated as rigid symbols. `visit` returns true to stop the enumeration.
/// Returns true when stopped by `visit`.
bool enumerate_matches(const Term& pattern, const Term& value, const Substitution& seed,
                       const std::function<bool(const Substitution&)>& visit,
                       MatchWork* work = nullptr);

/// Some theta with apply(theta, t) == s, where variables of s are rigid.
std::optional<Substitution> instance_of(const Term& s, const Term& t);

/// Produces variable names not used anywhere it has been told about.
class NameSupply {
 public:
  NameSupply() = default;
  void reserve(const Term& t);
  void reserve(const Var& v) { used_.insert(v.name); }
  Var fresh(VarKind kind, std::string_view base);
  /// v itself when its name is still free, otherwise a fresh variant.
  Var claim(const Var& v);

 private:
  std::set<std::string> used_;
};

/// Renames every variable of t through `renaming`; unmapped variables stay.
Term rename(const Term& t, const std::map<Var, Var>& renaming);

}  // namespace superfcm

#endif  // SUPERFCM_TERM_HPP
