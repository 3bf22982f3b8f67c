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

#include "superfcm/logic.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "superfcm/errors.hpp"
#include "superfcm/syntax.hpp"

namespace superfcm {

FTerm FTerm::variable(std::string name) {
  FTerm t(Kind::Var);
  t.name_ = std::move(name);
  return t;
}

FTerm FTerm::character(char c) {
  FTerm t(Kind::Char);
  t.ch_ = c;
  return t;
}

FTerm FTerm::concat(FTerm left, FTerm right) {
  FTerm t(Kind::Concat);
  t.args_.push_back(std::move(left));
  t.args_.push_back(std::move(right));
  return t;
}

FTerm FTerm::beta(FTerm inner) {
  FTerm t(Kind::Beta);
  t.args_.push_back(std::move(inner));
  return t;
}

FTerm concat_all(std::vector<FTerm> parts) {
  if (parts.empty()) return FTerm::eps();
  FTerm out = std::move(parts.back());
  for (std::size_t i = parts.size() - 1; i-- > 0;)
    out = FTerm::concat(std::move(parts[i]), std::move(out));
  return out;
}

FTerm to_fterm(const Term& passive) {
  std::vector<FTerm> parts;
  for (const Atom& a : passive.atoms()) {
    switch (a.kind()) {
      case Atom::Kind::Char:
        parts.push_back(FTerm::character(a.ch()));
        break;
      case Atom::Kind::Var:
        parts.push_back(FTerm::variable(to_string(a.var())));
        break;
      case Atom::Kind::Paren:
        parts.push_back(FTerm::beta(to_fterm(a.inner())));
        break;
      case Atom::Kind::Call:
        throw Error("function call in a first-order term: " + a.function());
    }
  }
  return concat_all(std::move(parts));
}

Formula Formula::falsity() {
  Formula f;
  f.kind = Kind::False;
  return f;
}

Formula Formula::eq(FTerm a, FTerm b) {
  Formula f;
  f.kind = Kind::Eq;
  f.terms = {std::move(a), std::move(b)};
  return f;
}

Formula Formula::atom(std::string pred, std::vector<FTerm> args) {
  Formula f;
  f.kind = Kind::Pred;
  f.pred = std::move(pred);
  f.terms = std::move(args);
  return f;
}

Formula Formula::negate(Formula g) {
  Formula f;
  f.kind = Kind::Not;
  f.subs.push_back(std::move(g));
  return f;
}

namespace {

Formula junction(Formula::Kind kind, std::vector<Formula> parts) {
  const Formula::Kind unit = kind == Formula::Kind::And ? Formula::Kind::True : Formula::Kind::False;
  Formula f;
  f.kind = kind;
  for (Formula& p : parts) {
    if (p.kind == kind) {
      for (Formula& q : p.subs) f.subs.push_back(std::move(q));
    } else if (p.kind != unit) {
      f.subs.push_back(std::move(p));
    }
  }
  if (f.subs.empty()) {
    Formula u;
    u.kind = unit;
    return u;
  }
  if (f.subs.size() == 1) return std::move(f.subs.front());
  return f;
}

Formula quantified(Formula::Kind kind, std::vector<std::string> vars, Formula body) {
  if (vars.empty()) return body;
  Formula f;
  f.kind = kind;
  f.vars = std::move(vars);
  f.subs.push_back(std::move(body));
  return f;
}

}  // namespace

Formula Formula::conj(std::vector<Formula> parts) { return junction(Kind::And, std::move(parts)); }
Formula Formula::disj(std::vector<Formula> parts) { return junction(Kind::Or, std::move(parts)); }

Formula Formula::implies(Formula a, Formula b) {
  Formula f;
  f.kind = Kind::Implies;
  f.subs = {std::move(a), std::move(b)};
  return f;
}

Formula Formula::forall(std::vector<std::string> vars, Formula body) {
  return quantified(Kind::Forall, std::move(vars), std::move(body));
}

Formula Formula::exists(std::vector<std::string> vars, Formula body) {
  return quantified(Kind::Exists, std::move(vars), std::move(body));
}

namespace {

void add_unique(std::vector<std::string>& out, const std::string& v) {
  if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

void collect(const FTerm& t, std::vector<std::string>& out) {
  if (t.kind() == FTerm::Kind::Var) add_unique(out, t.name());
  for (const FTerm& a : t.args()) collect(a, out);
}

void collect_free(const Formula& f, std::vector<std::string> bound, std::vector<std::string>& out) {
  if (f.kind == Formula::Kind::Forall || f.kind == Formula::Kind::Exists)
    bound.insert(bound.end(), f.vars.begin(), f.vars.end());
  std::vector<std::string> here;
  for (const FTerm& t : f.terms) collect(t, here);
  for (const std::string& v : here)
    if (std::find(bound.begin(), bound.end(), v) == bound.end()) add_unique(out, v);
  for (const Formula& s : f.subs) collect_free(s, bound, out);
}

}  // namespace

std::vector<std::string> term_variables(const FTerm& t) {
  std::vector<std::string> out;
  collect(t, out);
  return out;
}

std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> out;
  collect_free(f, {}, out);
  return out;
}

std::string role_name(AxiomRole role) {
  switch (role) {
    case AxiomRole::Associativity:
      return "associativity";
    case AxiomRole::LeftUnit:
      return "left-unit";
    case AxiomRole::RightUnit:
      return "right-unit";
    case AxiomRole::Distinct:
      return "distinct";
    case AxiomRole::RBase:
      return "r-base";
    case AxiomRole::RBeta:
      return "r-beta";
    case AxiomRole::RConcat:
      return "r-concat";
    case AxiomRole::Seed:
      return "seed";
    case AxiomRole::Program:
      return "program";
    case AxiomRole::Other:
      break;
  }
  return "other";
}

bool Theory::has_role(AxiomRole role) const {
  return std::any_of(axioms.begin(), axioms.end(), [&](const Axiom& a) { return a.role == role; });
}

// ---------------------------------------------------------------- readable

namespace {

void flatten_concat(const FTerm& t, std::vector<const FTerm*>& out) {
  if (t.kind() == FTerm::Kind::Concat) {
    out.push_back(&t.args()[0]);
    flatten_concat(t.args()[1], out);
  } else {
    out.push_back(&t);
  }
}

void print_readable(const FTerm& t, std::string& out) {
  switch (t.kind()) {
    case FTerm::Kind::Var:
      out += t.name();
      return;
    case FTerm::Kind::Eps:
      out += "\xCE\xB5";
      return;
    case FTerm::Kind::Char:
      out += '\'' + escape_char(t.ch()) + '\'';
      return;
    case FTerm::Kind::Beta:
      out += "\xCE\xB2(";
      print_readable(t.args()[0], out);
      out += ')';
      return;
    case FTerm::Kind::Concat: {
      std::vector<const FTerm*> parts;
      flatten_concat(t, parts);
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += ':';
        if (parts[i]->kind() == FTerm::Kind::Concat) {
          out += '(';
          print_readable(*parts[i], out);
          out += ')';
        } else {
          print_readable(*parts[i], out);
        }
      }
      return;
    }
  }
}

bool compound(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return true;
    default:
      return false;
  }
}

void print_readable(const Formula& f, std::string& out);

void print_operand(const Formula& f, std::string& out) {
  if (compound(f)) {
    out += '(';
    print_readable(f, out);
    out += ')';
  } else {
    print_readable(f, out);
  }
}

void print_readable(const Formula& f, std::string& out) {
  switch (f.kind) {
    case Formula::Kind::True:
      out += "\xE2\x8A\xA4";
      return;
    case Formula::Kind::False:
      out += "\xE2\x8A\xA5";
      return;
    case Formula::Kind::Eq:
      print_readable(f.terms[0], out);
      out += " = ";
      print_readable(f.terms[1], out);
      return;
    case Formula::Kind::Pred:
      out += f.pred + '(';
      for (std::size_t i = 0; i < f.terms.size(); ++i) {
        if (i > 0) out += ", ";
        print_readable(f.terms[i], out);
      }
      out += ')';
      return;
    case Formula::Kind::Not:
      out += "\xC2\xAC";
      if (f.subs[0].kind == Formula::Kind::Eq) {
        out += '(';
        print_readable(f.subs[0], out);
        out += ')';
      } else {
        print_operand(f.subs[0], out);
      }
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      const char* sep = f.kind == Formula::Kind::And ? " \xE2\x88\xA7 " : " \xE2\x88\xA8 ";
      for (std::size_t i = 0; i < f.subs.size(); ++i) {
        if (i > 0) out += sep;
        print_operand(f.subs[i], out);
      }
      return;
    }
    case Formula::Kind::Implies:
      print_operand(f.subs[0], out);
      out += " \xE2\x86\x92 ";
      print_operand(f.subs[1], out);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      out += f.kind == Formula::Kind::Forall ? "\xE2\x88\x80" : "\xE2\x88\x83";
      for (std::size_t i = 0; i < f.vars.size(); ++i) {
        if (i > 0) out += ',';
        out += f.vars[i];
      }
      out += ". ";
      print_readable(f.subs[0], out);
      return;
  }
}

}  // namespace

std::string print_fterm(const FTerm& t) {
  std::string out;
  print_readable(t, out);
  return out;
}

std::string print_formula(const Formula& f) {
  std::string out;
  print_readable(f, out);
  return out;
}

std::string print_theory(const Theory& th) {
  std::string out;
  for (const Axiom& a : th.axioms) out += print_formula(a.formula) + "\n";
  if (th.goal) out += "goal: " + print_formula(*th.goal) + "\n";
  return out;
}

// ------------------------------------------------------------------- mace4

std::string mace4_constant(char c) {
  if (std::isalnum(static_cast<unsigned char>(c)) != 0) return std::string("c_") + c;
  char buf[8];
  std::snprintf(buf, sizeof buf, "c_x%02X", static_cast<unsigned char>(c));
  return buf;
}

namespace {

std::string mace4_var(const std::string& name) {
  std::string out;
  for (char c : name) out += std::isalnum(static_cast<unsigned char>(c)) != 0 ? c : '_';
  return out;
}

void print_mace4(const FTerm& t, std::string& out, bool top) {
  switch (t.kind()) {
    case FTerm::Kind::Var:
      out += mace4_var(t.name());
      return;
    case FTerm::Kind::Eps:
      out += "e0";
      return;
    case FTerm::Kind::Char:
      out += mace4_constant(t.ch());
      return;
    case FTerm::Kind::Beta:
      out += "b1(";
      print_mace4(t.args()[0], out, true);
      out += ')';
      return;
    case FTerm::Kind::Concat:
      if (!top) out += '(';
      print_mace4(t.args()[0], out, false);
      out += " * ";
      print_mace4(t.args()[1], out, false);
      if (!top) out += ')';
      return;
  }
}

void print_mace4(const Formula& f, std::string& out) {
  switch (f.kind) {
    case Formula::Kind::True:
      out += "$T";
      return;
    case Formula::Kind::False:
      out += "$F";
      return;
    case Formula::Kind::Eq:
      print_mace4(f.terms[0], out, true);
      out += " = ";
      print_mace4(f.terms[1], out, true);
      return;
    case Formula::Kind::Pred:
      out += f.pred;
      if (!f.terms.empty()) {
        out += '(';
        for (std::size_t i = 0; i < f.terms.size(); ++i) {
          if (i > 0) out += ", ";
          print_mace4(f.terms[i], out, true);
        }
        out += ')';
      }
      return;
    case Formula::Kind::Not:
      if (f.subs[0].kind == Formula::Kind::Eq) {
        print_mace4(f.subs[0].terms[0], out, true);
        out += " != ";
        print_mace4(f.subs[0].terms[1], out, true);
      } else {
        out += "-(";
        print_mace4(f.subs[0], out);
        out += ')';
      }
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      for (std::size_t i = 0; i < f.subs.size(); ++i) {
        if (i > 0) out += f.kind == Formula::Kind::And ? " & " : " | ";
        out += '(';
        print_mace4(f.subs[i], out);
        out += ')';
      }
      return;
    case Formula::Kind::Implies:
      out += '(';
      print_mace4(f.subs[0], out);
      out += ") -> (";
      print_mace4(f.subs[1], out);
      out += ')';
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      for (const std::string& v : f.vars) {
        out += f.kind == Formula::Kind::Forall ? "all " : "exists ";
        out += mace4_var(v) + ' ';
      }
      out += '(';
      print_mace4(f.subs[0], out);
      out += ')';
      return;
  }
}

bool quantifier_free(const Formula& f) {
  if (f.kind == Formula::Kind::Forall || f.kind == Formula::Kind::Exists) return false;
  return std::all_of(f.subs.begin(), f.subs.end(), quantifier_free);
}

// Names LADR reads as variables.
bool ladr_variable(const std::string& name) {
  return !name.empty() && name[0] >= 'u' && name[0] <= 'z' && mace4_var(name) == name;
}

}  // namespace

std::string export_mace4(const Theory& th) {
  std::string out = "formulas(assumptions).\n";
  for (const Axiom& a : th.axioms) {
    const Formula& f = a.formula;
    if (f.kind == Formula::Kind::Forall && quantifier_free(f.subs[0]) &&
        std::all_of(f.vars.begin(), f.vars.end(), ladr_variable))
      print_mace4(f.subs[0], out);
    else
      print_mace4(f, out);
    out += ".\n";
  }
  out += "end_of_list.\n";
  if (th.goal) {
    out += "\nformulas(goals).\n";
    print_mace4(*th.goal, out);
    out += ".\nend_of_list.\n";
  }
  return out;
}

}  // namespace superfcm
