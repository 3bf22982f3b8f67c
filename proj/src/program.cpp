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

#include "superfcm/program.hpp"

#include <algorithm>

#include "superfcm/errors.hpp"
#include "superfcm/syntax.hpp"

namespace superfcm {

std::vector<const Rule*> Program::rules_for(const std::string& function) const {
  std::vector<const Rule*> out;
  for (const Rule& r : rules)
    if (r.function() == function) out.push_back(&r);
  return out;
}

bool Program::defines(const std::string& function) const {
  return std::any_of(rules.begin(), rules.end(),
                     [&](const Rule& r) { return r.function() == function; });
}

namespace {

void collect_chars(const Term& t, std::vector<char>& out) {
  for (const Atom& a : t.atoms()) {
    if (a.is_char() && std::find(out.begin(), out.end(), a.ch()) == out.end())
      out.push_back(a.ch());
    for (const Term& child : a.args()) collect_chars(child, out);
  }
}

void collect_arities(const Term& t, std::map<std::string, std::size_t>& out) {
  for (const Atom& a : t.atoms()) {
    if (a.is_call()) {
      auto [it, inserted] = out.emplace(a.function(), a.args().size());
      if (!inserted && it->second != a.args().size())
        throw ArityMismatch("function " + a.function() + " used with arities " +
                            std::to_string(it->second) + " and " +
                            std::to_string(a.args().size()));
    }
    for (const Term& child : a.args()) collect_arities(child, out);
  }
}

}  // namespace

std::map<std::string, std::size_t> Program::arities() const {
  std::map<std::string, std::size_t> out;
  for (const Rule& r : rules) collect_arities(r.lhs, out);
  for (const Rule& r : rules) collect_arities(r.rhs, out);
  collect_arities(initial, out);
  return out;
}

std::vector<char> inferred_alphabet(const Term& initial, const std::vector<Rule>& rules) {
  std::vector<char> out;
  collect_chars(initial, out);
  for (const Rule& r : rules) {
    collect_chars(r.lhs, out);
    collect_chars(r.rhs, out);
  }
  return out;
}

Program make_program(Term initial, std::vector<std::pair<Term, Term>> rules,
                     std::vector<char> declared_alphabet) {
  Program p;
  p.initial = std::move(initial);
  for (auto& [lhs, rhs] : rules) {
    const std::size_t index = p.rules.size();
    if (lhs.size() != 1 || !lhs.atom().is_call())
      throw Error("rule " + std::to_string(index + 1) + ": left-hand side must be a call");
    for (const Term& arg : lhs.atom().args())
      if (!arg.is_passive())
        throw Error("rule " + std::to_string(index + 1) + ": pattern " + print_term(arg) +
                    " is not passive");
    const VarSets lv = vars(lhs);
    for (const Var& v : vars(rhs).order)
      if (!lv.contains(v))
        throw FreeRhsVariable("rule " + std::to_string(index + 1) + ": variable " +
                              to_string(v) + " does not occur in the left-hand side");
    p.rules.push_back(Rule{std::move(lhs), std::move(rhs), index});
  }
  (void)p.arities();  // throws on inconsistent arity
  p.alphabet = std::move(declared_alphabet);
  for (char c : inferred_alphabet(p.initial, p.rules))
    if (std::find(p.alphabet.begin(), p.alphabet.end(), c) == p.alphabet.end())
      p.alphabet.push_back(c);
  return p;
}

}  // namespace superfcm
