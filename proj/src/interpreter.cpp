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

#include "superfcm/interpreter.hpp"

#include <algorithm>
#include <functional>

#include "superfcm/errors.hpp"
#include "superfcm/matcher.hpp"

namespace superfcm {

std::string kind_name(EvalResult::Kind kind) {
  switch (kind) {
    case EvalResult::Kind::Value:
      return "Value";
    case EvalResult::Kind::Stuck:
      return "Stuck";
    case EvalResult::Kind::FuelExhausted:
      return "FuelExhausted";
  }
  return "?";
}

namespace {

using Rewrite = std::function<std::optional<Term>(const Atom& redex)>;

bool ready(const Atom& call, bool objects_only) {
  return std::all_of(call.args().begin(), call.args().end(), [&](const Term& a) {
    return objects_only ? a.is_object() : a.is_passive();
  });
}

/// Replaces the leftmost-innermost redex. `found` reports whether one
/// exists; the result is nullopt when the rewrite itself declines.
std::optional<Term> rewrite(const Term& t, const Rewrite& f, bool& found, bool objects_only = true) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Atom& a = t[i];
    std::optional<Atom> replaced;
    Term spliced;
    bool splice = false;
    if (a.is_paren()) {
      std::optional<Term> inner = rewrite(a.inner(), f, found, objects_only);
      if (found) {
        if (!inner) return std::nullopt;
        replaced = Atom::paren(std::move(*inner));
      }
    } else if (a.is_call()) {
      for (std::size_t k = 0; k < a.args().size() && !found; ++k) {
        std::optional<Term> arg = rewrite(a.args()[k], f, found, objects_only);
        if (found) {
          if (!arg) return std::nullopt;
          std::vector<Term> args = a.args();
          args[k] = std::move(*arg);
          replaced = Atom::call(a.function(), std::move(args));
        }
      }
      if (!found && ready(a, objects_only)) {
        found = true;
        std::optional<Term> r = f(a);
        if (!r) return std::nullopt;
        spliced = std::move(*r);
        splice = true;
      }
    }
    if (found) {
      Term out = t.slice(0, i);
      if (splice)
        out.append(spliced);
      else
        out.append(std::move(*replaced));
      out.append(t.slice(i + 1, t.size()));
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Term> find_redex(const Term& state, bool objects_only) {
  std::optional<Term> redex;
  bool found = false;
  rewrite(
      state,
      [&](const Atom& a) -> std::optional<Term> {
        redex = Term(a);
        return std::nullopt;
      },
      found, objects_only);
  return redex;
}

Term replace_redex(const Term& state, const Term& replacement, bool objects_only) {
  bool found = false;
  std::optional<Term> out = rewrite(
      state, [&](const Atom&) -> std::optional<Term> { return replacement; }, found, objects_only);
  if (!out) throw Error("no redex in " + std::string(found ? "state" : "passive state"));
  return *out;
}

std::optional<Term> step(const Program& p, const Term& state, MatchWork* work) {
  bool found = false;
  return rewrite(
      state,
      [&](const Atom& call) -> std::optional<Term> {
        for (const Rule* r : p.rules_for(call.function())) {
          if (r->arity() != call.args().size()) continue;
          const std::vector<Term> patterns(r->patterns().begin(), r->patterns().end());
          MatchOutcome m = markov_match(call.args(), patterns, work);
          if (m.matched()) return apply(m.solutions.front().binding, r->rhs);
        }
        return std::nullopt;
      },
      found);
}

EvalResult evaluate(const Program& p, const Term& state, std::size_t fuel) {
  if (!state.is_ground()) throw Error("evaluation of a non-ground state");
  EvalResult res;
  Term current = state;
  MatchWork work;
  while (true) {
    if (current.is_passive()) {
      res.kind = EvalResult::Kind::Value;
      break;
    }
    if (res.steps >= fuel) {
      res.kind = EvalResult::Kind::FuelExhausted;
      break;
    }
    std::optional<Term> next = step(p, current, &work);
    if (!next) {
      res.kind = EvalResult::Kind::Stuck;
      res.failing_call = *find_redex(current);
      break;
    }
    current = std::move(*next);
    ++res.steps;
  }
  res.term = std::move(current);
  res.work = res.steps + work.comparisons;
  return res;
}

EvalResult eval(const Program& p, const Substitution& theta, std::size_t fuel) {
  for (const Var& v : vars(p.initial).order)
    if (!theta.contains(v)) throw Error("no value for " + to_string(v));
  return evaluate(p, apply(theta, p.initial), fuel);
}

std::vector<Term> nd_step(const Program& p, const Term& state) {
  std::vector<Term> out;
  bool found = false;
  rewrite(
      state,
      [&](const Atom& call) -> std::optional<Term> {
        for (const Rule& r : p.rules) {
          if (r.function() != call.function() || r.arity() != call.args().size()) continue;
          const std::vector<Term> patterns(r.patterns().begin(), r.patterns().end());
          for (const Substitution& theta : all_matches(call.args(), patterns)) {
            bool ignored = false;
            const Term rhs = apply(theta, r.rhs);
            std::optional<Term> whole = rewrite(
                state, [&](const Atom&) -> std::optional<Term> { return rhs; }, ignored);
            if (whole && std::find(out.begin(), out.end(), *whole) == out.end()) out.push_back(*whole);
          }
        }
        return std::nullopt;
      },
      found);
  return out;
}

}  // namespace superfcm
