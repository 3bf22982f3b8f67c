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

#include "superfcm/encoder.hpp"

#include <algorithm>
#include <set>

#include "superfcm/errors.hpp"
#include "superfcm/syntax.hpp"

namespace superfcm {

namespace {

const char* const kR = "R";

FTerm fvar(const Var& v) { return FTerm::variable(to_string(v)); }

Formula r_atom(FTerm t) { return Formula::atom(kR, {std::move(t)}); }

std::vector<std::string> names_of(const std::vector<Var>& vs) {
  std::vector<std::string> out;
  for (const Var& v : vs) out.push_back(to_string(v));
  return out;
}

std::vector<Formula> guards_of(const std::vector<Var>& vs, const std::vector<char>& alphabet) {
  std::vector<Formula> out;
  for (const Var& v : vs) out.push_back(sort_guard(v, alphabet));
  return out;
}

/// Variables of several terms, first occurrence order.
std::vector<Var> vars_of(std::initializer_list<const std::vector<Term>*> groups) {
  std::vector<Var> out;
  for (const auto* g : groups)
    for (const Term& t : *g)
      for (const Var& v : vars(t).order)
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

FTerm tuple(const std::vector<Term>& parts) {
  std::vector<FTerm> items;
  for (const Term& t : parts) items.push_back(FTerm::beta(to_fterm(t)));
  return concat_all(std::move(items));
}

bool flat_call(const Term& t) {
  if (t.size() != 1 || !t.atom().is_call()) return false;
  return std::all_of(t.atom().args().begin(), t.atom().args().end(),
                     [](const Term& a) { return a.is_passive(); });
}

bool counter_shaped(const Term& p) {
  std::size_t evars = 0;
  for (const Atom& a : p.atoms()) {
    if (a.is_var(VarKind::E)) {
      ++evars;
    } else if (!a.is_char()) {
      return false;
    }
  }
  return evars <= 1;
}

}  // namespace

Formula sort_guard(const Var& v, const std::vector<char>& alphabet) {
  const FTerm x = fvar(v);
  if (v.kind == VarKind::E) return r_atom(x);
  std::vector<Formula> options;
  for (char c : alphabet) options.push_back(Formula::eq(x, FTerm::character(c)));
  if (v.kind == VarKind::T) {
    const std::string inner = to_string(v) + "_b";
    options.push_back(Formula::exists(
        {inner}, Formula::conj({Formula::eq(x, FTerm::beta(FTerm::variable(inner))),
                                r_atom(FTerm::variable(inner))})));
  }
  return Formula::disj(std::move(options));
}

Theory encode_data_theory(const std::vector<char>& alphabet) {
  Theory th;
  th.alphabet = alphabet;
  th.predicates[kR] = 1;
  const FTerm x = FTerm::variable("x");
  const FTerm y = FTerm::variable("y");
  const FTerm z = FTerm::variable("z");
  th.add(AxiomRole::Associativity,
         Formula::forall({"x", "y", "z"}, Formula::eq(FTerm::concat(FTerm::concat(x, y), z),
                                                      FTerm::concat(x, FTerm::concat(y, z)))));
  th.add(AxiomRole::RightUnit,
         Formula::forall({"x"}, Formula::eq(FTerm::concat(x, FTerm::eps()), x)));
  th.add(AxiomRole::LeftUnit,
         Formula::forall({"x"}, Formula::eq(FTerm::concat(FTerm::eps(), x), x)));

  std::vector<FTerm> constants{FTerm::eps()};
  for (char c : alphabet) constants.push_back(FTerm::character(c));
  std::vector<Formula> distinct;
  for (std::size_t i = 0; i < constants.size(); ++i)
    for (std::size_t j = i + 1; j < constants.size(); ++j)
      distinct.push_back(Formula::negate(Formula::eq(constants[i], constants[j])));
  if (!distinct.empty()) th.add(AxiomRole::Distinct, Formula::conj(std::move(distinct)));

  std::vector<Formula> base;
  for (const FTerm& c : constants) base.push_back(r_atom(c));
  th.add(AxiomRole::RBase, Formula::conj(std::move(base)));
  th.add(AxiomRole::RBeta, Formula::forall({"x"}, Formula::implies(r_atom(x), r_atom(FTerm::beta(x)))));
  th.add(AxiomRole::RConcat,
         Formula::forall({"x", "y"}, Formula::implies(Formula::conj({r_atom(x), r_atom(y)}),
                                                      r_atom(FTerm::concat(x, y)))));
  return th;
}

namespace {

void chars_in(const FTerm& t, std::set<char>& out) {
  if (t.kind() == FTerm::Kind::Char) out.insert(t.ch());
  for (const FTerm& a : t.args()) chars_in(a, out);
}

void chars_in(const Formula& f, std::set<char>& out) {
  for (const FTerm& t : f.terms) chars_in(t, out);
  for (const Formula& s : f.subs) chars_in(s, out);
}

bool data_role(AxiomRole r) {
  switch (r) {
    case AxiomRole::Associativity:
    case AxiomRole::LeftUnit:
    case AxiomRole::RightUnit:
    case AxiomRole::Distinct:
    case AxiomRole::RBase:
    case AxiomRole::RBeta:
    case AxiomRole::RConcat:
      return true;
    default:
      return false;
  }
}

}  // namespace

namespace {

void preds_in(const Formula& f, std::set<std::string>& out) {
  if (f.kind == Formula::Kind::Pred) out.insert(f.pred);
  for (const Formula& s : f.subs) preds_in(s, out);
}

/// Head predicate of ∀x⃗. body → P(…) or of a bare ∀x⃗. P(…).
std::optional<std::string> head_predicate(const Formula& f) {
  const Formula* g = &f;
  while (g->kind == Formula::Kind::Forall) g = &g->subs[0];
  if (g->kind == Formula::Kind::Implies) g = &g->subs[1];
  if (g->kind != Formula::Kind::Pred) return std::nullopt;
  return g->pred;
}

}  // namespace

Theory slice_for_goal(const Theory& th) {
  if (!th.goal) return th;
  std::set<std::string> relevant;
  preds_in(*th.goal, relevant);
  for (const Axiom& a : th.axioms)
    if (data_role(a.role) || !head_predicate(a.formula)) preds_in(a.formula, relevant);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Axiom& a : th.axioms) {
      const auto head = head_predicate(a.formula);
      if (data_role(a.role) || !head || relevant.count(*head) == 0) continue;
      std::set<std::string> body;
      preds_in(a.formula, body);
      for (const std::string& p : body) changed |= relevant.insert(p).second;
    }
  }
  Theory out;
  out.alphabet = th.alphabet;
  out.goal = th.goal;
  for (const auto& [name, arity] : th.predicates)
    if (relevant.count(name) != 0) out.predicates[name] = arity;
  for (const Axiom& a : th.axioms) {
    const auto head = head_predicate(a.formula);
    if (data_role(a.role) || !head || relevant.count(*head) != 0) out.axioms.push_back(a);
  }
  return out;
}

Theory trim_alphabet(const Theory& th) {
  std::set<char> used;
  for (const Axiom& a : th.axioms)
    if (!data_role(a.role)) chars_in(a.formula, used);
  if (th.goal) chars_in(*th.goal, used);
  std::vector<char> alphabet;
  for (char c : th.alphabet)
    if (used.count(c) != 0) alphabet.push_back(c);
  for (char c : used)
    if (std::find(alphabet.begin(), alphabet.end(), c) == alphabet.end()) alphabet.push_back(c);
  Theory out = encode_data_theory(alphabet);
  for (const auto& [name, arity] : th.predicates) out.predicates[name] = arity;
  for (const Axiom& a : th.axioms)
    if (!data_role(a.role)) out.axioms.push_back(a);
  out.goal = th.goal;
  return out;
}

Formula ReachabilityEncoding::reach_atom(const std::string& function,
                                         const std::vector<Term>& args) const {
  std::vector<FTerm> kept_args;
  auto it = kept.find(function);
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (it == kept.end() ||
        std::find(it->second.begin(), it->second.end(), i) != it->second.end())
      kept_args.push_back(to_fterm(args[i]));
  }
  auto pit = predicate.find(function);
  return Formula::atom(pit == predicate.end() ? "Reach_" + function : pit->second,
                       std::move(kept_args));
}

bool is_flat_tail(const Program& p) {
  if (!p.initial.is_passive() && !flat_call(p.initial)) return false;
  return std::all_of(p.rules.begin(), p.rules.end(),
                     [](const Rule& r) { return r.rhs.is_passive() || flat_call(r.rhs); });
}

ReachabilityEncoding encode_program_overapprox(const Program& p, const EncodeOptions& options) {
  if (!p.initial.is_passive() && !flat_call(p.initial))
    throw UnsupportedShape("initial term is not a single call with passive arguments", -1);
  for (const Rule& r : p.rules)
    if (!r.rhs.is_passive() && !flat_call(r.rhs))
      throw UnsupportedShape("rule " + std::to_string(r.index + 1) +
                                 ": right-hand side is neither passive nor a single flat call",
                             static_cast<long>(r.index));

  ReachabilityEncoding enc;
  enc.program = p;
  enc.theory = encode_data_theory(p.alphabet);
  const auto arities = p.arities();

  std::map<std::string, std::vector<bool>> dropped;
  for (const auto& [f, k] : arities) dropped[f] = std::vector<bool>(k, options.project_counters);
  if (options.project_counters) {
    for (const Rule& r : p.rules)
      for (std::size_t i = 0; i < r.arity(); ++i)
        if (!counter_shaped(r.patterns()[i])) dropped[r.function()][i] = false;
    for (const std::string& f : options.keep_functions)
      if (auto it = dropped.find(f); it != dropped.end()) it->second.assign(it->second.size(), false);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Rule& r : p.rules) {
        const auto pats = r.patterns();
        for (std::size_t i = 0; i < pats.size(); ++i) {
          if (!dropped[r.function()][i]) continue;
          bool keep = false;
          for (const Var& v : vars(pats[i]).order) {
            for (std::size_t j = 0; j < pats.size() && !keep; ++j)
              keep = j != i && multiplicity(v, pats[j]) > 0;
            if (keep) break;
            if (r.rhs.is_passive()) {
              keep = multiplicity(v, r.rhs) > 0;
            } else {
              const Atom& call = r.rhs.atom();
              const auto& flags = dropped[call.function()];
              for (std::size_t j = 0; j < call.args().size() && !keep; ++j)
                keep = !flags[j] && multiplicity(v, call.args()[j]) > 0;
            }
            if (keep) break;
          }
          if (keep) {
            dropped[r.function()][i] = false;
            changed = true;
          }
        }
      }
    }
  }
  for (const auto& [f, k] : arities) {
    enc.predicate[f] = "Reach_" + f;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < k; ++i)
      if (!dropped[f][i]) kept.push_back(i);
    enc.theory.predicates[enc.predicate[f]] = kept.size();
    enc.kept[f] = std::move(kept);
  }
  enc.theory.predicates[enc.out_predicate] = 1;

  auto head_of = [&](const Term& t) {
    if (t.is_passive()) return Formula::atom(enc.out_predicate, {to_fterm(t)});
    return enc.reach_atom(t.atom().function(), t.atom().args());
  };

  // Only variables that survive projection are quantified.
  auto used_vars = [&](const std::vector<Var>& candidates, const std::vector<const Formula*>& atoms) {
    std::vector<std::string> names;
    for (const Formula* a : atoms)
      for (const std::string& n : free_variables(*a)) names.push_back(n);
    std::vector<Var> out;
    for (const Var& v : candidates)
      if (std::find(names.begin(), names.end(), to_string(v)) != names.end()) out.push_back(v);
    return out;
  };
  {
    Formula head = head_of(p.initial);
    const std::vector<Var> vs = used_vars(vars(p.initial).order, {&head});
    Formula body = Formula::conj(guards_of(vs, p.alphabet));
    enc.theory.add(AxiomRole::Seed,
                   Formula::forall(names_of(vs), vs.empty() ? std::move(head)
                                                            : Formula::implies(std::move(body),
                                                                               std::move(head))));
  }
  for (const Rule& r : p.rules) {
    Formula trigger = enc.reach_atom(r.function(), r.lhs.atom().args());
    Formula head = head_of(r.rhs);
    const std::vector<Var> vs = used_vars(vars(r.lhs).order, {&trigger, &head});
    std::vector<Formula> body = guards_of(vs, p.alphabet);
    body.push_back(std::move(trigger));
    enc.theory.add(AxiomRole::Program,
                   Formula::forall(names_of(vs),
                                   Formula::implies(Formula::conj(std::move(body)), std::move(head))));
  }
  return enc;
}

Term rename_apart(const Term& t, NameSupply& names, std::map<Var, Var>* renaming) {
  std::map<Var, Var> local;
  for (const Var& v : vars(t).order) local.emplace(v, names.claim(v));
  if (renaming != nullptr) *renaming = local;
  return rename(t, local);
}

namespace {

struct Split {
  std::vector<Term> config_args;
  std::vector<Term> rule_args;
  std::vector<Var> params;
  std::vector<Var> rule_vars;
};

Split split_apart(const Term& config, const Rule& rule, NameSupply& names) {
  if (config.size() != 1 || !config.atom().is_call())
    throw Error("configuration must be a single call: " + print_term(config));
  const Atom& call = config.atom();
  if (call.function() != rule.function())
    throw ArityMismatch("configuration calls " + call.function() + " but the rule defines " +
                        rule.function());
  if (call.args().size() != rule.arity())
    throw ArityMismatch("configuration passes " + std::to_string(call.args().size()) +
                        " arguments where the rule expects " + std::to_string(rule.arity()));
  for (const Term& a : call.args())
    if (!a.is_passive()) throw Error("configuration arguments must be passive");
  Split s;
  s.config_args = call.args();
  s.params = vars(config).order;
  const Term lhs = rename_apart(rule.lhs, names);
  s.rule_args = lhs.atom().args();
  s.rule_vars = vars(lhs).order;
  return s;
}

}  // namespace

Formula encode_one_step_goal(const Term& config, const Rule& rule, const std::vector<char>& alphabet,
                             GoalForm form) {
  NameSupply names;
  names.reserve(config);
  Split s = split_apart(config, rule, names);

  if (form == GoalForm::Tuple) {
    std::vector<Var> all = s.params;
    all.insert(all.end(), s.rule_vars.begin(), s.rule_vars.end());
    std::vector<Formula> parts = guards_of(all, alphabet);
    parts.push_back(Formula::eq(tuple(s.config_args), tuple(s.rule_args)));
    return Formula::exists(names_of(all), Formula::conj(std::move(parts)));
  }

  // Pattern side first in each equation.
  std::vector<std::pair<Term, Term>> eqs;
  for (std::size_t i = 0; i < s.rule_args.size(); ++i) eqs.emplace_back(s.rule_args[i], s.config_args[i]);
  std::vector<Var> rule_vars = s.rule_vars;
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t k = 0; k < eqs.size(); ++k) {
      const Term& p = eqs[k].first;
      if (p.size() != 1 || !p.atom().is_var(VarKind::E)) continue;
      const Var w = p.atom().var();
      if (std::find(rule_vars.begin(), rule_vars.end(), w) == rule_vars.end()) continue;
      if (multiplicity(w, eqs[k].second) > 0) continue;
      Substitution theta;
      theta.bind(w, eqs[k].second);
      eqs.erase(eqs.begin() + static_cast<std::ptrdiff_t>(k));
      for (auto& e : eqs) {
        e.first = apply(theta, e.first);
        e.second = apply(theta, e.second);
      }
      rule_vars.erase(std::find(rule_vars.begin(), rule_vars.end(), w));
      progress = true;
      break;
    }
  }
  std::vector<Var> all = s.params;
  all.insert(all.end(), rule_vars.begin(), rule_vars.end());
  std::vector<Formula> parts = guards_of(all, alphabet);
  for (const auto& [p, u] : eqs)
    if (p != u) parts.push_back(Formula::eq(to_fterm(p), to_fterm(u)));
  return Formula::exists(names_of(all), Formula::conj(std::move(parts)));
}

Formula encode_ordered_goal(const Term& config, const std::vector<const Rule*>& rules,
                            std::size_t index) {
  if (index >= rules.size()) throw Error("rule index out of range");
  NameSupply names;
  names.reserve(config);
  const Var v = names.claim(Var{VarKind::E, "v"});
  const FTerm ev = fvar(v);
  std::vector<Formula> parts;
  std::vector<Var> params;
  for (std::size_t j = 0; j <= index; ++j) {
    Split s = split_apart(config, *rules[j], names);
    if (j == 0) {
      params = s.params;
      parts.push_back(Formula::eq(ev, tuple(s.config_args)));
    }
    Formula match = Formula::eq(ev, tuple(s.rule_args));
    if (j < index)
      parts.push_back(Formula::forall(names_of(s.rule_vars), Formula::negate(std::move(match))));
    else
      parts.push_back(Formula::exists(names_of(s.rule_vars), std::move(match)));
  }
  std::vector<std::string> outer{to_string(v)};
  for (const std::string& n : names_of(params)) outer.push_back(n);
  return Formula::exists(std::move(outer), Formula::conj(std::move(parts)));
}

Target parse_target(std::string_view text) {
  Target t;
  int depth = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '\\') ++i;
      else if (c == '\'') quoted = false;
      continue;
    }
    if (c == '\'') quoted = true;
    else if (c == '(') ++depth;
    else if (c == ')') --depth;
    else if (c == '=' && depth == 0) {
      std::string name(text.substr(0, i));
      name.erase(0, name.find_first_not_of(" \t"));
      name.erase(name.find_last_not_of(" \t") + 1);
      if (name.empty()) throw SyntaxError("function name expected before '='", 1, 1);
      t.kind = Target::Kind::Value;
      t.function = name;
      t.value = parse_term(text.substr(i + 1));
      if (!t.value.is_passive()) throw SyntaxError("target value must be passive", 1, i + 2);
      return t;
    }
  }
  const Term call = parse_term(text);
  if (call.size() != 1 || !call.atom().is_call())
    throw SyntaxError("target must be f(patterns), f=value or Out(value)", 1, 1);
  for (const Term& a : call.atom().args())
    if (!a.is_passive()) throw SyntaxError("target patterns must be passive", 1, 1);
  if (call.atom().function() == "Out" && call.atom().args().size() == 1) {
    t.kind = Target::Kind::Out;
    t.value = call.atom().args().front();
    return t;
  }
  t.kind = Target::Kind::Reach;
  t.function = call.atom().function();
  t.patterns = call.atom().args();
  return t;
}

std::string print_target(const Target& t) {
  switch (t.kind) {
    case Target::Kind::Value:
      return t.function + "=" + print_term(t.value);
    case Target::Kind::Out:
      return "Out(" + print_term(t.value) + ")";
    case Target::Kind::Reach:
      break;
  }
  return print_term(Term::call(t.function, t.patterns));
}

namespace {

enum class Rigid { Match, Impossible, Unknown };

/// Matches a call-site argument against a rule pattern when the outcome is
/// decided by parentheses and characters alone.
Rigid rigid_match(const Term& site, const Term& pattern, std::map<Var, Term>& binding) {
  if (site.size() == 1 && site.atom().is_var(VarKind::E)) {
    binding[site.atom().var()] = pattern;
    return Rigid::Match;
  }
  for (const Atom& a : site.atoms())
    if (a.is_var()) return Rigid::Unknown;
  for (const Atom& a : pattern.atoms())
    if (a.is_var()) return Rigid::Unknown;
  if (site.size() != pattern.size()) return Rigid::Impossible;
  for (std::size_t i = 0; i < site.size(); ++i) {
    const Atom& x = site.atoms()[i];
    const Atom& y = pattern.atoms()[i];
    if (x.is_char() != y.is_char()) return Rigid::Impossible;
    if (x.is_char()) {
      if (x.ch() != y.ch()) return Rigid::Impossible;
      continue;
    }
    const Rigid r = rigid_match(x.inner(), y.inner(), binding);
    if (r != Rigid::Match) return r;
  }
  return Rigid::Match;
}

bool linear_evars(const std::vector<Term>& args) {
  std::set<Var> seen;
  for (const Term& a : args)
    for (const Var& v : vars(a).order) {
      if (v.kind != VarKind::E || multiplicity(v, a) != 1 || !seen.insert(v).second) return false;
    }
  return true;
}

std::vector<Term> kept_args(const ReachabilityEncoding& enc, const std::string& f,
                            const std::vector<Term>& args) {
  auto it = enc.kept.find(f);
  if (it == enc.kept.end()) return args;
  std::vector<Term> out;
  for (std::size_t i : it->second) out.push_back(args[i]);
  return out;
}

/// Reach_f(patterns) restated through the callers of f. Empty when some
/// call site is not decided structurally.
std::optional<std::vector<std::pair<std::vector<Term>, Formula>>> through_callers(
    const ReachabilityEncoding& enc, const std::string& f, const std::vector<Term>& patterns,
    NameSupply& names) {
  const Term& init = enc.program.initial;
  if (init.size() == 1 && init.atom().is_call() && init.atom().function() == f) return std::nullopt;
  std::vector<std::pair<std::vector<Term>, Formula>> out;
  for (const Rule& c : enc.program.rules) {
    if (c.rhs.is_passive() || c.rhs.atom().function() != f) continue;
    std::map<Var, Var> renaming;
    const Term lhs = rename_apart(c.lhs, names, &renaming);
    const std::vector<Term> site = rename(c.rhs, renaming).atom().args();
    if (!linear_evars(site)) return std::nullopt;
    std::map<Var, Term> binding;
    Rigid verdict = Rigid::Match;
    for (std::size_t i = 0; i < site.size() && verdict == Rigid::Match; ++i)
      verdict = rigid_match(site[i], patterns[i], binding);
    if (verdict == Rigid::Unknown) return std::nullopt;
    if (verdict == Rigid::Impossible) continue;
    Substitution sigma;
    for (const auto& [v, t] : binding) sigma.bind(v, t);
    std::vector<Term> args;
    for (const Term& a : lhs.atom().args()) args.push_back(apply(sigma, a));
    out.emplace_back(kept_args(enc, c.function(), args), enc.reach_atom(c.function(), args));
  }
  return out;
}

}  // namespace

Formula encode_exit_goal(const ReachabilityEncoding& enc, const Target& target) {
  const std::vector<char>& alphabet = enc.program.alphabet;
  if (target.kind == Target::Kind::Out) {
    const std::vector<Var> vs = vars(target.value).order;
    std::vector<Formula> parts = guards_of(vs, alphabet);
    parts.push_back(Formula::atom(enc.out_predicate, {to_fterm(target.value)}));
    return Formula::exists(names_of(vs), Formula::conj(std::move(parts)));
  }
  if (target.kind == Target::Kind::Reach) {
    auto it = enc.predicate.find(target.function);
    if (it == enc.predicate.end()) throw Error("unknown function in target: " + target.function);
    if (enc.kept.at(target.function).size() > target.patterns.size() ||
        enc.program.arities().at(target.function) != target.patterns.size())
      throw ArityMismatch("target arity differs from " + target.function);
    const std::vector<Var> vs = vars_of({&target.patterns});
    std::vector<Formula> parts = guards_of(vs, alphabet);
    parts.push_back(enc.reach_atom(target.function, target.patterns));
    return Formula::exists(names_of(vs), Formula::conj(std::move(parts)));
  }

  // Results of f: every passive exit of f, and of the functions f hands
  // its result to.
  if (!enc.program.defines(target.function))
    throw Error("target function has no rules: " + target.function);
  std::vector<Formula> disjuncts;
  std::set<std::string> seen;
  std::vector<std::string> work{target.function};
  while (!work.empty()) {
    const std::string f = work.back();
    work.pop_back();
    if (!seen.insert(f).second) continue;
    for (const Rule* r : enc.program.rules_for(f)) {
      if (!r->rhs.is_passive()) {
        work.push_back(r->rhs.atom().function());
        continue;
      }
      if (r->rhs.is_ground() && target.value.is_ground() && r->rhs != target.value) continue;
      NameSupply names;
      names.reserve(target.value);
      std::map<Var, Var> renaming;
      const Term lhs = rename_apart(r->lhs, names, &renaming);
      const Term rhs = rename(r->rhs, renaming);
      const std::vector<Term> tail{rhs, target.value};
      std::vector<std::pair<std::vector<Term>, Formula>> sources;
      if (auto via = through_callers(enc, f, lhs.atom().args(), names))
        sources = std::move(*via);
      else
        sources.emplace_back(kept_args(enc, f, lhs.atom().args()),
                             enc.reach_atom(f, lhs.atom().args()));
      for (auto& [args, atom] : sources) {
        const std::vector<Var> vs = vars_of({&args, &tail});
        std::vector<Formula> parts = guards_of(vs, alphabet);
        parts.push_back(std::move(atom));
        if (rhs != target.value)
          parts.push_back(Formula::eq(to_fterm(rhs), to_fterm(target.value)));
        disjuncts.push_back(Formula::exists(names_of(vs), Formula::conj(std::move(parts))));
      }
    }
  }
  return Formula::disj(std::move(disjuncts));
}

}  // namespace superfcm
