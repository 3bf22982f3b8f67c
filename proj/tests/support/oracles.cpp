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

#include "oracles.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "superfcm/syntax.hpp"

namespace oracle {

using superfcm::Atom;
using superfcm::UnfoldEdge;
using superfcm::UnfoldGraph;
using superfcm::UnfoldNode;
using superfcm::Var;
using superfcm::VarKind;

namespace {

using Env = std::map<Var, Term>;
// Returns true to stop the enumeration.
using Cont = std::function<bool(Env&)>;

Term slice(const Term& t, std::size_t b, std::size_t e) {
  std::vector<Atom> out;
  for (std::size_t i = b; i < e; ++i) out.push_back(t[i]);
  return Term(std::move(out));
}

bool seq(const Term& p, std::size_t i, const Term& v, std::size_t j, Env& env, const Cont& k) {
  if (i == p.size()) return j == v.size() && k(env);
  const Atom& a = p[i];
  if (a.is_char()) return j < v.size() && v[j] == a && seq(p, i + 1, v, j + 1, env, k);
  if (a.is_paren()) {
    return j < v.size() && v[j].is_paren() &&
           seq(a.inner(), 0, v[j].inner(), 0, env, [&](Env& e) { return seq(p, i + 1, v, j + 1, e, k); });
  }
  const Var& x = a.var();
  if (auto it = env.find(x); it != env.end()) {
    const Term bound = it->second;
    return j + bound.size() <= v.size() && slice(v, j, j + bound.size()) == bound &&
           seq(p, i + 1, v, j + bound.size(), env, k);
  }
  auto with = [&](const Term& value, std::size_t next) {
    env[x] = value;
    const bool stop = seq(p, i + 1, v, next, env, k);
    env.erase(x);
    return stop;
  };
  switch (x.kind) {
    case VarKind::S:
      return j < v.size() && v[j].is_char() && with(slice(v, j, j + 1), j + 1);
    case VarKind::T:
      return j < v.size() && with(slice(v, j, j + 1), j + 1);
    case VarKind::E:
      for (std::size_t e = j; e <= v.size(); ++e)
        if (with(slice(v, j, e), e)) return true;
      return false;
  }
  return false;
}

bool tuple(const std::vector<Term>& values, const std::vector<Term>& patterns, std::size_t i, Env& env,
           const Cont& k) {
  if (i == patterns.size()) return k(env);
  return seq(patterns[i], 0, values[i], 0, env, [&](Env& e) { return tuple(values, patterns, i + 1, e, k); });
}

Substitution to_subst(const Env& env) {
  Substitution s;
  for (const auto& [v, t] : env) s.bind(v, t);
  return s;
}

std::size_t data_size(const Term& t) {
  std::size_t n = 0;
  for (const Atom& a : t.atoms()) n += a.is_paren() ? 1 + data_size(a.inner()) : 1;
  return n;
}

bool find_and_plug(const Term& t, const std::optional<Term>& replacement, Term& out, Term& found) {
  std::vector<Atom> atoms;
  bool done = false;
  for (const Atom& a : t.atoms()) {
    if (done) {
      atoms.push_back(a);
      continue;
    }
    if (a.is_paren()) {
      Term inner;
      if (find_and_plug(a.inner(), replacement, inner, found)) {
        atoms.push_back(Atom::paren(inner));
        done = true;
        continue;
      }
    } else if (a.is_call()) {
      std::vector<Term> args = a.args();
      for (Term& arg : args) {
        Term sub;
        if (find_and_plug(arg, replacement, sub, found)) {
          arg = sub;
          done = true;
          break;
        }
      }
      if (done) {
        atoms.push_back(Atom::call(a.function(), args));
        continue;
      }
      const bool ready = std::all_of(a.args().begin(), a.args().end(), [](const Term& x) { return x.is_object(); });
      if (ready) {
        found = Term(a);
        done = true;
        if (replacement) {
          for (const Atom& r : replacement->atoms()) atoms.push_back(r);
        } else {
          atoms.push_back(a);
        }
        continue;
      }
    }
    atoms.push_back(a);
  }
  out = Term(std::move(atoms));
  return done;
}

}  // namespace

std::vector<Substitution> brute_matches(const std::vector<Term>& values, const std::vector<Term>& patterns) {
  std::vector<Substitution> out;
  std::set<Env> seen;
  Env env;
  tuple(values, patterns, 0, env, [&](Env& e) {
    if (seen.insert(e).second) out.push_back(to_subst(e));
    return false;
  });
  return out;
}

std::optional<Substitution> markov(const std::vector<Term>& values, const std::vector<Term>& patterns) {
  std::optional<Substitution> out;
  Env env;
  tuple(values, patterns, 0, env, [&](Env& e) {
    out = to_subst(e);
    return true;
  });
  return out;
}

std::vector<std::string> fibonacci_words(std::size_t count) {
  std::vector<std::string> w{"b", "a"};
  while (w.size() < count) w.push_back(w[w.size() - 2] + w[w.size() - 1]);
  w.resize(count);
  return w;
}

std::optional<Term> redex(const Term& state) {
  Term out;
  Term found;
  if (!find_and_plug(state, std::nullopt, out, found)) return std::nullopt;
  return found;
}

Term plug(const Term& state, const Term& replacement) {
  Term out;
  Term found;
  find_and_plug(state, replacement, out, found);
  return out;
}

std::vector<Term> nd_successors(const Program& p, const Term& state) {
  std::vector<Term> out;
  std::optional<Term> r = redex(state);
  if (!r) return out;
  const Atom& call = r->atom();
  for (const superfcm::Rule& rule : p.rules) {
    if (rule.function() != call.function() || rule.arity() != call.args().size()) continue;
    std::vector<Term> pats(rule.patterns().begin(), rule.patterns().end());
    for (const Substitution& s : brute_matches(call.args(), pats)) {
      Term next = plug(state, apply(s, rule.rhs));
      if (std::find(out.begin(), out.end(), next) == out.end()) out.push_back(next);
    }
  }
  return out;
}

Outcome run(const Program& p, Term state, std::size_t fuel) {
  Outcome o;
  for (;;) {
    std::optional<Term> r = redex(state);
    if (!r) {
      o.kind = Outcome::Value;
      o.value = state;
      return o;
    }
    if (o.steps == fuel) {
      o.kind = Outcome::Fuel;
      return o;
    }
    const Atom& call = r->atom();
    bool fired = false;
    for (const superfcm::Rule& rule : p.rules) {
      if (rule.function() != call.function() || rule.arity() != call.args().size()) continue;
      std::vector<Term> pats(rule.patterns().begin(), rule.patterns().end());
      if (auto s = markov(call.args(), pats)) {
        state = plug(state, apply(*s, rule.rhs));
        fired = true;
        break;
      }
    }
    if (!fired) {
      o.kind = Outcome::Stuck;
      return o;
    }
    ++o.steps;
  }
}

std::vector<Term> words(const std::vector<char>& alphabet, std::size_t max_len) {
  std::vector<Term> out{Term()};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == max_len) continue;
    for (char c : alphabet) {
      Term t = out[i];
      t.append(Atom::character(c));
      out.push_back(t);
    }
  }
  return out;
}

std::vector<Substitution> instances(const Term& t, const std::vector<char>& alphabet, std::size_t max_size) {
  const std::vector<Var> vs = superfcm::vars(t).order;
  std::map<VarKind, std::vector<Term>> cands;
  cands[VarKind::E] = words(alphabet, max_size);
  for (char c : alphabet) cands[VarKind::S].push_back(Term::ch(c));
  cands[VarKind::T] = cands[VarKind::S];
  for (const Term& w : words(alphabet, std::min<std::size_t>(2, max_size > 0 ? max_size - 1 : 0)))
    cands[VarKind::T].push_back(Term::paren(w));
  std::vector<Substitution> out;
  Substitution cur;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t used) {
    if (i == vs.size()) {
      out.push_back(cur);
      return;
    }
    for (const Term& c : cands[vs[i].kind]) {
      const std::size_t n = data_size(c);
      if (used + n > max_size) continue;
      cur.bind(vs[i], c);
      go(i + 1, used + n);
      cur.erase(vs[i]);
    }
  };
  go(0, 0);
  return out;
}

std::set<Term> reachable(const Program& p, const Term& start, std::size_t depth, std::size_t max_states) {
  std::set<Term> seen{start};
  std::vector<Term> frontier{start};
  for (std::size_t d = 0; d < depth && !frontier.empty() && seen.size() < max_states; ++d) {
    std::vector<Term> next;
    for (const Term& s : frontier)
      for (Term& n : nd_successors(p, s))
        if (seen.insert(n).second) next.push_back(std::move(n));
    frontier = std::move(next);
  }
  return seen;
}

Walk walk_graph(const Program& p, const UnfoldGraph& g, const Substitution& theta, std::size_t depth) {
  Walk w;
  std::set<std::pair<std::size_t, Term>> done;
  std::function<void(std::size_t, const Term&, std::size_t)> visit = [&](std::size_t v, const Term& s,
                                                                          std::size_t d) {
    if (!done.insert({v, s}).second || done.size() > 20000) return;
    w.visited.insert(v);
    const UnfoldNode& n = g.nodes[v];
    if (!superfcm::instance_of(s, n.term)) {
      w.violations.push_back("state is not an instance of node " + std::to_string(v));
      return;
    }
    switch (n.status) {
      case UnfoldNode::Status::Pruned:
        w.violations.push_back("pruned node " + std::to_string(v) + " reached");
        return;
      case UnfoldNode::Status::Folded:
        visit(g.reference(v)->to, s, d);
        return;
      case UnfoldNode::Status::Generalized:
        visit(g.children(v).front()->to, s, d);
        return;
      case UnfoldNode::Status::Driven:
        break;
      default:
        return;
    }
    if (d == depth) return;
    const std::optional<Term> r = redex(s);
    if (!r) {
      w.violations.push_back("driven node " + std::to_string(v) + " without a call");
      return;
    }
    const Atom& call = r->atom();
    bool first = true;
    for (const superfcm::Rule& rule : p.rules) {
      if (rule.function() != call.function() || rule.arity() != call.args().size()) continue;
      std::vector<Term> pats(rule.patterns().begin(), rule.patterns().end());
      const std::vector<Substitution> ms = brute_matches(call.args(), pats);
      if (ms.empty()) continue;
      for (const superfcm::PrunedRule& pr : g.pruned_rules)
        if (pr.node == v && pr.rule == rule.index)
          w.violations.push_back("rule " + std::to_string(rule.index + 1) + " pruned at node " +
                                 std::to_string(v) + " matches " + superfcm::print_term(s));
      for (std::size_t mi = 0; mi < ms.size(); ++mi) {
        const Term next = plug(s, apply(ms[mi], rule.rhs));
        bool covered = false;
        for (const UnfoldEdge* e : g.children(v)) {
          if (e->rule != rule.index) continue;
          if (!superfcm::instance_of(s, apply(e->subst, n.term))) continue;
          if (!superfcm::instance_of(next, g.nodes[e->to].term)) continue;
          covered = true;
          visit(e->to, next, d + 1);
        }
        if (!covered && first && mi == 0)
          w.violations.push_back("step at node " + std::to_string(v) + " by rule " +
                                 std::to_string(rule.index + 1) + " is not covered");
      }
      first = false;
    }
  };
  visit(g.root, apply(theta, g.nodes[g.root].term), 0);
  return w;
}

Term random_object(std::mt19937_64& rng, const std::vector<char>& alphabet, std::size_t max_len, bool parens) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> coin(0, 5);
  Term out;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (parens && max_len > 1 && coin(rng) == 0)
      out.append(Term::paren(random_object(rng, alphabet, max_len / 2, parens)));
    else
      out.append(Atom::character(alphabet[pick(rng)]));
  }
  return out;
}

Term random_value(std::mt19937_64& rng, VarKind kind, const std::vector<char>& alphabet, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  if (kind == VarKind::S) return Term::ch(alphabet[pick(rng)]);
  if (kind == VarKind::T) {
    if (std::uniform_int_distribution<int>(0, 3)(rng) == 0)
      return Term::paren(random_object(rng, alphabet, max_len / 2, false));
    return Term::ch(alphabet[pick(rng)]);
  }
  return random_object(rng, alphabet, max_len, true);
}

Term random_pattern(std::mt19937_64& rng, const std::vector<char>& alphabet, std::size_t max_atoms,
                    std::vector<Var>& pool) {
  std::uniform_int_distribution<std::size_t> len(0, max_atoms);
  std::uniform_int_distribution<int> roll(0, 99);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  Term out;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const int r = roll(rng);
    if (r < 35) {
      out.append(Atom::character(alphabet[pick(rng)]));
    } else if (r < 45 && max_atoms > 1) {
      out.append(Term::paren(random_pattern(rng, alphabet, max_atoms / 2, pool)));
    } else {
      const VarKind kind = r < 75 ? VarKind::E : (r < 88 ? VarKind::S : VarKind::T);
      std::vector<Var> same;
      for (const Var& v : pool)
        if (v.kind == kind) same.push_back(v);
      Var v;
      if (!same.empty() && roll(rng) < 25) {
        v = same[std::uniform_int_distribution<std::size_t>(0, same.size() - 1)(rng)];
      } else {
        v = Var{kind, "v" + std::to_string(pool.size())};
        pool.push_back(v);
      }
      out.append(Atom::variable(v));
    }
  }
  return out;
}

Program random_flat_program(std::mt19937_64& rng) {
  const std::vector<char> alphabet{'a', 'b'};
  std::uniform_int_distribution<int> roll(0, 99);
  const std::size_t functions = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  std::vector<std::size_t> arity{1};
  for (std::size_t f = 1; f < functions; ++f) arity.push_back(std::uniform_int_distribution<std::size_t>(1, 2)(rng));
  auto name = [](std::size_t f) { return "f" + std::to_string(f); };

  // Passive term over the given variables, each used at most once so that
  // runs cannot blow up exponentially.
  auto build = [&](std::vector<Var>& vs) {
    Term out;
    const std::size_t n = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
    for (std::size_t i = 0; i < n; ++i) {
      if (!vs.empty() && roll(rng) < 60) {
        const std::size_t k = std::uniform_int_distribution<std::size_t>(0, vs.size() - 1)(rng);
        out.append(Atom::variable(vs[k]));
        vs.erase(vs.begin() + static_cast<std::ptrdiff_t>(k));
      } else {
        out.append(Atom::character(alphabet[std::uniform_int_distribution<std::size_t>(0, 1)(rng)]));
      }
    }
    return out;
  };

  std::vector<std::pair<Term, Term>> rules;
  for (std::size_t f = 0; f < functions; ++f) {
    const std::size_t count = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    for (std::size_t k = 0; k < count; ++k) {
      std::vector<Var> pool;
      std::vector<Term> pats;
      for (std::size_t i = 0; i < arity[f]; ++i) {
        Term pat;
        const std::size_t n = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
        for (std::size_t j = 0; j < n; ++j) {
          const int r = roll(rng);
          if (r < 40) {
            pat.append(Atom::character(alphabet[std::uniform_int_distribution<std::size_t>(0, 1)(rng)]));
          } else {
            const VarKind kind = r < 85 ? VarKind::E : VarKind::S;
            std::vector<Var> same;
            for (const Var& v : pool)
              if (v.kind == kind) same.push_back(v);
            Var v{kind, "v" + std::to_string(pool.size())};
            if (!same.empty() && roll(rng) < 15)
              v = same.front();
            else
              pool.push_back(v);
            pat.append(Atom::variable(v));
          }
        }
        pats.push_back(pat);
      }
      Term lhs = Term::call(name(f), pats);
      Term rhs;
      std::vector<Var> unused = pool;
      if (roll(rng) < 35) {
        rhs = build(unused);
      } else {
        const std::size_t g = std::uniform_int_distribution<std::size_t>(0, functions - 1)(rng);
        std::vector<Term> args;
        for (std::size_t i = 0; i < arity[g]; ++i) args.push_back(build(unused));
        rhs = Term::call(name(g), args);
      }
      rules.emplace_back(lhs, rhs);
    }
  }
  return superfcm::make_program(Term::call(name(0), {Term::e("x")}), std::move(rules), alphabet);
}

}  // namespace oracle
