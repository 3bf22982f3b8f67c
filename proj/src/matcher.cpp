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

#include "superfcm/matcher.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "superfcm/encoder.hpp"
#include "superfcm/errors.hpp"
#include "superfcm/logic.hpp"

namespace superfcm {

std::string kind_name(MatchOutcome::Kind kind) {
  switch (kind) {
    case MatchOutcome::Kind::Solution:
      return "Solution";
    case MatchOutcome::Kind::Solutions:
      return "Solutions";
    case MatchOutcome::Kind::NoSolution:
      return "NoSolution";
    case MatchOutcome::Kind::Unknown:
      return "Unknown";
  }
  return "?";
}

Term tuple_term(const std::vector<Term>& parts) {
  Term out;
  for (const Term& p : parts) out.append(Atom::paren(p));
  return out;
}

MatchOutcome markov_match(const std::vector<Term>& values, const std::vector<Term>& patterns,
                          MatchWork* work) {
  MatchOutcome out;
  if (values.size() != patterns.size()) {
    out.reason = "arity";
    return out;
  }
  enumerate_matches(
      tuple_term(patterns), tuple_term(values), {},
      [&](const Substitution& theta) {
        out.solutions.push_back({{}, theta});
        return true;
      },
      work);
  out.kind = out.solutions.empty() ? MatchOutcome::Kind::NoSolution : MatchOutcome::Kind::Solution;
  return out;
}

std::vector<Substitution> all_matches(const std::vector<Term>& values,
                                      const std::vector<Term>& patterns) {
  std::vector<Substitution> out;
  if (values.size() != patterns.size()) return out;
  enumerate_matches(tuple_term(patterns), tuple_term(values), {}, [&](const Substitution& theta) {
    out.push_back(theta);
    return false;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Extended matching

namespace {

bool rigid(const Atom& a) { return a.is_char() || a.is_paren(); }

/// Atoms of length exactly one.
bool fixed(const Atom& a) { return !a.is_var(VarKind::E); }

std::size_t fixed_count(const Term& t) {
  return static_cast<std::size_t>(std::count_if(t.atoms().begin(), t.atoms().end(), fixed));
}

enum class Step { Ok, Fail, Unknown };

struct Aborted {
  std::string reason;
};

class Solver {
 public:
  Solver(std::set<Var> rule_vars, NameSupply names, const ExtendedOptions& options)
      : rule_vars_(std::move(rule_vars)), names_(std::move(names)), options_(options) {}

  struct State {
    std::deque<std::pair<Term, Term>> eqs;  // pattern side first
    Substitution sigma;
    Substitution beta;
  };

  void solve(State s) {
    while (!s.eqs.empty()) {
      if (++steps_ > options_.max_steps) throw Aborted{"step budget"};
      auto [l0, r0] = std::move(s.eqs.front());
      s.eqs.pop_front();
      const Term l = apply(s.sigma, apply(s.beta, l0));
      const Term r = apply(s.sigma, r0);

      std::size_t lb = 0, le = l.size(), rb = 0, re = r.size();
      std::vector<std::pair<Term, Term>> inner;
      auto peel = [&](const Atom& a, const Atom& b) -> int {  // 1 peeled, 0 stop, -1 clash
        if (rigid(a) && rigid(b)) {
          if (a.is_char() && b.is_char()) return a.ch() == b.ch() ? 1 : -1;
          if (a.is_paren() && b.is_paren()) {
            inner.emplace_back(a.inner(), b.inner());
            return 1;
          }
          return -1;
        }
        if (a.is_var() && a == b) return 1;
        return 0;
      };
      bool clash = false;
      while (lb < le && rb < re) {
        int k = peel(l[lb], r[rb]);
        if (k < 0) clash = true;
        if (k <= 0) break;
        ++lb;
        ++rb;
      }
      while (!clash && lb < le && rb < re) {
        int k = peel(l[le - 1], r[re - 1]);
        if (k < 0) clash = true;
        if (k <= 0) break;
        --le;
        --re;
      }
      if (clash) return;
      for (auto it = inner.rbegin(); it != inner.rend(); ++it) s.eqs.push_front(*it);
      const Term lr = l.slice(lb, le);
      const Term rr = r.slice(rb, re);
      if (lr.empty() && rr.empty()) continue;

      Step st = decide(s, lr, rr);
      if (st == Step::Fail) return;
      if (st == Step::Ok) continue;
      // Branching cases recurse themselves.
      if (branch(s, lr, rr)) return;
      throw Aborted{"outside the peeling class"};
    }
    record(s);
  }

  std::vector<MatchSolution> solutions;
  std::vector<Var> params;

 private:
  bool is_rule(const Atom& a) const { return a.is_var() && rule_vars_.count(a.var()) != 0; }
  bool is_param(const Atom& a) const { return a.is_var() && rule_vars_.count(a.var()) == 0; }

  void narrow(State& s, const Var& p, const Term& value) {
    Substitution one;
    one.bind(p, value);
    s.sigma = s.sigma.then(one);
  }
  void bind(State& s, const Var& v, const Term& value) { s.beta.bind(v, value); }

  /// Rule variables of a shape replaced by fresh parameters.
  Term freshen(State& s, const Term& shape) {
    std::map<Var, Var> ren;
    for (const Var& v : vars(shape).order) {
      if (rule_vars_.count(v) == 0) continue;
      Var f = names_.fresh(v.kind, v.name);
      ren.emplace(v, f);
      bind(s, v, Term::var(f));
    }
    return rename(shape, ren);
  }

  /// Pins a single variable atom against a single fixed atom.
  Step pin(State& s, const Atom& x, const Atom& y) {
    // x is a rule s/t variable or a parameter; y is the opposite atom.
    if (is_rule(x)) {
      const Var& v = x.var();
      if (y.is_char()) {
        bind(s, v, Term(y));
        return Step::Ok;
      }
      if (y.is_paren()) {
        if (v.kind == VarKind::S) return Step::Fail;
        bind(s, v, Term(y));
        return Step::Ok;
      }
      if (is_param(y)) {
        const Var& p = y.var();
        if (p.kind == VarKind::E) return Step::Unknown;
        if (v.kind == VarKind::S && p.kind == VarKind::T) {
          Var f = names_.fresh(VarKind::S, p.name);
          narrow(s, p, Term::var(f));
          bind(s, v, Term::var(f));
          return Step::Ok;
        }
        bind(s, v, Term(y));
        return Step::Ok;
      }
      return Step::Unknown;
    }
    if (!is_param(x)) return pin(s, y, x);
    const Var& p = x.var();
    if (p.kind == VarKind::E) return Step::Unknown;
    if (y.is_char()) {
      narrow(s, p, Term(y));
      return Step::Ok;
    }
    if (y.is_paren()) {
      if (p.kind == VarKind::S) return Step::Fail;
      narrow(s, p, Term::paren(Term::var(names_.fresh(VarKind::E, p.name))));
      return Step::Ok;
    }
    if (is_param(y)) {
      const Var& q = y.var();
      if (q.kind == VarKind::E) return Step::Unknown;
      if (p.kind == VarKind::T)
        narrow(s, p, Term(y));
      else
        narrow(s, q, Term(x));
      return Step::Ok;
    }
    return is_rule(y) ? pin(s, y, x) : Step::Unknown;
  }

  /// Whole-side cases and deterministic pinning at either end.
  Step decide(State& s, const Term& l, const Term& r) {
    if (l.empty() || r.empty()) {
      const Term& x = l.empty() ? r : l;
      for (const Atom& a : x.atoms()) {
        if (!a.is_var(VarKind::E)) return Step::Fail;
        if (is_rule(a))
          bind(s, a.var(), Term());
        else
          narrow(s, a.var(), Term());
      }
      return Step::Ok;
    }
    if (l.size() == 1 && is_rule(l.atom())) {
      const Var& v = l.atom().var();
      if (v.kind == VarKind::E) {
        bind(s, v, r);
        return Step::Ok;
      }
      if (r.size() == 1) return requeue(s, l, r, pin(s, l.atom(), r.atom()));
      return fixed_count(r) > 1 ? Step::Fail : Step::Unknown;
    }
    for (int side = 0; side < 2; ++side) {
      const Term& one = side == 0 ? r : l;
      const Term& other = side == 0 ? l : r;
      if (one.size() != 1 || !is_param(one.atom())) continue;
      const Var& p = one.atom().var();
      if (multiplicity(p, other) > 0) return fixed_count(other) > 0 ? Step::Fail : Step::Unknown;
      if (p.kind == VarKind::E) {
        narrow(s, p, freshen(s, other));
        return Step::Ok;
      }
      if (other.size() == 1) return requeue(s, l, r, pin(s, one.atom(), other.atom()));
      return fixed_count(other) > 1 ? Step::Fail : Step::Unknown;
    }
    // Deterministic pins at the front, then at the back.
    for (int end = 0; end < 2; ++end) {
      const Atom& x = end == 0 ? l[0] : l[l.size() - 1];
      const Atom& y = end == 0 ? r[0] : r[r.size() - 1];
      if (x.is_var(VarKind::E) || y.is_var(VarKind::E)) continue;
      Step st = pin(s, x, y);
      if (st != Step::Unknown) return requeue(s, l, r, st);
    }
    return Step::Unknown;
  }

  Step requeue(State& s, const Term& l, const Term& r, Step st) {
    if (st == Step::Ok) s.eqs.emplace_front(l, r);
    return st;
  }

  void split_count() {
    if (++splits_ > options_.max_splits) throw Aborted{"split budget"};
  }

  /// Exact two-way splits of an e-parameter, or the Markov enumeration of
  /// a leading rule e-variable. False when neither applies.
  bool branch(const State& s, const Term& l, const Term& r) {
    for (int end = 0; end < 2; ++end) {
      const Atom& x = end == 0 ? l[0] : l[l.size() - 1];
      const Atom& y = end == 0 ? r[0] : r[r.size() - 1];
      const Atom* e = nullptr;
      const Atom* other = nullptr;
      if (is_param(x) && x.is_var(VarKind::E) && fixed(y)) {
        e = &x;
        other = &y;
      } else if (is_param(y) && y.is_var(VarKind::E) && fixed(x)) {
        e = &y;
        other = &x;
      }
      if (e == nullptr) continue;
      const Var p = e->var();
      Term head;
      if (other->is_paren()) {
        head = Term::paren(Term::var(names_.fresh(VarKind::E, p.name)));
      } else if (is_rule(*other)) {
        head = Term::var(names_.fresh(other->var().kind, p.name));
      } else {
        head = Term(*other);
      }
      const Term rest = Term::var(names_.fresh(VarKind::E, p.name));
      split_count();
      State empty = s;
      narrow(empty, p, Term());
      empty.eqs.emplace_front(l, r);
      solve(std::move(empty));
      State longer = s;
      narrow(longer, p, end == 0 ? concat({head, rest}) : concat({rest, head}));
      longer.eqs.emplace_front(l, r);
      solve(std::move(longer));
      return true;
    }
    if (is_rule(l[0]) && l[0].is_var(VarKind::E)) {
      if (fixed_count(r) != r.size()) return false;
      split_count();
      const Var v = l[0].var();
      for (std::size_t j = 0; j <= r.size(); ++j) {
        State next = s;
        bind(next, v, r.slice(0, j));
        next.eqs.emplace_front(l.slice(1, l.size()), r.slice(j, r.size()));
        solve(std::move(next));
      }
      return true;
    }
    return false;
  }

  void record(const State& s) {
    MatchSolution sol;
    for (const Var& p : params)
      if (const Term* t = s.sigma.find(p); t != nullptr && *t != Term::var(p)) sol.narrowing.bind(p, *t);
    for (const auto& [v, t] : s.beta.bindings())
      if (rule_vars_.count(v) != 0) sol.binding.bind(v, apply(s.sigma, t));
    solutions.push_back(std::move(sol));
  }

  std::set<Var> rule_vars_;
  NameSupply names_;
  ExtendedOptions options_;
  std::size_t steps_ = 0;
  std::size_t splits_ = 0;
};

bool covers_everything(const MatchSolution& s) { return s.narrowing.empty(); }

/// Sufficient test that no instance satisfies both shapes.
bool disjoint_terms(const Term& a, const Term& b) {
  std::size_t ab = 0, ae = a.size(), bb = 0, be = b.size();
  while (ab < ae && bb < be && a[ab] == b[bb] && !a[ab].is_var(VarKind::E)) ++ab, ++bb;
  while (ab < ae && bb < be && a[ae - 1] == b[be - 1] && !a[ae - 1].is_var(VarKind::E)) --ae, --be;
  const Term x = a.slice(ab, ae);
  const Term y = b.slice(bb, be);
  const std::size_t xmin = fixed_count(x), ymin = fixed_count(y);
  const bool xopen = xmin != x.size(), yopen = ymin != y.size();
  if (!xopen && ymin > xmin) return true;
  if (!yopen && xmin > ymin) return true;
  if (!xopen && !yopen && xmin != ymin) return true;
  if (x.empty() || y.empty()) return false;
  auto clash = [](const Atom& p, const Atom& q) {
    if (!rigid(p) || !rigid(q)) return false;
    if (p.is_char() != q.is_char()) return true;
    if (p.is_char()) return p.ch() != q.ch();
    return disjoint_terms(p.inner(), q.inner());
  };
  return clash(x[0], y[0]) || clash(x[x.size() - 1], y[y.size() - 1]);
}

bool disjoint(const MatchSolution& s, const MatchSolution& t) {
  for (const auto& [p, a] : s.narrowing.bindings()) {
    const Term* b = t.narrowing.find(p);
    if (b != nullptr && disjoint_terms(a, *b)) return true;
  }
  return false;
}

}  // namespace

MatchOutcome extended_match(const Term& config, const Term& lhs, const ExtendedOptions& options,
                            const Term& avoid) {
  MatchOutcome out;
  if (config.size() != 1 || !config.atom().is_call() || lhs.size() != 1 || !lhs.atom().is_call())
    throw Error("extended_match expects two calls");
  const Atom& c = config.atom();
  const Atom& p = lhs.atom();
  if (c.function() != p.function() || c.args().size() != p.args().size()) {
    out.reason = "different function";
    return out;
  }
  for (const Term& a : c.args())
    if (has_call(a)) throw Error("extended_match expects passive arguments");

  NameSupply names;
  names.reserve(config);
  names.reserve(lhs);
  names.reserve(avoid);
  // Rename the rule apart from the configuration when they share names.
  std::map<Var, Var> to_fresh;
  std::map<Var, Var> back;
  const VarSets cvars = vars(config);
  for (const Var& v : vars(lhs).order) {
    bool clash = std::any_of(cvars.order.begin(), cvars.order.end(),
                             [&](const Var& w) { return w.name == v.name; });
    if (!clash) continue;
    Var f = names.fresh(v.kind, v.name);
    to_fresh.emplace(v, f);
    back.emplace(f, v);
  }
  const Term pattern = rename(lhs, to_fresh);
  std::set<Var> rule_vars;
  for (const Var& v : vars(pattern).order) rule_vars.insert(v);

  Solver solver(rule_vars, names, options);
  solver.params = cvars.order;
  Solver::State start;
  for (std::size_t i = 0; i < c.args().size(); ++i)
    start.eqs.emplace_back(pattern.atom().args()[i], c.args()[i]);
  try {
    solver.solve(std::move(start));
  } catch (const Aborted& a) {
    out.kind = MatchOutcome::Kind::Unknown;
    out.reason = a.reason;
    return out;
  } catch (const SortViolation& e) {
    out.kind = MatchOutcome::Kind::Unknown;
    out.reason = e.what();
    return out;
  }

  for (MatchSolution& sol : solver.solutions) {
    // Exactness of every solution is rechecked syntactically.
    const Term narrowed = apply(sol.narrowing, config);
    if (apply(sol.binding, pattern) != narrowed) {
      out.kind = MatchOutcome::Kind::Unknown;
      out.reason = "inexact solution";
      out.solutions.clear();
      return out;
    }
    Substitution renamed;
    for (const auto& [v, t] : sol.binding.bindings()) {
      auto it = back.find(v);
      renamed.bind(it == back.end() ? v : it->second, t);
    }
    sol.binding = std::move(renamed);
    out.solutions.push_back(std::move(sol));
    if (covers_everything(out.solutions.back())) break;
  }
  for (std::size_t i = 0; i < out.solutions.size(); ++i)
    for (std::size_t j = i + 1; j < out.solutions.size(); ++j)
      if (!disjoint(out.solutions[i], out.solutions[j])) {
        out.kind = MatchOutcome::Kind::Unknown;
        out.reason = "overlapping narrowings";
        out.solutions.clear();
        return out;
      }
  if (out.solutions.empty()) {
    out.kind = MatchOutcome::Kind::NoSolution;
    out.reason = "clash";
  } else {
    out.kind = out.solutions.size() == 1 ? MatchOutcome::Kind::Solution : MatchOutcome::Kind::Solutions;
  }
  return out;
}

// ---------------------------------------------------------------------------
// NoSol

namespace {

struct Counts {
  std::map<char, long> chars;
  long parens = 0;
  std::map<Var, long> occ;
};

Counts count_top(const Term& t) {
  Counts c;
  for (const Atom& a : t.atoms()) {
    if (a.is_char()) ++c.chars[a.ch()];
    if (a.is_paren()) ++c.parens;
    if (a.is_var()) ++c.occ[a.var()];
  }
  return c;
}

bool has_paren(const Term& t) {
  return std::any_of(t.atoms().begin(), t.atoms().end(), [](const Atom& a) { return a.is_paren(); });
}

/// Drops equal rigid ends; true on a clash.
bool peel_ends(Equation& eq) {
  std::size_t lb = 0, le = eq.lhs.size(), rb = 0, re = eq.rhs.size();
  auto same = [](const Atom& a, const Atom& b) { return rigid(a) && rigid(b) && a == b; };
  auto clash = [](const Atom& a, const Atom& b) {
    return rigid(a) && rigid(b) && (a.is_char() != b.is_char() || (a.is_char() && a.ch() != b.ch()));
  };
  while (lb < le && rb < re && same(eq.lhs[lb], eq.rhs[rb])) ++lb, ++rb;
  if (lb < le && rb < re && clash(eq.lhs[lb], eq.rhs[rb])) return true;
  while (lb < le && rb < re && same(eq.lhs[le - 1], eq.rhs[re - 1])) --le, --re;
  if (lb < le && rb < re && clash(eq.lhs[le - 1], eq.rhs[re - 1])) return true;
  eq = Equation{eq.lhs.slice(lb, le), eq.rhs.slice(rb, re)};
  // An empty side against a length-one atom.
  if (eq.lhs.empty() != eq.rhs.empty()) {
    const Term& x = eq.lhs.empty() ? eq.rhs : eq.lhs;
    if (fixed_count(x) > 0) return true;
  }
  return false;
}

/// All words with the given letter counts, up to `limit` of them.
void permutations(std::map<char, long> counts, Term& prefix, std::vector<Term>& out, std::size_t limit) {
  if (out.size() >= limit) return;
  bool any = false;
  for (auto& [ch, n] : counts) {
    if (n == 0) continue;
    any = true;
    --n;
    prefix.append(Atom::character(ch));
    permutations(counts, prefix, out, limit);
    prefix = prefix.slice(0, prefix.size() - 1);
    ++n;
    if (out.size() >= limit) return;
  }
  if (!any) out.push_back(prefix);
}

}  // namespace

NoSolResult parikh_check(const std::vector<Equation>& system, const std::vector<char>& alphabet,
                         std::size_t lattice_limit, std::size_t instance_limit) {
  NoSolResult result;
  std::vector<Equation> eqs = system;
  for (Equation& eq : eqs)
    if (peel_ends(eq)) {
      result.verdict = NoSolResult::Verdict::Inconsistent;
      result.certificate = "first-character clash";
      return result;
    }
  // Eliminate variables defined by a whole side.
  std::vector<std::pair<Var, Term>> defined;
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t k = 0; k < eqs.size(); ++k) {
      for (int side = 0; side < 2 && !progress; ++side) {
        const Term& one = side == 0 ? eqs[k].lhs : eqs[k].rhs;
        const Term& other = side == 0 ? eqs[k].rhs : eqs[k].lhs;
        if (one.size() != 1 || !one.atom().is_var(VarKind::E) || multiplicity(one.atom().var(), other) > 0)
          continue;
        Substitution theta;
        theta.bind(one.atom().var(), other);
        defined.emplace_back(one.atom().var(), other);
        eqs.erase(eqs.begin() + static_cast<std::ptrdiff_t>(k));
        for (Equation& e : eqs) e = Equation{apply(theta, e.lhs), apply(theta, e.rhs)};
        progress = true;
      }
      if (progress) break;
    }
  }
  eqs.erase(std::remove_if(eqs.begin(), eqs.end(), [](const Equation& e) { return e.lhs == e.rhs; }),
            eqs.end());
  for (Equation& eq : eqs)
    if (peel_ends(eq)) {
      result.verdict = NoSolResult::Verdict::Inconsistent;
      result.certificate = "first-character clash";
      return result;
    }
  if (eqs.empty()) {
    result.certificate = "no constraint left";
    return result;
  }

  std::set<char> letter_set(alphabet.begin(), alphabet.end());
  std::vector<Var> vs;
  bool parens = false;
  for (const Equation& eq : eqs) {
    for (const Term* t : {&eq.lhs, &eq.rhs}) {
      for (const Atom& a : t->atoms())
        if (a.is_char()) letter_set.insert(a.ch());
      for (const Var& v : vars(*t).order)
        if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
      parens = parens || has_paren(*t);
    }
  }
  // Letter index letters.size() stands for a parenthesized atom.
  const std::vector<char> letters(letter_set.begin(), letter_set.end());
  const std::size_t nl = letters.size() + 1;
  const std::size_t nv = vs.size();

  struct Constraint {
    std::vector<long> coef;  // per variable
    long b = 0;
    std::size_t letter = 0;
  };
  std::vector<Constraint> cons;
  for (const Equation& eq : eqs) {
    Counts l = count_top(eq.lhs);
    Counts r = count_top(eq.rhs);
    for (std::size_t li = 0; li < nl; ++li) {
      Constraint c;
      c.letter = li;
      c.coef.assign(nv, 0);
      for (std::size_t vi = 0; vi < nv; ++vi) c.coef[vi] = l.occ[vs[vi]] - r.occ[vs[vi]];
      if (li < letters.size())
        c.b = r.chars[letters[li]] - l.chars[letters[li]];
      else
        c.b = r.parens - l.parens;
      cons.push_back(std::move(c));
    }
  }

  // Bounds per unknown x[v][letter]; -1 means unbounded.
  std::vector<std::vector<long>> bound(nv, std::vector<long>(nl, -1));
  for (std::size_t vi = 0; vi < nv; ++vi) {
    if (vs[vi].kind == VarKind::E) continue;
    for (std::size_t li = 0; li < nl; ++li) bound[vi][li] = 1;
    if (vs[vi].kind == VarKind::S) bound[vi][nl - 1] = 0;
  }
  auto inconsistent = [&](const char* why) {
    result.verdict = NoSolResult::Verdict::Inconsistent;
    result.certificate = why;
    return result;
  };
  for (const Constraint& c : cons) {
    bool pos = false, neg = false, only_e = true;
    long g = 0;
    for (std::size_t vi = 0; vi < nv; ++vi) {
      if (c.coef[vi] == 0) continue;
      (c.coef[vi] > 0 ? pos : neg) = true;
      g = std::gcd(g, std::abs(c.coef[vi]));
      only_e = only_e && vs[vi].kind == VarKind::E;
    }
    if (!pos && !neg) {
      if (c.b != 0) return inconsistent("parikh");
      continue;
    }
    if (only_e && c.b % g != 0) return inconsistent("parikh");
    if (pos && neg) continue;
    const long sign = pos ? 1 : -1;
    if (c.b * sign < 0) return inconsistent("parikh");
    for (std::size_t vi = 0; vi < nv; ++vi) {
      if (c.coef[vi] == 0) continue;
      long lim = std::abs(c.b) / std::abs(c.coef[vi]);
      long& bd = bound[vi][c.letter];
      bd = bd < 0 ? lim : std::min(bd, lim);
    }
  }
  double box = 1;
  for (std::size_t vi = 0; vi < nv; ++vi)
    for (std::size_t li = 0; li < nl; ++li) {
      if (bound[vi][li] < 0) {
        result.certificate = "unbounded letter counts";
        return result;
      }
      box *= static_cast<double>(bound[vi][li] + 1);
    }
  if (box > 2e6) {
    result.certificate = "letter-count box too large";
    return result;
  }

  // Enumerate the lattice points of the box satisfying every constraint.
  std::vector<std::vector<long>> x(nv, std::vector<long>(nl, 0));
  std::vector<std::vector<std::vector<long>>> points;
  bool too_many = false;
  auto satisfied = [&] {
    for (std::size_t vi = 0; vi < nv; ++vi) {
      if (vs[vi].kind == VarKind::E) continue;
      long sum = 0;
      for (long n : x[vi]) sum += n;
      if (sum != 1) return false;
    }
    for (const Constraint& c : cons) {
      long sum = 0;
      for (std::size_t vi = 0; vi < nv; ++vi) sum += c.coef[vi] * x[vi][c.letter];
      if (sum != c.b) return false;
    }
    return true;
  };
  for (bool more = true; more;) {
    if (satisfied()) {
      if (points.size() >= lattice_limit) {
        too_many = true;
        break;
      }
      points.push_back(x);
    }
    more = false;
    for (std::size_t vi = 0; vi < nv && !more; ++vi)
      for (std::size_t li = 0; li < nl && !more; ++li) {
        if (x[vi][li] < bound[vi][li]) {
          ++x[vi][li];
          more = true;
        } else {
          x[vi][li] = 0;
        }
      }
  }
  if (points.empty()) return inconsistent("parikh");
  if (too_many) {
    result.certificate = "more than " + std::to_string(lattice_limit) + " letter-count vectors";
    return result;
  }
  if (parens) {
    result.certificate = "parenthesized atoms";
    return result;
  }

  // Instantiate every point.
  std::size_t tested = 0;
  for (const auto& pt : points) {
    std::vector<std::vector<Term>> options(nv);
    double product = 1;
    for (std::size_t vi = 0; vi < nv; ++vi) {
      std::map<char, long> counts;
      for (std::size_t li = 0; li < letters.size(); ++li) counts[letters[li]] = pt[vi][li];
      Term prefix;
      permutations(counts, prefix, options[vi], instance_limit + 1);
      product *= static_cast<double>(options[vi].size());
    }
    if (product + static_cast<double>(tested) > static_cast<double>(instance_limit)) {
      result.certificate = "too many instances";
      return result;
    }
    std::vector<std::size_t> pick(nv, 0);
    for (bool more = true; more;) {
      ++tested;
      Substitution theta;
      for (std::size_t vi = 0; vi < nv; ++vi) theta.bind(vs[vi], options[vi][pick[vi]]);
      bool all = std::all_of(eqs.begin(), eqs.end(), [&](const Equation& e) {
        return apply(theta, e.lhs) == apply(theta, e.rhs);
      });
      if (all) {
        result.certificate = "satisfiable";
        return result;
      }
      more = false;
      for (std::size_t vi = 0; vi < nv && !more; ++vi) {
        if (pick[vi] + 1 < options[vi].size()) {
          ++pick[vi];
          more = true;
        } else {
          pick[vi] = 0;
        }
      }
    }
  }
  return inconsistent("instantiation");
}

NoSolResult no_solution_check(const std::vector<Equation>& system, const NoSolOptions& options) {
  NoSolResult result;
  if (options.use_parikh) {
    result = parikh_check(system, options.alphabet, options.lattice_limit, options.instance_limit);
    if (result.inconsistent() || !options.use_fcm || result.certificate == "satisfiable") return result;
  } else if (!options.use_fcm) {
    return result;
  }

  std::set<char> chars(options.alphabet.begin(), options.alphabet.end());
  std::vector<Var> vs;
  for (const Equation& eq : system)
    for (const Term* t : {&eq.lhs, &eq.rhs}) {
      for (const Var& v : vars(*t).order)
        if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
      std::vector<const Term*> todo{t};
      while (!todo.empty()) {
        const Term* u = todo.back();
        todo.pop_back();
        for (const Atom& a : u->atoms()) {
          if (a.is_char()) chars.insert(a.ch());
          if (a.is_paren()) todo.push_back(&a.inner());
        }
      }
    }
  const std::vector<char> alphabet(chars.begin(), chars.end());
  Theory th = encode_data_theory(alphabet);
  std::vector<Formula> parts;
  std::vector<std::string> names;
  for (const Var& v : vs) {
    parts.push_back(sort_guard(v, alphabet));
    names.push_back(to_string(v));
  }
  for (const Equation& eq : system) parts.push_back(Formula::eq(to_fterm(eq.lhs), to_fterm(eq.rhs)));
  th.goal = Formula::exists(names, Formula::conj(std::move(parts)));
  const Theory searched = trim_alphabet(th);
  FindResult found = find_model(searched, options.finder);
  if (found.status == FindStatus::Found) {
    if (!check_theory(*found.model, searched)) throw Error("model finder returned a non-countermodel");
    result.verdict = NoSolResult::Verdict::Inconsistent;
    result.certificate = "model of size " + std::to_string(found.model->size);
    result.model = found.model;
  } else {
    result.certificate = "model search: " + status_name(found.status);
  }
  return result;
}

}  // namespace superfcm
