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

#include "superfcm/model_finder.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>

#include "superfcm/errors.hpp"

namespace superfcm {

// ------------------------------------------------------------ evaluation

int FiniteModel::character(char c) const {
  for (const auto& [ch, v] : chars)
    if (ch == c) return v;
  throw Error(std::string("model does not interpret character '") + c + "'");
}

bool FiniteModel::holds(const std::string& pred, std::span<const int> args) const {
  auto it = predicates.find(pred);
  if (it == predicates.end()) throw Error("model does not interpret predicate " + pred);
  std::size_t index = 0;
  for (int a : args) index = index * size + static_cast<std::size_t>(a);
  return it->second.truth[index] != 0;
}

int eval_term(const FiniteModel& m, const Term& t) {
  int acc = m.epsilon;
  for (const Atom& a : t.atoms()) {
    int v = 0;
    switch (a.kind()) {
      case Atom::Kind::Char:
        v = m.character(a.ch());
        break;
      case Atom::Kind::Paren:
        v = m.beta[static_cast<std::size_t>(eval_term(m, a.inner()))];
        break;
      default:
        throw Error("eval_term needs an object term");
    }
    acc = m.op(acc, v);
  }
  return acc;
}

int eval_fterm(const FiniteModel& m, const FTerm& t, const std::map<std::string, int>& env) {
  switch (t.kind()) {
    case FTerm::Kind::Var: {
      auto it = env.find(t.name());
      if (it == env.end()) throw Error("unbound variable " + t.name());
      return it->second;
    }
    case FTerm::Kind::Eps:
      return m.epsilon;
    case FTerm::Kind::Char:
      return m.character(t.ch());
    case FTerm::Kind::Beta:
      return m.beta[static_cast<std::size_t>(eval_fterm(m, t.args()[0], env))];
    case FTerm::Kind::Concat:
      return m.op(eval_fterm(m, t.args()[0], env), eval_fterm(m, t.args()[1], env));
  }
  return 0;
}

namespace {

bool eval_formula(const FiniteModel& m, const Formula& f, std::map<std::string, int>& env) {
  switch (f.kind) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Eq:
      return eval_fterm(m, f.terms[0], env) == eval_fterm(m, f.terms[1], env);
    case Formula::Kind::Pred: {
      std::vector<int> args;
      for (const FTerm& t : f.terms) args.push_back(eval_fterm(m, t, env));
      return m.holds(f.pred, args);
    }
    case Formula::Kind::Not:
      return !eval_formula(m, f.subs[0], env);
    case Formula::Kind::And:
      for (const Formula& s : f.subs)
        if (!eval_formula(m, s, env)) return false;
      return true;
    case Formula::Kind::Or:
      for (const Formula& s : f.subs)
        if (eval_formula(m, s, env)) return true;
      return false;
    case Formula::Kind::Implies:
      return !eval_formula(m, f.subs[0], env) || eval_formula(m, f.subs[1], env);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      const bool universal = f.kind == Formula::Kind::Forall;
      std::map<std::string, int> saved;
      for (const std::string& v : f.vars)
        if (auto it = env.find(v); it != env.end()) saved[v] = it->second;
      std::vector<int> values(f.vars.size(), 0);
      bool result = universal;
      while (true) {
        for (std::size_t i = 0; i < f.vars.size(); ++i) env[f.vars[i]] = values[i];
        if (eval_formula(m, f.subs[0], env) != universal) {
          result = !universal;
          break;
        }
        std::size_t i = 0;
        while (i < values.size() && ++values[i] == static_cast<int>(m.size)) values[i++] = 0;
        if (i == values.size()) break;
      }
      for (const std::string& v : f.vars) env.erase(v);
      for (const auto& [k, v] : saved) env[k] = v;
      return result;
    }
  }
  return false;
}

}  // namespace

bool check_model(const FiniteModel& m, const Formula& f) {
  std::map<std::string, int> env;
  return eval_formula(m, f, env);
}

bool check_theory(const FiniteModel& m, const Theory& th) {
  for (const Axiom& a : th.axioms)
    if (!check_model(m, a.formula)) return false;
  return !th.goal || !check_model(m, *th.goal);
}

bool is_associative(const FiniteModel& m) {
  const int n = static_cast<int>(m.size);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (m.op(m.op(a, b), c) != m.op(a, m.op(b, c))) return false;
  return true;
}

std::string status_name(FindStatus s) {
  switch (s) {
    case FindStatus::Found:
      return "found";
    case FindStatus::ExhaustedSizes:
      return "sizes exhausted";
    case FindStatus::DeadlineExceeded:
      return "deadline exceeded";
  }
  return "";
}

// ---------------------------------------------------- clause compilation

namespace {

FTerm subst_term(const FTerm& t, const std::map<std::string, FTerm>& s) {
  switch (t.kind()) {
    case FTerm::Kind::Var: {
      auto it = s.find(t.name());
      return it == s.end() ? t : it->second;
    }
    case FTerm::Kind::Beta:
      return FTerm::beta(subst_term(t.args()[0], s));
    case FTerm::Kind::Concat:
      return FTerm::concat(subst_term(t.args()[0], s), subst_term(t.args()[1], s));
    default:
      return t;
  }
}

Formula subst_formula(const Formula& f, std::map<std::string, FTerm> s) {
  for (const std::string& v : f.vars) s.erase(v);
  Formula out = f;
  for (FTerm& t : out.terms) t = subst_term(t, s);
  for (Formula& g : out.subs) g = subst_formula(g, s);
  return out;
}

using Conj = std::vector<Formula>;

struct Renamer {
  int counter = 0;
  std::vector<std::string> introduced;

  std::string fresh(const std::string& base) {
    std::string name = base + "#" + std::to_string(++counter);
    introduced.push_back(name);
    return name;
  }
};

constexpr std::size_t kMaxDisjuncts = 512;

std::optional<std::vector<Conj>> dnf(const Formula& f, Renamer& names) {
  switch (f.kind) {
    case Formula::Kind::True:
      return std::vector<Conj>{Conj{}};
    case Formula::Kind::False:
      return std::vector<Conj>{};
    case Formula::Kind::Eq:
    case Formula::Kind::Pred:
      return std::vector<Conj>{Conj{f}};
    case Formula::Kind::And: {
      std::vector<Conj> acc{Conj{}};
      for (const Formula& s : f.subs) {
        auto part = dnf(s, names);
        if (!part) return std::nullopt;
        std::vector<Conj> next;
        for (const Conj& a : acc)
          for (const Conj& b : *part) {
            Conj c = a;
            c.insert(c.end(), b.begin(), b.end());
            next.push_back(std::move(c));
          }
        if (next.size() > kMaxDisjuncts) return std::nullopt;
        acc = std::move(next);
      }
      return acc;
    }
    case Formula::Kind::Or: {
      std::vector<Conj> acc;
      for (const Formula& s : f.subs) {
        auto part = dnf(s, names);
        if (!part) return std::nullopt;
        acc.insert(acc.end(), part->begin(), part->end());
      }
      if (acc.size() > kMaxDisjuncts) return std::nullopt;
      return acc;
    }
    case Formula::Kind::Exists: {
      std::map<std::string, FTerm> s;
      for (const std::string& v : f.vars) s.emplace(v, FTerm::variable(names.fresh(v)));
      return dnf(subst_formula(f.subs[0], s), names);
    }
    default:
      return std::nullopt;
  }
}

/// ∀vars. body → head, or body → ⊥ when head is empty.
struct FClause {
  std::vector<std::string> vars;
  std::vector<Formula> atoms;
  std::vector<std::pair<FTerm, FTerm>> eqs;
  std::optional<Formula> head;
};

bool occurs(const std::string& v, const FTerm& t) {
  if (t.kind() == FTerm::Kind::Var) return t.name() == v;
  return std::any_of(t.args().begin(), t.args().end(), [&](const FTerm& a) { return occurs(v, a); });
}

void eliminate_equalities(FClause& c) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < c.eqs.size() && !changed; ++i) {
      for (int side = 0; side < 2 && !changed; ++side) {
        const FTerm& x = side == 0 ? c.eqs[i].first : c.eqs[i].second;
        const FTerm& t = side == 0 ? c.eqs[i].second : c.eqs[i].first;
        if (x.kind() != FTerm::Kind::Var) continue;
        if (std::find(c.vars.begin(), c.vars.end(), x.name()) == c.vars.end()) continue;
        if (occurs(x.name(), t)) continue;
        std::map<std::string, FTerm> s{{x.name(), t}};
        const std::string name = x.name();
        c.eqs.erase(c.eqs.begin() + static_cast<std::ptrdiff_t>(i));
        for (auto& [a, b] : c.eqs) {
          a = subst_term(a, s);
          b = subst_term(b, s);
        }
        for (Formula& a : c.atoms) a = subst_formula(a, s);
        if (c.head) *c.head = subst_formula(*c.head, s);
        c.vars.erase(std::find(c.vars.begin(), c.vars.end(), name));
        changed = true;
      }
    }
  }
}

std::optional<std::vector<FClause>> clauses_from(std::vector<std::string> vars,
                                                 const Formula& body,
                                                 const std::vector<std::optional<Formula>>& heads) {
  Renamer names;
  auto conjs = dnf(body, names);
  if (!conjs) return std::nullopt;
  vars.insert(vars.end(), names.introduced.begin(), names.introduced.end());
  std::vector<FClause> out;
  for (const Conj& conj : *conjs) {
    for (const auto& head : heads) {
      FClause c;
      c.vars = vars;
      c.head = head;
      for (const Formula& lit : conj) {
        if (lit.kind == Formula::Kind::Eq)
          c.eqs.emplace_back(lit.terms[0], lit.terms[1]);
        else
          c.atoms.push_back(lit);
      }
      eliminate_equalities(c);
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::optional<std::vector<FClause>> compile_axiom(const Formula& axiom) {
  std::vector<std::string> vars;
  const Formula* f = &axiom;
  while (f->kind == Formula::Kind::Forall) {
    vars.insert(vars.end(), f->vars.begin(), f->vars.end());
    f = &f->subs[0];
  }
  const Formula* body = nullptr;
  const Formula* head = f;
  Formula truth;
  if (f->kind == Formula::Kind::Implies) {
    body = &f->subs[0];
    head = &f->subs[1];
  } else {
    body = &truth;
  }
  std::vector<std::optional<Formula>> heads;
  if (head->kind == Formula::Kind::Pred) {
    heads.emplace_back(*head);
  } else if (head->kind == Formula::Kind::False) {
    heads.emplace_back(std::nullopt);
  } else if (head->kind == Formula::Kind::And) {
    for (const Formula& h : head->subs) {
      if (h.kind != Formula::Kind::Pred) return std::nullopt;
      heads.emplace_back(h);
    }
  } else {
    return std::nullopt;
  }
  return clauses_from(std::move(vars), *body, heads);
}

std::optional<std::vector<FClause>> compile_goal(const Formula& goal) {
  std::vector<std::string> vars;
  const Formula* f = &goal;
  while (f->kind == Formula::Kind::Exists) {
    vars.insert(vars.end(), f->vars.begin(), f->vars.end());
    f = &f->subs[0];
  }
  return clauses_from(std::move(vars), *f, {std::nullopt});
}

/// Whether existential quantifiers occur only in negative positions.
bool universal(const Formula& f, bool positive) {
  switch (f.kind) {
    case Formula::Kind::Not:
      return universal(f.subs[0], !positive);
    case Formula::Kind::Implies:
      return universal(f.subs[0], !positive) && universal(f.subs[1], positive);
    case Formula::Kind::Forall:
      return positive && universal(f.subs[0], positive);
    case Formula::Kind::Exists:
      return !positive && universal(f.subs[0], positive);
    default:
      return std::all_of(f.subs.begin(), f.subs.end(),
                         [&](const Formula& s) { return universal(s, positive); });
  }
}

void collect_chars(const FTerm& t, std::vector<char>& out) {
  if (t.kind() == FTerm::Kind::Char && std::find(out.begin(), out.end(), t.ch()) == out.end())
    out.push_back(t.ch());
  for (const FTerm& a : t.args()) collect_chars(a, out);
}

void collect_chars(const Formula& f, std::vector<char>& out) {
  for (const FTerm& t : f.terms) collect_chars(t, out);
  for (const Formula& s : f.subs) collect_chars(s, out);
}

bool has_beta(const FTerm& t) {
  if (t.kind() == FTerm::Kind::Beta) return true;
  return std::any_of(t.args().begin(), t.args().end(), [](const FTerm& a) { return has_beta(a); });
}

bool has_beta(const Formula& f) {
  return std::any_of(f.terms.begin(), f.terms.end(), [](const FTerm& t) { return has_beta(t); }) ||
         std::any_of(f.subs.begin(), f.subs.end(), [](const Formula& s) { return has_beta(s); });
}

void collect_preds(const Formula& f, std::map<std::string, std::size_t>& out) {
  if (f.kind == Formula::Kind::Pred) out.emplace(f.pred, f.terms.size());
  for (const Formula& s : f.subs) collect_preds(s, out);
}

// ----------------------------------------------------------- the search

struct Node {
  enum Kind : std::uint8_t { Var, Const, Concat, Beta };
  Kind kind;
  int a = -1;
  int b = -1;
};

struct CAtom {
  int pred = -1;
  std::vector<int> args;
};

struct Clause {
  std::vector<Node> nodes;
  int nvars = 0;
  std::vector<CAtom> body;
  std::vector<std::pair<int, int>> eqs;
  bool head_false = false;
  CAtom head;
};

struct Timeout {};

/// Everything that does not depend on the domain size.
struct Compiled {
  std::vector<char> constants;  // index 0 is ε
  std::vector<std::string> pred_names;
  std::vector<std::size_t> pred_arity;
  std::map<std::string, int> pred_ids;
  int r_pred = -1;
  bool r_total = false;
  bool generated = true;
  bool assoc = false;
  bool units = false;
  bool uses_beta = false;
  std::vector<Clause> clauses;
  std::vector<const Formula*> other_axioms;
  const Formula* other_goal = nullptr;
};

int node_of(const FTerm& t, Clause& c, const std::vector<std::string>& vars,
            const std::vector<char>& constants) {
  Node n{Node::Var};
  switch (t.kind()) {
    case FTerm::Kind::Var:
      n.kind = Node::Var;
      n.a = static_cast<int>(std::find(vars.begin(), vars.end(), t.name()) - vars.begin());
      if (n.a == static_cast<int>(vars.size())) throw Error("free variable " + t.name());
      break;
    case FTerm::Kind::Eps:
      n.kind = Node::Const;
      n.a = 0;
      break;
    case FTerm::Kind::Char:
      n.kind = Node::Const;
      n.a = static_cast<int>(std::find(constants.begin() + 1, constants.end(), t.ch()) -
                             constants.begin());
      break;
    case FTerm::Kind::Beta:
      n.kind = Node::Beta;
      n.a = node_of(t.args()[0], c, vars, constants);
      break;
    case FTerm::Kind::Concat:
      n.kind = Node::Concat;
      n.a = node_of(t.args()[0], c, vars, constants);
      n.b = node_of(t.args()[1], c, vars, constants);
      break;
  }
  c.nodes.push_back(n);
  return static_cast<int>(c.nodes.size()) - 1;
}

Compiled compile(const Theory& th) {
  Compiled cp;
  cp.constants.push_back(0);
  for (char ch : th.alphabet) cp.constants.push_back(ch);
  std::vector<char> extra;
  for (const Axiom& a : th.axioms) collect_chars(a.formula, extra);
  if (th.goal) collect_chars(*th.goal, extra);
  for (char ch : extra)
    if (std::find(cp.constants.begin() + 1, cp.constants.end(), ch) == cp.constants.end())
      cp.constants.push_back(ch);

  std::map<std::string, std::size_t> preds = th.predicates;
  for (const Axiom& a : th.axioms) collect_preds(a.formula, preds);
  if (th.goal) collect_preds(*th.goal, preds);
  for (const auto& [name, arity] : preds) {
    cp.pred_ids[name] = static_cast<int>(cp.pred_names.size());
    cp.pred_names.push_back(name);
    cp.pred_arity.push_back(arity);
  }
  if (auto it = cp.pred_ids.find("R"); it != cp.pred_ids.end()) cp.r_pred = it->second;

  cp.assoc = th.has_role(AxiomRole::Associativity);
  cp.units = th.has_role(AxiomRole::LeftUnit) && th.has_role(AxiomRole::RightUnit);
  for (const Axiom& a : th.axioms)
    if (!universal(a.formula, true)) cp.generated = false;
  if (th.goal && !universal(*th.goal, false)) cp.generated = false;
  cp.r_total = cp.generated && cp.r_pred >= 0 && th.has_role(AxiomRole::RBase) &&
               th.has_role(AxiomRole::RBeta) && th.has_role(AxiomRole::RConcat);

  auto add_clauses = [&](const std::vector<FClause>& fcs) {
    for (const FClause& fc : fcs) {
      if (cp.r_total && fc.head && fc.head->pred == "R") continue;
      Clause c;
      std::vector<std::string> used;
      auto note = [&](const FTerm& t) {
        for (const std::string& v : term_variables(t))
          if (std::find(used.begin(), used.end(), v) == used.end()) used.push_back(v);
      };
      std::vector<const Formula*> atoms;
      for (const Formula& a : fc.atoms)
        if (!(cp.r_total && a.pred == "R")) atoms.push_back(&a);
      for (const Formula* a : atoms)
        for (const FTerm& t : a->terms) note(t);
      for (const auto& [x, y] : fc.eqs) {
        note(x);
        note(y);
      }
      if (fc.head)
        for (const FTerm& t : fc.head->terms) note(t);
      c.nvars = static_cast<int>(used.size());
      for (const Formula* a : atoms) {
        CAtom ca;
        ca.pred = cp.pred_ids.at(a->pred);
        for (const FTerm& t : a->terms) ca.args.push_back(node_of(t, c, used, cp.constants));
        c.body.push_back(std::move(ca));
      }
      for (const auto& [x, y] : fc.eqs)
        c.eqs.emplace_back(node_of(x, c, used, cp.constants), node_of(y, c, used, cp.constants));
      if (fc.head) {
        c.head.pred = cp.pred_ids.at(fc.head->pred);
        for (const FTerm& t : fc.head->terms) c.head.args.push_back(node_of(t, c, used, cp.constants));
      } else {
        c.head_false = true;
      }
      cp.clauses.push_back(std::move(c));
    }
  };

  for (const Axiom& a : th.axioms) {
    switch (a.role) {
      case AxiomRole::Associativity:
      case AxiomRole::LeftUnit:
      case AxiomRole::RightUnit:
        continue;
      case AxiomRole::RBase:
      case AxiomRole::RBeta:
      case AxiomRole::RConcat:
        if (cp.r_total) continue;
        break;
      default:
        break;
    }
    auto fcs = compile_axiom(a.formula);
    if (fcs)
      add_clauses(*fcs);
    else
      cp.other_axioms.push_back(&a.formula);
  }
  // Monoid axioms stated without their roles are checked like any other.
  if (th.goal) {
    auto fcs = compile_goal(*th.goal);
    if (fcs)
      add_clauses(*fcs);
    else
      cp.other_goal = &*th.goal;
  }
  for (const Clause& c : cp.clauses)
    for (const Node& nd : c.nodes)
      if (nd.kind == Node::Beta) cp.uses_beta = true;
  for (const Formula* f : cp.other_axioms)
    if (has_beta(*f)) cp.uses_beta = true;
  if (cp.other_goal != nullptr && has_beta(*cp.other_goal)) cp.uses_beta = true;
  return cp;
}

enum class T3 { False, True, Unknown };

class Search {
 public:
  Search(const Compiled& cp, const Theory& th, int n,
         std::chrono::steady_clock::time_point deadline, std::size_t& nodes)
      : cp_(cp), th_(th), n_(n), deadline_(deadline), nodes_(nodes) {
    const int nconst = static_cast<int>(cp.constants.size());
    beta0_ = n * n;
    const0_ = n * n + n;
    values_.assign(static_cast<std::size_t>(const0_ + nconst), -1);
    waiters_.resize(values_.size());
    rev_.resize(static_cast<std::size_t>(n));
    truth_.resize(cp.pred_names.size());
    for (std::size_t p = 0; p < truth_.size(); ++p) {
      std::size_t cells = 1;
      for (std::size_t i = 0; i < cp.pred_arity[p]; ++i) cells *= static_cast<std::size_t>(n);
      truth_[p].assign(cells, 0);
    }
    triggers_.resize(cp.pred_names.size());
    for (std::size_t c = 0; c < cp.clauses.size(); ++c)
      for (std::size_t a = 0; a < cp.clauses[c].body.size(); ++a)
        triggers_[static_cast<std::size_t>(cp.clauses[c].body[a].pred)].emplace_back(c, a);

    for (int ci = 1; ci < nconst; ++ci) order_.push_back(const0_ + ci);
    for (int m = 0; m < n; ++m) {
      if (cp.uses_beta) order_.push_back(beta0_ + m);
      for (int j = 0; j < m; ++j) {
        order_.push_back(m * n + j);
        order_.push_back(j * n + m);
      }
      order_.push_back(m * n + m);
    }
    if (cp.units)
      order_.erase(std::remove_if(order_.begin(), order_.end(),
                                  [&](int cell) {
                                    return cell < beta0_ && (cell / n == 0 || cell % n == 0);
                                  }),
                   order_.end());
  }

  std::optional<FiniteModel> run() {
    if (!assign(const0_, 0)) return std::nullopt;
    // Nothing observes β: any table will do.
    if (!cp_.uses_beta)
      for (int x = 0; x < n_; ++x) assign(beta0_ + x, 0);
    if (cp_.units) {
      for (int x = 0; x < n_; ++x) {
        if (!assign(x, x) || !assign(x * n_, x)) return std::nullopt;
      }
    }
    for (std::size_t c = 0; c < cp_.clauses.size(); ++c)
      if (cp_.clauses[c].body.empty()) enumerate(static_cast<int>(c), std::vector<int>(
                                                     static_cast<std::size_t>(cp_.clauses[c].nvars), -1));
    if (conflict_ || !propagate() || !others_ok(false)) return std::nullopt;
    if (search(0)) return model_;
    return std::nullopt;
  }

 private:
  struct Mark {
    std::size_t cells, facts, waits, revs, insts, asg;
  };

  Mark mark() const {
    return {cell_trail_.size(), fact_trail_.size(), wait_trail_.size(), rev_trail_.size(),
            inst_clause_.size(), asg_pool_.size()};
  }

  void undo(const Mark& m) {
    while (cell_trail_.size() > m.cells) {
      values_[static_cast<std::size_t>(cell_trail_.back())] = -1;
      cell_trail_.pop_back();
    }
    while (fact_trail_.size() > m.facts) {
      truth_[fact_trail_.back().first][fact_trail_.back().second] = 0;
      fact_trail_.pop_back();
    }
    while (wait_trail_.size() > m.waits) {
      waiters_[static_cast<std::size_t>(wait_trail_.back())].pop_back();
      wait_trail_.pop_back();
    }
    while (rev_trail_.size() > m.revs) {
      rev_[static_cast<std::size_t>(rev_trail_.back())].pop_back();
      rev_trail_.pop_back();
    }
    inst_clause_.resize(m.insts);
    inst_offset_.resize(m.insts);
    asg_pool_.resize(m.asg);
    queue_.clear();
    conflict_ = false;
  }

  int cell_value(int cell) const { return values_[static_cast<std::size_t>(cell)]; }

  bool assign(int cell, int value) {
    const int old = cell_value(cell);
    if (old >= 0) {
      if (old != value) conflict_ = true;
      return old == value;
    }
    values_[static_cast<std::size_t>(cell)] = value;
    cell_trail_.push_back(cell);
    if (cell < beta0_) {
      const int a = cell / n_;
      const int b = cell % n_;
      if (!(cp_.units && (a == 0 || b == 0))) {
        rev_[static_cast<std::size_t>(value)].push_back(cell);
        rev_trail_.push_back(value);
      }
    }
    queue_.push_back(cell);
    return true;
  }

  /// x and y must be equal cells' values: propagate or detect a clash.
  bool equate(int cx, int cy) {
    const int vx = cell_value(cx);
    const int vy = cell_value(cy);
    if (vx >= 0 && vy >= 0) return vx == vy;
    if (vx >= 0) return assign(cy, vx);
    if (vy >= 0) return assign(cx, vy);
    return true;
  }

  bool associativity(int cell) {
    const int a = cell / n_;
    const int b = cell % n_;
    const int v = cell_value(cell);
    const int lo = cp_.units ? 1 : 0;
    for (int c = lo; c < n_; ++c) {
      const int bc = cell_value(b * n_ + c);
      if (bc >= 0 && !equate(v * n_ + c, a * n_ + bc)) return false;
      const int ca = cell_value(c * n_ + a);
      if (ca >= 0 && !equate(c * n_ + v, ca * n_ + b)) return false;
    }
    // The new cell as (x:y):c with x:y = a, and as x:(y:z) with y:z = b.
    const auto& left = rev_[static_cast<std::size_t>(a)];
    for (std::size_t i = 0; i < left.size(); ++i) {
      const int x = left[i] / n_;
      const int y = left[i] % n_;
      const int yb = cell_value(y * n_ + b);
      if (yb >= 0) {
        const int rhs = cell_value(x * n_ + yb);
        if (rhs >= 0 && rhs != v) return false;
        if (rhs < 0 && !assign(x * n_ + yb, v)) return false;
      }
    }
    const auto& right = rev_[static_cast<std::size_t>(b)];
    for (std::size_t i = 0; i < right.size(); ++i) {
      const int y = right[i] / n_;
      const int z = right[i] % n_;
      const int ay = cell_value(a * n_ + y);
      if (ay >= 0) {
        const int lhs = cell_value(ay * n_ + z);
        if (lhs >= 0 && lhs != v) return false;
        if (lhs < 0 && !assign(ay * n_ + z, v)) return false;
      }
    }
    return true;
  }

  /// Value of a clause node, or -1 with the first undefined cell.
  int eval(const Clause& c, int node, const int* asg, int& blocked) const {
    const Node& nd = c.nodes[static_cast<std::size_t>(node)];
    switch (nd.kind) {
      case Node::Var:
        return asg[nd.a];
      case Node::Const: {
        const int v = cell_value(const0_ + nd.a);
        if (v < 0) blocked = const0_ + nd.a;
        return v;
      }
      case Node::Beta: {
        const int x = eval(c, nd.a, asg, blocked);
        if (x < 0) return -1;
        const int v = cell_value(beta0_ + x);
        if (v < 0) blocked = beta0_ + x;
        return v;
      }
      case Node::Concat: {
        const int x = eval(c, nd.a, asg, blocked);
        if (x < 0) return -1;
        const int y = eval(c, nd.b, asg, blocked);
        if (y < 0) return -1;
        const int v = cell_value(x * n_ + y);
        if (v < 0) blocked = x * n_ + y;
        return v;
      }
    }
    return -1;
  }

  std::size_t fact_index(const Clause& c, const CAtom& atom, const int* asg, int& blocked,
                         bool& ok) const {
    std::size_t index = 0;
    ok = true;
    for (int arg : atom.args) {
      const int v = eval(c, arg, asg, blocked);
      if (v < 0) {
        ok = false;
        return 0;
      }
      index = index * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
    }
    return index;
  }

  void wait(int cell, int inst) {
    waiters_[static_cast<std::size_t>(cell)].push_back(inst);
    wait_trail_.push_back(cell);
  }

  /// Re-examines one clause instance; fires, waits, or drops it.
  void examine(int inst) {
    const Clause& c = cp_.clauses[static_cast<std::size_t>(inst_clause_[static_cast<std::size_t>(inst)])];
    const int* asg = asg_pool_.data() + inst_offset_[static_cast<std::size_t>(inst)];
    int blocked = -1;
    bool ok = true;
    for (const CAtom& atom : c.body) {
      const std::size_t idx = fact_index(c, atom, asg, blocked, ok);
      if (!ok) return wait(blocked, inst);
      if (truth_[static_cast<std::size_t>(atom.pred)][idx] == 0) return;
    }
    for (const auto& [x, y] : c.eqs) {
      const int vx = eval(c, x, asg, blocked);
      if (vx < 0) return wait(blocked, inst);
      const int vy = eval(c, y, asg, blocked);
      if (vy < 0) return wait(blocked, inst);
      if (vx != vy) return;
    }
    if (c.head_false) {
      conflict_ = true;
      return;
    }
    const std::size_t idx = fact_index(c, c.head, asg, blocked, ok);
    if (!ok) return wait(blocked, inst);
    add_fact(c.head.pred, idx);
  }

  void add_fact(int pred, std::size_t idx) {
    auto& table = truth_[static_cast<std::size_t>(pred)];
    if (table[idx] != 0) return;
    table[idx] = 1;
    fact_trail_.emplace_back(static_cast<std::size_t>(pred), idx);
    queue_.push_back(-1 - static_cast<int>(fact_trail_.size() - 1));
  }

  void new_instance(int clause, const std::vector<int>& asg) {
    const int inst = static_cast<int>(inst_clause_.size());
    inst_clause_.push_back(clause);
    inst_offset_.push_back(static_cast<int>(asg_pool_.size()));
    asg_pool_.insert(asg_pool_.end(), asg.begin(), asg.end());
    examine(inst);
  }

  /// All completions of a partial assignment become instances.
  void enumerate(int clause, std::vector<int> asg) {
    std::size_t i = 0;
    while (i < asg.size() && asg[i] >= 0) ++i;
    if (i == asg.size()) {
      new_instance(clause, asg);
      return;
    }
    for (int v = 0; v < n_ && !conflict_; ++v) {
      asg[i] = v;
      enumerate(clause, asg);
    }
  }

  void fact_added(std::size_t pred, std::size_t idx) {
    std::vector<int> args(cp_.pred_arity[pred]);
    for (std::size_t k = args.size(); k-- > 0;) {
      args[k] = static_cast<int>(idx % static_cast<std::size_t>(n_));
      idx /= static_cast<std::size_t>(n_);
    }
    for (const auto& [ci, ai] : triggers_[pred]) {
      const Clause& c = cp_.clauses[ci];
      std::vector<int> asg(static_cast<std::size_t>(c.nvars), -1);
      bool consistent = true;
      const CAtom& atom = c.body[ai];
      for (std::size_t k = 0; k < atom.args.size() && consistent; ++k) {
        const Node& nd = c.nodes[static_cast<std::size_t>(atom.args[k])];
        if (nd.kind == Node::Var) {
          int& slot = asg[static_cast<std::size_t>(nd.a)];
          if (slot < 0) slot = args[k];
          else consistent = slot == args[k];
        } else if (nd.kind == Node::Const) {
          const int v = cell_value(const0_ + nd.a);
          consistent = v < 0 || v == args[k];
        }
      }
      if (consistent) enumerate(static_cast<int>(ci), std::move(asg));
      if (conflict_) return;
    }
  }

  bool propagate() {
    std::size_t head = 0;
    while (head < queue_.size()) {
      if (conflict_) return false;
      const int ev = queue_[head++];
      if (ev >= 0) {
        if (cp_.assoc && ev < beta0_ && !associativity(ev)) {
          conflict_ = true;
          return false;
        }
        auto& ws = waiters_[static_cast<std::size_t>(ev)];
        for (std::size_t k = 0; k < ws.size() && !conflict_; ++k) examine(ws[k]);
      } else {
        const auto& [pred, idx] = fact_trail_[static_cast<std::size_t>(-1 - ev)];
        fact_added(pred, idx);
      }
    }
    queue_.clear();
    return !conflict_;
  }

  // Three-valued evaluation for formulas outside the Horn fragment.
  int partial_term(const FTerm& t, std::map<std::string, int>& env) const {
    switch (t.kind()) {
      case FTerm::Kind::Var:
        return env.at(t.name());
      case FTerm::Kind::Eps:
        return cell_value(const0_);
      case FTerm::Kind::Char: {
        const auto pos = std::find(cp_.constants.begin() + 1, cp_.constants.end(), t.ch()) -
                         cp_.constants.begin();
        return cell_value(const0_ + static_cast<int>(pos));
      }
      case FTerm::Kind::Beta: {
        const int x = partial_term(t.args()[0], env);
        return x < 0 ? -1 : cell_value(beta0_ + x);
      }
      case FTerm::Kind::Concat: {
        const int x = partial_term(t.args()[0], env);
        const int y = partial_term(t.args()[1], env);
        return x < 0 || y < 0 ? -1 : cell_value(x * n_ + y);
      }
    }
    return -1;
  }

  T3 partial(const Formula& f, std::map<std::string, int>& env, bool final) const {
    auto neg = [](T3 t) { return t == T3::True ? T3::False : t == T3::False ? T3::True : T3::Unknown; };
    switch (f.kind) {
      case Formula::Kind::True:
        return T3::True;
      case Formula::Kind::False:
        return T3::False;
      case Formula::Kind::Eq: {
        const int x = partial_term(f.terms[0], env);
        const int y = partial_term(f.terms[1], env);
        if (x < 0 || y < 0) return T3::Unknown;
        return x == y ? T3::True : T3::False;
      }
      case Formula::Kind::Pred: {
        const int p = cp_.pred_ids.at(f.pred);
        if (p == cp_.r_pred && cp_.r_total) return T3::True;
        std::size_t idx = 0;
        for (const FTerm& t : f.terms) {
          const int v = partial_term(t, env);
          if (v < 0) return T3::Unknown;
          idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
        }
        if (truth_[static_cast<std::size_t>(p)][idx] != 0) return T3::True;
        return final ? T3::False : T3::Unknown;
      }
      case Formula::Kind::Not:
        return neg(partial(f.subs[0], env, final));
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        const T3 absorbing = f.kind == Formula::Kind::And ? T3::False : T3::True;
        T3 acc = neg(absorbing);
        for (const Formula& s : f.subs) {
          const T3 v = partial(s, env, final);
          if (v == absorbing) return absorbing;
          if (v == T3::Unknown) acc = T3::Unknown;
        }
        return acc;
      }
      case Formula::Kind::Implies: {
        const T3 a = partial(f.subs[0], env, final);
        if (a == T3::False) return T3::True;
        const T3 b = partial(f.subs[1], env, final);
        if (b == T3::True) return T3::True;
        if (a == T3::True && b == T3::False) return T3::False;
        return T3::Unknown;
      }
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        const bool all = f.kind == Formula::Kind::Forall;
        const T3 absorbing = all ? T3::False : T3::True;
        T3 acc = neg(absorbing);
        std::vector<int> vals(f.vars.size(), 0);
        std::map<std::string, int> saved = env;
        while (true) {
          for (std::size_t i = 0; i < f.vars.size(); ++i) env[f.vars[i]] = vals[i];
          const T3 v = partial(f.subs[0], env, final);
          if (v == absorbing) {
            acc = absorbing;
            break;
          }
          if (v == T3::Unknown) acc = T3::Unknown;
          std::size_t i = 0;
          while (i < vals.size() && ++vals[i] == n_) vals[i++] = 0;
          if (i == vals.size()) break;
        }
        env = std::move(saved);
        return acc;
      }
    }
    return T3::Unknown;
  }

  bool others_ok(bool final) const {
    std::map<std::string, int> env;
    for (const Formula* f : cp_.other_axioms) {
      const T3 v = partial(*f, env, final);
      if (v == T3::False || (final && v != T3::True)) return false;
    }
    if (cp_.other_goal != nullptr) {
      const T3 v = partial(*cp_.other_goal, env, final);
      if (v == T3::True || (final && v != T3::False)) return false;
    }
    return true;
  }

  void tick() {
    if ((++nodes_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_) throw Timeout{};
  }

  /// Elements mentioned by a cell's arguments.
  int cell_max(int cell) const {
    if (cell >= const0_) return 0;
    if (cell >= beta0_) return cell - beta0_;
    return std::max(cell / n_, cell % n_);
  }

  /// Next cell to decide: pending constants first, then the cell over
  /// generated elements that most clause instances wait on.
  int select(int runmax) const {
    int best = -1;
    std::size_t best_score = 0;
    for (int cell : order_) {
      if (cp_.generated && cell_max(cell) > runmax) break;
      if (cell_value(cell) >= 0) continue;
      if (cell >= const0_) return cell;
      if (!cp_.generated) return cell;
      const std::size_t score = waiters_[static_cast<std::size_t>(cell)].size() + 1;
      if (score > best_score) {
        best = cell;
        best_score = score;
      }
    }
    return best;
  }

  bool search(int runmax) {
    tick();
    const int cell = select(runmax);
    if (cell < 0) return leaf(runmax);
    const int hi = cp_.generated ? std::min(n_ - 1, runmax + 1) : n_ - 1;
    for (int v = 0; v <= hi; ++v) {
      const Mark m = mark();
      if (assign(cell, v) && propagate() && others_ok(false) && search(std::max(runmax, v)))
        return true;
      undo(m);
    }
    return false;
  }

  bool leaf(int runmax) {
    if (cp_.generated && runmax != n_ - 1) return false;
    if (!others_ok(true)) return false;
    FiniteModel m;
    m.size = static_cast<std::size_t>(n_);
    m.concat.assign(values_.begin(), values_.begin() + beta0_);
    m.beta.assign(values_.begin() + beta0_, values_.begin() + const0_);
    m.epsilon = cell_value(const0_);
    for (std::size_t ci = 1; ci < cp_.constants.size(); ++ci)
      m.chars.emplace_back(cp_.constants[ci], cell_value(const0_ + static_cast<int>(ci)));
    for (std::size_t p = 0; p < cp_.pred_names.size(); ++p) {
      PredicateTable table{cp_.pred_arity[p], truth_[p]};
      if (static_cast<int>(p) == cp_.r_pred && cp_.r_total)
        std::fill(table.truth.begin(), table.truth.end(), 1);
      m.predicates[cp_.pred_names[p]] = std::move(table);
    }
    if (!check_theory(m, th_)) return false;
    model_ = std::move(m);
    return true;
  }

  const Compiled& cp_;
  const Theory& th_;
  int n_;
  std::chrono::steady_clock::time_point deadline_;
  std::size_t& nodes_;
  int beta0_ = 0;
  int const0_ = 0;

  std::vector<int> values_;
  std::vector<int> order_;
  std::vector<std::vector<int>> waiters_;
  std::vector<std::vector<int>> rev_;
  std::vector<std::vector<char>> truth_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> triggers_;

  std::vector<int> inst_clause_;
  std::vector<int> inst_offset_;
  std::vector<int> asg_pool_;

  std::vector<int> cell_trail_;
  std::vector<std::pair<std::size_t, std::size_t>> fact_trail_;
  std::vector<int> wait_trail_;
  std::vector<int> rev_trail_;
  std::vector<int> queue_;
  bool conflict_ = false;

  FiniteModel model_;
};

}  // namespace

FindResult find_model(const Theory& th, const FinderOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto deadline = start + options.deadline;
  const Compiled cp = compile(th);
  FindResult result;
  for (std::size_t n = std::max<std::size_t>(options.min_size, 1); n <= options.max_size; ++n) {
    result.last_size = n;
    Search search(cp, th, static_cast<int>(n), deadline, result.nodes);
    try {
      if (auto m = search.run()) {
        result.status = FindStatus::Found;
        result.model = std::move(m);
        break;
      }
    } catch (const Timeout&) {
      result.status = FindStatus::DeadlineExceeded;
      break;
    }
    if (std::chrono::steady_clock::now() > deadline) {
      result.status = n == options.max_size ? FindStatus::ExhaustedSizes : FindStatus::DeadlineExceeded;
      break;
    }
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

// ------------------------------------------------------------- automata

TermAutomaton model_to_automaton(const FiniteModel& m, const std::string& pred, bool positive) {
  auto it = m.predicates.find(pred);
  if (it == m.predicates.end()) throw Error("the model has no predicate " + pred);
  TermAutomaton a;
  a.size = m.size;
  a.concat = m.concat;
  a.beta = m.beta;
  a.epsilon = m.epsilon;
  a.chars = m.chars;
  a.arity = it->second.arity;
  a.accepting.resize(it->second.truth.size());
  for (std::size_t q = 0; q < a.accepting.size(); ++q)
    a.accepting[q] = static_cast<char>((it->second.truth[q] != 0) == positive);
  return a;
}

int run_automaton(const TermAutomaton& a, const Term& t) {
  int state = a.epsilon;
  for (const Atom& atom : t.atoms()) {
    int v = -1;
    if (atom.is_char()) {
      for (const auto& [c, q] : a.chars)
        if (c == atom.ch()) v = q;
      if (v < 0) throw Error(std::string("automaton has no transition for '") + atom.ch() + "'");
    } else if (atom.is_paren()) {
      v = a.beta[static_cast<std::size_t>(run_automaton(a, atom.inner()))];
    } else {
      throw Error("automata read object terms only");
    }
    state = a.concat[static_cast<std::size_t>(state) * a.size + static_cast<std::size_t>(v)];
  }
  return state;
}

bool accepts(const TermAutomaton& a, const Term& t) { return accepts(a, std::span<const Term>(&t, 1)); }

bool accepts(const TermAutomaton& a, std::span<const Term> tuple) {
  if (tuple.size() != a.arity) throw Error("automaton reads " + std::to_string(a.arity) + " terms");
  std::size_t index = 0;
  for (const Term& t : tuple) index = index * a.size + static_cast<std::size_t>(run_automaton(a, t));
  return a.accepting[index] != 0;
}

std::string print_model(const FiniteModel& m) {
  std::string out = "interpretation( " + std::to_string(m.size) + ", [], [\n";
  auto list = [](const std::vector<int>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i > 0 ? "," : "") + std::to_string(xs[i]);
    return s + "]";
  };
  out += "    function(e0, [" + std::to_string(m.epsilon) + "]),\n";
  for (const auto& [c, v] : m.chars)
    out += "    function(" + mace4_constant(c) + ", [" + std::to_string(v) + "]),\n";
  out += "    function(b1(_), " + list(m.beta) + "),\n";
  out += "    function(*(_,_), [\n";
  for (std::size_t a = 0; a < m.size; ++a) {
    out += "        ";
    for (std::size_t b = 0; b < m.size; ++b) {
      out += std::to_string(m.concat[a * m.size + b]);
      if (a + 1 < m.size || b + 1 < m.size) out += ',';
    }
    out += '\n';
  }
  out += "    ])";
  for (const auto& [name, table] : m.predicates) {
    out += ",\n    relation(" + name;
    if (table.arity > 0) {
      out += '(';
      for (std::size_t i = 0; i < table.arity; ++i) out += i > 0 ? ",_" : "_";
      out += ')';
    }
    std::vector<int> bits(table.truth.begin(), table.truth.end());
    out += ", " + list(bits) + ")";
  }
  out += "\n]).\n";
  return out;
}

}  // namespace superfcm
