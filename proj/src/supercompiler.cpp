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

#include "superfcm/supercompiler.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "superfcm/encoder.hpp"
#include "superfcm/errors.hpp"
#include "superfcm/interpreter.hpp"
#include "superfcm/logic.hpp"
#include "superfcm/syntax.hpp"

namespace superfcm {

using Clock = std::chrono::steady_clock;

// ---------------------------------------------------------------------------
// mstep

namespace {

std::vector<char> chars_of(const Program& p) {
  std::set<char> out(p.alphabet.begin(), p.alphabet.end());
  return {out.begin(), out.end()};
}

MStepResult mstep_impl(const Program& p, const Term& config, const ScpOptions& options,
                       std::chrono::milliseconds budget) {
  MStepResult out;
  std::optional<Term> redex = find_redex(config, false);
  if (!redex) throw Error("mstep on a passive configuration");
  const Atom& call = redex->atom();
  const auto rules = p.rules_for(call.function());
  if (rules.empty()) {
    out.stopped = "undefined function " + call.function();
    return out;
  }
  for (const Rule* r : rules) {
    if (r->arity() != call.args().size()) {
      out.pruned.emplace_back(r->index, "arity");
      continue;
    }
    NameSupply names;
    names.reserve(config);
    std::map<Var, Var> ren;
    const Term lhs = rename_apart(r->lhs, names, &ren);
    const Term rhs = rename(r->rhs, ren);
    MatchOutcome m = extended_match(*redex, lhs, options.match, config);
    if (m.kind == MatchOutcome::Kind::NoSolution) {
      out.pruned.emplace_back(r->index, "clash");
      continue;
    }
    if (m.kind == MatchOutcome::Kind::Unknown) {
      std::vector<Equation> eqs;
      for (std::size_t i = 0; i < call.args().size(); ++i)
        eqs.push_back({lhs.atom().args()[i], call.args()[i]});
      NoSolOptions nos;
      nos.alphabet = chars_of(p);
      nos.use_fcm = options.use_fcm && budget.count() > 0;
      nos.finder = FinderOptions{options.min_size, options.max_size, budget};
      NoSolResult ns = no_solution_check(eqs, nos);
      if (ns.inconsistent()) {
        out.pruned.emplace_back(r->index, ns.certificate);
        continue;
      }
      out.branches.clear();
      out.stopped = "rule " + std::to_string(r->index + 1) + ": " + m.reason + "; " + ns.certificate;
      return out;
    }
    bool total = false;
    for (const MatchSolution& s : m.solutions) {
      Term narrowed = apply(s.narrowing, config);
      Term child = replace_redex(narrowed, apply(s.binding, rhs), false);
      out.branches.push_back({r->index, s.narrowing, std::move(child)});
      total = total || s.narrowing.empty();
    }
    if (total) break;
  }
  return out;
}

}  // namespace

MStepResult mstep(const Program& p, const Term& config, const ScpOptions& options) {
  return mstep_impl(p, config, options, options.fcm_deadline);
}

// ---------------------------------------------------------------------------
// Whistle and generalization

namespace {

bool embeds_seq(std::span<const Atom> a, std::span<const Atom> b);

bool embeds_atom(const Atom& a, const Atom& b) {
  if (a.is_char() && b.is_char() && a.ch() == b.ch()) return true;
  if (a.is_var() && b.is_var()) return true;
  if (a.is_paren() && b.is_paren() && embeds_seq(a.inner().atoms(), b.inner().atoms())) return true;
  if (a.is_call() && b.is_call() && a.function() == b.function() && a.args().size() == b.args().size()) {
    bool all = true;
    for (std::size_t i = 0; i < a.args().size() && all; ++i)
      all = embeds_seq(a.args()[i].atoms(), b.args()[i].atoms());
    if (all) return true;
  }
  if (b.is_paren())
    for (const Atom& c : b.inner().atoms())
      if (embeds_atom(a, c)) return true;
  if (b.is_call())
    for (const Term& arg : b.args())
      for (const Atom& c : arg.atoms())
        if (embeds_atom(a, c)) return true;
  return false;
}

bool embeds_seq(std::span<const Atom> a, std::span<const Atom> b) {
  std::size_t j = 0;
  for (const Atom& x : a) {
    while (j < b.size() && !embeds_atom(x, b[j])) ++j;
    if (j == b.size()) return false;
    ++j;
  }
  return true;
}

bool has_evar(const Term& t) {
  return std::any_of(t.atoms().begin(), t.atoms().end(), [](const Atom& a) { return a.is_var(VarKind::E); });
}

class Msg {
 public:
  Msg(const Term& a, const Term& b) {
    names_.reserve(a);
    names_.reserve(b);
  }

  Term seq(const Term& a, const Term& b) {
    if (a == b) return a;
    if (a.size() == b.size() && !has_evar(a) && !has_evar(b)) {
      Term out;
      for (std::size_t i = 0; i < a.size(); ++i) out.append(atom(a[i], b[i]));
      return out;
    }
    std::size_t p = 0;
    while (p < a.size() && p < b.size() && a[p] == b[p]) ++p;
    std::size_t s = 0;
    while (s < a.size() - p && s < b.size() - p && a[a.size() - 1 - s] == b[b.size() - 1 - s]) ++s;
    const Term ma = a.slice(p, a.size() - s);
    const Term mb = b.slice(p, b.size() - s);
    Term out = a.slice(0, p);
    if (ma.size() == mb.size() && !has_evar(ma) && !has_evar(mb)) {
      for (std::size_t i = 0; i < ma.size(); ++i) out.append(atom(ma[i], mb[i]));
    } else {
      out.append(Term::var(var_for(ma, mb, VarKind::E)));
    }
    out.append(a.slice(a.size() - s, a.size()));
    return out;
  }

  Term atom(const Atom& x, const Atom& y) {
    if (x == y) return Term(x);
    if (x.is_call() && y.is_call() && x.function() == y.function() && x.args().size() == y.args().size()) {
      std::vector<Term> args;
      for (std::size_t i = 0; i < x.args().size(); ++i) args.push_back(seq(x.args()[i], y.args()[i]));
      return Term(Atom::call(x.function(), std::move(args)));
    }
    if (x.is_paren() && y.is_paren()) return Term::paren(seq(x.inner(), y.inner()));
    const Term tx(x);
    const Term ty(y);
    if (in_range(VarKind::S, tx) && in_range(VarKind::S, ty)) return Term::var(var_for(tx, ty, VarKind::S));
    if (in_range(VarKind::T, tx) && in_range(VarKind::T, ty)) return Term::var(var_for(tx, ty, VarKind::T));
    return Term::var(var_for(tx, ty, VarKind::E));
  }

  Substitution left;
  Substitution right;

 private:
  Var var_for(const Term& x, const Term& y, VarKind kind) {
    auto key = std::make_pair(x, y);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::string base = "x";
    if (x.size() == 1 && x.atom().is_var()) base = x.atom().var().name;
    Var v = names_.fresh(kind, base);
    memo_.emplace(key, v);
    left.bind(v, x);
    right.bind(v, y);
    return v;
  }

  NameSupply names_;
  std::map<std::pair<Term, Term>, Var> memo_;
};

}  // namespace

bool embeds(const Term& a, const Term& b) { return embeds_seq(a.atoms(), b.atoms()); }

std::string top_function(const Term& t) {
  for (const Atom& a : t.atoms()) {
    if (a.is_call()) return a.function();
    if (a.is_paren()) {
      std::string f = top_function(a.inner());
      if (!f.empty()) return f;
    }
  }
  return {};
}

bool whistle(const Term& ancestor, const Term& candidate) {
  const std::string f = top_function(ancestor);
  return !f.empty() && f == top_function(candidate) && embeds(ancestor, candidate);
}

Generalization generalize(const Term& a, const Term& b) {
  Msg m(a, b);
  Generalization g;
  g.term = m.seq(a, b);
  g.left = m.left;
  g.right = m.right;
  if (apply(g.left, g.term) != a || apply(g.right, g.term) != b)
    throw Error("generalization does not cover both terms");
  return g;
}

// ---------------------------------------------------------------------------
// Graph queries

std::string status_name(UnfoldNode::Status s) {
  switch (s) {
    case UnfoldNode::Status::Open:
      return "open";
    case UnfoldNode::Status::Driven:
      return "driven";
    case UnfoldNode::Status::Exit:
      return "exit";
    case UnfoldNode::Status::Folded:
      return "folded";
    case UnfoldNode::Status::Generalized:
      return "generalized";
    case UnfoldNode::Status::Stopped:
      return "stopped";
    case UnfoldNode::Status::Dead:
      return "dead";
    case UnfoldNode::Status::Pruned:
      return "pruned";
    case UnfoldNode::Status::Discarded:
      return "discarded";
  }
  return "?";
}

std::string kind_name(UnfoldEdge::Kind k) {
  switch (k) {
    case UnfoldEdge::Kind::Narrow:
      return "narrow";
    case UnfoldEdge::Kind::Reference:
      return "reference";
    case UnfoldEdge::Kind::Generalize:
      return "generalize";
  }
  return "?";
}

std::vector<const UnfoldEdge*> UnfoldGraph::children(std::size_t v) const {
  std::vector<const UnfoldEdge*> out;
  for (const UnfoldEdge& e : edges)
    if (!e.removed && e.from == v && e.kind != UnfoldEdge::Kind::Reference) out.push_back(&e);
  return out;
}

const UnfoldEdge* UnfoldGraph::reference(std::size_t v) const {
  for (const UnfoldEdge& e : edges)
    if (!e.removed && e.from == v && e.kind == UnfoldEdge::Kind::Reference) return &e;
  return nullptr;
}

std::vector<std::size_t> UnfoldGraph::subtree(std::size_t v) const {
  std::vector<std::size_t> out{v};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const UnfoldEdge* e : children(out[i])) out.push_back(e->to);
  return out;
}

std::size_t UnfoldGraph::alive_count() const {
  std::size_t n = 0;
  for (std::size_t v = 0; v < nodes.size(); ++v) n += alive(v) ? 1 : 0;
  return n;
}

bool self_sufficient(const UnfoldGraph& g, std::size_t v) {
  const std::vector<std::size_t> sub = g.subtree(v);
  const std::set<std::size_t> inside(sub.begin(), sub.end());
  for (std::size_t u : sub)
    if (const UnfoldEdge* r = g.reference(u); r != nullptr && inside.count(r->to) == 0) return false;
  return true;
}

std::vector<std::size_t> exits_of(const UnfoldGraph& g, std::size_t v) {
  std::vector<std::size_t> out;
  for (std::size_t u : g.subtree(v)) {
    const auto s = g.nodes[u].status;
    if (s == UnfoldNode::Status::Exit || s == UnfoldNode::Status::Stopped) out.push_back(u);
  }
  return out;
}

namespace {

Term msg_all(const std::vector<Term>& results) {
  Term acc = results.front();
  for (std::size_t i = 1; i < results.size(); ++i) acc = generalize(acc, results[i]).term;
  return acc;
}

Term fresh_evar(const std::vector<Term>& avoid) {
  NameSupply names;
  for (const Term& t : avoid) names.reserve(t);
  return Term::var(names.fresh(VarKind::E, "out"));
}

/// Exit result with stop nodes read as a fresh e-variable.
Term result_of(const UnfoldGraph& g, std::size_t u) {
  if (g.nodes[u].status == UnfoldNode::Status::Stopped) return fresh_evar({g.nodes[u].term});
  return g.nodes[u].term;
}

}  // namespace

OutputFormat syntactic_format(const UnfoldGraph& g, std::size_t v) {
  OutputFormat f;
  f.node = v;
  std::vector<Term> results;
  for (std::size_t u : exits_of(g, v)) results.push_back(result_of(g, u));
  if (results.empty()) {
    f.empty = true;
    f.how = "syntactic";
    f.format = fresh_evar({});
    return f;
  }
  f.how = "msg";
  f.format = msg_all(results);
  return f;
}

// ---------------------------------------------------------------------------
// Residualization

namespace {

std::vector<Term> params_of(const Term& t) {
  std::vector<Term> out;
  for (const Var& v : vars(t).order) out.push_back(Term::var(v));
  return out;
}

std::vector<Term> applied(const Substitution& s, const std::vector<Term>& ts) {
  std::vector<Term> out;
  for (const Term& t : ts) out.push_back(apply(s, t));
  return out;
}

/// Function names for nodes and the term that stands for a node inside a
/// rule right-hand side. With `inline_transient` deterministic steps that
/// nobody refers to are folded into their successor.
class Namer {
 public:
  Namer(const UnfoldGraph& g, const std::set<std::string>& taken, bool inline_transient)
      : g_(g), taken_(taken) {
    std::set<std::size_t> targets;
    for (const UnfoldEdge& e : g.edges)
      if (!e.removed && e.kind != UnfoldEdge::Kind::Narrow) targets.insert(e.to);
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
      if (!g.alive(v)) continue;
      const auto s = g.nodes[v].status;
      if (s != UnfoldNode::Status::Driven && s != UnfoldNode::Status::Stopped &&
          s != UnfoldNode::Status::Dead)
        continue;
      if (inline_transient && s == UnfoldNode::Status::Driven && v != g.root && targets.count(v) == 0) {
        auto kids = live_children(v);
        if (kids.size() == 1 && kids[0]->subst.empty()) continue;
      }
      if (!inline_transient || s == UnfoldNode::Status::Driven)
        names_[v] = next_name();
    }
  }

  bool has_function(std::size_t v) const { return names_.count(v) != 0; }
  const std::string& name(std::size_t v) const { return names_.at(v); }
  const std::map<std::size_t, std::string>& names() const { return names_; }

  /// nullopt for a pruned exit.
  std::optional<Term> stand_in(std::size_t c) const {
    const UnfoldNode& n = g_.nodes[c];
    switch (n.status) {
      case UnfoldNode::Status::Exit:
        return n.term;
      case UnfoldNode::Status::Pruned:
        return std::nullopt;
      case UnfoldNode::Status::Folded: {
        const UnfoldEdge* r = g_.reference(c);
        return apply(r->subst, *stand_in_function(r->to));
      }
      case UnfoldNode::Status::Generalized: {
        const UnfoldEdge* e = g_.children(c).front();
        std::optional<Term> inner = stand_in(e->to);
        if (!inner) return std::nullopt;
        return apply(e->subst, *inner);
      }
      default:
        break;
    }
    if (has_function(c)) return Term(Atom::call(name(c), params_of(n.term)));
    if (n.status == UnfoldNode::Status::Driven) return stand_in(live_children(c).front()->to);
    return n.term;  // stop or dead node: the original computation
  }

 private:
  std::vector<const UnfoldEdge*> live_children(std::size_t v) const {
    std::vector<const UnfoldEdge*> out;
    for (const UnfoldEdge* e : g_.children(v))
      if (g_.nodes[e->to].status != UnfoldNode::Status::Pruned) out.push_back(e);
    return out;
  }

  std::optional<Term> stand_in_function(std::size_t v) const {
    return Term(Atom::call(name(v), params_of(g_.nodes[v].term)));
  }

  std::string next_name() {
    for (;;) {
      std::string n = "f" + std::to_string(++counter_);
      if (taken_.count(n) == 0) return n;
    }
  }

  const UnfoldGraph& g_;
  std::set<std::string> taken_;
  std::map<std::size_t, std::string> names_;
  std::size_t counter_ = 0;
};

std::vector<std::pair<Term, Term>> node_rules(const UnfoldGraph& g, const Namer& namer, std::size_t v) {
  std::vector<std::pair<Term, Term>> out;
  if (g.nodes[v].status != UnfoldNode::Status::Driven) return out;
  const std::vector<Term> params = params_of(g.nodes[v].term);
  for (const UnfoldEdge* e : g.children(v)) {
    std::optional<Term> rhs = namer.stand_in(e->to);
    if (!rhs) continue;
    out.emplace_back(Term(Atom::call(namer.name(v), applied(e->subst, params))), *rhs);
  }
  return out;
}

void collect_calls(const Term& t, std::set<std::string>& out) {
  for (const Atom& a : t.atoms()) {
    if (a.is_call()) {
      out.insert(a.function());
      for (const Term& arg : a.args()) collect_calls(arg, out);
    }
    if (a.is_paren()) collect_calls(a.inner(), out);
  }
}

}  // namespace

Program residualize(const UnfoldGraph& g, const Program& original,
                    std::map<std::size_t, std::string>* functions) {
  for (std::size_t v = 0; v < g.nodes.size(); ++v)
    if (g.alive(v) && g.nodes[v].status == UnfoldNode::Status::Open)
      throw OpenGraph("node " + std::to_string(v) + " is still open");
  std::set<std::string> taken;
  for (const Rule& r : original.rules) taken.insert(r.function());
  collect_calls(original.initial, taken);
  Namer namer(g, taken, true);

  std::vector<std::pair<Term, Term>> rules;
  std::set<std::string> needed;
  for (const auto& [v, name] : namer.names()) {
    for (auto& rule : node_rules(g, namer, v)) {
      collect_calls(rule.second, needed);
      rules.push_back(std::move(rule));
    }
  }
  std::optional<Term> initial = namer.stand_in(g.root);
  if (!initial) throw Error("the root is pruned");
  collect_calls(*initial, needed);
  // Stop and dead nodes run the original code.
  std::set<std::string> done;
  std::vector<std::string> todo(needed.begin(), needed.end());
  while (!todo.empty()) {
    std::string f = todo.back();
    todo.pop_back();
    if (taken.count(f) == 0 || !done.insert(f).second) continue;
    for (const Rule* r : original.rules_for(f)) {
      rules.emplace_back(r->lhs, r->rhs);
      std::set<std::string> more;
      collect_calls(r->rhs, more);
      todo.insert(todo.end(), more.begin(), more.end());
    }
  }
  if (functions != nullptr) *functions = namer.names();
  std::vector<char> alphabet = original.alphabet;
  return make_program(*initial, std::move(rules), alphabet);
}

// ---------------------------------------------------------------------------
// Driving

namespace {

Term random_object(VarKind kind, const std::vector<char>& letters, std::mt19937_64& rng, int depth = 0) {
  auto pick = [&] { return letters[std::uniform_int_distribution<std::size_t>(0, letters.size() - 1)(rng)]; };
  auto one = [&]() -> Term {
    if (depth < 2 && std::uniform_int_distribution<int>(0, 9)(rng) == 0)
      return Term::paren(random_object(VarKind::E, letters, rng, depth + 1));
    return Term::ch(pick());
  };
  if (kind == VarKind::S) return Term::ch(pick());
  if (kind == VarKind::T) return one();
  Term out;
  const int len = std::uniform_int_distribution<int>(0, 7)(rng);
  for (int i = 0; i < len; ++i) out.append(one());
  return out;
}

class Driver {
 public:
  Driver(const Program& p, const ScpOptions& o) : p_(p), o_(o), start_(Clock::now()) {}

  ScpResult run() {
    ScpResult res;
    UnfoldGraph& g = res.graph;
    g.nodes.push_back(UnfoldNode{0, p_.initial, std::nullopt, 0, UnfoldNode::Status::Open, {}});
    std::vector<std::size_t> stack{0};
    try {
      while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        if (!g.alive(v) || g.nodes[v].status != UnfoldNode::Status::Open) continue;
        if (g.alive_count() > o_.max_nodes) throw Limit{"more than " + std::to_string(o_.max_nodes) + " nodes"};
        if (g.nodes[v].depth > o_.max_depth)
          throw Limit{"depth above " + std::to_string(o_.max_depth)};
        process(g, v, stack);
      }
    } catch (const Limit& l) {
      res.status = ScpResult::Status::LimitExceeded;
      res.limit = l.what;
      res.seconds = elapsed();
      return res;
    }
    formats(res);
    res.residual = residualize(g, p_, &res.functions);
    res.fcm_calls = fcm_calls_;
    res.seconds = elapsed();
    return res;
  }

 private:
  struct Limit {
    std::string what;
  };

  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  std::chrono::milliseconds budget() const {
    auto used = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start_);
    auto left = o_.deadline - used;
    if (left.count() <= 0) return std::chrono::milliseconds(0);
    return std::min(left, o_.fcm_deadline);
  }

  std::size_t add_node(UnfoldGraph& g, const Term& t, std::size_t parent) {
    const std::size_t id = g.nodes.size();
    g.nodes.push_back(UnfoldNode{id, t, parent, g.nodes[parent].depth + 1, UnfoldNode::Status::Open, {}});
    return id;
  }

  void discard_below(UnfoldGraph& g, std::size_t v) {
    for (std::size_t u : g.subtree(v)) {
      if (u != v) g.nodes[u].status = UnfoldNode::Status::Discarded;
      for (UnfoldEdge& e : g.edges)
        if (e.from == u) e.removed = true;
    }
  }

  std::vector<std::size_t> ancestors(const UnfoldGraph& g, std::size_t v) const {
    std::vector<std::size_t> out;
    for (auto p = g.nodes[v].parent; p; p = g.nodes[*p].parent) out.push_back(*p);
    std::reverse(out.begin(), out.end());  // root first
    return out;
  }

  void process(UnfoldGraph& g, std::size_t v, std::vector<std::size_t>& stack) {
    UnfoldNode& node = g.nodes[v];
    if (node.term.is_passive()) {
      node.status = UnfoldNode::Status::Exit;
      return;
    }
    const std::vector<std::size_t> anc = ancestors(g, v);
    for (std::size_t a : anc) {
      if (g.nodes[a].status != UnfoldNode::Status::Driven) continue;
      std::optional<Substitution> theta = instance_of(g.nodes[v].term, g.nodes[a].term);
      if (!theta) continue;
      bool data = std::all_of(theta->bindings().begin(), theta->bindings().end(),
                              [](const auto& kv) { return kv.second.is_passive(); });
      if (!data) continue;
      g.nodes[v].status = UnfoldNode::Status::Folded;
      g.edges.push_back({UnfoldEdge::Kind::Reference, v, a, *theta, 0, false});
      return;
    }
    for (std::size_t a : anc) {
      if (g.nodes[a].status != UnfoldNode::Status::Driven) continue;
      if (!whistle(g.nodes[a].term, g.nodes[v].term)) continue;
      Generalization gen = generalize(g.nodes[a].term, g.nodes[v].term);
      bool abstracts_call = std::any_of(gen.left.bindings().begin(), gen.left.bindings().end(),
                                        [](const auto& kv) { return has_call(kv.second); }) ||
                            std::any_of(gen.right.bindings().begin(), gen.right.bindings().end(),
                                        [](const auto& kv) { return has_call(kv.second); });
      if (abstracts_call) {
        g.nodes[v].status = UnfoldNode::Status::Stopped;
        g.nodes[v].note = "generalization would abstract a call";
        return;
      }
      discard_below(g, a);
      g.nodes[a].status = UnfoldNode::Status::Generalized;
      const std::size_t gn = add_node(g, gen.term, a);
      g.edges.push_back({UnfoldEdge::Kind::Generalize, a, gn, gen.left, 0, false});
      stack.push_back(gn);
      return;
    }

    MStepResult m = mstep_impl(p_, g.nodes[v].term, o_, o_.use_fcm ? budget() : std::chrono::milliseconds(0));
    const std::string f = top_redex(g.nodes[v].term);
    for (const auto& [rule, cert] : m.pruned) g.pruned_rules.push_back({v, f, rule, cert});
    if (m.stopped) {
      g.nodes[v].status = UnfoldNode::Status::Stopped;
      g.nodes[v].note = *m.stopped;
      return;
    }
    if (m.branches.empty()) {
      g.nodes[v].status = UnfoldNode::Status::Dead;
      g.nodes[v].note = "no rule applies";
      return;
    }
    g.nodes[v].status = UnfoldNode::Status::Driven;
    std::vector<std::size_t> kids;
    for (Branch& b : m.branches) {
      const std::size_t c = add_node(g, b.child, v);
      g.edges.push_back({UnfoldEdge::Kind::Narrow, v, c, b.narrowing, b.rule, false});
      kids.push_back(c);
    }
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }

  static std::string top_redex(const Term& t) {
    std::optional<Term> r = find_redex(t, false);
    return r ? r->atom().function() : std::string();
  }

  // -------------------------------------------------------------------------
  // Output formats

  std::vector<Term> probe_results() {
    std::vector<Term> out;
    const VarSets vs = vars(p_.initial);
    std::vector<char> letters = chars_of(p_);
    if (letters.empty()) letters.push_back('a');
    std::mt19937_64 rng(o_.seed);
    for (std::size_t i = 0; i < o_.probes; ++i) {
      std::vector<char> use = letters;
      if (i % 2 == 1) use = {letters[std::uniform_int_distribution<std::size_t>(0, letters.size() - 1)(rng)]};
      Substitution theta;
      for (const Var& v : vs.order) theta.bind(v, random_object(v.kind, use, rng));
      EvalResult r = evaluate(p_, apply(theta, p_.initial), o_.probe_fuel);
      if (r.kind == EvalResult::Kind::Value && std::find(out.begin(), out.end(), r.term) == out.end())
        out.push_back(r.term);
    }
    return out;
  }

  struct Item {
    std::size_t node;
    Target target;
  };

  /// Tries to refute reachability of every listed exit at once.
  std::optional<FiniteModel> refute(const ReachabilityEncoding& enc, const std::vector<Item>& items) {
    if (items.empty()) return std::nullopt;
    auto b = budget();
    if (b.count() <= 0) return std::nullopt;
    std::vector<Formula> goals;
    for (const Item& it : items) goals.push_back(encode_exit_goal(enc, it.target));
    Theory th = enc.theory;
    th.goal = goals.size() == 1 ? goals.front() : Formula::disj(std::move(goals));
    Theory small = trim_alphabet(slice_for_goal(th));
    ++fcm_calls_;
    FindResult r = find_model(small, FinderOptions{o_.min_size, o_.max_size, b});
    if (r.status != FindStatus::Found) return std::nullopt;
    if (!check_theory(*r.model, small)) throw Error("model finder returned a non-countermodel");
    return r.model;
  }

  void formats(ScpResult& res) {
    UnfoldGraph& g = res.graph;
    const std::size_t root = g.root;
    std::vector<std::size_t> ex = exits_of(g, root);
    OutputFormat top;
    top.node = root;

    bool analyzable = o_.use_fcm && !ex.empty() && g.nodes[root].status != UnfoldNode::Status::Exit;
    std::optional<ReachabilityEncoding> enc;
    std::map<std::size_t, Item> items;
    if (analyzable) {
      Namer namer(g, {}, false);
      std::vector<std::pair<Term, Term>> rules;
      for (const auto& [v, name] : namer.names())
        for (auto& r : node_rules(g, namer, v)) rules.push_back(std::move(r));
      std::optional<Term> init = namer.stand_in(root);
      try {
        Program ap = make_program(*init, std::move(rules), p_.alphabet);
        EncodeOptions eo;
        eo.project_counters = o_.project_counters;
        for (std::size_t u : ex) {
          Item it{u, {}};
          it.target.kind = Target::Kind::Reach;
          if (g.nodes[u].status == UnfoldNode::Status::Stopped) {
            it.target.function = namer.name(u);
            it.target.patterns = params_of(g.nodes[u].term);
          } else {
            const std::size_t parent = *g.nodes[u].parent;
            const UnfoldEdge* e = nullptr;
            for (const UnfoldEdge* k : g.children(parent))
              if (k->to == u) e = k;
            it.target.function = namer.name(parent);
            it.target.patterns = applied(e->subst, params_of(g.nodes[parent].term));
          }
          eo.keep_functions.insert(it.target.function);
          items.emplace(u, std::move(it));
        }
        enc = encode_program_overapprox(ap, eo);
      } catch (const UnsupportedShape&) {
        analyzable = false;
      }
    }
    analyzable = analyzable && enc.has_value();

    auto prune = [&](const std::vector<std::size_t>& which, const FiniteModel& m) {
      const std::string cert = "model of size " + std::to_string(m.size);
      for (std::size_t u : which) {
        g.nodes[u].status = UnfoldNode::Status::Pruned;
        g.nodes[u].note = cert;
      }
      res.certificates.emplace_back(m, which);
    };
    auto items_for = [&](const std::vector<std::size_t>& which) {
      std::vector<Item> out;
      for (std::size_t u : which) out.push_back(items.at(u));
      return out;
    };

    if (analyzable) {
      const std::vector<Term> observed = probe_results();
      bool done = false;
      // (1) the empty partial function
      if (observed.empty()) {
        if (auto m = refute(*enc, items_for(ex))) {
          prune(ex, *m);
          top.empty = true;
          top.how = "empty";
          top.format = fresh_evar({});
          done = true;
        }
      }
      // (2) a single datum
      if (!done && observed.size() <= 1) {
        std::vector<Term> data;
        for (std::size_t u : ex) {
          const Term& t = g.nodes[u].term;
          if (g.nodes[u].status == UnfoldNode::Status::Exit && t.is_object() &&
              std::find(data.begin(), data.end(), t) == data.end())
            data.push_back(t);
        }
        for (const Term& d : data) {
          if (!observed.empty() && observed.front() != d) continue;
          std::vector<std::size_t> others;
          for (std::size_t u : ex)
            if (g.nodes[u].status != UnfoldNode::Status::Exit || g.nodes[u].term != d) others.push_back(u);
          if (others.empty()) break;
          if (auto m = refute(*enc, items_for(others))) {
            prune(others, *m);
            top.how = "datum";
            top.format = d;
            done = true;
            break;
          }
        }
      }
      // (3) one exit at a time, then msg of the rest
      if (!done) {
        for (std::size_t u : ex) {
          const Term r = result_of(g, u);
          bool seen = std::any_of(observed.begin(), observed.end(),
                                  [&](const Term& o) { return instance_of(o, r).has_value(); });
          if (seen) continue;
          if (auto m = refute(*enc, items_for({u}))) prune({u}, *m);
        }
      }
    }
    if (top.how.empty()) {
      top = syntactic_format(g, root);
      if (top.empty) top.how = "syntactic";
    }
    res.empty_function = top.empty;
    res.formats.push_back(top);
    // Formats of the other self-sufficient function nodes.
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
      if (v == root || !g.alive(v) || g.nodes[v].status != UnfoldNode::Status::Driven) continue;
      bool target = std::any_of(g.edges.begin(), g.edges.end(), [&](const UnfoldEdge& e) {
        return !e.removed && e.to == v && e.kind != UnfoldEdge::Kind::Narrow;
      });
      if (target && self_sufficient(g, v)) res.formats.push_back(syntactic_format(g, v));
    }
  }

  const Program& p_;
  ScpOptions o_;
  Clock::time_point start_;
  std::size_t fcm_calls_ = 0;
};

}  // namespace

ScpResult supercompile(const Program& p, const ScpOptions& options) { return Driver(p, options).run(); }

// ---------------------------------------------------------------------------
// Rendering

std::string print_report(const ScpResult& r) {
  std::ostringstream out;
  const UnfoldGraph& g = r.graph;
  out << "status: " << (r.status == ScpResult::Status::Ok ? "ok" : "limit exceeded (" + r.limit + ")") << "\n";
  out << "nodes: " << g.alive_count() << "\n";
  for (const PrunedRule& pr : g.pruned_rules)
    out << "pruned rule " << pr.rule + 1 << " (" << pr.function << ") at node " << pr.node << ": "
        << pr.certificate << "\n";
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    const UnfoldNode& n = g.nodes[v];
    if (n.status == UnfoldNode::Status::Pruned)
      out << "pruned exit at node " << v << " " << print_term(n.term) << ": " << n.note << "\n";
    if (n.status == UnfoldNode::Status::Stopped)
      out << "stopped at node " << v << " " << print_term(n.term) << ": " << n.note << "\n";
  }
  for (const OutputFormat& f : r.formats) {
    out << "output format";
    if (f.node != g.root) out << " of node " << f.node;
    out << ": " << print_term(f.format) << " (" << f.how << ")\n";
  }
  if (r.empty_function) out << "empty partial function\n";
  if (r.residual) out << "residual rules: " << r.residual->rules.size() << "\n";
  out << "model searches: " << r.fcm_calls << "\n";
  return out.str();
}

std::string graph_to_dot(const UnfoldGraph& g) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream out;
  out << "digraph unfold {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    const UnfoldNode& n = g.nodes[v];
    if (!g.alive(v)) continue;
    std::string style;
    switch (n.status) {
      case UnfoldNode::Status::Exit:
        style = ", shape=ellipse";
        break;
      case UnfoldNode::Status::Pruned:
        style = ", shape=ellipse, style=dashed";
        break;
      case UnfoldNode::Status::Stopped:
      case UnfoldNode::Status::Dead:
        style = ", style=bold";
        break;
      default:
        break;
    }
    out << "  n" << v << " [label=" << quote(std::to_string(v) + ": " + print_term(n.term)) << style << "];\n";
  }
  for (const UnfoldEdge& e : g.edges) {
    if (e.removed) continue;
    std::string label;
    for (const auto& [x, t] : e.subst.bindings()) {
      if (!label.empty()) label += ", ";
      label += to_string(x) + "=" + print_term(t);
    }
    out << "  n" << e.from << " -> n" << e.to << " [label=" << quote(label);
    if (e.kind == UnfoldEdge::Kind::Reference) out << ", style=dashed";
    if (e.kind == UnfoldEdge::Kind::Generalize) out << ", style=dotted";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace superfcm
