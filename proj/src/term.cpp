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

#include "superfcm/term.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>

#include "superfcm/errors.hpp"

namespace superfcm {

char kind_prefix(VarKind kind) {
  switch (kind) {
    case VarKind::E:
      return 'e';
    case VarKind::S:
      return 's';
    case VarKind::T:
      return 't';
  }
  return '?';
}

std::string to_string(const Var& v) {
  std::string out;
  out += kind_prefix(v.kind);
  out += '.';
  out += v.name;
  return out;
}

// ---------------------------------------------------------------------------
// Atom

Atom Atom::character(char c) {
  Atom a;
  a.kind_ = Kind::Char;
  a.ch_ = c;
  return a;
}

Atom Atom::variable(Var v) {
  Atom a;
  a.kind_ = Kind::Var;
  a.var_ = std::move(v);
  return a;
}

Atom Atom::paren(Term inner) {
  Atom a;
  a.kind_ = Kind::Paren;
  a.args_.push_back(std::move(inner));
  return a;
}

Atom Atom::call(std::string function, std::vector<Term> args) {
  Atom a;
  a.kind_ = Kind::Call;
  a.function_ = std::move(function);
  a.args_ = std::move(args);
  return a;
}

const Term& Atom::inner() const {
  assert(kind_ == Kind::Paren);
  return args_.front();
}

bool operator==(const Atom& a, const Atom& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Atom::Kind::Char:
      return a.ch_ == b.ch_;
    case Atom::Kind::Var:
      return a.var_ == b.var_;
    case Atom::Kind::Paren:
      return a.args_ == b.args_;
    case Atom::Kind::Call:
      return a.function_ == b.function_ && a.args_ == b.args_;
  }
  return false;
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  switch (a.kind_) {
    case Atom::Kind::Char:
      return a.ch_ <=> b.ch_;
    case Atom::Kind::Var:
      return a.var_ <=> b.var_;
    case Atom::Kind::Call:
      if (auto c = a.function_ <=> b.function_; c != 0) return c;
      [[fallthrough]];
    case Atom::Kind::Paren:
      return std::lexicographical_compare_three_way(a.args_.begin(), a.args_.end(),
                                                    b.args_.begin(), b.args_.end());
  }
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Term

Term Term::word(std::string_view chars) {
  std::vector<Atom> atoms;
  atoms.reserve(chars.size());
  for (char c : chars) atoms.push_back(Atom::character(c));
  return Term(std::move(atoms));
}

Term::Kind Term::kind() const {
  if (atoms_.empty()) return Kind::Empty;
  if (atoms_.size() > 1) return Kind::Concat;
  switch (atoms_.front().kind()) {
    case Atom::Kind::Char:
      return Kind::Char;
    case Atom::Kind::Var:
      return Kind::Var;
    case Atom::Kind::Paren:
      return Kind::Paren;
    case Atom::Kind::Call:
      return Kind::Call;
  }
  return Kind::Concat;
}

bool Term::is_passive() const {
  for (const Atom& a : atoms_) {
    if (a.is_call()) return false;
    if (a.is_paren() && !a.inner().is_passive()) return false;
  }
  return true;
}

bool Term::is_ground() const {
  for (const Atom& a : atoms_) {
    if (a.is_var()) return false;
    for (const Term& child : a.args())
      if (!child.is_ground()) return false;
  }
  return true;
}

std::size_t Term::weight() const {
  std::size_t w = 0;
  for (const Atom& a : atoms_) {
    ++w;
    for (const Term& child : a.args()) w += child.weight();
  }
  return w;
}

Term Term::slice(std::size_t begin, std::size_t end) const {
  return Term(std::vector<Atom>(atoms_.begin() + static_cast<std::ptrdiff_t>(begin),
                                atoms_.begin() + static_cast<std::ptrdiff_t>(end)));
}

void Term::append(const Term& tail) {
  atoms_.insert(atoms_.end(), tail.atoms_.begin(), tail.atoms_.end());
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  return std::lexicographical_compare_three_way(a.atoms_.begin(), a.atoms_.end(),
                                                b.atoms_.begin(), b.atoms_.end());
}

Term concat(std::initializer_list<Term> parts) {
  return concat(std::span<const Term>(parts.begin(), parts.size()));
}

Term concat(std::span<const Term> parts) {
  Term out;
  for (const Term& p : parts) out.append(p);
  return out;
}

// ---------------------------------------------------------------------------
// RawTerm

RawTerm RawTerm::character(char c) {
  RawTerm r;
  r.kind = Kind::Char;
  r.ch = c;
  return r;
}

RawTerm RawTerm::variable(Var v) {
  RawTerm r;
  r.kind = Kind::Var;
  r.var = std::move(v);
  return r;
}

RawTerm RawTerm::paren(RawTerm inner) {
  RawTerm r;
  r.kind = Kind::Paren;
  r.children.push_back(std::move(inner));
  return r;
}

RawTerm RawTerm::call(std::string function, std::vector<RawTerm> args) {
  RawTerm r;
  r.kind = Kind::Call;
  r.function = std::move(function);
  r.children = std::move(args);
  return r;
}

RawTerm RawTerm::concat(std::vector<RawTerm> parts) {
  RawTerm r;
  r.kind = Kind::Concat;
  r.children = std::move(parts);
  return r;
}

namespace {

void flatten_into(const RawTerm& raw, std::vector<Atom>& out) {
  switch (raw.kind) {
    case RawTerm::Kind::Empty:
      return;
    case RawTerm::Kind::Char:
      out.push_back(Atom::character(raw.ch));
      return;
    case RawTerm::Kind::Var:
      out.push_back(Atom::variable(raw.var));
      return;
    case RawTerm::Kind::Paren:
      out.push_back(Atom::paren(normalize(raw.children.front())));
      return;
    case RawTerm::Kind::Call: {
      std::vector<Term> args;
      args.reserve(raw.children.size());
      for (const RawTerm& c : raw.children) args.push_back(normalize(c));
      out.push_back(Atom::call(raw.function, std::move(args)));
      return;
    }
    case RawTerm::Kind::Concat:
      for (const RawTerm& c : raw.children) flatten_into(c, out);
      return;
  }
}

RawTerm atom_to_raw(const Atom& a) {
  switch (a.kind()) {
    case Atom::Kind::Char:
      return RawTerm::character(a.ch());
    case Atom::Kind::Var:
      return RawTerm::variable(a.var());
    case Atom::Kind::Paren:
      return RawTerm::paren(to_raw(a.inner()));
    case Atom::Kind::Call: {
      std::vector<RawTerm> args;
      for (const Term& t : a.args()) args.push_back(to_raw(t));
      return RawTerm::call(a.function(), std::move(args));
    }
  }
  return {};
}

}  // namespace

Term normalize(const RawTerm& raw) {
  std::vector<Atom> atoms;
  flatten_into(raw, atoms);
  return Term(std::move(atoms));
}

RawTerm to_raw(const Term& t) {
  if (t.empty()) return RawTerm::empty();
  RawTerm acc = atom_to_raw(t.atoms().back());
  for (std::size_t i = t.size() - 1; i-- > 0;)
    acc = RawTerm::concat({atom_to_raw(t[i]), std::move(acc)});
  return acc;
}

// ---------------------------------------------------------------------------
// Variables

bool VarSets::contains(const Var& v) const {
  return std::find(order.begin(), order.end(), v) != order.end();
}

namespace {

void collect_vars(const Term& t, VarSets& out) {
  for (const Atom& a : t.atoms()) {
    if (a.is_var()) {
      if (out.contains(a.var())) continue;
      out.order.push_back(a.var());
      switch (a.var().kind) {
        case VarKind::E:
          out.e.push_back(a.var());
          break;
        case VarKind::S:
          out.s.push_back(a.var());
          break;
        case VarKind::T:
          out.t.push_back(a.var());
          break;
      }
    }
    for (const Term& child : a.args()) collect_vars(child, out);
  }
}

}  // namespace

VarSets vars(const Term& t) {
  VarSets out;
  collect_vars(t, out);
  return out;
}

std::size_t multiplicity(const Var& v, const Term& t) {
  std::size_t n = 0;
  for (const Atom& a : t.atoms()) {
    if (a.is_var() && a.var() == v) ++n;
    for (const Term& child : a.args()) n += multiplicity(v, child);
  }
  return n;
}

bool has_call(const Term& t) { return !t.is_passive(); }

bool in_range(VarKind kind, const Term& value) {
  if (kind == VarKind::E) return true;
  if (value.size() != 1) return false;
  const Atom& a = value.atom();
  if (kind == VarKind::S) return a.is_char() || a.is_var(VarKind::S);
  return a.is_char() || a.is_var(VarKind::S) || a.is_var(VarKind::T) || a.is_paren();
}

// ---------------------------------------------------------------------------
// Substitution

Substitution::Substitution(std::initializer_list<std::pair<Var, Term>> bindings) {
  for (const auto& [v, t] : bindings) bind(v, t);
}

void Substitution::bind(const Var& v, Term value) {
  if (!in_range(v.kind, value))
    throw SortViolation("value out of range for variable " + to_string(v));
  bindings_.insert_or_assign(v, std::move(value));
}

const Term* Substitution::find(const Var& v) const {
  auto it = bindings_.find(v);
  return it == bindings_.end() ? nullptr : &it->second;
}

Substitution Substitution::then(const Substitution& other) const {
  Substitution out;
  for (const auto& [v, t] : bindings_) out.bindings_.emplace(v, apply(other, t));
  for (const auto& [v, t] : other.bindings_) out.bindings_.emplace(v, t);
  return out;
}

Substitution Substitution::restricted_to(std::span<const Var> keep) const {
  Substitution out;
  for (const Var& v : keep)
    if (const Term* t = find(v)) out.bindings_.emplace(v, *t);
  return out;
}

Term apply(const Substitution& theta, const Term& t) {
  if (theta.empty()) return t;
  std::vector<Atom> out;
  out.reserve(t.size());
  for (const Atom& a : t.atoms()) {
    switch (a.kind()) {
      case Atom::Kind::Char:
        out.push_back(a);
        break;
      case Atom::Kind::Var:
        if (const Term* value = theta.find(a.var())) {
          out.insert(out.end(), value->atoms().begin(), value->atoms().end());
        } else {
          out.push_back(a);
        }
        break;
      case Atom::Kind::Paren:
        out.push_back(Atom::paren(apply(theta, a.inner())));
        break;
      case Atom::Kind::Call: {
        std::vector<Term> args;
        args.reserve(a.args().size());
        for (const Term& arg : a.args()) args.push_back(apply(theta, arg));
        out.push_back(Atom::call(a.function(), std::move(args)));
        break;
      }
    }
  }
  return Term(std::move(out));
}

// ---------------------------------------------------------------------------
// Matching

namespace {

struct Frame {
  const Atom* p;
  std::size_t pn;
  const Atom* v;
  std::size_t vn;
};

class Matcher {
 public:
  Matcher(Substitution seed, const std::function<bool(const Substitution&)>& visit,
          MatchWork* work)
      : theta_(std::move(seed)), visit_(visit), work_(work) {}

  bool run(const Term& pattern, const Term& value) {
    stack_.push_back(Frame{pattern.atoms().data(), pattern.size(), value.atoms().data(),
                           value.size()});
    return step();
  }

 private:
  void tick(std::size_t n = 1) {
    if (work_ != nullptr) work_->comparisons += n;
  }

  // Length of the rest of a frame when it holds no unbound e-variable.
  std::optional<std::size_t> fixed_length(const Atom* p, std::size_t pn) const {
    std::size_t len = 0;
    for (std::size_t i = 0; i < pn; ++i) {
      if (p[i].is_var(VarKind::E)) {
        const Term* bound = theta_.find(p[i].var());
        if (bound == nullptr) return std::nullopt;
        len += bound->size();
      } else {
        ++len;
      }
    }
    return len;
  }

  bool continue_with(Frame advanced) {
    Frame saved = stack_.back();
    stack_.back() = advanced;
    bool stop = step();
    stack_.back() = saved;
    return stop;
  }

  bool step() {
    if (stack_.empty()) return visit_(theta_);
    Frame f = stack_.back();
    while (f.pn > 0 && f.p->is_char()) {
      tick();
      if (f.vn == 0 || !f.v->is_char() || f.v->ch() != f.p->ch()) return false;
      ++f.p, --f.pn, ++f.v, --f.vn;
    }
    if (f.pn == 0) {
      if (f.vn != 0) return false;
      Frame saved = stack_.back();
      stack_.pop_back();
      bool stop = step();
      stack_.push_back(saved);
      return stop;
    }
    const Atom& a = *f.p;
    switch (a.kind()) {
      case Atom::Kind::Char:
        break;  // handled above
      case Atom::Kind::Paren: {
        tick();
        if (f.vn == 0 || !f.v->is_paren()) return false;
        const Term& pin = a.inner();
        const Term& vin = f.v->inner();
        Frame saved = stack_.back();
        stack_.back() = Frame{f.p + 1, f.pn - 1, f.v + 1, f.vn - 1};
        stack_.push_back(Frame{pin.atoms().data(), pin.size(), vin.atoms().data(), vin.size()});
        bool stop = step();
        stack_.pop_back();
        stack_.back() = saved;
        return stop;
      }
      case Atom::Kind::Call: {
        tick();
        if (f.vn == 0 || !f.v->is_call() || f.v->function() != a.function() ||
            f.v->args().size() != a.args().size())
          return false;
        Frame saved = stack_.back();
        stack_.back() = Frame{f.p + 1, f.pn - 1, f.v + 1, f.vn - 1};
        const auto& pargs = a.args();
        const auto& vargs = f.v->args();
        for (std::size_t i = pargs.size(); i-- > 0;)
          stack_.push_back(Frame{pargs[i].atoms().data(), pargs[i].size(), vargs[i].atoms().data(),
                                 vargs[i].size()});
        bool stop = step();
        stack_.resize(stack_.size() - pargs.size());
        stack_.back() = saved;
        return stop;
      }
      case Atom::Kind::Var:
        return match_var(f);
    }
    return false;
  }

  bool match_var(const Frame& f) {
    const Var& v = f.p->var();
    const Term* bound = theta_.find(v);
    if (bound != nullptr) {
      if (bound->size() > f.vn) {
        tick();
        return false;
      }
      for (std::size_t i = 0; i < bound->size(); ++i) {
        tick();
        if (!((*bound)[i] == f.v[i])) return false;
      }
      const std::size_t n = bound->size();
      return continue_with(Frame{f.p + 1, f.pn - 1, f.v + n, f.vn - n});
    }
    if (v.kind != VarKind::E) {
      tick();
      if (f.vn == 0) return false;
      Term value(*f.v);
      if (!in_range(v.kind, value)) return false;
      theta_.bind(v, std::move(value));
      bool stop = continue_with(Frame{f.p + 1, f.pn - 1, f.v + 1, f.vn - 1});
      theta_.erase(v);
      return stop;
    }
    std::size_t lo = 0;
    std::size_t hi = f.vn;
    if (auto rest = fixed_length(f.p + 1, f.pn - 1)) {
      if (*rest > f.vn) return false;
      lo = hi = f.vn - *rest;
    }
    for (std::size_t len = lo; len <= hi; ++len) {
      tick();
      theta_.bind(v, Term(std::vector<Atom>(f.v, f.v + len)));
      bool stop = continue_with(Frame{f.p + 1, f.pn - 1, f.v + len, f.vn - len});
      theta_.erase(v);
      if (stop) return true;
    }
    return false;
  }

  Substitution theta_;
  const std::function<bool(const Substitution&)>& visit_;
  MatchWork* work_;
  std::vector<Frame> stack_;
};

}  // namespace

bool enumerate_matches(const Term& pattern, const Term& value, const Substitution& seed,
                       const std::function<bool(const Substitution&)>& visit, MatchWork* work) {
  Matcher m(seed, visit, work);
  return m.run(pattern, value);
}

std::optional<Substitution> instance_of(const Term& s, const Term& t) {
  std::optional<Substitution> found;
  enumerate_matches(t, s, {}, [&](const Substitution& theta) {
    found = theta;
    return true;
  });
  return found;
}

// ---------------------------------------------------------------------------
// Names

void NameSupply::reserve(const Term& t) {
  for (const Var& v : vars(t).order) used_.insert(v.name);
}

Var NameSupply::fresh(VarKind kind, std::string_view base) {
  std::string stem(base);
  while (!stem.empty() && (std::isdigit(static_cast<unsigned char>(stem.back())) != 0))
    stem.pop_back();
  if (stem.empty()) stem = "v";
  for (std::size_t i = 1;; ++i) {
    std::string name = stem + std::to_string(i);
    if (used_.insert(name).second) return Var{kind, name};
  }
}

Var NameSupply::claim(const Var& v) {
  if (used_.insert(v.name).second) return v;
  return fresh(v.kind, v.name);
}

Term rename(const Term& t, const std::map<Var, Var>& renaming) {
  std::vector<Atom> out;
  out.reserve(t.size());
  for (const Atom& a : t.atoms()) {
    switch (a.kind()) {
      case Atom::Kind::Char:
        out.push_back(a);
        break;
      case Atom::Kind::Var: {
        auto it = renaming.find(a.var());
        out.push_back(it == renaming.end() ? a : Atom::variable(it->second));
        break;
      }
      case Atom::Kind::Paren:
        out.push_back(Atom::paren(rename(a.inner(), renaming)));
        break;
      case Atom::Kind::Call: {
        std::vector<Term> args;
        for (const Term& arg : a.args()) args.push_back(rename(arg, renaming));
        out.push_back(Atom::call(a.function(), std::move(args)));
        break;
      }
    }
  }
  return Term(std::move(out));
}

}  // namespace superfcm
