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

#include <doctest.h>

#include "superfcm/errors.hpp"
#include "superfcm/syntax.hpp"
#include "superfcm/term.hpp"

using namespace superfcm;

TEST_CASE("concatenation is flat and ε is the unit") {
  Term a = concat({Term::word("ab"), Term(), Term::word("c")});
  CHECK(a == Term::word("abc"));
  CHECK(a.size() == 3);
  CHECK(concat({Term(), Term()}).empty());
  CHECK(concat({Term::paren(Term::word("a")), Term::ch('b')}).size() == 2);
}

TEST_CASE("passive, ground and object terms") {
  Term call = parse_term("f('a', e.x)");
  CHECK_FALSE(call.is_passive());
  CHECK(has_call(parse_term("('a':g())")));
  Term open = parse_term("'a':e.x");
  CHECK(open.is_passive());
  CHECK_FALSE(open.is_ground());
  CHECK(parse_term("('a'):'b'").is_object());
}

TEST_CASE("substitution applies to every occurrence") {
  Substitution th{{Var{VarKind::E, "x"}, Term::word("ab")}};
  CHECK(apply(th, parse_term("e.x:'c':(e.x)")) == parse_term("'abc':('ab')"));
  CHECK(apply(th, parse_term("f(e.x, e.y)")) == parse_term("f('ab', e.y)"));
}

TEST_CASE("sort ranges") {
  CHECK(in_range(VarKind::S, Term::ch('a')));
  CHECK_FALSE(in_range(VarKind::S, Term::word("ab")));
  CHECK_FALSE(in_range(VarKind::S, Term::paren(Term())));
  CHECK(in_range(VarKind::T, Term::paren(Term::word("ab"))));
  CHECK_FALSE(in_range(VarKind::T, Term()));
  CHECK(in_range(VarKind::E, Term()));
  Substitution th;
  CHECK_THROWS_AS(th.bind(Var{VarKind::S, "x"}, Term::word("ab")), SortViolation);
}

TEST_CASE("variable sets and multiplicity") {
  Term t = parse_term("e.x:s.y:(e.x:t.z)");
  VarSets vs = vars(t);
  REQUIRE(vs.order.size() == 3);
  CHECK(vs.order[0] == Var{VarKind::E, "x"});
  CHECK(multiplicity(Var{VarKind::E, "x"}, t) == 2);
  CHECK(multiplicity(Var{VarKind::T, "z"}, t) == 1);
}

TEST_CASE("instance_of finds the witnessing substitution") {
  Term general = parse_term("f(e.x, 'a':e.y)");
  Term special = parse_term("f('bb', 'a':e.q)");
  auto th = instance_of(special, general);
  REQUIRE(th);
  CHECK(apply(*th, general) == special);
  CHECK_FALSE(instance_of(general, special));
  CHECK_FALSE(instance_of(parse_term("f('b', 'b')"), general));
  // Repeated variables must agree.
  CHECK(instance_of(parse_term("g('ab', 'ab')"), parse_term("g(e.x, e.x)")));
  CHECK_FALSE(instance_of(parse_term("g('ab', 'a')"), parse_term("g(e.x, e.x)")));
}

TEST_CASE("fresh names avoid reserved ones") {
  NameSupply names;
  names.reserve(parse_term("e.x:e.x1"));
  Var v = names.fresh(VarKind::E, "x");
  CHECK(v.name != "x");
  CHECK(v.name != "x1");
  Var w = names.fresh(VarKind::E, "x");
  CHECK(w.name != v.name);
}

TEST_CASE("composition of substitutions") {
  Substitution a{{Var{VarKind::E, "x"}, parse_term("'a':e.y")}};
  Substitution b{{Var{VarKind::E, "y"}, Term::word("bc")}};
  Substitution c = a.then(b);
  CHECK(apply(c, Term::e("x")) == Term::word("abc"));
  CHECK(apply(c, Term::e("y")) == Term::word("bc"));
}
