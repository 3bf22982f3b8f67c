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

#include <random>

#include "../support/oracles.hpp"
#include "superfcm/errors.hpp"
#include "superfcm/interpreter.hpp"
#include "superfcm/syntax.hpp"

using namespace superfcm;

namespace {

const char* kFib =
    "start: Fib(e.n);\n"
    "Fib(e.n) = F(e.n, 'b', 'a');\n"
    "F(ε, e.xs, e.ys) = (e.xs):(e.ys);\n"
    "F('I':e.ns, e.xs, e.ys) = F(e.ns, e.ys, e.xs:e.ys);\n";

Substitution bind_n(std::size_t n) {
  return Substitution{{Var{VarKind::E, "n"}, Term::word(std::string(n, 'I'))}};
}

}  // namespace

TEST_CASE("Fib('III')") {
  Program p = parse_program(kFib);
  EvalResult r = eval(p, bind_n(3));
  REQUIRE(r.kind == EvalResult::Kind::Value);
  CHECK(print_term(r.term) == "('aba'):('baaba')");
  CHECK(r.steps == 5);
}

TEST_CASE("Fib computes consecutive Fibonacci words") {
  Program p = parse_program(kFib);
  const auto w = oracle::fibonacci_words(12);
  for (std::size_t n = 0; n + 1 < w.size(); ++n) {
    EvalResult r = eval(p, bind_n(n));
    REQUIRE(r.kind == EvalResult::Kind::Value);
    CHECK(r.term == concat({Term::paren(Term::word(w[n])), Term::paren(Term::word(w[n + 1]))}));
  }
}

TEST_CASE("stuck, fuel and ill-formed inputs") {
  Program p = parse_program("start: g(e.x); g('a':e.x) = g(e.x); h(e.x) = h(e.x);");
  EvalResult stuck = eval(p, Substitution{{Var{VarKind::E, "x"}, Term::word("aab")}});
  CHECK(stuck.kind == EvalResult::Kind::Stuck);
  CHECK(stuck.failing_call == parse_term("g('b')"));
  EvalResult loop = evaluate(p, parse_term("h('a')"), 50);
  CHECK(loop.kind == EvalResult::Kind::FuelExhausted);
  CHECK(loop.steps == 50);
  CHECK_THROWS(eval(p, Substitution{}));
}

TEST_CASE("inner calls are evaluated first, left to right") {
  Program p = parse_program("start: f(g('a'), g('b')); f(e.x, e.y) = e.y:e.x; g(e.z) = (e.z);");
  CHECK(find_redex(p.initial) == parse_term("g('a')"));
  EvalResult r = evaluate(p, p.initial);
  CHECK(r.term == parse_term("('b'):('a')"));
  CHECK(r.steps == 3);
}

TEST_CASE("evaluation agrees with the reference interpreter on random programs") {
  std::mt19937_64 rng(21);
  const std::vector<char> alphabet{'a', 'b'};
  for (int i = 0; i < 200; ++i) {
    Program p = oracle::random_flat_program(rng);
    for (int k = 0; k < 5; ++k) {
      Substitution th{{Var{VarKind::E, "x"}, oracle::random_object(rng, alphabet, 5, false)}};
      const Term start = apply(th, p.initial);
      EvalResult got = evaluate(p, start, 100);
      oracle::Outcome want = oracle::run(p, start, 100);
      CHECK(got.steps == want.steps);
      if (want.kind == oracle::Outcome::Value) {
        CHECK(got.kind == EvalResult::Kind::Value);
        CHECK(got.term == want.value);
      } else if (want.kind == oracle::Outcome::Stuck) {
        CHECK(got.kind == EvalResult::Kind::Stuck);
      } else {
        CHECK(got.kind == EvalResult::Kind::FuelExhausted);
      }
    }
  }
}

TEST_CASE("nondeterministic steps agree with the reference") {
  std::mt19937_64 rng(22);
  const std::vector<char> alphabet{'a', 'b'};
  for (int i = 0; i < 200; ++i) {
    Program p = oracle::random_flat_program(rng);
    Term state = apply(Substitution{{Var{VarKind::E, "x"}, oracle::random_object(rng, alphabet, 5, false)}},
                       p.initial);
    for (int d = 0; d < 4; ++d) {
      std::vector<Term> got = nd_step(p, state);
      std::vector<Term> want = oracle::nd_successors(p, state);
      std::sort(got.begin(), got.end());
      std::sort(want.begin(), want.end());
      CHECK(got == want);
      if (want.empty()) break;
      state = want[rng() % want.size()];
    }
  }
}

TEST_CASE("work grows with the input for scanning matches") {
  Program p = parse_program("start: f(e.q); f(e.x:'b':e.y) = 'T'; f(e.x) = 'F';");
  auto work = [&](std::size_t n) {
    return evaluate(p, Term::call("f", {Term::word(std::string(n, 'a'))})).work;
  };
  CHECK(work(100) > work(10));
}
