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

#ifndef SUPERFCM_INTERPRETER_HPP
#define SUPERFCM_INTERPRETER_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "superfcm/program.hpp"
#include "superfcm/term.hpp"

namespace superfcm {

struct EvalResult {
  enum class Kind { Value, Stuck, FuelExhausted };

  Kind kind = Kind::Value;
  /// The object result for Value, the last state otherwise.
  Term term;
  /// The call no rule matches, for Stuck.
  Term failing_call;
  std::size_t steps = 0;
  /// Steps plus matcher comparisons.
  std::size_t work = 0;
};

std::string kind_name(EvalResult::Kind kind);

inline constexpr std::size_t kDefaultFuel = 1'000'000;

/// The leftmost-innermost call whose arguments are object terms, or merely
/// passive ones when objects_only is false.
std::optional<Term> find_redex(const Term& state, bool objects_only = true);

/// The state with that call replaced.
Term replace_redex(const Term& state, const Term& replacement, bool objects_only = true);

/// One rewriting step with the first applicable rule; nullopt when stuck or
/// when the state has no call left.
std::optional<Term> step(const Program& p, const Term& state, MatchWork* work = nullptr);

/// Iterates step from the given ground state.
EvalResult evaluate(const Program& p, const Term& state, std::size_t fuel = kDefaultFuel);

/// Iterates step from the initial term under an object substitution.
EvalResult eval(const Program& p, const Substitution& theta, std::size_t fuel = kDefaultFuel);

/// Every successor under any rule and any matching substitution, at the
/// same redex.
std::vector<Term> nd_step(const Program& p, const Term& state);

}  // namespace superfcm

#endif  // SUPERFCM_INTERPRETER_HPP
