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

#ifndef SUPERFCM_VERIFY_HPP
#define SUPERFCM_VERIFY_HPP

#include <cstddef>
#include <optional>
#include <string>

#include "superfcm/encoder.hpp"
#include "superfcm/logic.hpp"
#include "superfcm/model_finder.hpp"
#include "superfcm/program.hpp"

namespace superfcm {

struct VerifyOptions {
  FinderOptions finder;
  bool project_counters = true;
};

/// SAFE carries a countermodel; everything else is UNKNOWN with a reason.
struct Verdict {
  enum class Kind { Safe, Unknown };

  Kind kind = Kind::Unknown;
  std::string reason;
  std::optional<FiniteModel> model;
  /// The theory handed to the model finder.
  Theory theory;
  double seconds = 0;

  bool safe() const { return kind == Kind::Safe; }
};

std::string kind_name(Verdict::Kind k);

/// Refutes reachability of `target` in a flat tail program.
Verdict verify_target(const Program& p, const Target& target, const VerifyOptions& options = {});

/// Theory for the one-step question: can rule `rule_number` (1-based
/// position in the program) fire on the first call of the initial term?
Theory one_step_theory(const Program& p, std::size_t rule_number);
Verdict verify_one_step(const Program& p, std::size_t rule_number, const VerifyOptions& options = {});

}  // namespace superfcm

#endif  // SUPERFCM_VERIFY_HPP
