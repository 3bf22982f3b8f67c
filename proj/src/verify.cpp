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

#include "superfcm/verify.hpp"

#include "superfcm/errors.hpp"
#include "superfcm/interpreter.hpp"

namespace superfcm {

std::string kind_name(Verdict::Kind k) { return k == Verdict::Kind::Safe ? "SAFE" : "UNKNOWN"; }

namespace {

Verdict search(Theory th, const VerifyOptions& options) {
  Verdict v;
  v.theory = trim_alphabet(slice_for_goal(th));
  FindResult r = find_model(v.theory, options.finder);
  v.seconds = r.seconds;
  if (r.status == FindStatus::Found) {
    if (!check_theory(*r.model, v.theory)) throw Error("model finder returned a non-countermodel");
    v.kind = Verdict::Kind::Safe;
    v.reason = "model of size " + std::to_string(r.model->size);
    v.model = std::move(r.model);
  } else {
    v.reason = r.status == FindStatus::DeadlineExceeded ? "deadline" : "sizes exhausted";
  }
  return v;
}

}  // namespace

Verdict verify_target(const Program& p, const Target& target, const VerifyOptions& options) {
  EncodeOptions eo;
  eo.project_counters = options.project_counters;
  if (target.kind == Target::Kind::Reach) eo.keep_functions.insert(target.function);
  ReachabilityEncoding enc;
  try {
    enc = encode_program_overapprox(p, eo);
  } catch (const UnsupportedShape& e) {
    Verdict v;
    v.reason = std::string("unsupported shape: ") + e.what();
    return v;
  }
  Theory th = enc.theory;
  th.goal = encode_exit_goal(enc, target);
  return search(std::move(th), options);
}

Theory one_step_theory(const Program& p, std::size_t rule_number) {
  if (rule_number == 0 || rule_number > p.rules.size())
    throw Error("rule " + std::to_string(rule_number) + " does not exist");
  const Rule& rule = p.rules[rule_number - 1];
  std::optional<Term> redex = find_redex(p.initial, false);
  if (!redex) throw Error("the initial term has no call");
  if (redex->atom().function() != rule.function())
    throw Error("rule " + std::to_string(rule_number) + " does not define " + redex->atom().function());
  Theory th = encode_data_theory(p.alphabet);
  th.goal = encode_one_step_goal(*redex, rule, p.alphabet);
  return th;
}

Verdict verify_one_step(const Program& p, std::size_t rule_number, const VerifyOptions& options) {
  return search(one_step_theory(p, rule_number), options);
}

}  // namespace superfcm
