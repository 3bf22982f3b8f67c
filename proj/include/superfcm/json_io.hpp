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

#ifndef SUPERFCM_JSON_IO_HPP
#define SUPERFCM_JSON_IO_HPP

#include <json.hpp>

#include "superfcm/interpreter.hpp"
#include "superfcm/logic.hpp"
#include "superfcm/model_finder.hpp"
#include "superfcm/program.hpp"
#include "superfcm/supercompiler.hpp"
#include "superfcm/verify.hpp"

namespace superfcm {

// Terms are stored in their concrete syntax.
nlohmann::json to_json(const Program& p);
nlohmann::json to_json(const FiniteModel& m);
nlohmann::json to_json(const Theory& th);
nlohmann::json to_json(const UnfoldGraph& g);
nlohmann::json to_json(const ScpResult& r);
nlohmann::json to_json(const EvalResult& r);
nlohmann::json to_json(const Verdict& v);

/// Inverse of to_json(Program).
Program program_from_json(const nlohmann::json& j);

/// Two-space indented text.
template <class T>
std::string emit_json(const T& artifact) {
  return to_json(artifact).dump(2);
}

}  // namespace superfcm

#endif  // SUPERFCM_JSON_IO_HPP
