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

#include "superfcm/json_io.hpp"

#include "superfcm/syntax.hpp"

namespace superfcm {

using nlohmann::json;

namespace {

json subst_json(const Substitution& s) {
  json out = json::object();
  for (const auto& [v, t] : s.bindings()) out[to_string(v)] = print_term(t);
  return out;
}

std::string chars_text(const std::vector<char>& cs) {
  return std::string(cs.begin(), cs.end());
}

}  // namespace

json to_json(const Program& p) {
  json rules = json::array();
  for (const Rule& r : p.rules)
    rules.push_back({{"index", r.index}, {"lhs", print_term(r.lhs)}, {"rhs", print_term(r.rhs)}});
  return {{"initial", print_term(p.initial)}, {"alphabet", chars_text(p.alphabet)}, {"rules", rules}};
}

Program program_from_json(const json& j) {
  std::vector<std::pair<Term, Term>> rules;
  for (const json& r : j.at("rules"))
    rules.emplace_back(parse_term(r.at("lhs").get<std::string>()), parse_term(r.at("rhs").get<std::string>()));
  const std::string alphabet = j.value("alphabet", std::string());
  return make_program(parse_term(j.at("initial").get<std::string>()), std::move(rules),
                      std::vector<char>(alphabet.begin(), alphabet.end()));
}

json to_json(const FiniteModel& m) {
  json chars = json::object();
  for (const auto& [c, v] : m.chars) chars[std::string(1, c)] = v;
  json concat = json::array();
  for (std::size_t a = 0; a < m.size; ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < m.size; ++b) row.push_back(m.op(static_cast<int>(a), static_cast<int>(b)));
    concat.push_back(row);
  }
  json preds = json::object();
  for (const auto& [name, table] : m.predicates) {
    json truth = json::array();
    for (char t : table.truth) truth.push_back(t != 0);
    preds[name] = {{"arity", table.arity}, {"truth", truth}};
  }
  return {{"size", m.size}, {"epsilon", m.epsilon}, {"chars", chars},
          {"concat", concat}, {"beta", m.beta}, {"predicates", preds}};
}

json to_json(const Theory& th) {
  json axioms = json::array();
  for (const Axiom& a : th.axioms) axioms.push_back({{"role", role_name(a.role)}, {"formula", print_formula(a.formula)}});
  json preds = json::object();
  for (const auto& [name, arity] : th.predicates) preds[name] = arity;
  json out = {{"alphabet", chars_text(th.alphabet)}, {"predicates", preds}, {"axioms", axioms}};
  out["goal"] = th.goal ? json(print_formula(*th.goal)) : json(nullptr);
  return out;
}

json to_json(const UnfoldGraph& g) {
  json nodes = json::array();
  for (const UnfoldNode& n : g.nodes) {
    json node = {{"id", n.id}, {"term", print_term(n.term)}, {"depth", n.depth}, {"status", status_name(n.status)}};
    node["parent"] = n.parent ? json(*n.parent) : json(nullptr);
    if (!n.note.empty()) node["note"] = n.note;
    nodes.push_back(node);
  }
  json edges = json::array();
  for (const UnfoldEdge& e : g.edges) {
    if (e.removed) continue;
    json edge = {{"kind", kind_name(e.kind)}, {"from", e.from}, {"to", e.to}, {"subst", subst_json(e.subst)}};
    if (e.kind == UnfoldEdge::Kind::Narrow) edge["rule"] = e.rule + 1;
    edges.push_back(edge);
  }
  json pruned = json::array();
  for (const PrunedRule& r : g.pruned_rules)
    pruned.push_back({{"node", r.node}, {"function", r.function}, {"rule", r.rule + 1}, {"certificate", r.certificate}});
  return {{"root", g.root}, {"nodes", nodes}, {"edges", edges}, {"pruned_rules", pruned}};
}

json to_json(const ScpResult& r) {
  json out;
  out["status"] = r.status == ScpResult::Status::Ok ? "ok" : "limit_exceeded";
  if (!r.limit.empty()) out["limit"] = r.limit;
  out["graph"] = to_json(r.graph);
  out["residual"] = r.residual ? to_json(*r.residual) : json(nullptr);
  json functions = json::object();
  for (const auto& [node, name] : r.functions) functions[name] = node;
  out["functions"] = functions;
  json formats = json::array();
  for (const OutputFormat& f : r.formats)
    formats.push_back({{"node", f.node}, {"format", print_term(f.format)}, {"empty", f.empty}, {"how", f.how}});
  out["formats"] = formats;
  out["empty_function"] = r.empty_function;
  json certs = json::array();
  for (const auto& [model, nodes] : r.certificates) certs.push_back({{"nodes", nodes}, {"model", to_json(model)}});
  out["certificates"] = certs;
  out["model_searches"] = r.fcm_calls;
  return out;
}

json to_json(const EvalResult& r) {
  json out = {{"kind", kind_name(r.kind)}, {"steps", r.steps}};
  if (r.kind == EvalResult::Kind::Value) out["value"] = print_term(r.term);
  if (r.kind == EvalResult::Kind::Stuck) out["failing_call"] = print_term(r.failing_call);
  return out;
}

json to_json(const Verdict& v) {
  json out = {{"verdict", kind_name(v.kind)}, {"reason", v.reason}};
  out["model"] = v.model ? to_json(*v.model) : json(nullptr);
  return out;
}

}  // namespace superfcm
