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

#ifndef SUPERFCM_SUPERCOMPILER_HPP
#define SUPERFCM_SUPERCOMPILER_HPP

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "superfcm/matcher.hpp"
#include "superfcm/model_finder.hpp"
#include "superfcm/program.hpp"
#include "superfcm/term.hpp"

namespace superfcm {

struct ScpOptions {
  std::size_t max_nodes = 500;
  std::size_t max_depth = 100;
  bool use_fcm = true;
  bool project_counters = true;
  std::size_t min_size = 2;
  std::size_t max_size = 16;
  /// Per model search.
  std::chrono::milliseconds fcm_deadline{10000};
  /// For the whole run.
  std::chrono::milliseconds deadline{120000};
  /// Concrete runs of the original program; a refutation that an observed
  /// result already contradicts is not attempted.
  std::size_t probes = 32;
  std::size_t probe_fuel = 20000;
  std::uint64_t seed = 1;
  ExtendedOptions match;
};

// ---------------------------------------------------------------------------
// Building blocks

struct Branch {
  std::size_t rule = 0;  // Rule::index
  Substitution narrowing;
  Term child;
};

struct MStepResult {
  std::vector<Branch> branches;
  /// Rule index and certificate for every rule shown not to apply.
  std::vector<std::pair<std::size_t, std::string>> pruned;
  /// Set when some rule could neither be matched exactly nor refuted.
  std::optional<std::string> stopped;
};

/// One unfolding step of the leftmost-innermost call with passive arguments.
MStepResult mstep(const Program& p, const Term& config, const ScpOptions& options = {});

/// Homeomorphic embedding on sequence terms: characters couple with equal
/// characters, variables with variables, parentheses and calls
/// componentwise; an atom may also dive into a parenthesis or call.
bool embeds(const Term& a, const Term& b);

/// Name of the first call in preorder, or empty.
std::string top_function(const Term& t);

bool whistle(const Term& ancestor, const Term& candidate);

struct Generalization {
  Term term;
  Substitution left;   // apply(left, term) == a
  Substitution right;  // apply(right, term) == b
};

/// Most specific generalization; equal pairs of subterms share one
/// variable.
Generalization generalize(const Term& a, const Term& b);

// ---------------------------------------------------------------------------
// Graph

struct UnfoldNode {
  enum class Status { Open, Driven, Exit, Folded, Generalized, Stopped, Dead, Pruned, Discarded };

  std::size_t id = 0;
  Term term;
  std::optional<std::size_t> parent;
  std::size_t depth = 0;
  Status status = Status::Open;
  /// Stop reason or pruning certificate.
  std::string note;
};

std::string status_name(UnfoldNode::Status s);

struct UnfoldEdge {
  enum class Kind { Narrow, Reference, Generalize };

  Kind kind = Kind::Narrow;
  std::size_t from = 0;
  std::size_t to = 0;
  /// Narrow: the narrowing of from's parameters. Reference: apply(subst,
  /// to.term) == from.term. Generalize: apply(subst, to.term) == from.term.
  Substitution subst;
  std::size_t rule = 0;
  bool removed = false;
};

std::string kind_name(UnfoldEdge::Kind k);

struct PrunedRule {
  std::size_t node = 0;
  std::string function;
  std::size_t rule = 0;  // Rule::index
  std::string certificate;
};

struct UnfoldGraph {
  std::vector<UnfoldNode> nodes;
  std::vector<UnfoldEdge> edges;
  std::size_t root = 0;
  std::vector<PrunedRule> pruned_rules;

  bool alive(std::size_t v) const { return nodes[v].status != UnfoldNode::Status::Discarded; }
  /// Narrow and Generalize edges leaving v, in creation order.
  std::vector<const UnfoldEdge*> children(std::size_t v) const;
  const UnfoldEdge* reference(std::size_t v) const;
  /// v and its tree descendants.
  std::vector<std::size_t> subtree(std::size_t v) const;
  std::size_t alive_count() const;
};

/// Every reference leaving v's subtree points back into it.
bool self_sufficient(const UnfoldGraph& g, std::size_t v);

struct OutputFormat {
  std::size_t node = 0;
  Term format;
  bool empty = false;
  /// "empty", "datum", "msg" or "syntactic".
  std::string how;
};

/// Exit and stop nodes in v's subtree, not pruned.
std::vector<std::size_t> exits_of(const UnfoldGraph& g, std::size_t v);

/// msg of the exit results under v, with stop nodes read as e-variables.
OutputFormat syntactic_format(const UnfoldGraph& g, std::size_t v);

/// Residual program; throws OpenGraph when some node is still open.
Program residualize(const UnfoldGraph& g, const Program& original,
                    std::map<std::size_t, std::string>* functions = nullptr);

struct ScpResult {
  enum class Status { Ok, LimitExceeded };

  Status status = Status::Ok;
  std::string limit;
  UnfoldGraph graph;
  std::optional<Program> residual;
  std::map<std::size_t, std::string> functions;
  /// The root's format first.
  std::vector<OutputFormat> formats;
  bool empty_function = false;
  /// Models that refuted exits, with the exits they cover.
  std::vector<std::pair<FiniteModel, std::vector<std::size_t>>> certificates;
  std::size_t fcm_calls = 0;
  double seconds = 0;
};

ScpResult supercompile(const Program& p, const ScpOptions& options = {});

std::string print_report(const ScpResult& r);
std::string graph_to_dot(const UnfoldGraph& g);

}  // namespace superfcm

#endif  // SUPERFCM_SUPERCOMPILER_HPP
