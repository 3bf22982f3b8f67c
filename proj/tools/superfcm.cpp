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

// Command-line front end: run, verify, scp, emit.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "superfcm/encoder.hpp"
#include "superfcm/errors.hpp"
#include "superfcm/interpreter.hpp"
#include "superfcm/json_io.hpp"
#include "superfcm/model_finder.hpp"
#include "superfcm/supercompiler.hpp"
#include "superfcm/syntax.hpp"
#include "superfcm/verify.hpp"

using namespace superfcm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitStuck = 2;
constexpr int kExitFuel = 3;
constexpr int kExitLimit = 4;
constexpr int kExitUnknown = 5;

struct Config {
  std::string program;
  std::vector<std::string> binds;
  std::size_t fuel = kDefaultFuel;
  std::size_t min_size = 2;
  std::size_t max_size = 16;
  double deadline = 120;
  double fcm_deadline = 10;
  std::size_t one_step = 0;
  std::size_t rule = 0;
  std::string target;
  std::string format = "text";
  std::uint64_t seed = 1;
  std::string out;
  std::string what = "fol";
};

Program load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

std::chrono::milliseconds millis(double seconds) {
  return std::chrono::milliseconds(static_cast<long long>(seconds * 1000));
}

/// Writes to --out when given, else to stdout.
void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw Error("cannot write " + c.out);
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

Substitution parse_bindings(const std::vector<std::string>& binds) {
  Substitution theta;
  for (const std::string& b : binds) {
    const auto eq = b.find('=');
    if (eq == std::string::npos) throw Error("binding without '=': " + b);
    Term v = parse_term(b.substr(0, eq));
    if (v.size() != 1 || !v.atom().is_var()) throw Error("not a variable: " + b.substr(0, eq));
    const std::string value = b.substr(eq + 1);
    theta.bind(v.atom().var(), value.find_first_not_of(" \t") == std::string::npos ? Term() : parse_term(value));
  }
  return theta;
}

std::size_t chosen_rule(const Config& c) { return c.rule != 0 ? c.rule : c.one_step; }

int cmd_run(const Config& c) {
  const Program p = load(c.program);
  const EvalResult r = eval(p, parse_bindings(c.binds), c.fuel);
  if (c.format == "json") {
    emit(c, emit_json(r));
  } else {
    std::string text;
    switch (r.kind) {
      case EvalResult::Kind::Value:
        text = print_term(r.term);
        break;
      case EvalResult::Kind::Stuck:
        text = "Stuck at " + print_term(r.failing_call);
        break;
      case EvalResult::Kind::FuelExhausted:
        text = "fuel exhausted";
        break;
    }
    emit(c, text + "\nsteps: " + std::to_string(r.steps) + "\n");
  }
  if (r.kind == EvalResult::Kind::Stuck) return kExitStuck;
  if (r.kind == EvalResult::Kind::FuelExhausted) return kExitFuel;
  return kExitOk;
}

int cmd_verify(const Config& c, bool one_step) {
  const Program p = load(c.program);
  VerifyOptions o;
  o.finder = FinderOptions{c.min_size, c.max_size, millis(c.deadline)};
  Verdict v;
  if (one_step) {
    if (chosen_rule(c) == 0) throw Error("--one-step needs a rule number");
    v = verify_one_step(p, chosen_rule(c), o);
  } else {
    v = verify_target(p, parse_target(c.target.empty() ? "Out(e.out)" : c.target), o);
  }
  if (c.format == "json") {
    emit(c, emit_json(v));
  } else {
    std::string text = kind_name(v.kind) + " (" + v.reason + ")\n";
    if (v.model) text += print_model(*v.model);
    emit(c, text);
  }
  return v.safe() ? kExitOk : kExitUnknown;
}

ScpOptions scp_options(const Config& c) {
  ScpOptions o;
  o.min_size = c.min_size;
  o.max_size = c.max_size;
  o.deadline = millis(c.deadline);
  o.fcm_deadline = millis(c.fcm_deadline);
  o.seed = c.seed;
  return o;
}

int cmd_scp(const Config& c) {
  const Program p = load(c.program);
  const ScpResult r = supercompile(p, scp_options(c));
  if (c.format == "json") {
    std::cout << emit_json(r) << '\n';
  } else if (c.format == "dot") {
    std::cout << graph_to_dot(r.graph);
  } else {
    std::cout << print_report(r);
    if (r.residual && c.out.empty()) std::cout << "\n" << print_program(*r.residual);
  }
  if (r.residual && !c.out.empty()) emit(c, print_program(*r.residual));
  return r.status == ScpResult::Status::Ok ? kExitOk : kExitLimit;
}

Theory emitted_theory(const Config& c, const Program& p, bool one_step) {
  if (one_step) return one_step_theory(p, chosen_rule(c));
  EncodeOptions eo;
  eo.project_counters = true;
  std::optional<Target> target;
  if (!c.target.empty()) {
    target = parse_target(c.target);
    if (target->kind == Target::Kind::Reach) eo.keep_functions.insert(target->function);
  }
  ReachabilityEncoding enc = encode_program_overapprox(p, eo);
  Theory th = enc.theory;
  if (target) th.goal = encode_exit_goal(enc, *target);
  return th;
}

int cmd_emit(const Config& c, bool one_step) {
  const Program p = load(c.program);
  if (c.what == "dot") {
    emit(c, graph_to_dot(supercompile(p, scp_options(c)).graph));
    return kExitOk;
  }
  const Theory th = emitted_theory(c, p, one_step);
  if (c.what == "mace4")
    emit(c, export_mace4(th));
  else if (c.format == "json")
    emit(c, emit_json(th));
  else
    emit(c, print_theory(th));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpreter, model-finder verifier and supercompiler for sequence rewriting programs"};
  app.require_subcommand(1);
  Config c;

  auto common = [&](CLI::App* sub) {
    sub->add_option("program", c.program, "Program file (.l)")->required()->check(CLI::ExistingFile);
    sub->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"text", "json", "dot", "mace4"}));
    sub->add_option("--out", c.out, "Output file");
  };
  auto search = [&](CLI::App* sub) {
    sub->add_option("--min-size", c.min_size, "Smallest model size")->check(CLI::Range(2, 64));
    sub->add_option("--max-size", c.max_size, "Largest model size")->check(CLI::Range(2, 64));
    sub->add_option("--deadline", c.deadline, "Global deadline in seconds")->check(CLI::PositiveNumber);
  };

  CLI::App* run = app.add_subcommand("run", "Evaluate the initial term");
  common(run);
  run->add_option("--bind", c.binds, "Binding var=term, repeatable");
  run->add_option("--fuel", c.fuel, "Step limit");

  CLI::App* verify = app.add_subcommand("verify", "Refute reachability with a finite countermodel");
  common(verify);
  search(verify);
  verify->add_option("--target", c.target, "f=value, Out(value) or f(patterns)");
  CLI::Option* verify_one = verify->add_option("--one-step", c.one_step, "One-step check of a rule")
                                ->expected(0, 1);
  verify->add_option("--rule", c.rule, "Rule number, counting from 1");

  CLI::App* scp = app.add_subcommand("scp", "Supercompile");
  common(scp);
  search(scp);
  scp->add_option("--fcm-deadline", c.fcm_deadline, "Per-search deadline in seconds")->check(CLI::PositiveNumber);
  scp->add_option("--seed", c.seed, "Seed for probe inputs");

  CLI::App* emit_cmd = app.add_subcommand("emit", "Print a theory or the unfold graph");
  common(emit_cmd);
  search(emit_cmd);
  emit_cmd->add_option("--what", c.what, "fol, mace4 or dot")->check(CLI::IsMember({"fol", "mace4", "dot"}));
  emit_cmd->add_option("--target", c.target, "Goal added to the theory");
  CLI::Option* emit_one = emit_cmd->add_option("--one-step", c.one_step, "One-step goal of a rule")
                              ->expected(0, 1);
  emit_cmd->add_option("--rule", c.rule, "Rule number, counting from 1");
  emit_cmd->add_option("--fcm-deadline", c.fcm_deadline, "Per-search deadline in seconds");
  emit_cmd->add_option("--seed", c.seed, "Seed for probe inputs");

  CLI11_PARSE(app, argc, argv);
  if (c.min_size > c.max_size) {
    std::cerr << "error: --min-size exceeds --max-size\n";
    return kExitError;
  }
  if (const char* env = std::getenv("SUPERFCM_DEADLINE")) {
    try {
      c.deadline = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "error: SUPERFCM_DEADLINE is not a number\n";
      return kExitError;
    }
  }
  try {
    if (*run) return cmd_run(c);
    if (*verify) return cmd_verify(c, verify_one->count() > 0 || c.rule != 0);
    if (*scp) return cmd_scp(c);
    return cmd_emit(c, emit_one->count() > 0 || c.rule != 0);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
