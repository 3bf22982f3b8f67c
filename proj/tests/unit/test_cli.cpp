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

#include <array>
#include <cstdio>
#include <string>

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + SUPERFCM_CLI + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string file(const char* name) { return std::string(SUPERFCM_CORPUS_DIR) + "/" + name; }

bool has(const Result& r, const std::string& s) { return r.out.find(s) != std::string::npos; }

}  // namespace

TEST_CASE("run") {
  Result r = cli("run " + file("fib.l") + " --bind \"e.n='III'\"");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("('aba'):('baaba')\n", 0) == 0);
  Result empty = cli("run " + file("fib.l") + " --bind e.n=");
  CHECK(empty.out.rfind("('b'):('a')\n", 0) == 0);
  Result stuck = cli("run " + file("g.l") + " --bind e.ps=");
  CHECK(stuck.code == 2);
  CHECK(has(stuck, "Stuck"));
  Result fuel = cli("run " + file("fib.l") + " --bind \"e.n='IIIIIIII'\" --fuel 3");
  CHECK(fuel.code == 3);
  Result json = cli("run " + file("fib.l") + " --bind \"e.n='I'\" --format json");
  CHECK(has(json, "\"kind\": \"Value\""));
}

TEST_CASE("verify") {
  Result b = cli("verify " + file("fibtest.l") + " --target \"B='F'\"");
  CHECK(b.code == 0);
  CHECK(b.out.rfind("SAFE (model of size ", 0) == 0);
  Result one = cli("verify " + file("ex5.l") + " --one-step --rule 1");
  CHECK(one.code == 0);
  CHECK(has(one, "SAFE"));
  Result shape = cli("verify " + file("fibB.l") + " --target \"B='F'\"");
  CHECK(shape.code == 5);
  CHECK(has(shape, "UNKNOWN (unsupported shape"));
}

TEST_CASE("deadline from the environment") {
  Result r = cli("verify " + file("ex5_orig.l") + " --one-step --rule 1 --deadline 100", "SUPERFCM_DEADLINE=0.2");
  CHECK(r.code == 5);
  CHECK(has(r, "UNKNOWN"));
}

TEST_CASE("scp") {
  Result ex5 = cli("scp " + file("ex5.l"));
  CHECK(ex5.code == 0);
  CHECK(has(ex5, "residual rules: 1"));
  Result g = cli("scp " + file("g.l"));
  CHECK(has(g, "empty partial function"));
  Result a = cli("scp " + file("fibA.l"));
  CHECK(has(a, "output format: 'T'"));
  Result json = cli("scp " + file("fibA.l") + " --max-size 4 --deadline 5 --fcm-deadline 1 --format json");
  CHECK(json.code == 0);
  CHECK(has(json, "\"residual\""));
}

TEST_CASE("emit") {
  Result m = cli("emit " + file("fib.l") + " --what mace4");
  CHECK(m.code == 0);
  CHECK(has(m, "(Reach_F(e_ys, e_xs * e_ys))"));
  Result f = cli("emit " + file("ex5.l") + " --what fol --one-step 1");
  CHECK(has(f, "goal: ∃e.q. R(e.q) ∧ 'a':e.q:'a':e.q:'b' = e.q:'a':e.q:'b':e.q"));
  Result d = cli("emit " + file("fib.l") + " --what dot");
  CHECK(has(d, "digraph"));
  Result e = cli("emit " + file("empty.l") + " --what mace4");
  CHECK(e.code == 0);
  CHECK(has(e, "formulas(assumptions)."));
}

TEST_CASE("errors and determinism") {
  CHECK(cli("run /nonexistent.l").code != 0);
  CHECK(cli("frobnicate").code != 0);
  const std::string args = "scp " + file("fibB.l") + " --format json";
  CHECK(cli(args).out == cli(args).out);
}
