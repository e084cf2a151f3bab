// Copyright 2026 The absorbeq Authors.
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

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

const std::string kCli = ABSORBEQ_CLI;
const std::string kGames = std::string(ABSORBEQ_SOURCE_DIR) + "/games/";
const std::string kTmp = ABSORBEQ_TMP_DIR "/";

int Run(const std::string& args) {
  std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Spit(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

const char* kStuck = R"({"kind": "stationary", "epsilon": 0.05,
  "phases": [{"length": 1, "base": [[1, 0], [1, 0]], "monitors": []}],
  "punishments": []})";

const char* kOneByOne = R"({"kind": "stationary", "epsilon": 0.05,
  "phases": [{"length": 1, "base": [[1]], "monitors": []}],
  "punishments": []})";

// Neither spotted, L-shaped nor general quitting.
const char* kOdd = R"({"players": 2, "actions": [["a","b","c"],["a","b","c"]],
  "entries": [
  {"profile":[0,0],"p":0,"u":[0,0]},{"profile":[0,1],"p":1,"u":[0.5,0.5]},
  {"profile":[0,2],"p":0,"u":[0,0]},{"profile":[1,0],"p":1,"u":[0.5,0.5]},
  {"profile":[1,1],"p":0,"u":[0,0]},{"profile":[1,2],"p":0,"u":[0,0]},
  {"profile":[2,0],"p":0,"u":[0,0]},{"profile":[2,1],"p":0,"u":[0,0]},
  {"profile":[2,2],"p":0,"u":[0,0]}]})";

TEST_CASE("classify") {
  CHECK(Run("classify " + kGames + "spotted_q.json") == 0);
  CHECK(Run("classify " + kGames + "lshaped3.json --format text") == 0);
  Spit(kTmp + "broken.json", "{\"players\": 2,");
  CHECK(Run("classify " + kTmp + "broken.json") == 2);
  CHECK(Run("classify " + kTmp + "absent.json") == 2);
}

TEST_CASE("lcp") {
  Spit(kTmp + "one.json", "[[1]]");
  Spit(kTmp + "neg.json", "[[-1]]");
  Spit(kTmp + "wide.json", "[[1, 2]]");
  CHECK(Run("lcp " + kTmp + "one.json --q 2") == 0);
  CHECK(Run("lcp " + kTmp + "one.json --qtest") == 0);
  CHECK(Run("lcp " + kTmp + "neg.json --qtest --density 40") == 1);
  CHECK(Run("lcp " + kTmp + "wide.json --q 1") == 2);
  CHECK(Run("lcp " + kTmp + "one.json --q 1,2") == 2);
  Spit(kTmp + "badq.json", "{\"R\": [[1]], \"q\": \"x\"}");
  CHECK(Run("lcp " + kTmp + "badq.json") == 2);
}

TEST_CASE("synth and verify") {
  std::string out = kTmp + "spotted_q.strategy.json";
  std::remove(out.c_str());
  CHECK(Run("synth " + kGames + "spotted_q.json --out " + out) == 0);
  CHECK(Slurp(out).find("\"phases\"") != std::string::npos);
  CHECK(Slurp(out + ".report.json").find("\"pass\": true") !=
        std::string::npos);
  CHECK(Run("verify " + kGames + "spotted_q.json " + out) == 0);
  CHECK(Run("verify " + kGames + "spotted_q.json " + out + " --format csv") ==
        0);
}

TEST_CASE("synth failure codes") {
  Spit(kTmp + "odd.json", kOdd);
  CHECK(Run("synth " + kTmp + "odd.json") == 4);
  CHECK(Run("synth " + kGames + "spotted_q.json --budget-secs 1e-9") == 3);
  CHECK(Run("synth " + kGames + "spotted_q.json --lambda-grid 2") == 2);
}

TEST_CASE("verify rejects a non-equilibrium and bad shapes") {
  Spit(kTmp + "stuck.json", kStuck);
  Spit(kTmp + "tiny.json", kOneByOne);
  CHECK(Run("verify " + kGames + "spotted_q.json " + kTmp + "stuck.json") ==
        1);
  CHECK(Run("verify " + kGames + "spotted_q.json " + kTmp + "tiny.json") ==
        2);
}

TEST_CASE("simulate is reproducible") {
  std::string a = kTmp + "sim_a.json", b = kTmp + "sim_b.json";
  std::string args = "simulate " + kGames + "spotted_q.json " + kGames +
                     "strategies/spotted_q.json --runs 2000 --horizon 500 "
                     "--seed 11 --out ";
  REQUIRE(Run(args + a) == 0);
  REQUIRE(Run(args + b) == 0);
  CHECK(Slurp(a) == Slurp(b));
  CHECK(Run("simulate " + kGames + "spotted_q.json " + kGames +
            "strategies/spotted_q.json --runs 0") == 2);
}

}  // namespace
