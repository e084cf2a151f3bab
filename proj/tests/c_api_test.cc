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

#include <cmath>
#include <cstring>
#include <string>

#include "absorbeq/absorbeq.h"
#include "doctest.h"

namespace {

const char* kSpotted = R"({
  "players": 2,
  "actions": [["x", "y"], ["x", "y"]],
  "entries": [
    {"profile": [0, 0], "p": 0, "u": [0, 0]},
    {"profile": [0, 1], "p": 1, "u": [0.2, 0.1]},
    {"profile": [1, 0], "p": 1, "u": [0.1, 0.2]},
    {"profile": [1, 1], "p": 0, "u": [0, 0]}
  ]
})";

const char* kSure = R"({"players": 1, "actions": [["q"]],
  "entries": [{"profile": [0], "p": 1, "u": [0.5]}]})";

const char* kSureStrategy = R"({"kind": "stationary", "epsilon": 0.05,
  "phases": [{"length": 1, "base": [[1.0]], "monitors": []}],
  "punishments": []})";

TEST_CASE("version and defaults") {
  CHECK(std::string(absorbeq_version()) == "0.1.0");
  absorbeq_options o;
  absorbeq_options_default(&o);
  CHECK(o.epsilon == 0.05);
  CHECK(o.lambda_grid == nullptr);
  CHECK(o.density == 20);
}

TEST_CASE("game handles") {
  absorbeq_game* g = nullptr;
  REQUIRE(absorbeq_game_from_json(kSpotted, &g) == ABSORBEQ_OK);
  CHECK(absorbeq_game_num_players(g) == 2);
  CHECK(absorbeq_game_num_actions(g, 1) == 2);
  CHECK(absorbeq_game_num_actions(g, 5) < 0);
  char* text = nullptr;
  REQUIRE(absorbeq_classify(g, &text) == ABSORBEQ_OK);
  CHECK(std::strstr(text, "\"spotted\":true") != nullptr);
  // Documents name the producing tool and command, which callers add.
  CHECK(absorbeq_validate_output("classification", text) ==
        ABSORBEQ_INPUT_ERROR);
  std::string doc = text;
  doc.insert(1, "\"tool\":{\"name\":\"t\",\"version\":\"0\"},"
                "\"command\":\"classify\",");
  CHECK(absorbeq_validate_output("classification", doc.c_str()) ==
        ABSORBEQ_OK);
  absorbeq_string_free(text);
  absorbeq_game_free(g);
}

TEST_CASE("errors set status and message") {
  absorbeq_game* g = nullptr;
  CHECK(absorbeq_game_from_json("{\"players\": 2", &g) ==
        ABSORBEQ_INPUT_ERROR);
  CHECK(g == nullptr);
  CHECK(std::strstr(absorbeq_last_error(), "parse error") != nullptr);
  CHECK(absorbeq_game_load("/nonexistent/game.json", &g) ==
        ABSORBEQ_INPUT_ERROR);
  CHECK(absorbeq_game_from_json(nullptr, &g) == ABSORBEQ_INPUT_ERROR);
}

TEST_CASE("lcp solve and q test") {
  double r = 1.0, q = 2.0, z[2], w[1];
  REQUIRE(absorbeq_lcp_solve(&r, &q, 1, ABSORBEQ_LCP_VERBATIM, 1e-9, z, w) ==
          ABSORBEQ_OK);
  CHECK(z[0] == doctest::Approx(1.0));
  CHECK(z[1] == doctest::Approx(0.0));
  CHECK(w[0] == doctest::Approx(2.0));

  double neg = -1.0, witness[1];
  int is_q = -1;
  REQUIRE(absorbeq_q_test(&neg, 1, ABSORBEQ_LCP_VERBATIM, 40, 1e-9, &is_q,
                          witness) == ABSORBEQ_INFEASIBLE);
  CHECK(is_q == 0);
  CHECK(witness[0] < 0);
  CHECK(absorbeq_q_test(&neg, 0, ABSORBEQ_LCP_VERBATIM, 40, 1e-9, &is_q,
                        witness) == ABSORBEQ_INPUT_ERROR);
}

TEST_CASE("synthesize then certify") {
  absorbeq_game* g = nullptr;
  REQUIRE(absorbeq_game_from_json(kSpotted, &g) == ABSORBEQ_OK);
  absorbeq_options o;
  absorbeq_options_default(&o);
  absorbeq_strategy* s = nullptr;
  char* report = nullptr;
  char* log = nullptr;
  REQUIRE(absorbeq_synthesize(g, &o, &s, &report, &log) == ABSORBEQ_OK);
  CHECK(absorbeq_strategy_validate(g, s) == ABSORBEQ_OK);
  absorbeq_string_free(report);
  absorbeq_string_free(log);

  int pass = 0;
  double gain = 1.0;
  REQUIRE(absorbeq_certify(g, s, &o, &pass, &gain, &report) == ABSORBEQ_OK);
  CHECK(pass == 1);
  CHECK(gain <= o.epsilon);
  absorbeq_string_free(report);

  char* json = nullptr;
  REQUIRE(absorbeq_strategy_to_json(s, &json) == ABSORBEQ_OK);
  absorbeq_strategy* t = nullptr;
  REQUIRE(absorbeq_strategy_from_json(json, &t) == ABSORBEQ_OK);
  double a[2], b[2];
  REQUIRE(absorbeq_eval_strategy(g, s, 1e-3, a) == ABSORBEQ_OK);
  REQUIRE(absorbeq_eval_strategy(g, t, 1e-3, b) == ABSORBEQ_OK);
  CHECK(a[0] == b[0]);
  CHECK(a[1] == b[1]);
  absorbeq_string_free(json);
  absorbeq_strategy_free(t);
  absorbeq_strategy_free(s);
  absorbeq_game_free(g);
}

TEST_CASE("simulate is deterministic in the seed") {
  absorbeq_game* g = nullptr;
  absorbeq_strategy* s = nullptr;
  REQUIRE(absorbeq_game_from_json(kSure, &g) == ABSORBEQ_OK);
  REQUIRE(absorbeq_strategy_from_json(kSureStrategy, &s) == ABSORBEQ_OK);
  char *j1 = nullptr, *c1 = nullptr, *j2 = nullptr, *c2 = nullptr;
  REQUIRE(absorbeq_simulate(g, s, 1000, 50, 9, 1e-2, &j1, &c1) ==
          ABSORBEQ_OK);
  REQUIRE(absorbeq_simulate(g, s, 1000, 50, 9, 1e-2, &j2, &c2) ==
          ABSORBEQ_OK);
  CHECK(std::string(j1) == std::string(j2));
  CHECK(std::string(c1) == std::string(c2));
  // Sure absorption at the first stage fills the first bucket only.
  CHECK(std::strstr(j1, "\"absorption_histogram\":[1000,0") != nullptr);
  absorbeq_string_free(j1);
  absorbeq_string_free(c1);
  absorbeq_string_free(j2);
  absorbeq_string_free(c2);
  CHECK(absorbeq_simulate(g, s, 0, 50, 9, 1e-2, &j1, &c1) ==
        ABSORBEQ_INPUT_ERROR);
  absorbeq_strategy_free(s);
  absorbeq_game_free(g);
}

TEST_CASE("strategy that does not fit the game") {
  absorbeq_game* g = nullptr;
  absorbeq_strategy* s = nullptr;
  REQUIRE(absorbeq_game_from_json(kSpotted, &g) == ABSORBEQ_OK);
  REQUIRE(absorbeq_strategy_from_json(kSureStrategy, &s) == ABSORBEQ_OK);
  CHECK(absorbeq_strategy_validate(g, s) == ABSORBEQ_INPUT_ERROR);
  double v[2];
  CHECK(absorbeq_eval_strategy(g, s, 1e-2, v) == ABSORBEQ_INPUT_ERROR);
  absorbeq_strategy_free(s);
  absorbeq_game_free(g);
}

}  // namespace
