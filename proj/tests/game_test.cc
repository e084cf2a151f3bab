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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "doctest.h"
#include "error.h"
#include "game.h"
#include "sample_games.h"

namespace absorbeq {
namespace {

using testing::LShapedTable;
using testing::QuittingGame;
using testing::SpottedTable;

std::string ErrorText(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST_CASE("minimal game validates") {
  AbsorbingGame g({{"a"}}, {1.0}, {1.0});
  CHECK_NOTHROW(Validate(g));
}

TEST_CASE("payoff above one is rejected") {
  AbsorbingGame g({{"a"}}, {1.0}, {1.5});
  CHECK(ErrorText([&] { Validate(g); }).find("payoff out of range") !=
        std::string::npos);
}

TEST_CASE("missing profile entry is rejected") {
  double nan = std::numeric_limits<double>::quiet_NaN();
  AbsorbingGame g({{"a", "b"}}, {1.0, nan}, {0.5, nan});
  CHECK(ErrorText([&] { Validate(g); }) == "incomplete profile table");
}

TEST_CASE("probability out of range is rejected") {
  AbsorbingGame g({{"a"}}, {1.2}, {0.5});
  CHECK(ErrorText([&] { Validate(g); }).find("probability out of range") !=
        std::string::npos);
}

TEST_CASE("quitting game partition") {
  auto g = QuittingGame(3, [](const std::vector<int>& a) {
    return std::vector<double>{0.1 * a[0], 0.2 * a[1], 0.3 * a[2]};
  });
  ActionPartition part = DeriveActionPartition(g);
  for (int i = 0; i < 3; ++i) {
    CHECK(part.continue_actions[i] == std::vector<int>{0});
    CHECK(part.quitting_actions[i] == std::vector<int>{1});
  }
}

TEST_CASE("L-shaped table partition") {
  auto g = LShapedTable();
  ActionPartition part = DeriveActionPartition(g);
  for (int i = 0; i < 2; ++i) {
    CHECK(part.continue_actions[i] == std::vector<int>{0, 1});
    CHECK(part.quitting_actions[i] == std::vector<int>{2});
  }
}

TEST_CASE("all-absorbing game is not quitting-absorbing") {
  AbsorbingGame g = BuildGame({{"a", "b"}, {"x", "y"}}, [](auto&) {
    return std::make_pair(1.0, std::vector<double>{0.5, 0.5});
  });
  CHECK(ErrorText([&] { DeriveActionPartition(g); })
            .find("not quitting-absorbing") != std::string::npos);
  CHECK_FALSE(Classify(g).quitting_absorbing);
}

TEST_CASE("classify L-shaped table") {
  auto g = LShapedTable();
  GameClassification c = Classify(g);
  CHECK(c.l_shaped);
  CHECK_FALSE(c.spotted);
  CHECK(c.two_dimension);
  CHECK(c.quitting_absorbing);
  CHECK_FALSE(c.general_quitting);
  REQUIRE(c.l_shape);
  CHECK(g.absorb(c.l_shape->a4) > 0.0);
  CHECK(g.absorb(c.l_shape->a1) == 0.0);
  CHECK(g.absorb(c.l_shape->a2) == 0.0);
  CHECK(g.absorb(c.l_shape->a3) == 0.0);
  CHECK(g.Profile(c.l_shape->a4) == std::vector<int>{1, 1});
  CHECK(g.Profile(c.l_shape->a2) == std::vector<int>{0, 1});
  CHECK(g.Profile(c.l_shape->a3) == std::vector<int>{1, 0});
}

TEST_CASE("classify spotted table") {
  GameClassification c = Classify(SpottedTable());
  CHECK(c.spotted);
  CHECK_FALSE(c.l_shaped);
  CHECK(c.two_dimension);
}

TEST_CASE("classify recursive positive quitting game") {
  auto g = QuittingGame(3, [](const std::vector<int>& a) {
    int code = a[0] * 4 + a[1] * 2 + a[2];
    return std::vector<double>{0.1 * code, 0.05 * code + 0.01,
                               0.9 - 0.1 * code};
  });
  GameClassification c = Classify(g);
  CHECK(c.recursive);
  CHECK(c.positive);
  CHECK(c.generic);
  CHECK(c.quitting);
  CHECK(c.general_quitting);
  CHECK(c.quitting_absorbing);
  CHECK(c.spotted);
}

TEST_CASE("flag implications hold on random structures") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    bool s[2][2];
    for (auto& row : s) {
      for (bool& v : row) v = rng() % 2;
    }
    auto g = testing::TwoByTwoStructure(s, trial);
    GameClassification c = Classify(g);
    if (c.quitting) CHECK(c.general_quitting);
    if (c.general_quitting) CHECK(c.quitting_absorbing);
    bool partition_ok = true;
    try {
      DeriveActionPartition(g);
    } catch (const Error&) {
      partition_ok = false;
    }
    CHECK(partition_ok == c.quitting_absorbing);
    int absorbing = s[0][0] + s[0][1] + s[1][0] + s[1][1];
    CHECK(c.l_shaped == (absorbing == 1));
  }
}

// Renames players and actions by random permutations.
AbsorbingGame Permute(const AbsorbingGame& g, std::mt19937_64& rng) {
  int n = g.num_players();
  std::vector<int> players(n);
  std::iota(players.begin(), players.end(), 0);
  std::shuffle(players.begin(), players.end(), rng);
  std::vector<std::vector<int>> acts(n);
  std::vector<std::vector<std::string>> names(n);
  for (int i = 0; i < n; ++i) {
    int src = players[i];
    acts[i].resize(g.num_actions(src));
    std::iota(acts[i].begin(), acts[i].end(), 0);
    std::shuffle(acts[i].begin(), acts[i].end(), rng);
    for (int a : acts[i]) names[i].push_back(g.action_names(src)[a]);
  }
  return BuildGame(names, [&](const std::vector<int>& a) {
    std::vector<int> orig(n);
    for (int i = 0; i < n; ++i) orig[players[i]] = acts[i][a[i]];
    int k = g.ProfileIndex(orig);
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = g.payoff(k, players[i]);
    return std::make_pair(g.absorb(k), u);
  });
}

TEST_CASE("classification is invariant under renaming") {
  std::mt19937_64 rng(5);
  std::vector<AbsorbingGame> games = {LShapedTable(), SpottedTable()};
  games.push_back(QuittingGame(3, [](const std::vector<int>& a) {
    return std::vector<double>{0.3 * a[0], 0.2 * a[1] + 0.1, 0.4};
  }));
  for (const auto& g : games) {
    GameClassification base = Classify(g);
    for (int trial = 0; trial < 20; ++trial) {
      GameClassification c = Classify(Permute(g, rng));
      CHECK(c.recursive == base.recursive);
      CHECK(c.positive == base.positive);
      CHECK(c.generic == base.generic);
      CHECK(c.general_quitting == base.general_quitting);
      CHECK(c.quitting == base.quitting);
      CHECK(c.quitting_absorbing == base.quitting_absorbing);
      CHECK(c.two_dimension == base.two_dimension);
      CHECK(c.spotted == base.spotted);
      CHECK(c.l_shaped == base.l_shaped);
    }
  }
}

double SupDistance(const AbsorbingGame& a, const AbsorbingGame& b) {
  double d = 0.0;
  for (int k = 0; k < a.num_profiles(); ++k) {
    CHECK(a.absorb(k) == b.absorb(k));
    for (int i = 0; i < a.num_players(); ++i) {
      d = std::max(d, std::fabs(a.payoff(k, i) - b.payoff(k, i)));
    }
  }
  return d;
}

TEST_CASE("perturbation of a generic game stays generic and close") {
  auto g = LShapedTable();
  AbsorbingGame h = PerturbGeneric(PerturbGeneric(g, 0.01), 0.02);
  CHECK(IsGeneric(h));
  CHECK(SupDistance(g, h) <= 0.03);
}

TEST_CASE("perturbation separates identical payoffs") {
  AbsorbingGame g = BuildGame({{"a", "b"}}, [](auto&) {
    return std::make_pair(1.0, std::vector<double>{0.4});
  });
  CHECK_FALSE(IsGeneric(g));
  AbsorbingGame h = PerturbGeneric(g, 0.01);
  CHECK(h.payoff(0, 0) != h.payoff(1, 0));
  CHECK(SupDistance(g, h) <= 0.01);
}

TEST_CASE("perturbation of all-ones payoffs moves downwards") {
  AbsorbingGame g = BuildGame({{"a", "b"}, {"x", "y"}}, [](auto&) {
    return std::make_pair(1.0, std::vector<double>{1.0, 1.0});
  });
  AbsorbingGame h = PerturbGeneric(g, 1e-9);
  // Oracle: shift k * eps / (2|A|) with |A| = 4, applied downwards.
  for (int k = 0; k < 4; ++k) {
    double expect = 1.0 - k * 1e-9 / 8.0;
    CHECK(h.payoff(k, 0) == doctest::Approx(expect).epsilon(1e-15));
  }
  CHECK(IsGeneric(h));
  CHECK(SupDistance(g, h) <= 1e-9);
}

TEST_CASE("random perturbations respect the bound") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    AbsorbingGame g = BuildGame({{"a", "b", "c"}, {"x", "y"}}, [&](auto&) {
      double v = std::round(unif(rng) * 4) / 4;  // forces ties
      return std::make_pair(1.0, std::vector<double>{v, 1.0 - v});
    });
    double eps = 0.001 + 0.1 * unif(rng);
    AbsorbingGame h = PerturbGeneric(g, eps);
    CHECK(IsGeneric(h));
    CHECK(SupDistance(g, h) <= eps);
  }
}

}  // namespace
}  // namespace absorbeq
