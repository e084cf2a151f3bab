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

#ifndef ABSORBEQ_TESTS_SAMPLE_GAMES_H_
#define ABSORBEQ_TESTS_SAMPLE_GAMES_H_

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "game.h"

namespace absorbeq::testing {

// Quitting game: every player has {c, q}; any quit absorbs surely.
// `payoff(quitters)` gives the absorbing payoff for a nonempty quitter set.
inline AbsorbingGame QuittingGame(
    int n, const std::function<std::vector<double>(const std::vector<int>&)>&
               payoff) {
  std::vector<std::vector<std::string>> actions(n, {"c", "q"});
  return BuildGame(actions, [&](const std::vector<int>& a) {
    bool any = false;
    for (int v : a) any = any || v == 1;
    if (!any) return std::make_pair(0.0, std::vector<double>(n, 0.0));
    return std::make_pair(1.0, payoff(a));
  });
}

// Two players with actions {c1, c2, q}. Among the four all-continue
// profiles, `absorbing[x][y]` says which absorb. Quitting rows/columns
// always absorb surely. Payoffs are distinct and drawn from `seed`.
inline AbsorbingGame TwoByTwoStructure(const bool absorbing[2][2],
                                       uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  std::vector<std::vector<std::string>> actions = {{"c1", "c2", "q"},
                                                   {"c1", "c2", "q"}};
  return BuildGame(actions, [&](const std::vector<int>& a) {
    bool cont = a[0] < 2 && a[1] < 2;
    if (cont && !absorbing[a[0]][a[1]]) {
      return std::make_pair(0.0, std::vector<double>{0.0, 0.0});
    }
    double p = cont ? 0.5 : 1.0;
    return std::make_pair(p, std::vector<double>{unif(rng), unif(rng)});
  });
}

// The L-shaped structure: only (c2, c2) absorbs among continue profiles.
inline AbsorbingGame LShapedTable(uint64_t seed = 7) {
  const bool s[2][2] = {{false, false}, {false, true}};
  return TwoByTwoStructure(s, seed);
}

// The spotted structure: the diagonal absorbs, the off-diagonal does not.
inline AbsorbingGame SpottedTable(uint64_t seed = 7) {
  const bool s[2][2] = {{true, false}, {false, true}};
  return TwoByTwoStructure(s, seed);
}

using Payoff2 = std::vector<double>;

// L-shaped game with chosen payoffs. Actions {c1, c2, q} for both players;
// (c2, c2) absorbs surely with `a4`; `q1[y]` is Player 1 quitting against
// Player 2's continue action y, `q2[x]` symmetrically, `qq` both quit.
inline AbsorbingGame LShapedGame(const Payoff2& a4, const Payoff2 q1[2],
                                 const Payoff2 q2[2], const Payoff2& qq) {
  std::vector<std::vector<std::string>> actions = {{"c1", "c2", "q"},
                                                   {"c1", "c2", "q"}};
  return BuildGame(actions, [&](const std::vector<int>& a) {
    if (a[0] == 2 && a[1] == 2) return std::make_pair(1.0, qq);
    if (a[0] == 2) return std::make_pair(1.0, q1[a[1]]);
    if (a[1] == 2) return std::make_pair(1.0, q2[a[0]]);
    if (a[0] == 1 && a[1] == 1) return std::make_pair(1.0, a4);
    return std::make_pair(0.0, Payoff2{0.0, 0.0});
  });
}

// Every best-response matrix is [[0.6, 0.1], [0.1, 0.6]]: quitting alone is
// each player's best outcome, so no continuation keeps both content.
inline AbsorbingGame NqlGame() {
  const Payoff2 q1[2] = {{0.6, 0.1}, {0.6, 0.1}};
  const Payoff2 q2[2] = {{0.1, 0.6}, {0.1, 0.6}};
  return LShapedGame({0.2, 0.2}, q1, q2, {0.3, 0.3});
}

// Quitting alone hands the opponent the better outcome.
inline AbsorbingGame QlGame() {
  const Payoff2 q1[2] = {{0.1, 0.6}, {0.1, 0.6}};
  const Payoff2 q2[2] = {{0.6, 0.1}, {0.6, 0.1}};
  return LShapedGame({0.05, 0.05}, q1, q2, {0.3, 0.3});
}

// Three-player L-shaped game: Players 1 and 2 have {c1, c2, q}, Player 3
// has {c, q}; among continue profiles only (c2, c2, c) absorbs.
inline AbsorbingGame LShaped3(uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  std::vector<std::vector<std::string>> actions = {
      {"c1", "c2", "q"}, {"c1", "c2", "q"}, {"c", "q"}};
  return BuildGame(actions, [&](const std::vector<int>& a) {
    bool cont = a[0] < 2 && a[1] < 2 && a[2] == 0;
    if (cont && !(a[0] == 1 && a[1] == 1)) {
      return std::make_pair(0.0, std::vector<double>{0.0, 0.0, 0.0});
    }
    double p = cont ? 0.5 : 1.0;
    return std::make_pair(
        p, std::vector<double>{unif(rng), unif(rng), unif(rng)});
  });
}

// Player 1's best auxiliary quit is its second continue action: (c2, c2)
// pays more to Player 1 than the quitting action does.
inline AbsorbingGame QlGameSecondAction() {
  const Payoff2 q1[2] = {{0.05, 0.3}, {0.05, 0.3}};
  const Payoff2 q2[2] = {{0.6, 0.1}, {0.6, 0.1}};
  return LShapedGame({0.1, 0.6}, q1, q2, {0.3, 0.3});
}

// Two players with {x, y}; `open[a][b]` marks the non-absorbing profiles,
// every other profile absorbs surely with payoff u[a][b].
inline AbsorbingGame SpottedGame(const bool open[2][2],
                                 const Payoff2 u[2][2]) {
  std::vector<std::vector<std::string>> actions = {{"x", "y"}, {"x", "y"}};
  return BuildGame(actions, [&](const std::vector<int>& a) {
    if (open[a[0]][a[1]]) return std::make_pair(0.0, Payoff2{0.0, 0.0});
    return std::make_pair(1.0, u[a[0]][a[1]]);
  });
}

// Only (x, x) is open; its deviation matrix [[0.1, 0.6], [0.6, 0.1]] is Q.
inline AbsorbingGame SpottedQGame() {
  const bool open[2][2] = {{true, false}, {false, false}};
  const Payoff2 u[2][2] = {{{0, 0}, {0.6, 0.1}}, {{0.1, 0.6}, {0.3, 0.3}}};
  return SpottedGame(open, u);
}

// Only (x, x) is open; its deviation matrix [[0.6, 0.1], [0.1, 0.6]] has a
// witness.
inline AbsorbingGame SpottedWitnessGame() {
  const bool open[2][2] = {{true, false}, {false, false}};
  const Payoff2 u[2][2] = {{{0, 0}, {0.1, 0.6}}, {{0.6, 0.1}, {0.3, 0.3}}};
  return SpottedGame(open, u);
}

// The diagonal is open: (x, x) has a Q matrix, (y, y) has a witness.
inline AbsorbingGame SpottedMixedGame() {
  const bool open[2][2] = {{true, false}, {false, true}};
  const Payoff2 u[2][2] = {{{0, 0}, {0.6, 0.1}}, {{0.1, 0.6}, {0, 0}}};
  return SpottedGame(open, u);
}

}  // namespace absorbeq::testing

#endif  // ABSORBEQ_TESTS_SAMPLE_GAMES_H_
