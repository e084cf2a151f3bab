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

#ifndef ABSORBEQ_SRC_STRATEGY_H_
#define ABSORBEQ_SRC_STRATEGY_H_

#include <string>
#include <vector>

#include "game.h"
#include "payoff.h"

namespace absorbeq {

// Frequency test on one player's use of one action. Counting restarts at
// the beginning of every occurrence of the phase that carries the test
// (for almost stationary profiles: once, at the start of play). A check is
// made after window * 2^k stages, k = 0, 1, ...; a gap above `tolerance`
// triggers the punishment of `player`.
struct Monitor {
  int player = 0;
  int action = 0;
  double target = 0.0;
  double tolerance = 0.0;
  long window = 1;
};

// Stages of one phase. With quitter >= 0 the quitter plays quit_action
// with probability alpha each stage and `base` otherwise; everybody else
// plays `base`. With quitter < 0 the phase is plain stationary play.
struct Phase {
  int quitter = -1;
  int quit_action = -1;
  double alpha = 0.0;
  long length = 1;
  MixedProfile base;
  std::vector<Monitor> monitors;
  // Absorption mass of the phase in the game it was designed for, kept when
  // the phase was rescaled to match it (negative when unused).
  double design_rho = -1.0;
};

// Threat against `player`: the opponents' joint distribution over their
// profiles, indexed like OpponentProfiles(game, player). The public signal
// correlates the opponents.
struct Punishment {
  int player = 0;
  std::vector<double> joint;
  double value = 0.0;  // min-max value it was computed for (reporting)
};

enum class StrategyKind { kStationary, kAlmostStationary, kSunspot };

// Stationary: one phase, no threats. Almost stationary: one phase with
// monitors and threats. Sunspot: cyclic phase plan; the phase is a function
// of the stage count, the public signal drives the correlated threats.
struct Strategy {
  StrategyKind kind = StrategyKind::kStationary;
  double epsilon = 0.0;
  std::vector<Phase> phases;
  std::vector<Punishment> punishments;
  std::string route;  // which construction produced it

  long CycleLength() const;
  const Punishment* PunishmentFor(int player) const;
};

const char* KindName(StrategyKind kind);
StrategyKind KindFromName(const std::string& name);

Strategy StationaryStrategy(const MixedProfile& x);

// Mixed actions played during a stage of `phase`.
MixedProfile StageProfile(const AbsorbingGame& game, const Phase& phase);

// Throws kInvalidInput with a description of the first problem.
void ValidateStrategy(const AbsorbingGame& game, const Strategy& s);

// Smallest T with sum_k 2 exp(-2 * 2^k * T * tol^2) <= tol: conforming
// play fails some check with probability at most tol.
long HoeffdingWindow(double tolerance);

Monitor AttachMonitoring(int player, int action, double target,
                         double tolerance);

}  // namespace absorbeq

#endif  // ABSORBEQ_SRC_STRATEGY_H_
