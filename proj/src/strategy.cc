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

#include "strategy.h"

#include <cmath>

#include "equilibrium.h"
#include "error.h"

namespace absorbeq {

long Strategy::CycleLength() const {
  long total = 0;
  for (const Phase& p : phases) total += p.length;
  return total;
}

const Punishment* Strategy::PunishmentFor(int player) const {
  for (const Punishment& p : punishments) {
    if (p.player == player) return &p;
  }
  return nullptr;
}

const char* KindName(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kStationary:
      return "stationary";
    case StrategyKind::kAlmostStationary:
      return "almost_stationary";
    case StrategyKind::kSunspot:
      return "sunspot";
  }
  return "?";
}

StrategyKind KindFromName(const std::string& name) {
  if (name == "stationary") return StrategyKind::kStationary;
  if (name == "almost_stationary") return StrategyKind::kAlmostStationary;
  if (name == "sunspot") return StrategyKind::kSunspot;
  InputError("unknown strategy kind '" + name + "'");
}

Strategy StationaryStrategy(const MixedProfile& x) {
  Strategy s;
  s.kind = StrategyKind::kStationary;
  Phase p;
  p.base = x;
  s.phases.push_back(p);
  s.route = "stationary";
  return s;
}

MixedProfile StageProfile(const AbsorbingGame& game, const Phase& phase) {
  MixedProfile y = phase.base;
  if (phase.quitter >= 0) {
    std::vector<double>& row = y[phase.quitter];
    for (double& v : row) v *= 1.0 - phase.alpha;
    row[phase.quit_action] += phase.alpha;
  }
  (void)game;
  return y;
}

void ValidateStrategy(const AbsorbingGame& game, const Strategy& s) {
  int n = game.num_players();
  if (s.phases.empty()) InputError("strategy has no phases");
  if (s.kind != StrategyKind::kSunspot && s.phases.size() != 1) {
    InputError("stationary strategies have exactly one phase");
  }
  if (s.kind == StrategyKind::kStationary &&
      (!s.punishments.empty() || !s.phases[0].monitors.empty())) {
    InputError("stationary strategies carry no monitors or threats");
  }
  if (!(s.epsilon >= 0.0)) InputError("epsilon must be nonnegative");
  std::optional<ActionPartition> part;
  if (s.kind == StrategyKind::kSunspot) {
    try {
      part = DeriveActionPartition(game);
    } catch (const Error&) {
    }
  }
  for (size_t t = 0; t < s.phases.size(); ++t) {
    const Phase& p = s.phases[t];
    std::string where = "phase " + std::to_string(t) + ": ";
    if (p.length < 1) InputError(where + "length must be positive");
    if (static_cast<int>(p.base.size()) != n) {
      InputError(where + "base profile has wrong number of players");
    }
    try {
      NormalizeProfile(game, p.base);
    } catch (const Error& e) {
      InputError(where + e.what());
    }
    if (p.quitter >= 0) {
      if (p.quitter >= n) InputError(where + "bad quitter");
      if (p.quit_action < 0 || p.quit_action >= game.num_actions(p.quitter)) {
        InputError(where + "bad quitting action");
      }
      if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) {
        InputError(where + "alpha outside [0,1]");
      }
      if (s.kind == StrategyKind::kSunspot && s.epsilon > 0.0 &&
          !(p.alpha < s.epsilon)) {
        InputError(where + "alpha must be below epsilon");
      }
    } else if (s.kind == StrategyKind::kSunspot) {
      InputError(where + "sunspot phases need a quitter");
    }
    if (part) {
      for (int i = 0; i < n; ++i) {
        for (int a = 0; a < game.num_actions(i); ++a) {
          if (p.base[i][a] > 0.0 && part->IsQuitting(i, a)) {
            InputError(where + "base profile quits");
          }
        }
      }
    }
    std::vector<bool> seen(n, false);
    for (const Monitor& m : p.monitors) {
      if (m.player < 0 || m.player >= n) InputError(where + "bad monitor");
      if (m.action < 0 || m.action >= game.num_actions(m.player)) {
        InputError(where + "bad monitored action");
      }
      if (seen[m.player]) InputError(where + "one monitor per player");
      seen[m.player] = true;
      if (!(m.tolerance > 0.0)) InputError(where + "tolerance must be > 0");
      if (!(m.target >= 0.0 && m.target <= 1.0)) {
        InputError(where + "monitor target outside [0,1]");
      }
      if (m.window < 1) InputError(where + "window must be positive");
    }
  }
  std::vector<bool> seen(n, false);
  for (const Punishment& p : s.punishments) {
    if (p.player < 0 || p.player >= n) InputError("bad punished player");
    if (seen[p.player]) InputError("one threat per player");
    seen[p.player] = true;
    size_t expected = OpponentProfiles(game, p.player).size();
    if (p.joint.size() != expected) InputError("threat has wrong length");
    double total = 0.0;
    for (double v : p.joint) {
      if (!(v >= -kSimplexTol)) InputError("threat has negative weight");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) InputError("threat does not sum to 1");
  }
}

long HoeffdingWindow(double tolerance) {
  if (!(tolerance > 0.0 && tolerance < 1.0)) {
    InputError("tolerance must be in (0,1)");
  }
  auto bound = [&](double t) {
    double sum = 0.0;
    for (int k = 0; k < 64; ++k) {
      double term = 2.0 * std::exp(-2.0 * std::ldexp(t, k) * tolerance *
                                   tolerance);
      sum += term;
      if (term < 1e-300) break;
    }
    return sum;
  };
  long lo = 0, hi = 1;
  while (bound(static_cast<double>(hi)) > tolerance) hi *= 2;
  while (hi - lo > 1) {
    long mid = lo + (hi - lo) / 2;
    if (bound(static_cast<double>(mid)) <= tolerance) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

Monitor AttachMonitoring(int player, int action, double target,
                         double tolerance) {
  Monitor m;
  m.player = player;
  m.action = action;
  m.target = target;
  m.tolerance = tolerance;
  // A pure target makes any departure visible at once.
  bool pure = target <= 0.0 || target >= 1.0;
  m.window = pure ? 1 : HoeffdingWindow(tolerance);
  return m;
}

}  // namespace absorbeq
