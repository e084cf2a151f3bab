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

#include "payoff.h"

#include <cmath>

#include "error.h"

namespace absorbeq {

MixedProfile PureProfile(const AbsorbingGame& game,
                         const std::vector<int>& actions) {
  MixedProfile x(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    x[i].assign(game.num_actions(i), 0.0);
    x[i][actions[i]] = 1.0;
  }
  return x;
}

MixedProfile UniformProfile(const AbsorbingGame& game) {
  MixedProfile x(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    x[i].assign(game.num_actions(i), 1.0 / game.num_actions(i));
  }
  return x;
}

MixedProfile NormalizeProfile(const AbsorbingGame& game, MixedProfile x) {
  if (static_cast<int>(x.size()) != game.num_players()) {
    InputError("profile has wrong number of players");
  }
  for (int i = 0; i < game.num_players(); ++i) {
    if (static_cast<int>(x[i].size()) != game.num_actions(i)) {
      InputError("profile has wrong number of actions for player " +
                 std::to_string(i));
    }
    double sum = 0.0;
    for (double& p : x[i]) {
      if (!std::isfinite(p) || p < -kSimplexTol) {
        InputError("negative probability in profile");
      }
      if (p < 0.0) p = 0.0;
      sum += p;
    }
    if (std::fabs(sum - 1.0) > kSimplexTol * x[i].size() + kSimplexTol) {
      InputError("profile does not sum to one for player " +
                 std::to_string(i));
    }
    for (double& p : x[i]) p /= sum;
  }
  return x;
}

double ProfileProb(const AbsorbingGame& game, const MixedProfile& x, int k) {
  double prob = 1.0;
  for (int i = 0; i < game.num_players() && prob != 0.0; ++i) {
    prob *= x[i][game.ActionOf(k, i)];
  }
  return prob;
}

std::vector<double> ProfileDistribution(const AbsorbingGame& game,
                                        const MixedProfile& x) {
  std::vector<double> dist(game.num_profiles());
  for (int k = 0; k < game.num_profiles(); ++k) {
    dist[k] = ProfileProb(game, x, k);
  }
  return dist;
}

AbsorptionSummary Absorption(const AbsorbingGame& game, const MixedProfile& x) {
  AbsorptionSummary s;
  s.chi.resize(game.num_profiles());
  for (int k = 0; k < game.num_profiles(); ++k) {
    s.chi[k] = ProfileProb(game, x, k) * game.absorb(k);
    s.total += s.chi[k];
  }
  if (s.total > 0.0) {
    s.conditional.resize(s.chi.size());
    for (size_t k = 0; k < s.chi.size(); ++k) {
      s.conditional[k] = s.chi[k] / s.total;
    }
  }
  return s;
}

StageStats StageFromDistribution(const AbsorbingGame& game,
                                 const std::vector<double>& dist) {
  int n = game.num_players();
  StageStats s;
  s.stage.assign(n, 0.0);
  s.absorbed.assign(n, 0.0);
  for (int k = 0; k < game.num_profiles(); ++k) {
    double w = dist[k];
    if (w == 0.0) continue;
    double p = game.absorb(k);
    const double* u = game.payoffs(k);
    for (int i = 0; i < n; ++i) {
      s.stage[i] += w * u[i];
      s.absorbed[i] += w * p * u[i];
    }
    s.absorb += w * p;
  }
  return s;
}

StageStats Stage(const AbsorbingGame& game, const MixedProfile& x) {
  return StageFromDistribution(game, ProfileDistribution(game, x));
}

std::vector<double> UndiscountedPayoff(const AbsorbingGame& game,
                                       const MixedProfile& x) {
  StageStats s = Stage(game, x);
  std::vector<double> out(game.num_players(), 0.0);
  if (s.absorb > 0.0) {
    for (int i = 0; i < game.num_players(); ++i) {
      out[i] = s.absorbed[i] / s.absorb;
    }
    return out;
  }
  if (!Classify(game).recursive) {
    throw Error(ErrorKind::kUndefined,
                "undiscounted payoff undefined: profile never absorbs in a "
                "non-recursive game");
  }
  return out;
}

double DiscountedValue(double stage, double absorbed, double absorb,
                       double lambda) {
  return (lambda * stage + (1.0 - lambda) * absorbed) /
         (lambda + (1.0 - lambda) * absorb);
}

std::vector<double> DiscountedPayoff(const AbsorbingGame& game,
                                     const MixedProfile& x, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) InputError("lambda must be in (0,1]");
  StageStats s = Stage(game, x);
  std::vector<double> out(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    out[i] = DiscountedValue(s.stage[i], s.absorbed[i], s.absorb, lambda);
  }
  return out;
}

std::vector<double> TStagePayoff(const AbsorbingGame& game,
                                 const MixedProfile& x, long horizon) {
  if (horizon < 1) InputError("horizon must be positive");
  StageStats s = Stage(game, x);
  int n = game.num_players();
  // alive: probability play has not absorbed before stage t.
  // frozen: payoff mass of play absorbed before stage t.
  double alive = 1.0;
  std::vector<double> frozen(n, 0.0), total(n, 0.0);
  for (long t = 0; t < horizon; ++t) {
    for (int i = 0; i < n; ++i) {
      total[i] += alive * s.stage[i] + frozen[i];
      frozen[i] += alive * s.absorbed[i];
    }
    alive *= 1.0 - s.absorb;
  }
  for (double& v : total) v /= static_cast<double>(horizon);
  return total;
}

double AbsorbWithin(double p_absorb, double alpha, long stages) {
  return -std::expm1(static_cast<double>(stages) * std::log1p(-alpha * p_absorb));
}

}  // namespace absorbeq
