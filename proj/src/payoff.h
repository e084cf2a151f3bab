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

#ifndef ABSORBEQ_SRC_PAYOFF_H_
#define ABSORBEQ_SRC_PAYOFF_H_

#include <vector>

#include "game.h"

namespace absorbeq {

// One distribution per player over that player's actions.
using MixedProfile = std::vector<std::vector<double>>;

inline constexpr double kSimplexTol = 1e-12;

MixedProfile PureProfile(const AbsorbingGame& game,
                         const std::vector<int>& actions);
MixedProfile UniformProfile(const AbsorbingGame& game);

// Checks shape and simplex membership; renormalizes within kSimplexTol.
// Throws on anything else.
MixedProfile NormalizeProfile(const AbsorbingGame& game, MixedProfile x);

// x(a) = prod_i x_i(a_i)
double ProfileProb(const AbsorbingGame& game, const MixedProfile& x, int k);
std::vector<double> ProfileDistribution(const AbsorbingGame& game,
                                        const MixedProfile& x);

struct AbsorptionSummary {
  std::vector<double> chi;          // per profile, x(a) P(a)
  double total = 0.0;               // P(x)
  std::vector<double> conditional;  // chi / P(x); empty when P(x) = 0
};

AbsorptionSummary Absorption(const AbsorbingGame& game, const MixedProfile& x);

// Aggregates of a stage under x: expected stage payoff, absorbed payoff
// mass sum_a chi(a,x) u(a), and P(x).
struct StageStats {
  std::vector<double> stage;
  std::vector<double> absorbed;
  double absorb = 0.0;
};

StageStats Stage(const AbsorbingGame& game, const MixedProfile& x);
StageStats StageFromDistribution(const AbsorbingGame& game,
                                 const std::vector<double>& dist);

std::vector<double> UndiscountedPayoff(const AbsorbingGame& game,
                                       const MixedProfile& x);
std::vector<double> DiscountedPayoff(const AbsorbingGame& game,
                                     const MixedProfile& x, double lambda);
std::vector<double> TStagePayoff(const AbsorbingGame& game,
                                 const MixedProfile& x, long horizon);

// Stationary discounted value of a stage with the given stats.
double DiscountedValue(double stage, double absorbed, double absorb,
                       double lambda);

// 1 - (1 - alpha p)^M
double AbsorbWithin(double p_absorb, double alpha, long stages);

}  // namespace absorbeq

#endif  // ABSORBEQ_SRC_PAYOFF_H_
