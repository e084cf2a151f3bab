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

#ifndef ABSORBEQ_TESTS_PAYOFF_ORACLE_H_
#define ABSORBEQ_TESTS_PAYOFF_ORACLE_H_

#include <algorithm>
#include <vector>

#include "game.h"
#include "payoff.h"

namespace absorbeq::testing {

// Truncated series sum_t lambda (1-lambda)^(t-1) E[u_t], with E[u_t]
// obtained by pushing the distribution over (alive, absorbed atom) forward.
inline std::vector<double> SeriesOracle(const AbsorbingGame& g, const MixedProfile& x,
                                 double lambda, long terms) {
  int n = g.num_players();
  std::vector<double> dist = ProfileDistribution(g, x);
  std::vector<double> atom_mass(g.num_profiles(), 0.0);
  double alive = 1.0;
  std::vector<double> total(n, 0.0);
  double weight = lambda;
  for (long t = 0; t < terms; ++t) {
    for (int i = 0; i < n; ++i) {
      double e = 0.0;
      for (int k = 0; k < g.num_profiles(); ++k) {
        e += (alive * dist[k] + atom_mass[k]) * g.payoff(k, i);
      }
      total[i] += weight * e;
    }
    for (int k = 0; k < g.num_profiles(); ++k) {
      atom_mass[k] += alive * dist[k] * g.absorb(k);
    }
    double p = 0.0;
    for (int k = 0; k < g.num_profiles(); ++k) p += dist[k] * g.absorb(k);
    alive *= 1.0 - p;
    weight *= 1.0 - lambda;
  }
  return total;
}

// Independent residual: every pure deviation evaluated by summing the
// discounted series of the two-state chain in closed geometric form.
inline double OracleResidual(const AbsorbingGame& g, const MixedProfile& x,
                      double lambda) {
  auto value = [&](const MixedProfile& y, int i) {
    double stage = 0.0, absorbed = 0.0, p = 0.0;
    for (int k = 0; k < g.num_profiles(); ++k) {
      double w = 1.0;
      for (int j = 0; j < g.num_players(); ++j) w *= y[j][g.ActionOf(k, j)];
      stage += w * g.payoff(k, i);
      absorbed += w * g.absorb(k) * g.payoff(k, i);
      p += w * g.absorb(k);
    }
    // sum_t lambda (1-lambda)^(t-1) [(1-p)^(t-1) stage + (1-(1-p)^(t-1)) a/p]
    double r = (1 - lambda) * (1 - p);
    double alive = lambda * stage / (1 - r);
    double frozen = p > 0 ? (absorbed / p) * (1 - lambda / (1 - r)) : 0.0;
    return alive + frozen;
  };
  double worst = 0.0;
  for (int i = 0; i < g.num_players(); ++i) {
    double base = value(x, i);
    for (int a = 0; a < g.num_actions(i); ++a) {
      MixedProfile y = x;
      std::fill(y[i].begin(), y[i].end(), 0.0);
      y[i][a] = 1.0;
      worst = std::max(worst, value(y, i) - base);
    }
  }
  return worst;
}

}  // namespace absorbeq::testing

#endif  // ABSORBEQ_TESTS_PAYOFF_ORACLE_H_
