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

#ifndef ABSORBEQ_SRC_EQUILIBRIUM_H_
#define ABSORBEQ_SRC_EQUILIBRIUM_H_

#include <cstdint>
#include <vector>

#include "game.h"
#include "payoff.h"

namespace absorbeq {

// Player i's own-payoff statistics for each pure action against fixed
// opponents: expected stage payoff, absorbed payoff mass, absorption prob.
struct ResponseStats {
  std::vector<double> stage;
  std::vector<double> absorbed;
  std::vector<double> absorb;
};

// Opponent profiles of player i are identified with the profile indices
// where player i plays action 0.
std::vector<int> OpponentProfiles(const AbsorbingGame& game, int player);

ResponseStats ResponseToJoint(const AbsorbingGame& game, int player,
                              const std::vector<double>& joint);
ResponseStats ResponseToProfile(const AbsorbingGame& game, int player,
                                const MixedProfile& x);

// Extreme points of player i's feasible mixed actions (simplex, cut by the
// game's cap when it applies to i).
std::vector<std::vector<double>> FeasibleVertices(const AbsorbingGame& game,
                                                  int player);

struct StationaryResponse {
  double value = 0.0;
  std::vector<double> mixed;  // an optimal vertex
};

// Best stationary deviation value of player i in the one-state discounted
// decision problem; an optimal stationary policy is attained at a vertex.
StationaryResponse BestStationaryResponse(const ResponseStats& stats,
                                          const std::vector<std::vector<double>>&
                                              vertices,
                                          double lambda);
StationaryResponse BestStationaryResponse(const AbsorbingGame& game,
                                          const MixedProfile& x, int player,
                                          double lambda);

// max_i (best response value - current value)
double EquilibriumResidual(const AbsorbingGame& game, const MixedProfile& x,
                           double lambda);

struct SolverOptions {
  double tol = 1e-9;
  uint64_t seed = 0;
  int br_seeds = 8;
  long br_iterations = 2000;
  // When set, the solver prefers the equilibrium nearest to this profile.
  const MixedProfile* warm_start = nullptr;
};

struct DiscountedEquilibrium {
  MixedProfile profile;
  double lambda = 0.0;
  double residual = 0.0;
};

DiscountedEquilibrium StationaryEquilibrium(const AbsorbingGame& game,
                                            double lambda,
                                            const SolverOptions& options = {});

// Every equilibrium found by support enumeration (deduplicated).
std::vector<DiscountedEquilibrium> EnumerateEquilibria(
    const AbsorbingGame& game, double lambda, const SolverOptions& options,
    int limit = 1 << 30);

double ProfileDistance(const MixedProfile& a, const MixedProfile& b);

struct VanishingLimit {
  MixedProfile profile;
  std::vector<DiscountedEquilibrium> path;
  std::vector<double> distances;
  double max_distance = 0.0;
  bool converged = true;
};

VanishingLimit VanishingDiscountLimit(const AbsorbingGame& game,
                                      const std::vector<double>& lambdas,
                                      const SolverOptions& options = {});

struct MinMaxResult {
  int player = 0;
  double lambda = 0.0;
  double value = 0.0;
  // Correlated opponents' profile, indexed like OpponentProfiles().
  std::vector<double> punishment;
};

MinMaxResult MinMax(const AbsorbingGame& game, int player, double lambda,
                    double tol = 1e-11);

// Value of the matrix game rows = player's actions, columns = opponent
// profiles, row player maximizing. Returns value and the column mixture.
double MatrixGameValue(const std::vector<std::vector<double>>& payoff,
                       std::vector<double>* column_strategy);

}  // namespace absorbeq

#endif  // ABSORBEQ_SRC_EQUILIBRIUM_H_
