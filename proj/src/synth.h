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

#ifndef ABSORBEQ_SRC_SYNTH_H_
#define ABSORBEQ_SRC_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "auxiliary.h"
#include "game.h"
#include "lcp.h"
#include "strategy.h"
#include "verifier.h"

namespace absorbeq {

struct SynthOptions {
  double epsilon = 0.05;
  std::vector<double> lambda_grid = kDefaultLambdaGrid;
  std::vector<long> t_grid = kDefaultTGrid;
  int density = 20;          // Q-matrix sampling density
  double lcp_tol = kDefaultLcpTol;
  uint64_t seed = 0;
  double budget_secs = 600;  // wall-clock budget for the whole search
  int max_candidates = 64;   // strategies certified before giving up
  // Path following for the NQL construction.
  double omega = 1e-3;
  double path_lambda = 1e-4;
  double theta_step = 1e-2;
  double theta_min_step = 1e-5;
};

struct SynthResult {
  Strategy strategy;
  CertificationReport report;
  std::vector<std::string> log;  // attempted candidates, in order
};

// Solutions of the complementarity problem with no weight on the target
// vector: z in the simplex, w = R z, w_i >= R_ii, z_i > 0 => w_i = R_ii.
struct ZeroTargetSolution {
  std::vector<double> z;
  std::vector<double> w;
  double slack = 0.0;  // min over i outside the support of w_i - R_ii
};
std::vector<ZeroTargetSolution> ZeroTargetSolutions(const Matrix& r,
                                                    double tol = 1e-9);

// Absorption probability of `player` playing `action` against c_{-i}.
double QuitAbsorption(const AbsorbingGame& game, const MixedProfile& c,
                      int player, int action);

// Cyclic one-stage phases whose absorption shares over a cycle equal z
// exactly; the largest per-stage quit probability is alpha_max.
Strategy BuildQuitPlan(const AbsorbingGame& game, const BestResponseMatrix& m,
                       const MixedProfile& c, const std::vector<double>& z,
                       double alpha_max, double epsilon);

// Threats holding each player to the min-max value at `lambda`.
std::vector<Punishment> MinMaxThreats(const AbsorbingGame& game,
                                      double lambda);

SynthResult SynthGeneralQuitting(const AbsorbingGame& game,
                                 const SynthOptions& options);
SynthResult SynthSpotted(const AbsorbingGame& game,
                         const SynthOptions& options);
SynthResult SynthQl(const AbsorbingGame& game, const SynthOptions& options);
SynthResult SynthNql(const AbsorbingGame& game, const SynthOptions& options);

// Dispatch by class: spotted, then L-shaped, then general quitting.
SynthResult Synthesize(const AbsorbingGame& game, const SynthOptions& options);

// Rescaling of a phase that turned the second continue action into a quit
// in an auxiliary game: the smallest length >= min_length that can reach
// the target absorption mass at rate alpha * hat_absorb, and the quit
// probability <= alpha that reaches it exactly.
struct RhoMatch {
  long length = 0;
  double alpha = 0.0;
};
RhoMatch MatchRho(double target_rho, double alpha, long min_length,
                  double hat_absorb);

// Roles in an L-shaped game for the almost stationary construction:
// `quitter` treats its second continue action as a quit, `companion` keeps
// both continue actions.
struct HatLabeling {
  int quitter = 0;
  int companion = 1;
  int quitter_first = 0, quitter_second = 0;
  int companion_first = 0, companion_second = 0;
};
HatLabeling LabelingFor(const AbsorbingGame& game, int side);

// Quitting actions in the labeling (second continue action included).
std::vector<std::vector<int>> LabeledQuits(const AbsorbingGame& game,
                                           const HatLabeling& lab);

struct ProfilePartition {
  std::vector<int> single;        // one labeled quit, others continuing
  std::vector<int> single_tilde;  // single without a^3 and a^4
  std::vector<int> multiple;      // the rest, a^1 and a^2 excluded
};
ProfilePartition PartitionAbsorbingProfiles(const AbsorbingGame& game,
                                            const HatLabeling& lab);

double Chi(const AbsorbingGame& game, const std::vector<int>& profiles,
           const MixedProfile& y);

struct AlphaBounds {
  double p_min = 0.0;
  int num_quits = 0;
  int num_profiles = 0;
  double c_prime = 0.0;  // quit-probability cap making multi-quits negligible
  double c_eps = 0.0;    // absorption cap of the construction
  double delta = 0.0;    // Player-2 shift of the construction
};
AlphaBounds ComputeAlphaBounds(const AbsorbingGame& game,
                               const HatLabeling& lab, double epsilon);

MixedProfile BuildHatProfile(const AbsorbingGame& game, const MixedProfile& x,
                             double delta, double eta, const HatLabeling& lab);

// Almost stationary candidate from a low-absorption profile: hat profile,
// frequency test on the companion at tolerance delta * epsilon, threats.
Strategy BuildAlphaCandidate(const AbsorbingGame& game, const MixedProfile& x,
                             const HatLabeling& lab, double epsilon,
                             double threat_lambda);

}  // namespace absorbeq

#endif  // ABSORBEQ_SRC_SYNTH_H_
