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

#ifndef ABSORBEQ_SRC_VERIFIER_H_
#define ABSORBEQ_SRC_VERIFIER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "game.h"
#include "payoff.h"
#include "strategy.h"

namespace absorbeq {

// Discounted payoff of conforming play.
std::vector<double> EvalStrategy(const AbsorbingGame& game, const Strategy& s,
                                 double lambda);
// Average payoff over the first `horizon` stages of conforming play.
std::vector<double> EvalStrategyTStage(const AbsorbingGame& game,
                                       const Strategy& s, long horizon);
// Expected absorbing payoff; throws kUndefined when play never absorbs
// and the game is not recursive.
std::vector<double> EvalStrategyUndiscounted(const AbsorbingGame& game,
                                             const Strategy& s);

// Deviations searched: any choice among the player's actions at every
// stage (off-support actions are seen and punished unless they absorb),
// mixtures within the band a monitor cannot tell apart, one unrestricted
// stage inside the support, and a phase-long unrestricted deviation that a
// monitor catches with probability 1 - tolerance at the end of the phase.
// Layer 0: free stage unused; layer 1: used; layer 2: phase-long deviation.
struct DeviationChoice {
  std::vector<double> mixed;
  bool seen = false;   // off the prescribed support
  std::string label;   // "conform", "band", "free", "off"
};

struct PolicySegment {
  int layer = 0;
  int phase = 0;
  long from = 0;  // stage offset within the phase (discounted) or stage
  long to = 0;    // index of play (finite horizon); half-open
  int choice = 0;
};

struct DeviationPolicy {
  int player = 0;
  bool finite = false;  // finite horizon when true
  double lambda = 0.0;
  long horizon = 0;
  std::vector<std::vector<DeviationChoice>> choices;  // per phase
  std::vector<PolicySegment> segments;
  // Discounted: phases where the phase-long deviation is started.
  // Finite horizon: stages at which it is started.
  std::vector<long> long_deviation_starts;
  double value = 0.0;
};

struct DeviationResult {
  double value = 0.0;    // best value found for the deviator
  double conform = 0.0;  // the player's conforming value
  DeviationPolicy policy;
};

DeviationResult BestDeviation(const AbsorbingGame& game, const Strategy& s,
                              int player, double lambda);
DeviationResult BestDeviationTStage(const AbsorbingGame& game,
                                    const Strategy& s, int player,
                                    long horizon);

// Value of a recorded deviation policy; reproduces BestDeviation's value.
double ReplayDeviation(const AbsorbingGame& game, const Strategy& s,
                       const DeviationPolicy& policy);

struct GridEntry {
  bool finite = false;
  double lambda = 0.0;
  long horizon = 0;
  int player = 0;
  double conform = 0.0;
  double deviation = 0.0;
  double gain = 0.0;
  DeviationPolicy policy;
};

struct CertificationReport {
  bool pass = false;
  double epsilon = 0.0;
  double max_gain = 0.0;
  std::vector<double> lambda_grid;
  std::vector<long> t_grid;
  std::vector<GridEntry> entries;
  std::string coverage;
};

// Stage tables of the exact deviation search are kept in memory; longer
// phases or windows are rejected as unsupported.
inline constexpr long kMaxExactLength = 1L << 24;

inline const std::vector<double> kDefaultLambdaGrid = {1e-2, 1e-3, 1e-4};
inline const std::vector<long> kDefaultTGrid = {1000, 10000, 100000};

CertificationReport CertifyUniform(
    const AbsorbingGame& game, const Strategy& s, double epsilon,
    const std::vector<double>& lambda_grid = kDefaultLambdaGrid,
    const std::vector<long>& t_grid = kDefaultTGrid);

// Deterministic uniform draw in [0,1) for (seed, run, stage, stream).
double CounterUniform(uint64_t seed, uint64_t run, uint64_t stage,
                      uint64_t stream);

// Worker count: ABSORBEQ_THREADS if set, else hardware concurrency.
int WorkerCount();

struct SimulationDeviation {
  int player = -1;  // -1: nobody deviates
  // Replaces the player's prescribed mixture in every stage.
  std::vector<double> mixed;
};

struct MonteCarloSummary {
  long runs = 0;
  long horizon = 0;
  uint64_t seed = 0;
  double lambda = 0.0;
  std::vector<double> mean_discounted;
  std::vector<double> se_discounted;
  std::vector<double> mean_absorbed;  // absorbing payoff, absorbed runs
  double absorbed_fraction = 0.0;
  // Absorption stage histogram in power-of-two buckets: bucket k counts
  // absorption at stages [2^k, 2^(k+1)).
  std::vector<long> absorption_histogram;
  std::vector<long> triggers;  // per player: runs where a test fired
  std::vector<long> seen_deviations;  // per player: off-support actions
};

MonteCarloSummary MonteCarlo(const AbsorbingGame& game, const Strategy& s,
                             long runs, long horizon, uint64_t seed,
                             double lambda = 1e-2,
                             const SimulationDeviation& deviation = {});

struct MinmaxRobustness {
  std::vector<double> delta_grid;
  std::vector<double> base_values;            // per player, in the game
  std::vector<std::vector<double>> values;    // [grid point][player]
  std::vector<std::pair<double, double>> points;  // (delta1, delta2)
  double delta_prime = 0.0;  // largest grid value that works; 0 if none
  bool nonempty = false;
};

MinmaxRobustness CheckMinmaxRobustness(const AbsorbingGame& game,
                                       double epsilon,
                                       const std::vector<double>& delta_grid,
                                       double lambda);

}  // namespace absorbeq

#endif  // ABSORBEQ_SRC_VERIFIER_H_
