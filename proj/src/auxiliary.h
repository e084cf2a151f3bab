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

#ifndef ABSORBEQ_SRC_AUXILIARY_H_
#define ABSORBEQ_SRC_AUXILIARY_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "game.h"
#include "lcp.h"
#include "payoff.h"

namespace absorbeq {

// Requires an L-shaped game; returns its canonical labeling.
LShape RequireLShape(const AbsorbingGame& game);

// a^3 absorbs with delta1, a^2 with delta2, both paying u(a^4) when they
// absorb.
AbsorbingGame BuildDeltaGame(const AbsorbingGame& game, double delta1,
                             double delta2);

struct RestrictedGame {
  AbsorbingGame game;  // carries the cap as well
  ActionCap cap;
};

// side 1: Gamma^{delta,0} with Player 2's c_2^2 capped at alpha.
// side 2: Gamma^{0,delta} with Player 1's c_1^2 capped at alpha.
RestrictedGame BuildRestrictedGame(const AbsorbingGame& game, double delta,
                                   int side, double alpha);

// Keeps `profile` as the only non-absorbing profile; every other
// non-absorbing profile absorbs surely.
AbsorbingGame BuildSpottedAux(const AbsorbingGame& game, int profile);

// Installs the given payoff vectors at the non-absorbing profiles.
AbsorbingGame BuildWitnessGame(
    const AbsorbingGame& game,
    const std::map<int, std::vector<double>>& witness_by_profile);

// Witness payoff vectors, full length n (zero for players outside the
// matrices).
struct Witnesses {
  std::vector<double> q;   // for Gamma^{1,1}
  std::vector<double> q1;  // for Gamma^{1,0} with c_2^2 removed
  std::vector<double> q2;  // for Gamma^{0,1} with c_1^2 removed
};

struct HomotopyPoint {
  double omega = 0.0;
  double theta = 0.0;
  int segment = 0;  // 0: theta in [-1,0), 1: [0,1], 2: (1,2]
  double delta1 = 0.0;
  double delta2 = 0.0;
  AbsorbingGame game;  // relaxed range, cap attached when present
};

HomotopyPoint BuildHomotopyGame(const AbsorbingGame& game,
                                const Witnesses& witnesses, double omega,
                                double theta);

// Same construction with the segment chosen explicitly; used to check
// that neighbouring segments agree at their common endpoint.
HomotopyPoint BuildHomotopySegment(const AbsorbingGame& game,
                                   const Witnesses& witnesses, double omega,
                                   double theta, int segment);

struct BestResponseMatrix {
  Matrix r;                  // rows/columns indexed like `players`
  std::vector<int> players;  // players that own a quitting action
  std::vector<int> quits;    // chosen quitting action per listed player
  bool reduced = false;      // some player had no quitting action
};

// One matrix per selection of optimal pure quitting responses to c.
std::vector<BestResponseMatrix> BestResponseMatrixSet(
    const AbsorbingGame& aux, const MixedProfile& c);

struct DeviationMatrix {
  Matrix r;
  std::vector<int> deviations;  // b_i(a) per player
};

// Best absorbing deviation of each player from a non-absorbing profile.
DeviationMatrix BestDeviationMatrix(const AbsorbingGame& game, int profile);

struct QlEvidence {
  double delta1 = 0.0;
  double delta2 = 0.0;
  MixedProfile continue_profile;
  BestResponseMatrix matrix;
  int density = 0;
};

struct QlNqlResult {
  enum class Kind { kQL, kNQL, kUnresolved };
  Kind kind = Kind::kUnresolved;
  // All Q-certified candidates in preference order; the first is the
  // reported evidence.
  std::vector<QlEvidence> ql;
  std::optional<Witnesses> witnesses;
  std::string note;
};

QlNqlResult ClassifyQlNql(const AbsorbingGame& game,
                          int density = kDefaultDensity,
                          double tol = kDefaultLcpTol);

// Lifts a witness on the matrix's players to a full payoff vector.
std::vector<double> LiftWitness(const BestResponseMatrix& m,
                                const std::vector<double>& q, int n);

}  // namespace absorbeq

#endif  // ABSORBEQ_SRC_AUXILIARY_H_
