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

#ifndef ABSORBEQ_SRC_GAME_H_
#define ABSORBEQ_SRC_GAME_H_

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace absorbeq {

// Upper bound on the probability one player may put on one action.
struct ActionCap {
  int player = 0;
  int action = 0;
  double alpha = 1.0;
};

// An absorbing game with a single non-absorbing state. Profiles are stored
// densely, indexed lexicographically with player 0 most significant.
class AbsorbingGame {
 public:
  AbsorbingGame() = default;
  // `absorb` has one entry per profile, `payoff` n entries per profile.
  // NaN marks a missing entry; Validate() reports it.
  AbsorbingGame(std::vector<std::vector<std::string>> actions,
                std::vector<double> absorb, std::vector<double> payoff,
                bool relaxed_range = false);

  int num_players() const { return static_cast<int>(actions_.size()); }
  int num_actions(int player) const {
    return static_cast<int>(actions_[player].size());
  }
  const std::vector<std::string>& action_names(int player) const {
    return actions_[player];
  }
  const std::vector<std::vector<std::string>>& actions() const {
    return actions_;
  }
  int num_profiles() const { return static_cast<int>(absorb_.size()); }

  int ProfileIndex(const std::vector<int>& profile) const;
  std::vector<int> Profile(int index) const;
  int ActionOf(int index, int player) const {
    return (index / stride_[player]) % num_actions(player);
  }
  // Index of the profile equal to `index` except that `player` plays `action`.
  int WithAction(int index, int player, int action) const {
    return index + (action - ActionOf(index, player)) * stride_[player];
  }
  int stride(int player) const { return stride_[player]; }

  double absorb(int index) const { return absorb_[index]; }
  double payoff(int index, int player) const {
    return payoff_[index * num_players() + player];
  }
  const double* payoffs(int index) const {
    return payoff_.data() + index * num_players();
  }
  void set_absorb(int index, double p) { absorb_[index] = p; }
  void set_payoff(int index, int player, double u) {
    payoff_[index * num_players() + player] = u;
  }

  // Internal games may carry payoffs outside [0,1].
  bool relaxed_range() const { return relaxed_range_; }
  void set_relaxed_range(bool relaxed) { relaxed_range_ = relaxed; }

  const std::optional<ActionCap>& cap() const { return cap_; }
  void set_cap(std::optional<ActionCap> cap) { cap_ = cap; }

  std::string ProfileString(int index) const;

 private:
  std::vector<std::vector<std::string>> actions_;
  std::vector<int> stride_;
  std::vector<double> absorb_;
  std::vector<double> payoff_;
  bool relaxed_range_ = false;
  std::optional<ActionCap> cap_;
};

// Fills a game profile by profile. `entry` returns (P(a), u(a)).
AbsorbingGame BuildGame(
    std::vector<std::vector<std::string>> actions,
    const std::function<std::pair<double, std::vector<double>>(
        const std::vector<int>&)>& entry,
    bool relaxed_range = false);

// Throws Error(kInvalidInput) naming the first violated invariant.
void Validate(const AbsorbingGame& game);

struct ActionPartition {
  std::vector<std::vector<int>> continue_actions;
  std::vector<std::vector<int>> quitting_actions;
  // is_quitting[i][a]
  std::vector<std::vector<bool>> is_quitting;

  bool IsQuitting(int player, int action) const {
    return is_quitting[player][action];
  }
};

ActionPartition DeriveActionPartition(const AbsorbingGame& game);

// Canonical labeling of an L-shaped game. c1[0], c1[1] are the two continue
// actions of the first two-action player (c_1^1, c_1^2), likewise c2 for the
// second one. `rest` holds the single continue action of every other player
// (indexed by player, -1 for the two labeled players).
struct LShape {
  int player1 = 0;
  int player2 = 1;
  int c1[2] = {0, 0};
  int c2[2] = {0, 0};
  std::vector<int> rest;
  // Profile indices: a1=(c1^1,c2^1), a2=(c1^1,c2^2), a3=(c1^2,c2^1),
  // a4=(c1^2,c2^2) (the absorbing one).
  int a1 = 0, a2 = 0, a3 = 0, a4 = 0;
};

struct GameClassification {
  bool recursive = false;
  bool positive = false;
  bool generic = false;
  bool general_quitting = false;
  bool quitting = false;
  bool quitting_absorbing = false;
  bool two_dimension = false;
  bool spotted = false;
  bool l_shaped = false;
  std::optional<LShape> l_shape;
};

GameClassification Classify(const AbsorbingGame& game);

// Deterministic payoff shift making every player's payoffs pairwise distinct.
AbsorbingGame PerturbGeneric(const AbsorbingGame& game, double epsilon);

bool IsGeneric(const AbsorbingGame& game);

}  // namespace absorbeq

#endif  // ABSORBEQ_SRC_GAME_H_
