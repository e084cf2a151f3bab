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

#include "game.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "error.h"

namespace absorbeq {

AbsorbingGame::AbsorbingGame(std::vector<std::vector<std::string>> actions,
                             std::vector<double> absorb,
                             std::vector<double> payoff, bool relaxed_range)
    : actions_(std::move(actions)),
      absorb_(std::move(absorb)),
      payoff_(std::move(payoff)),
      relaxed_range_(relaxed_range) {
  if (actions_.empty()) InputError("game needs at least one player");
  int n = num_players();
  stride_.assign(n, 1);
  long total = 1;
  for (int i = n - 1; i >= 0; --i) {
    if (actions_[i].empty()) InputError("player without actions");
    stride_[i] = static_cast<int>(total);
    total *= static_cast<long>(actions_[i].size());
    if (total > (1L << 24)) InputError("profile table too large");
  }
  if (static_cast<long>(absorb_.size()) != total ||
      static_cast<long>(payoff_.size()) != total * n) {
    InputError("profile table size does not match action counts");
  }
}

int AbsorbingGame::ProfileIndex(const std::vector<int>& profile) const {
  if (static_cast<int>(profile.size()) != num_players()) {
    InputError("profile length does not match player count");
  }
  int index = 0;
  for (int i = 0; i < num_players(); ++i) {
    if (profile[i] < 0 || profile[i] >= num_actions(i)) {
      InputError("action index out of range");
    }
    index += profile[i] * stride_[i];
  }
  return index;
}

std::vector<int> AbsorbingGame::Profile(int index) const {
  std::vector<int> profile(num_players());
  for (int i = 0; i < num_players(); ++i) profile[i] = ActionOf(index, i);
  return profile;
}

std::string AbsorbingGame::ProfileString(int index) const {
  std::ostringstream out;
  out << "(";
  for (int i = 0; i < num_players(); ++i) {
    if (i) out << ",";
    out << actions_[i][ActionOf(index, i)];
  }
  out << ")";
  return out.str();
}

AbsorbingGame BuildGame(
    std::vector<std::vector<std::string>> actions,
    const std::function<std::pair<double, std::vector<double>>(
        const std::vector<int>&)>& entry,
    bool relaxed_range) {
  long total = 1;
  for (const auto& a : actions) total *= static_cast<long>(a.size());
  int n = static_cast<int>(actions.size());
  AbsorbingGame game(actions, std::vector<double>(total, 0.0),
                     std::vector<double>(total * n, 0.0), relaxed_range);
  for (int k = 0; k < game.num_profiles(); ++k) {
    auto [p, u] = entry(game.Profile(k));
    if (static_cast<int>(u.size()) != n) InputError("payoff vector length");
    game.set_absorb(k, p);
    for (int i = 0; i < n; ++i) game.set_payoff(k, i, u[i]);
  }
  return game;
}

void Validate(const AbsorbingGame& game) {
  int n = game.num_players();
  for (int k = 0; k < game.num_profiles(); ++k) {
    if (std::isnan(game.absorb(k))) InputError("incomplete profile table");
    for (int i = 0; i < n; ++i) {
      if (std::isnan(game.payoff(k, i))) InputError("incomplete profile table");
    }
  }
  for (int k = 0; k < game.num_profiles(); ++k) {
    double p = game.absorb(k);
    if (!(p >= 0.0 && p <= 1.0)) {
      InputError("probability out of range at " + game.ProfileString(k));
    }
    for (int i = 0; i < n; ++i) {
      double u = game.payoff(k, i);
      if (!std::isfinite(u)) InputError("payoff not finite");
      if (!game.relaxed_range() && (u < 0.0 || u > 1.0)) {
        InputError("payoff out of range at " + game.ProfileString(k));
      }
    }
  }
  if (game.cap()) {
    const ActionCap& cap = *game.cap();
    if (cap.player < 0 || cap.player >= n || cap.action < 0 ||
        cap.action >= game.num_actions(cap.player)) {
      InputError("restricted action does not exist");
    }
    if (!(cap.alpha >= 0.0 && cap.alpha <= 1.0)) {
      InputError("restriction cap out of range");
    }
  }
}

namespace {

// True iff some profile extending (player -> action) with all others drawn
// from `allowed` has zero absorption probability.
bool HasNonAbsorbingCompanion(const AbsorbingGame& game, int player,
                              int action,
                              const std::vector<std::vector<bool>>& allowed) {
  for (int k = 0; k < game.num_profiles(); ++k) {
    if (game.ActionOf(k, player) != action) continue;
    if (game.absorb(k) != 0.0) continue;
    bool ok = true;
    for (int j = 0; j < game.num_players() && ok; ++j) {
      if (j != player && !allowed[j][game.ActionOf(k, j)]) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

bool AlwaysAbsorbs(const AbsorbingGame& game, int player, int action) {
  for (int k = 0; k < game.num_profiles(); ++k) {
    if (game.ActionOf(k, player) == action && !(game.absorb(k) > 0.0)) {
      return false;
    }
  }
  return true;
}

}  // namespace

ActionPartition DeriveActionPartition(const AbsorbingGame& game) {
  int n = game.num_players();
  ActionPartition part;
  part.continue_actions.resize(n);
  part.quitting_actions.resize(n);
  part.is_quitting.resize(n);
  std::vector<std::vector<bool>> cont(n);
  for (int i = 0; i < n; ++i) {
    part.is_quitting[i].assign(game.num_actions(i), false);
    cont[i].assign(game.num_actions(i), false);
    for (int a = 0; a < game.num_actions(i); ++a) {
      if (AlwaysAbsorbs(game, i, a)) {
        part.is_quitting[i][a] = true;
      } else {
        cont[i][a] = true;
      }
    }
  }
  bool any_quit = false;
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < game.num_actions(i); ++a) {
      if (part.is_quitting[i][a]) {
        part.quitting_actions[i].push_back(a);
        any_quit = true;
      } else {
        part.continue_actions[i].push_back(a);
      }
    }
    if (part.continue_actions[i].empty()) {
      InputError("not quitting-absorbing: player " + std::to_string(i) +
                 " has no continue action");
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int a : part.continue_actions[i]) {
      if (!HasNonAbsorbingCompanion(game, i, a, cont)) {
        InputError("not quitting-absorbing: action " +
                   game.action_names(i)[a] + " of player " +
                   std::to_string(i) +
                   " neither always absorbs nor has a continue companion");
      }
    }
  }
  if (!any_quit) InputError("not quitting-absorbing: no quitting action");
  return part;
}

bool IsGeneric(const AbsorbingGame& game) {
  for (int i = 0; i < game.num_players(); ++i) {
    std::vector<double> values(game.num_profiles());
    for (int k = 0; k < game.num_profiles(); ++k) values[k] = game.payoff(k, i);
    std::sort(values.begin(), values.end());
    if (std::adjacent_find(values.begin(), values.end()) != values.end()) {
      return false;
    }
  }
  return true;
}

GameClassification Classify(const AbsorbingGame& game) {
  GameClassification c;
  int n = game.num_players();
  c.recursive = true;
  bool nonnegative = true;
  for (int k = 0; k < game.num_profiles(); ++k) {
    for (int i = 0; i < n; ++i) {
      if (game.absorb(k) == 0.0 && game.payoff(k, i) != 0.0) {
        c.recursive = false;
      }
      if (game.payoff(k, i) < 0.0) nonnegative = false;
    }
  }
  c.positive = c.recursive && nonnegative;
  c.generic = IsGeneric(game);

  std::vector<int> nonabsorbing;
  for (int k = 0; k < game.num_profiles(); ++k) {
    if (game.absorb(k) == 0.0) nonabsorbing.push_back(k);
  }
  c.spotted = true;
  for (size_t x = 0; x < nonabsorbing.size() && c.spotted; ++x) {
    for (size_t y = x + 1; y < nonabsorbing.size(); ++y) {
      int differ = 0;
      for (int i = 0; i < n; ++i) {
        if (game.ActionOf(nonabsorbing[x], i) !=
            game.ActionOf(nonabsorbing[y], i)) {
          ++differ;
        }
      }
      if (differ < 2) {
        c.spotted = false;
        break;
      }
    }
  }

  std::optional<ActionPartition> part;
  try {
    part = DeriveActionPartition(game);
  } catch (const Error&) {
  }
  if (!part) return c;
  c.quitting_absorbing = true;

  // All-continue profiles and whether any of them absorbs.
  std::vector<int> continue_profiles;
  bool all_continue_nonabsorbing = true;
  for (int k = 0; k < game.num_profiles(); ++k) {
    bool all_continue = true;
    for (int i = 0; i < n && all_continue; ++i) {
      if (part->IsQuitting(i, game.ActionOf(k, i))) all_continue = false;
    }
    if (!all_continue) continue;
    continue_profiles.push_back(k);
    if (game.absorb(k) != 0.0) all_continue_nonabsorbing = false;
  }
  c.general_quitting = all_continue_nonabsorbing;
  if (c.general_quitting) {
    c.quitting = true;
    for (int i = 0; i < n; ++i) {
      if (part->continue_actions[i].size() != 1 ||
          part->quitting_actions[i].size() != 1) {
        c.quitting = false;
      }
    }
  }

  std::vector<int> wide;
  bool shape_ok = true;
  for (int i = 0; i < n; ++i) {
    size_t size = part->continue_actions[i].size();
    if (size == 2) {
      wide.push_back(i);
    } else if (size != 1) {
      shape_ok = false;
    }
  }
  c.two_dimension = shape_ok && wide.size() == 2;
  if (!c.two_dimension) return c;

  int absorbing_count = 0;
  int absorbing_profile = -1;
  for (int k : continue_profiles) {
    if (game.absorb(k) > 0.0) {
      ++absorbing_count;
      absorbing_profile = k;
    }
  }
  if (absorbing_count != 1) return c;
  c.l_shaped = true;
  LShape shape;
  shape.player1 = wide[0];
  shape.player2 = wide[1];
  const auto& cont1 = part->continue_actions[shape.player1];
  const auto& cont2 = part->continue_actions[shape.player2];
  int top1 = game.ActionOf(absorbing_profile, shape.player1);
  int top2 = game.ActionOf(absorbing_profile, shape.player2);
  shape.c1[1] = top1;
  shape.c1[0] = cont1[0] == top1 ? cont1[1] : cont1[0];
  shape.c2[1] = top2;
  shape.c2[0] = cont2[0] == top2 ? cont2[1] : cont2[0];
  shape.rest.assign(n, -1);
  std::vector<int> base(n);
  for (int i = 0; i < n; ++i) {
    if (i == shape.player1 || i == shape.player2) continue;
    shape.rest[i] = part->continue_actions[i][0];
    base[i] = shape.rest[i];
  }
  auto at = [&](int x, int y) {
    std::vector<int> profile = base;
    profile[shape.player1] = shape.c1[x];
    profile[shape.player2] = shape.c2[y];
    return game.ProfileIndex(profile);
  };
  shape.a1 = at(0, 0);
  shape.a2 = at(0, 1);
  shape.a3 = at(1, 0);
  shape.a4 = at(1, 1);
  c.l_shape = shape;
  return c;
}

AbsorbingGame PerturbGeneric(const AbsorbingGame& game, double epsilon) {
  if (!(epsilon > 0.0)) InputError("epsilon must be positive");
  AbsorbingGame out = game;
  int profiles = game.num_profiles();
  for (int k = 0; k < profiles; ++k) {
    double shift = k * epsilon / (2.0 * profiles);
    for (int i = 0; i < game.num_players(); ++i) {
      double u = game.payoff(k, i);
      out.set_payoff(k, i, u + shift <= 1.0 ? u + shift : u - shift);
    }
  }
  if (!IsGeneric(out)) {
    throw Error(ErrorKind::kUndefined, "cannot perturb within epsilon");
  }
  return out;
}

}  // namespace absorbeq
