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

#include "auxiliary.h"

#include <algorithm>
#include <cmath>

#include "error.h"

namespace absorbeq {

LShape RequireLShape(const AbsorbingGame& game) {
  GameClassification c = Classify(game);
  if (!c.l_shaped) InputError("not L-shaped");
  return *c.l_shape;
}

namespace {

void CheckUnit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) InputError(std::string(what) + " outside [0,1]");
}

void SetAbsorbingCopy(AbsorbingGame& out, const AbsorbingGame& game, int k,
                      int source, double p) {
  out.set_absorb(k, p);
  if (p > 0.0) {
    for (int i = 0; i < game.num_players(); ++i) {
      out.set_payoff(k, i, game.payoff(source, i));
    }
  }
}

AbsorbingGame DeltaGame(const AbsorbingGame& game, const LShape& s,
                        double delta1, double delta2) {
  AbsorbingGame out = game;
  out.set_cap(std::nullopt);
  SetAbsorbingCopy(out, game, s.a3, s.a4, delta1);
  SetAbsorbingCopy(out, game, s.a2, s.a4, delta2);
  return out;
}

}  // namespace

AbsorbingGame BuildDeltaGame(const AbsorbingGame& game, double delta1,
                             double delta2) {
  LShape s = RequireLShape(game);
  CheckUnit(delta1, "delta1");
  CheckUnit(delta2, "delta2");
  return DeltaGame(game, s, delta1, delta2);
}

RestrictedGame BuildRestrictedGame(const AbsorbingGame& game, double delta,
                                   int side, double alpha) {
  LShape s = RequireLShape(game);
  CheckUnit(delta, "delta");
  CheckUnit(alpha, "alpha");
  RestrictedGame out;
  if (side == 1) {
    out.game = DeltaGame(game, s, delta, 0.0);
    out.cap = ActionCap{s.player2, s.c2[1], alpha};
  } else if (side == 2) {
    out.game = DeltaGame(game, s, 0.0, delta);
    out.cap = ActionCap{s.player1, s.c1[1], alpha};
  } else {
    InputError("side must be 1 or 2");
  }
  out.game.set_cap(out.cap);
  return out;
}

AbsorbingGame BuildSpottedAux(const AbsorbingGame& game, int profile) {
  if (profile < 0 || profile >= game.num_profiles()) {
    InputError("profile out of range");
  }
  if (game.absorb(profile) > 0.0) InputError("profile is absorbing");
  AbsorbingGame out = game;
  for (int k = 0; k < game.num_profiles(); ++k) {
    if (k != profile && game.absorb(k) == 0.0) out.set_absorb(k, 1.0);
  }
  return out;
}

AbsorbingGame BuildWitnessGame(
    const AbsorbingGame& game,
    const std::map<int, std::vector<double>>& witness_by_profile) {
  AbsorbingGame out = game;
  out.set_relaxed_range(true);
  for (int k = 0; k < game.num_profiles(); ++k) {
    if (game.absorb(k) > 0.0) continue;
    auto it = witness_by_profile.find(k);
    if (it == witness_by_profile.end()) InputError("missing witness entry");
    if (static_cast<int>(it->second.size()) != game.num_players()) {
      InputError("witness vector has wrong length");
    }
    for (int i = 0; i < game.num_players(); ++i) {
      out.set_payoff(k, i, it->second[i]);
    }
  }
  return out;
}

namespace {

void InstallPayoff(AbsorbingGame& g, const std::vector<double>& v) {
  for (int k = 0; k < g.num_profiles(); ++k) {
    if (g.absorb(k) > 0.0) continue;
    for (int i = 0; i < g.num_players(); ++i) g.set_payoff(k, i, v[i]);
  }
}

std::vector<double> Mix(double a, const std::vector<double>& x, double b,
                        const std::vector<double>& y) {
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

}  // namespace

HomotopyPoint BuildHomotopySegment(const AbsorbingGame& game,
                                   const Witnesses& w, double omega,
                                   double theta, int segment) {
  LShape s = RequireLShape(game);
  if (!(omega > 0.0 && omega <= 1.0)) InputError("omega outside (0,1]");
  if (!(theta >= -1.0 && theta <= 2.0)) InputError("theta outside [-1,2]");
  int n = game.num_players();
  if (static_cast<int>(w.q.size()) != n || static_cast<int>(w.q1.size()) != n ||
      static_cast<int>(w.q2.size()) != n) {
    InputError("witness vectors have wrong length");
  }
  HomotopyPoint pt;
  pt.omega = omega;
  pt.theta = theta;
  pt.segment = segment;
  std::vector<double> payoff;
  std::optional<ActionCap> cap;
  if (segment == 0) {
    pt.delta1 = omega;
    payoff = Mix(-theta, w.q1, 1.0 + theta, w.q);
    cap = ActionCap{s.player2, s.c2[1], 1.0 + theta};
  } else if (segment == 1) {
    pt.delta1 = (1.0 - theta) * omega;
    pt.delta2 = theta * omega;
    payoff = w.q;
  } else {
    pt.delta2 = omega;
    payoff = Mix(theta - 1.0, w.q2, 2.0 - theta, w.q);
    cap = ActionCap{s.player1, s.c1[1], 2.0 - theta};
  }
  pt.game = DeltaGame(game, s, pt.delta1, pt.delta2);
  pt.game.set_relaxed_range(true);
  InstallPayoff(pt.game, payoff);
  if (cap) {
    cap->alpha = std::clamp(cap->alpha, 0.0, 1.0);
    pt.game.set_cap(cap);
  }
  return pt;
}

HomotopyPoint BuildHomotopyGame(const AbsorbingGame& game,
                                const Witnesses& w, double omega,
                                double theta) {
  int segment = theta < 0.0 ? 0 : (theta <= 1.0 ? 1 : 2);
  return BuildHomotopySegment(game, w, omega, theta, segment);
}

std::vector<BestResponseMatrix> BestResponseMatrixSet(const AbsorbingGame& aux,
                                                      const MixedProfile& c) {
  ActionPartition part = DeriveActionPartition(aux);
  int n = aux.num_players();
  MixedProfile x = NormalizeProfile(aux, c);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < aux.num_actions(i); ++a) {
      if (x[i][a] > 0.0 && part.IsQuitting(i, a)) {
        InputError("continue profile puts weight on a quitting action");
      }
    }
  }
  std::vector<int> players;
  std::vector<std::vector<int>> best;           // optimal quits per player
  std::vector<std::vector<std::vector<double>>> columns;  // per optimal quit
  bool reduced = false;
  for (int i = 0; i < n; ++i) {
    if (part.quitting_actions[i].empty()) {
      reduced = true;
      continue;
    }
    std::vector<std::pair<int, std::vector<double>>> options;
    for (int q : part.quitting_actions[i]) {
      MixedProfile y = x;
      std::fill(y[i].begin(), y[i].end(), 0.0);
      y[i][q] = 1.0;
      std::vector<double> num(n, 0.0);
      double den = 0.0;
      for (int k = 0; k < aux.num_profiles(); ++k) {
        double wgt = ProfileProb(aux, y, k) * aux.absorb(k);
        if (wgt == 0.0) continue;
        den += wgt;
        for (int j = 0; j < n; ++j) num[j] += wgt * aux.payoff(k, j);
      }
      for (double& v : num) v /= den;
      options.emplace_back(q, num);
    }
    double top = -1e300;
    for (const auto& o : options) top = std::max(top, o.second[i]);
    std::vector<int> argmax;
    std::vector<std::vector<double>> cols;
    for (const auto& o : options) {
      if (o.second[i] >= top - 1e-12) {
        argmax.push_back(o.first);
        cols.push_back(o.second);
      }
    }
    players.push_back(i);
    best.push_back(argmax);
    columns.push_back(cols);
  }
  if (players.empty()) InputError("player has no quitting action");
  std::vector<BestResponseMatrix> out;
  int m = static_cast<int>(players.size());
  std::vector<size_t> idx(m, 0);
  while (true) {
    BestResponseMatrix br;
    br.players = players;
    br.reduced = reduced;
    br.r.assign(m, std::vector<double>(m));
    for (int col = 0; col < m; ++col) {
      br.quits.push_back(best[col][idx[col]]);
      for (int row = 0; row < m; ++row) {
        br.r[row][col] = columns[col][idx[col]][players[row]];
      }
    }
    out.push_back(br);
    int k = m - 1;
    while (k >= 0 && ++idx[k] == best[k].size()) idx[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

DeviationMatrix BestDeviationMatrix(const AbsorbingGame& game, int profile) {
  if (game.absorb(profile) > 0.0) InputError("profile is absorbing");
  int n = game.num_players();
  DeviationMatrix out;
  out.r.assign(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    int own = game.ActionOf(profile, i);
    int best = -1;
    double top = -1e300;
    bool tie = false;
    for (int a = 0; a < game.num_actions(i); ++a) {
      if (a == own) continue;
      double v = game.payoff(game.WithAction(profile, i, a), i);
      if (v > top) {
        top = v;
        best = a;
        tie = false;
      } else if (v == top) {
        tie = true;
      }
    }
    if (best < 0) InputError("player has a single action");
    if (tie) InputError("not generic");
    out.deviations.push_back(best);
    int k = game.WithAction(profile, i, best);
    for (int j = 0; j < n; ++j) out.r[j][i] = game.payoff(k, j);
  }
  return out;
}

std::vector<double> LiftWitness(const BestResponseMatrix& m,
                                const std::vector<double>& q, int n) {
  std::vector<double> out(n, 0.0);
  for (size_t k = 0; k < m.players.size(); ++k) out[m.players[k]] = q[k];
  return out;
}

namespace {

// Continue profile on the labeled players: weight `s1` on c_1^2 and `s2`
// on c_2^2, single continue action for everybody else.
MixedProfile LabeledContinue(const AbsorbingGame& game, const LShape& s,
                             double s1, double s2) {
  MixedProfile c(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    c[i].assign(game.num_actions(i), 0.0);
    if (i == s.player1) {
      c[i][s.c1[0]] = 1.0 - s1;
      c[i][s.c1[1]] += s1;
    } else if (i == s.player2) {
      c[i][s.c2[0]] = 1.0 - s2;
      c[i][s.c2[1]] += s2;
    } else {
      c[i][s.rest[i]] = 1.0;
    }
  }
  return c;
}

// Witness common to every matrix of a set, if one is found.
std::optional<std::vector<double>> CommonWitness(
    const std::vector<BestResponseMatrix>& set, int n, int density,
    double tol) {
  for (const auto& m : set) {
    auto w = FindWitness(m.r, density, tol, LcpVariant::kEquilibrium);
    if (!w) continue;
    bool all = true;
    for (const auto& other : set) {
      if (SolveLcp(other.r, *w, tol, LcpVariant::kEquilibrium)) all = false;
    }
    if (all) return LiftWitness(m, *w, n);
  }
  return std::nullopt;
}

}  // namespace

QlNqlResult ClassifyQlNql(const AbsorbingGame& game, int density, double tol) {
  LShape s = RequireLShape(game);
  int n = game.num_players();
  QlNqlResult out;
  const double d = 0.5;  // any positive value gives the same matrix sets

  struct Probe {
    double d1, d2, s1, s2;
  };
  std::vector<Probe> endpoints = {
      {d, 0.0, 0.0, 1.0},  // Gamma^{d,0}, Player 2 on c_2^2
      {0.0, d, 1.0, 0.0},  // Gamma^{0,d}, Player 1 on c_1^2
      {d, d, 0.0, 0.0},    // Gamma^{d,d} at a^1
      {d, 0.0, 0.0, 0.0},
      {0.0, d, 0.0, 0.0},
  };
  auto probe = [&](const Probe& p) {
    AbsorbingGame aux = DeltaGame(game, s, p.d1, p.d2);
    MixedProfile c = LabeledContinue(game, s, p.s1, p.s2);
    for (const auto& m : BestResponseMatrixSet(aux, c)) {
      QVerdict v = IsQMatrix(m.r, density, tol, LcpVariant::kEquilibrium);
      if (v.q_certified) {
        out.ql.push_back({p.d1, p.d2, c, m, v.density});
      }
    }
  };
  for (const auto& p : endpoints) probe(p);
  if (out.ql.empty()) {
    for (int step = 1; step < 20; ++step) {
      double t = step / 20.0;
      probe({d, 0.0, 0.0, t});
      probe({0.0, d, t, 0.0});
    }
  }
  if (!out.ql.empty()) {
    out.kind = QlNqlResult::Kind::kQL;
    return out;
  }

  MixedProfile a1 = LabeledContinue(game, s, 0.0, 0.0);
  auto q = CommonWitness(BestResponseMatrixSet(DeltaGame(game, s, 1, 1), a1), n,
                         density, tol);
  auto q1 = CommonWitness(BestResponseMatrixSet(DeltaGame(game, s, 1, 0), a1),
                          n, density, tol);
  auto q2 = CommonWitness(BestResponseMatrixSet(DeltaGame(game, s, 0, 1), a1),
                          n, density, tol);
  if (q && q1 && q2) {
    out.kind = QlNqlResult::Kind::kNQL;
    out.witnesses = Witnesses{*q, *q1, *q2};
    return out;
  }
  out.note =
      "no Q-certified matrix and no witness for every required matrix at "
      "density " + std::to_string(density);
  return out;
}

}  // namespace absorbeq
