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

#include "synth.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "equilibrium.h"
#include "error.h"
#include "lp.h"
#include "payoff.h"

namespace absorbeq {
namespace {

using Clock = std::chrono::steady_clock;

class Budget {
 public:
  explicit Budget(const SynthOptions& o)
      : start_(Clock::now()), secs_(o.budget_secs), left_(o.max_candidates) {}
  bool Exhausted() const {
    double used =
        std::chrono::duration<double>(Clock::now() - start_).count();
    return used > secs_ || left_ <= 0;
  }
  void Spend() { --left_; }

 private:
  Clock::time_point start_;
  double secs_;
  int left_;
};

[[noreturn]] void Fail(const std::string& what,
                       const std::vector<std::string>& log) {
  std::ostringstream os;
  os << "synthesis failed: " << what;
  for (const std::string& line : log) os << "\n  " << line;
  throw Error(ErrorKind::kSynthesisFailed, os.str());
}

double SmallestLambda(const SynthOptions& o) {
  if (o.lambda_grid.empty()) InputError("lambda grid is empty");
  return *std::min_element(o.lambda_grid.begin(), o.lambda_grid.end());
}

std::string Fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// Certifies `s` in `game`; logs the outcome under `label`.
bool TryCertify(const AbsorbingGame& game, Strategy& s,
                const SynthOptions& o, const std::string& label,
                Budget& budget, SynthResult& out) {
  budget.Spend();
  try {
    ValidateStrategy(game, s);
    CertificationReport r =
        CertifyUniform(game, s, o.epsilon, o.lambda_grid, o.t_grid);
    out.log.push_back(label + ": max gain " + Fmt(r.max_gain) +
                      (r.pass ? " (certified)" : " (rejected)"));
    if (r.pass) {
      out.strategy = s;
      out.report = std::move(r);
      return true;
    }
  } catch (const Error& e) {
    out.log.push_back(label + ": " + e.what());
  }
  return false;
}

Strategy AlmostStationary(const AbsorbingGame& game, const MixedProfile& x,
                          double epsilon, double threat_lambda,
                          const std::string& route) {
  Strategy s;
  s.kind = StrategyKind::kAlmostStationary;
  s.epsilon = epsilon;
  Phase p;
  p.base = x;
  s.phases.push_back(p);
  s.punishments = MinMaxThreats(game, threat_lambda);
  s.route = route;
  return s;
}

// Frequency tests on every mixed row of x: the most likely action is
// tested at tolerance epsilon / 2.
void MonitorMixedRows(Strategy& s, double epsilon) {
  Phase& p = s.phases[0];
  for (int i = 0; i < static_cast<int>(p.base.size()); ++i) {
    const std::vector<double>& row = p.base[i];
    int best = static_cast<int>(std::max_element(row.begin(), row.end()) -
                                row.begin());
    if (row[best] >= 1.0 - kSimplexTol) continue;
    p.monitors.push_back(AttachMonitoring(i, best, row[best], epsilon / 2));
  }
}

// Stationary route shared by the witness branches: the limit profile must
// absorb in `game`; threats first, frequency tests when that is not enough.
bool TryStationaryRoute(const AbsorbingGame& game, const MixedProfile& x,
                        const SynthOptions& o, const std::string& route,
                        Budget& budget, SynthResult& out) {
  double p = Absorption(game, x).total;
  if (!(p > 0.0)) {
    out.log.push_back(route + ": limit profile does not absorb");
    return false;
  }
  Strategy s = AlmostStationary(game, x, o.epsilon, SmallestLambda(o), route);
  if (TryCertify(game, s, o, route, budget, out)) return true;
  bool mixed = false;
  for (const auto& row : x) {
    for (double v : row) mixed |= v > kSimplexTol && v < 1.0 - kSimplexTol;
  }
  if (!mixed || budget.Exhausted()) return false;
  MonitorMixedRows(s, o.epsilon);
  return TryCertify(game, s, o, route + " with frequency tests", budget,
                    out);
}

std::vector<std::vector<double>> CandidateWeights(const Matrix& r,
                                                  const SynthOptions& o) {
  std::vector<std::vector<double>> out;
  auto add = [&](std::vector<double> z) {
    for (const auto& seen : out) {
      double d = 0.0;
      for (size_t k = 0; k < z.size(); ++k) d += std::abs(seen[k] - z[k]);
      if (d < 1e-9) return;
    }
    out.push_back(std::move(z));
  };
  for (const ZeroTargetSolution& sol : ZeroTargetSolutions(r, o.lcp_tol)) {
    add(sol.z);
  }
  // Targets seeded from the one-shot absorbing payoffs (the columns of R),
  // followed through the continuation payoffs of the solutions found.
  int n = static_cast<int>(r.size());
  std::vector<std::vector<double>> targets;
  for (int k = 0; k < n; ++k) {
    std::vector<double> q(n);
    for (int i = 0; i < n; ++i) q[i] = r[i][k];
    targets.push_back(q);
  }
  for (int round = 0; round < 8 && !targets.empty(); ++round) {
    std::vector<std::vector<double>> next;
    for (const auto& q : targets) {
      std::optional<LcpSolution> sol =
          SolveLcp(r, q, o.lcp_tol, LcpVariant::kEquilibrium);
      if (!sol) continue;
      std::vector<double> z(sol->z.begin() + 1, sol->z.end());
      double total = 0.0;
      for (double v : z) total += v;
      if (total <= 1e-12) continue;
      for (double& v : z) v /= total;
      size_t before = out.size();
      add(z);
      if (out.size() > before) {
        std::vector<double> w(n, 0.0);
        for (int i = 0; i < n; ++i) {
          for (int k = 0; k < n; ++k) w[i] += r[i][k] * z[k];
        }
        next.push_back(w);
      }
    }
    targets = std::move(next);
  }
  return out;
}

// Q branch: quit plans designed in `plan_game` at continue profile c and
// certified in `game` (the two share action sets).
bool TryQuitPlans(const AbsorbingGame& plan_game, const AbsorbingGame& game,
                  const BestResponseMatrix& m, const MixedProfile& c,
                  const SynthOptions& o, const std::string& route,
                  Budget& budget, SynthResult& out) {
  std::vector<std::vector<double>> zs = CandidateWeights(m.r, o);
  if (zs.empty()) {
    out.log.push_back(route + ": no complementarity solution");
    return false;
  }
  std::vector<Punishment> threats = MinMaxThreats(game, SmallestLambda(o));
  for (size_t k = 0; k < zs.size(); ++k) {
    for (double frac : {0.95, 0.5}) {
      if (budget.Exhausted()) return false;
      std::string label = route + " candidate " + std::to_string(k) +
                          " at alpha " + Fmt(frac) + " eps";
      Strategy s;
      try {
        s = BuildQuitPlan(plan_game, m, c, zs[k], frac * o.epsilon,
                          o.epsilon);
      } catch (const Error& e) {
        out.log.push_back(label + ": " + e.what());
        continue;
      }
      s.punishments = threats;
      s.route = route;
      if (TryCertify(game, s, o, label, budget, out)) return true;
    }
  }
  return false;
}

std::vector<MixedProfile> PureContinueProfiles(const AbsorbingGame& game,
                                               const ActionPartition& part,
                                               int limit) {
  std::vector<MixedProfile> out;
  int n = game.num_players();
  std::vector<int> idx(n, 0);
  while (static_cast<int>(out.size()) < limit) {
    std::vector<int> a(n);
    for (int i = 0; i < n; ++i) a[i] = part.continue_actions[i][idx[i]];
    out.push_back(PureProfile(game, a));
    int i = n - 1;
    while (i >= 0 && ++idx[i] == static_cast<int>(
                                     part.continue_actions[i].size())) {
      idx[i--] = 0;
    }
    if (i < 0) break;
  }
  return out;
}

// Ties among a player's unilateral deviations from a non-absorbing profile
// are broken by tiny offsets on the absorbing payoffs involved.
AbsorbingGame BreakDeviationTies(const AbsorbingGame& game) {
  AbsorbingGame g = game;
  g.set_relaxed_range(true);
  const double step = 1e-9;
  for (int a = 0; a < game.num_profiles(); ++a) {
    if (game.absorb(a) > 0.0) continue;
    for (int i = 0; i < game.num_players(); ++i) {
      std::vector<int> alts;
      for (int b = 0; b < game.num_actions(i); ++b) {
        if (b != game.ActionOf(a, i)) alts.push_back(game.WithAction(a, i, b));
      }
      for (size_t x = 0; x < alts.size(); ++x) {
        int bumps = 0;
        for (size_t y = 0; y < x; ++y) {
          if (std::abs(g.payoff(alts[x], i) - g.payoff(alts[y], i)) <= 1e-12) {
            ++bumps;
          }
        }
        if (bumps > 0) {
          g.set_payoff(alts[x], i, g.payoff(alts[x], i) - bumps * step);
        }
      }
    }
  }
  return g;
}

}  // namespace

std::vector<ZeroTargetSolution> ZeroTargetSolutions(const Matrix& r,
                                                    double tol) {
  CheckLcpDims(r, std::vector<double>(r.size(), 0.0));
  int n = static_cast<int>(r.size());
  if (n > kMaxQDimension) {
    throw Error(ErrorKind::kUnsupported, "matrix too large for enumeration");
  }
  std::vector<ZeroTargetSolution> out;
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> in, outside;
    for (int i = 0; i < n; ++i) ((mask >> i) & 1 ? in : outside).push_back(i);
    int s = static_cast<int>(in.size());
    LinearProgram lp(s + 1);
    lp.objective[s] = 1.0;
    std::vector<double> sum(s + 1, 1.0);
    sum[s] = 0.0;
    lp.AddRow(sum, Sense::kEq, 1.0);
    for (int k : in) {
      std::vector<double> row(s + 1, 0.0);
      for (int l = 0; l < s; ++l) row[l] = r[k][in[l]];
      lp.AddRow(row, Sense::kEq, r[k][k]);
    }
    for (int j : outside) {
      std::vector<double> row(s + 1, 0.0);
      for (int l = 0; l < s; ++l) row[l] = r[j][in[l]];
      row[s] = -1.0;
      lp.AddRow(row, Sense::kGe, r[j][j]);
    }
    std::vector<double> cap(s + 1, 0.0);
    cap[s] = 1.0;
    lp.AddRow(cap, Sense::kLe, 1.0);
    LpResult res = SolveLp(lp, 1e-12);
    if (res.status != LpStatus::kOptimal) continue;
    ZeroTargetSolution sol;
    sol.z.assign(n, 0.0);
    for (int l = 0; l < s; ++l) sol.z[in[l]] = std::max(0.0, res.x[l]);
    double total = 0.0;
    for (double v : sol.z) total += v;
    for (double& v : sol.z) v /= total;
    sol.w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) sol.w[i] += r[i][k] * sol.z[k];
    }
    sol.slack = outside.empty() ? 1.0 : std::numeric_limits<double>::max();
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      double gap = sol.w[i] - r[i][i];
      if (gap < -tol) ok = false;
      if (sol.z[i] > tol && std::abs(gap) > std::max(tol, 1e-7)) ok = false;
      if (sol.z[i] <= tol) sol.slack = std::min(sol.slack, gap);
    }
    if (!ok) continue;
    bool dup = false;
    for (const auto& seen : out) {
      double d = 0.0;
      for (int i = 0; i < n; ++i) d += std::abs(seen.z[i] - sol.z[i]);
      dup |= d < 1e-9;
    }
    if (!dup) out.push_back(std::move(sol));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ZeroTargetSolution& a, const ZeroTargetSolution& b) {
                     return a.slack > b.slack;
                   });
  return out;
}

double QuitAbsorption(const AbsorbingGame& game, const MixedProfile& c,
                      int player, int action) {
  MixedProfile y = c;
  std::fill(y[player].begin(), y[player].end(), 0.0);
  y[player][action] = 1.0;
  return Absorption(game, y).total;
}

Strategy BuildQuitPlan(const AbsorbingGame& game, const BestResponseMatrix& m,
                       const MixedProfile& c, const std::vector<double>& z,
                       double alpha_max, double epsilon) {
  if (z.size() != m.players.size()) InputError("weights have wrong length");
  if (!(alpha_max > 0.0 && alpha_max < 1.0)) {
    InputError("alpha_max must be in (0,1)");
  }
  std::vector<int> support;
  std::vector<double> p;
  for (size_t k = 0; k < z.size(); ++k) {
    if (z[k] <= 1e-12) continue;
    double pk = QuitAbsorption(game, c, m.players[k], m.quits[k]);
    if (!(pk > 0.0)) {
      throw Error(ErrorKind::kSynthesisFailed, "quit does not absorb");
    }
    support.push_back(static_cast<int>(k));
    p.push_back(pk);
  }
  if (support.empty()) InputError("weights are zero");
  double total = 0.0;
  for (int k : support) total += z[k];
  // Phase j absorbs s * z_j of the cycle; its rate r_j equals
  // s z_j / (1 - s sum_{l<j} z_l), so alpha_j <= alpha_max bounds s.
  double scale = 1.0 / total;
  double before = 0.0;
  for (size_t j = 0; j < support.size(); ++j) {
    double zj = z[support[j]] / total;
    scale = std::min(scale, alpha_max * p[j] / (zj + alpha_max * p[j] * before));
    before += zj;
  }
  Strategy s;
  s.kind = StrategyKind::kSunspot;
  s.epsilon = epsilon;
  s.route = "quit plan";
  before = 0.0;
  for (size_t j = 0; j < support.size(); ++j) {
    double zj = z[support[j]] / total;
    double rate = scale * zj / (1.0 - scale * before);
    before += zj;
    Phase ph;
    ph.quitter = m.players[support[j]];
    ph.quit_action = m.quits[support[j]];
    ph.alpha = std::min(alpha_max, rate / p[j]);
    ph.length = 1;
    ph.base = c;
    s.phases.push_back(ph);
  }
  return s;
}

std::vector<Punishment> MinMaxThreats(const AbsorbingGame& game,
                                      double lambda) {
  std::vector<Punishment> out;
  for (int i = 0; i < game.num_players(); ++i) {
    MinMaxResult mm = MinMax(game, i, lambda);
    out.push_back({i, mm.punishment, mm.value});
  }
  return out;
}

SynthResult SynthGeneralQuitting(const AbsorbingGame& game,
                                 const SynthOptions& o) {
  GameClassification cls = Classify(game);
  bool any_quit = false;
  for (int k = 0; k < game.num_profiles(); ++k) any_quit |= game.absorb(k) > 0;
  if (!any_quit) InputError("no quitting actions");
  ActionPartition part = DeriveActionPartition(game);
  if (!cls.general_quitting) InputError("not a general quitting game");
  SynthResult out;
  Budget budget(o);
  std::vector<MixedProfile> cs = PureContinueProfiles(game, part, 16);
  std::vector<std::pair<BestResponseMatrix, MixedProfile>> witnessed;
  for (size_t ci = 0; ci < cs.size(); ++ci) {
    std::vector<BestResponseMatrix> ms;
    try {
      ms = BestResponseMatrixSet(game, cs[ci]);
    } catch (const Error& e) {
      out.log.push_back("continue profile " + std::to_string(ci) + ": " +
                        e.what());
      continue;
    }
    for (size_t mi = 0; mi < ms.size(); ++mi) {
      const BestResponseMatrix& m = ms[mi];
      std::string route = "quit plan at continue profile " +
                          std::to_string(ci) + " matrix " + std::to_string(mi);
      QVerdict v = IsQMatrix(m.r, o.density, o.lcp_tol, LcpVariant::kEquilibrium);
      if (!v.q_certified) {
        out.log.push_back(route + ": not Q, witness kept");
        witnessed.push_back({m, cs[ci]});
        continue;
      }
      if (TryQuitPlans(game, game, m, cs[ci], o, route, budget, out)) {
        return out;
      }
      if (budget.Exhausted()) Fail("budget exhausted in the Q branch", out.log);
    }
  }
  // Non-Q branch: one witness installed at every non-absorbing profile.
  for (const auto& [m, c] : witnessed) {
    if (budget.Exhausted()) break;
    std::optional<std::vector<double>> q =
        FindWitness(m.r, o.density, o.lcp_tol, LcpVariant::kEquilibrium);
    if (!q) continue;
    std::vector<double> lifted = LiftWitness(m, *q, game.num_players());
    std::map<int, std::vector<double>> by_profile;
    for (int k = 0; k < game.num_profiles(); ++k) {
      if (game.absorb(k) == 0.0) by_profile[k] = lifted;
    }
    AbsorbingGame wg = BuildWitnessGame(game, by_profile);
    SolverOptions so;
    so.seed = o.seed;
    try {
      VanishingLimit lim =
          VanishingDiscountLimit(wg, {1e-2, 1e-3, 1e-4, 1e-5}, so);
      if (TryStationaryRoute(game, lim.profile, o, "witness limit", budget,
                             out)) {
        return out;
      }
    } catch (const Error& e) {
      out.log.push_back(std::string("witness limit: ") + e.what());
    }
  }
  Fail("no certified plan in the Q or witness branch", out.log);
}

SynthResult SynthSpotted(const AbsorbingGame& game_in,
                         const SynthOptions& o) {
  GameClassification cls = Classify(game_in);
  if (!cls.spotted) InputError("not spotted");
  if (!cls.positive || !cls.recursive) {
    InputError("spotted synthesis needs a positive recursive game");
  }
  AbsorbingGame game = IsGeneric(game_in) ? game_in
                                          : BreakDeviationTies(game_in);
  SynthResult out;
  Budget budget(o);
  std::vector<int> open;
  for (int k = 0; k < game.num_profiles(); ++k) {
    if (game.absorb(k) == 0.0) open.push_back(k);
  }
  std::map<int, std::vector<double>> witnesses;
  for (int a : open) {
    DeviationMatrix dm;
    try {
      dm = BestDeviationMatrix(game, a);
    } catch (const Error& e) {
      out.log.push_back("profile " + game.ProfileString(a) + ": " + e.what());
      continue;
    }
    QVerdict v = IsQMatrix(dm.r, o.density, o.lcp_tol, LcpVariant::kEquilibrium);
    std::string route = "spotted Q plan at " + game.ProfileString(a);
    if (!v.q_certified) {
      witnesses[a] = *v.witness;
      out.log.push_back(route + ": not Q, witness kept");
      continue;
    }
    AbsorbingGame aux = BuildSpottedAux(game, a);
    MixedProfile c = PureProfile(aux, aux.Profile(a));
    std::vector<BestResponseMatrix> ms = BestResponseMatrixSet(aux, c);
    for (const BestResponseMatrix& m : ms) {
      if (TryQuitPlans(aux, game_in, m, c, o, route, budget, out)) {
        return out;
      }
    }
    if (budget.Exhausted()) Fail("budget exhausted in the Q path", out.log);
  }
  if (witnesses.size() == open.size()) {
    AbsorbingGame wg = BuildWitnessGame(game, witnesses);
    SolverOptions so;
    so.seed = o.seed;
    try {
      VanishingLimit lim =
          VanishingDiscountLimit(wg, {1e-2, 1e-3, 1e-4, 1e-5}, so);
      if (TryStationaryRoute(game_in, lim.profile, o, "spotted witness limit",
                             budget, out)) {
        return out;
      }
    } catch (const Error& e) {
      out.log.push_back(std::string("spotted witness limit: ") + e.what());
    }
  } else {
    out.log.push_back("witness path skipped: some matrix is Q");
  }
  Fail("no certified spotted construction", out.log);
}

RhoMatch MatchRho(double target_rho, double alpha, long min_length,
                  double hat_absorb) {
  if (!(target_rho > 0.0 && target_rho < 1.0)) {
    InputError("target absorption must be in (0,1)");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) InputError("alpha must be in (0,1]");
  if (!(hat_absorb > 0.0 && hat_absorb <= 1.0)) {
    InputError("absorption probability must be in (0,1]");
  }
  RhoMatch m;
  m.length = std::max(1L, min_length);
  // Smallest length reaching the target at the full rate.
  double per = std::log1p(-alpha * hat_absorb);
  double need = std::log1p(-target_rho) / per;
  if (std::isinf(per)) {
    need = 1.0;
  }
  long search = std::max(m.length, static_cast<long>(std::floor(need)) - 1);
  while (AbsorbWithin(hat_absorb, alpha, search) < target_rho) ++search;
  m.length = std::max(m.length, search);
  double lo = 0.0, hi = alpha;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (AbsorbWithin(hat_absorb, mid, m.length) < target_rho) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-17) break;
  }
  m.alpha = hi;
  if (std::abs(AbsorbWithin(hat_absorb, m.alpha, m.length) - target_rho) >
      1e-10) {
    throw Error(ErrorKind::kSolverFailure, "absorption match did not converge");
  }
  return m;
}

namespace {

// Maps an auxiliary-game plan to the L-shaped game: true quits are copied,
// phases quitting with a second continue action get a companion mixture
// and a rescaled length and rate.
Strategy TransformPlan(const AbsorbingGame& game, const AbsorbingGame& aux,
                       const LShape& l, const Strategy& plan, double epsilon) {
  ActionPartition part = DeriveActionPartition(game);
  Strategy s = plan;
  s.route = "QL plan";
  for (Phase& ph : s.phases) {
    if (part.IsQuitting(ph.quitter, ph.quit_action)) continue;
    int comp, first, second;
    if (ph.quitter == l.player1 && ph.quit_action == l.c1[1]) {
      comp = l.player2;
      first = l.c2[0];
      second = l.c2[1];
    } else if (ph.quitter == l.player2 && ph.quit_action == l.c2[1]) {
      comp = l.player1;
      first = l.c1[0];
      second = l.c1[1];
    } else {
      throw Error(ErrorKind::kSynthesisFailed,
                  "phase quits with an action that does not absorb");
    }
    double target = AbsorbWithin(
        QuitAbsorption(aux, ph.base, ph.quitter, ph.quit_action), ph.alpha,
        ph.length);
    double p = std::max(ph.base[comp][second], epsilon / 2.0);
    MixedProfile hat = ph.base;
    std::fill(hat[comp].begin(), hat[comp].end(), 0.0);
    hat[comp][second] = p;
    hat[comp][first] = 1.0 - p;
    Monitor mon = AttachMonitoring(comp, second, p, epsilon * p);
    double hat_absorb = QuitAbsorption(game, hat, ph.quitter, ph.quit_action);
    RhoMatch rm = MatchRho(target, ph.alpha, std::max(ph.length, mon.window),
                           hat_absorb);
    ph.base = hat;
    ph.length = rm.length;
    ph.alpha = rm.alpha;
    ph.design_rho = target;
    if (p < 1.0) ph.monitors.push_back(mon);
  }
  return s;
}

}  // namespace

SynthResult SynthQl(const AbsorbingGame& game, const SynthOptions& o) {
  LShape l = RequireLShape(game);
  QlNqlResult cls = ClassifyQlNql(game, o.density, o.lcp_tol);
  if (cls.kind != QlNqlResult::Kind::kQL) InputError("not QL");
  SynthResult out;
  Budget budget(o);
  std::vector<Punishment> threats = MinMaxThreats(game, SmallestLambda(o));
  for (size_t e = 0; e < cls.ql.size(); ++e) {
    const QlEvidence& ev = cls.ql[e];
    AbsorbingGame aux = BuildDeltaGame(game, ev.delta1, ev.delta2);
    std::vector<std::vector<double>> zs = CandidateWeights(ev.matrix.r, o);
    for (size_t k = 0; k < zs.size(); ++k) {
      for (double frac : {0.95, 0.5}) {
        if (budget.Exhausted()) Fail("budget exhausted", out.log);
        std::string label = "QL evidence " + std::to_string(e) +
                            " (delta " + Fmt(ev.delta1) + "," +
                            Fmt(ev.delta2) + ") candidate " +
                            std::to_string(k) + " at alpha " + Fmt(frac) +
                            " eps";
        Strategy s;
        try {
          Strategy plan =
              BuildQuitPlan(aux, ev.matrix, ev.continue_profile, zs[k],
                            frac * o.epsilon, o.epsilon);
          s = TransformPlan(game, aux, l, plan, o.epsilon);
        } catch (const Error& err) {
          out.log.push_back(label + ": " + err.what());
          continue;
        }
        s.punishments = threats;
        if (TryCertify(game, s, o, label, budget, out)) return out;
      }
    }
  }
  Fail("no certified QL plan", out.log);
}

HatLabeling LabelingFor(const AbsorbingGame& game, int side) {
  LShape l = RequireLShape(game);
  HatLabeling lab;
  if (side == 1) {
    lab.quitter = l.player1;
    lab.companion = l.player2;
    lab.quitter_first = l.c1[0];
    lab.quitter_second = l.c1[1];
    lab.companion_first = l.c2[0];
    lab.companion_second = l.c2[1];
  } else if (side == 2) {
    lab.quitter = l.player2;
    lab.companion = l.player1;
    lab.quitter_first = l.c2[0];
    lab.quitter_second = l.c2[1];
    lab.companion_first = l.c1[0];
    lab.companion_second = l.c1[1];
  } else {
    InputError("side must be 1 or 2");
  }
  return lab;
}

std::vector<std::vector<int>> LabeledQuits(const AbsorbingGame& game,
                                           const HatLabeling& lab) {
  ActionPartition part = DeriveActionPartition(game);
  std::vector<std::vector<int>> q = part.quitting_actions;
  q[lab.quitter].push_back(lab.quitter_second);
  std::sort(q[lab.quitter].begin(), q[lab.quitter].end());
  return q;
}

namespace {

struct Corners {
  int a1, a2, a3, a4;
};

Corners CornersFor(const AbsorbingGame& game, const HatLabeling& lab) {
  LShape l = RequireLShape(game);
  int base = game.WithAction(l.a1, lab.quitter, lab.quitter_first);
  base = game.WithAction(base, lab.companion, lab.companion_first);
  Corners c;
  c.a1 = base;
  c.a2 = game.WithAction(base, lab.companion, lab.companion_second);
  c.a3 = game.WithAction(base, lab.quitter, lab.quitter_second);
  c.a4 = game.WithAction(c.a2, lab.quitter, lab.quitter_second);
  return c;
}

}  // namespace

ProfilePartition PartitionAbsorbingProfiles(const AbsorbingGame& game,
                                            const HatLabeling& lab) {
  Corners c = CornersFor(game, lab);
  std::vector<std::vector<int>> quits = LabeledQuits(game, lab);
  std::vector<std::vector<bool>> is_quit(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    is_quit[i].assign(game.num_actions(i), false);
    for (int a : quits[i]) is_quit[i][a] = true;
  }
  ProfilePartition out;
  for (int k = 0; k < game.num_profiles(); ++k) {
    if (k == c.a1 || k == c.a2) continue;
    int count = 0;
    for (int i = 0; i < game.num_players(); ++i) {
      count += is_quit[i][game.ActionOf(k, i)];
    }
    if (count == 1) {
      out.single.push_back(k);
      if (k != c.a3 && k != c.a4) out.single_tilde.push_back(k);
    } else {
      out.multiple.push_back(k);
    }
  }
  return out;
}

double Chi(const AbsorbingGame& game, const std::vector<int>& profiles,
           const MixedProfile& y) {
  double total = 0.0;
  for (int k : profiles) total += ProfileProb(game, y, k) * game.absorb(k);
  return total;
}

AlphaBounds ComputeAlphaBounds(const AbsorbingGame& game,
                               const HatLabeling& lab, double epsilon) {
  if (!(epsilon > 0.0)) InputError("epsilon must be positive");
  Corners c = CornersFor(game, lab);
  AlphaBounds b;
  b.p_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k < game.num_profiles(); ++k) {
    if (k == c.a1 || k == c.a2 || k == c.a3) continue;
    b.p_min = std::min(b.p_min, game.absorb(k));
  }
  if (!(b.p_min > 0.0)) InputError("a profile outside the L does not absorb");
  for (const auto& q : LabeledQuits(game, lab)) {
    b.num_quits += static_cast<int>(q.size());
  }
  b.num_profiles = game.num_profiles();
  double root = 1.0 - std::pow(2.0, -1.0 / b.num_quits);
  b.c_prime = std::min(root, b.p_min * b.p_min * epsilon /
                                 (2.0 * b.num_profiles));
  double tail = std::pow(b.p_min, 3) * epsilon / (4.0 * b.num_profiles);
  b.c_eps = 0.5 * std::min({epsilon / (1.0 + epsilon), b.p_min * root / 2.0,
                            tail});
  b.delta = 0.5 * std::min({epsilon / 3.0, b.p_min * root / 2.0, tail});
  return b;
}

MixedProfile BuildHatProfile(const AbsorbingGame& game, const MixedProfile& x,
                             double delta, double eta,
                             const HatLabeling& lab) {
  MixedProfile y = NormalizeProfile(game, x);
  if (!(delta >= 0.0 && delta <= 1.0)) InputError("delta must be in [0,1]");
  if (!(eta >= 0.0)) InputError("eta must be nonnegative");
  std::vector<double>& comp = y[lab.companion];
  double moved = delta * comp[lab.companion_first];
  comp[lab.companion_first] -= moved;
  comp[lab.companion_second] += moved;

  std::vector<std::vector<int>> quits = LabeledQuits(game, lab);
  double x_max = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    for (int a : quits[i]) x_max = std::max(x_max, y[i][a]);
  }
  if (eta >= x_max || x_max == 0.0) return y;
  double scale = eta / x_max;
  for (int i = 0; i < game.num_players(); ++i) {
    std::vector<bool> quit(game.num_actions(i), false);
    for (int a : quits[i]) quit[a] = true;
    double freed = 0.0, rest = 0.0;
    for (int a = 0; a < game.num_actions(i); ++a) {
      if (quit[a]) {
        freed += y[i][a] * (1.0 - scale);
        y[i][a] *= scale;
      } else {
        rest += y[i][a];
      }
    }
    if (freed == 0.0) continue;
    if (rest > 0.0) {
      for (int a = 0; a < game.num_actions(i); ++a) {
        if (!quit[a]) y[i][a] += freed * y[i][a] / rest;
      }
    } else {
      int first = i == lab.quitter     ? lab.quitter_first
                  : i == lab.companion ? lab.companion_first
                                       : -1;
      if (first < 0) {
        for (int a = 0; a < game.num_actions(i) && first < 0; ++a) {
          if (!quit[a]) first = a;
        }
      }
      y[i][first] += freed;
    }
  }
  return y;
}

Strategy BuildAlphaCandidate(const AbsorbingGame& game, const MixedProfile& x,
                             const HatLabeling& lab, double epsilon,
                             double threat_lambda) {
  AlphaBounds b = ComputeAlphaBounds(game, lab, epsilon);
  std::vector<std::vector<int>> quits = LabeledQuits(game, lab);
  double x_max = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    for (int a : quits[i]) x_max = std::max(x_max, x[i][a]);
  }
  double eta = std::min(x_max, 0.5 * b.c_prime);
  MixedProfile hat = BuildHatProfile(game, x, b.delta, eta, lab);
  Strategy s = AlmostStationary(game, hat, epsilon, threat_lambda,
                                "almost stationary hat profile");
  double target = hat[lab.companion][lab.companion_second];
  s.phases[0].monitors.push_back(AttachMonitoring(
      lab.companion, lab.companion_second, target, b.delta * epsilon));
  return s;
}

SynthResult SynthNql(const AbsorbingGame& game, const SynthOptions& o) {
  RequireLShape(game);
  QlNqlResult cls = ClassifyQlNql(game, o.density, o.lcp_tol);
  if (cls.kind != QlNqlResult::Kind::kNQL || !cls.witnesses) {
    InputError("not NQL");
  }
  const Witnesses& w = *cls.witnesses;
  SynthResult out;
  Budget budget(o);
  double threat_lambda = SmallestLambda(o);
  AbsorbingGame g10 = BuildDeltaGame(game, 1.0, 0.0);
  AbsorbingGame g01 = BuildDeltaGame(game, 0.0, 1.0);
  std::vector<AlphaBounds> bounds = {
      ComputeAlphaBounds(game, LabelingFor(game, 1), o.epsilon),
      ComputeAlphaBounds(game, LabelingFor(game, 2), o.epsilon)};
  std::vector<MixedProfile> tried;
  auto fresh = [&](const MixedProfile& x) {
    for (const MixedProfile& t : tried) {
      if (ProfileDistance(t, x) < 1e-3) return false;
    }
    tried.push_back(x);
    return true;
  };
  SolverOptions so;
  so.seed = o.seed;
  MixedProfile prev;
  double theta = -1.0, step = o.theta_step;
  int points = 0;
  while (theta <= 2.0 + 1e-12) {
    if (budget.Exhausted()) break;
    HomotopyPoint hp = BuildHomotopyGame(game, w, o.omega, theta);
    so.warm_start = prev.empty() ? nullptr : &prev;
    DiscountedEquilibrium eq;
    try {
      eq = StationaryEquilibrium(hp.game, o.path_lambda, so);
    } catch (const Error& e) {
      Fail(std::string("path trace lost at theta ") + Fmt(theta) + ": " +
               e.what(),
           out.log);
    }
    if (!prev.empty() && ProfileDistance(prev, eq.profile) > 0.25 &&
        step > o.theta_min_step) {
      // Jump along the path: retry closer to the last point.
      theta -= step;
      step = std::max(o.theta_min_step, step / 2.0);
      theta += step;
      continue;
    }
    ++points;
    const MixedProfile& x = eq.profile;
    if (Absorption(game, x).total > 1e-9 && fresh(x)) {
      std::string at = " at theta " + Fmt(theta);
      if (TryStationaryRoute(game, x, o, "absorbing path point" + at, budget,
                             out)) {
        return out;
      }
      so.warm_start = &x;
      try {
        DiscountedEquilibrium pol =
            StationaryEquilibrium(game, threat_lambda, so);
        if (fresh(pol.profile) &&
            TryStationaryRoute(game, pol.profile, o,
                               "polished path point" + at, budget, out)) {
          return out;
        }
      } catch (const Error& e) {
        out.log.push_back("polish" + at + ": " + e.what());
      }
    }
    if (hp.segment != 1) {
      int side = hp.segment == 0 ? 1 : 2;
      double pa = Absorption(side == 1 ? g10 : g01, x).total;
      if (pa > 0.0 && pa < bounds[side - 1].c_eps && fresh(x)) {
        Strategy s = BuildAlphaCandidate(game, x, LabelingFor(game, side),
                                         o.epsilon, threat_lambda);
        if (TryCertify(game, s, o, "hat profile at theta " + Fmt(theta),
                       budget, out)) {
          return out;
        }
      }
    }
    prev = x;
    theta += step;
    step = std::min(o.theta_step, step * 2.0);
  }
  out.log.push_back("path points traced: " + std::to_string(points));
  Fail("no certifiable window found within budgets", out.log);
}

SynthResult Synthesize(const AbsorbingGame& game, const SynthOptions& o) {
  GameClassification cls = Classify(game);
  if (cls.spotted) return SynthSpotted(game, o);
  if (cls.l_shaped) {
    QlNqlResult r = ClassifyQlNql(game, o.density, o.lcp_tol);
    if (r.kind == QlNqlResult::Kind::kQL) return SynthQl(game, o);
    if (r.kind == QlNqlResult::Kind::kNQL) return SynthNql(game, o);
    throw Error(ErrorKind::kSynthesisFailed,
                "synthesis failed: QL/NQL classification unresolved");
  }
  if (cls.general_quitting) return SynthGeneralQuitting(game, o);
  throw Error(ErrorKind::kUnsupported, "unsupported game class");
}

}  // namespace absorbeq
