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

#include "equilibrium.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include <Eigen/Dense>

#include "error.h"
#include "lp.h"

namespace absorbeq {

std::vector<int> OpponentProfiles(const AbsorbingGame& game, int player) {
  std::vector<int> out;
  out.reserve(game.num_profiles() / game.num_actions(player));
  for (int k = 0; k < game.num_profiles(); ++k) {
    if (game.ActionOf(k, player) == 0) out.push_back(k);
  }
  return out;
}

ResponseStats ResponseToJoint(const AbsorbingGame& game, int player,
                              const std::vector<double>& joint) {
  int m = game.num_actions(player);
  ResponseStats s;
  s.stage.assign(m, 0.0);
  s.absorbed.assign(m, 0.0);
  s.absorb.assign(m, 0.0);
  std::vector<int> opp = OpponentProfiles(game, player);
  int stride = game.stride(player);
  for (size_t o = 0; o < opp.size(); ++o) {
    double w = joint[o];
    if (w == 0.0) continue;
    for (int a = 0; a < m; ++a) {
      int k = opp[o] + a * stride;
      double u = game.payoff(k, player), p = game.absorb(k);
      s.stage[a] += w * u;
      s.absorbed[a] += w * p * u;
      s.absorb[a] += w * p;
    }
  }
  return s;
}

ResponseStats ResponseToProfile(const AbsorbingGame& game, int player,
                                const MixedProfile& x) {
  std::vector<int> opp = OpponentProfiles(game, player);
  std::vector<double> joint(opp.size());
  for (size_t o = 0; o < opp.size(); ++o) {
    double w = 1.0;
    for (int j = 0; j < game.num_players() && w != 0.0; ++j) {
      if (j != player) w *= x[j][game.ActionOf(opp[o], j)];
    }
    joint[o] = w;
  }
  return ResponseToJoint(game, player, joint);
}

std::vector<std::vector<double>> FeasibleVertices(const AbsorbingGame& game,
                                                  int player) {
  int m = game.num_actions(player);
  std::vector<std::vector<double>> out;
  const auto& cap = game.cap();
  bool capped = cap && cap->player == player && cap->alpha < 1.0;
  for (int b = 0; b < m; ++b) {
    if (capped && b == cap->action) continue;
    std::vector<double> y(m, 0.0);
    y[b] = 1.0;
    out.push_back(y);
  }
  if (capped && cap->alpha > 0.0) {
    for (int b = 0; b < m; ++b) {
      if (b == cap->action) continue;
      std::vector<double> y(m, 0.0);
      y[cap->action] = cap->alpha;
      y[b] = 1.0 - cap->alpha;
      out.push_back(y);
    }
  }
  if (out.empty()) InputError("capped player has no feasible action");
  return out;
}

namespace {

double RatioValue(const ResponseStats& s, const std::vector<double>& y,
                  double lambda) {
  double num = 0.0, den = 0.0;
  for (size_t a = 0; a < y.size(); ++a) {
    if (y[a] == 0.0) continue;
    num += y[a] * (lambda * s.stage[a] + (1.0 - lambda) * s.absorbed[a]);
    den += y[a] * (lambda + (1.0 - lambda) * s.absorb[a]);
  }
  return num / den;
}

}  // namespace

StationaryResponse BestStationaryResponse(
    const ResponseStats& stats,
    const std::vector<std::vector<double>>& vertices, double lambda) {
  StationaryResponse best;
  best.value = -std::numeric_limits<double>::infinity();
  for (const auto& y : vertices) {
    double v = RatioValue(stats, y, lambda);
    if (v > best.value + 1e-15) {
      best.value = v;
      best.mixed = y;
    }
  }
  return best;
}

StationaryResponse BestStationaryResponse(const AbsorbingGame& game,
                                          const MixedProfile& x, int player,
                                          double lambda) {
  return BestStationaryResponse(ResponseToProfile(game, player, x),
                                FeasibleVertices(game, player), lambda);
}

double EquilibriumResidual(const AbsorbingGame& game, const MixedProfile& x,
                           double lambda) {
  double worst = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    ResponseStats s = ResponseToProfile(game, i, x);
    double current = RatioValue(s, x[i], lambda);
    double best =
        BestStationaryResponse(s, FeasibleVertices(game, i), lambda).value;
    worst = std::max(worst, best - current);
  }
  return worst;
}

double ProfileDistance(const MixedProfile& a, const MixedProfile& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t k = 0; k < a[i].size(); ++k) {
      d = std::max(d, std::fabs(a[i][k] - b[i][k]));
    }
  }
  return d;
}

namespace {

// Support of one player's strategy. With `binding`, the capped action sits
// at its cap and `support` lists the remaining actions.
struct Mode {
  std::vector<int> support;
  bool binding = false;
};

std::vector<Mode> PlayerModes(const AbsorbingGame& game, int player) {
  int m = game.num_actions(player);
  const auto& cap = game.cap();
  bool capped = cap && cap->player == player && cap->alpha < 1.0;
  std::vector<Mode> out;
  for (int mask = 1; mask < (1 << m); ++mask) {
    Mode mode;
    for (int a = 0; a < m; ++a) {
      if ((mask >> a) & 1) mode.support.push_back(a);
    }
    bool has_capped = capped && ((mask >> cap->action) & 1);
    if (has_capped && cap->alpha == 0.0) continue;
    out.push_back(mode);
    if (has_capped && mode.support.size() > 1) {
      Mode bind;
      bind.binding = true;
      for (int a : mode.support) {
        if (a != cap->action) bind.support.push_back(a);
      }
      out.push_back(bind);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Mode& a, const Mode& b) {
    return a.support.size() + a.binding < b.support.size() + b.binding;
  });
  return out;
}

class SupportSystem {
 public:
  SupportSystem(const AbsorbingGame& game, double lambda,
                const std::vector<Mode>& modes)
      : game_(game), lambda_(lambda), modes_(modes) {
    int n = game.num_players();
    offset_.resize(n + 1);
    int pos = 0;
    for (int i = 0; i < n; ++i) {
      offset_[i] = pos;
      pos += static_cast<int>(modes[i].support.size()) + 1 +
             (modes[i].binding ? 1 : 0);
    }
    offset_[n] = pos;
  }

  int size() const { return offset_.back(); }

  MixedProfile ToProfile(const Eigen::VectorXd& v) const {
    int n = game_.num_players();
    MixedProfile x(n);
    for (int i = 0; i < n; ++i) {
      x[i].assign(game_.num_actions(i), 0.0);
      const Mode& mode = modes_[i];
      for (size_t s = 0; s < mode.support.size(); ++s) {
        x[i][mode.support[s]] = v[offset_[i] + s];
      }
      if (mode.binding) x[i][game_.cap()->action] = game_.cap()->alpha;
    }
    return x;
  }

  Eigen::VectorXd FromProfile(const MixedProfile& x) const {
    Eigen::VectorXd v(size());
    for (int i = 0; i < game_.num_players(); ++i) {
      const Mode& mode = modes_[i];
      for (size_t s = 0; s < mode.support.size(); ++s) {
        v[offset_[i] + s] = x[i][mode.support[s]];
      }
      ResponseStats st = ResponseToProfile(game_, i, x);
      double value = RatioValue(st, x[i], lambda_);
      int at = offset_[i] + static_cast<int>(mode.support.size());
      v[at] = std::isfinite(value) ? value : 0.0;
      if (mode.binding) v[at + 1] = 0.0;
    }
    return v;
  }

  Eigen::VectorXd Residual(const Eigen::VectorXd& v) const {
    MixedProfile x = ToProfile(v);
    Eigen::VectorXd f(size());
    for (int i = 0; i < game_.num_players(); ++i) {
      const Mode& mode = modes_[i];
      ResponseStats st = ResponseToProfile(game_, i, x);
      int k = static_cast<int>(mode.support.size());
      double value = v[offset_[i] + k];
      auto gap = [&](int a) {
        return lambda_ * st.stage[a] + (1.0 - lambda_) * st.absorbed[a] -
               value * (lambda_ + (1.0 - lambda_) * st.absorb[a]);
      };
      double sum = 0.0;
      for (int s = 0; s < k; ++s) sum += v[offset_[i] + s];
      if (!mode.binding) {
        for (int s = 0; s < k; ++s) f[offset_[i] + s] = gap(mode.support[s]);
        f[offset_[i] + k] = sum - 1.0;
      } else {
        double g = v[offset_[i] + k + 1];
        double alpha = game_.cap()->alpha;
        for (int s = 0; s < k; ++s) {
          f[offset_[i] + s] = gap(mode.support[s]) - g;
        }
        f[offset_[i] + k] = alpha * gap(game_.cap()->action) +
                            (1.0 - alpha) * g;
        f[offset_[i] + k + 1] = sum - (1.0 - alpha);
      }
    }
    return f;
  }

  bool Newton(Eigen::VectorXd& v) const {
    int dim = size();
    Eigen::VectorXd f = Residual(v);
    double norm = f.lpNorm<Eigen::Infinity>();
    for (int iter = 0; iter < 60 && norm > 1e-14; ++iter) {
      Eigen::MatrixXd jac(dim, dim);
      for (int c = 0; c < dim; ++c) {
        double h = 1e-7 * std::max(1.0, std::fabs(v[c]));
        Eigen::VectorXd w = v;
        w[c] += h;
        jac.col(c) = (Residual(w) - f) / h;
      }
      Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-f);
      if (!step.allFinite()) return false;
      double t = 1.0;
      bool improved = false;
      for (int half = 0; half < 30; ++half) {
        Eigen::VectorXd trial = v + t * step;
        Eigen::VectorXd ft = Residual(trial);
        double nt = ft.lpNorm<Eigen::Infinity>();
        if (std::isfinite(nt) && nt < norm) {
          v = trial;
          f = ft;
          norm = nt;
          improved = true;
          break;
        }
        t *= 0.5;
      }
      if (!improved) break;
    }
    return norm <= 1e-11;
  }

 private:
  const AbsorbingGame& game_;
  double lambda_;
  const std::vector<Mode>& modes_;
  std::vector<int> offset_;
};

// Clips rounding noise and checks feasibility of a Newton root.
bool CleanProfile(const AbsorbingGame& game, MixedProfile& x) {
  for (int i = 0; i < game.num_players(); ++i) {
    double sum = 0.0;
    for (double& p : x[i]) {
      if (!std::isfinite(p) || p < -1e-9) return false;
      if (p < 0.0) p = 0.0;
      sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-8) return false;
    for (double& p : x[i]) p /= sum;
  }
  if (game.cap()) {
    const ActionCap& cap = *game.cap();
    double& p = x[cap.player][cap.action];
    if (p > cap.alpha + 1e-9) return false;
    if (p > cap.alpha) {
      double excess = p - cap.alpha;
      p = cap.alpha;
      for (size_t a = 0; a < x[cap.player].size(); ++a) {
        if (static_cast<int>(a) != cap.action && x[cap.player][a] > 0.0) {
          x[cap.player][a] += excess;
          break;
        }
      }
    }
  }
  return true;
}

std::vector<double> RandomSimplexPoint(int m, std::mt19937_64& rng) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> y(m);
  double sum = 0.0;
  for (double& v : y) sum += (v = ex(rng));
  for (double& v : y) v /= sum;
  return y;
}

MixedProfile RandomFeasibleProfile(const AbsorbingGame& game,
                                   std::mt19937_64& rng) {
  MixedProfile x(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    x[i] = RandomSimplexPoint(game.num_actions(i), rng);
  }
  if (game.cap()) {
    const ActionCap& cap = *game.cap();
    auto& y = x[cap.player];
    if (y[cap.action] > cap.alpha) {
      double excess = y[cap.action] - cap.alpha;
      y[cap.action] = cap.alpha;
      double rest = 0.0;
      for (size_t a = 0; a < y.size(); ++a) {
        if (static_cast<int>(a) != cap.action) rest += y[a];
      }
      for (size_t a = 0; a < y.size(); ++a) {
        if (static_cast<int>(a) == cap.action) continue;
        y[a] += rest > 0 ? excess * y[a] / rest
                         : excess / (static_cast<double>(y.size()) - 1);
      }
    }
  }
  return x;
}

// Starting point on a support: the given profile restricted and
// renormalized, or uniform on the support.
MixedProfile StartOnModes(const AbsorbingGame& game,
                          const std::vector<Mode>& modes,
                          const MixedProfile* hint) {
  MixedProfile x(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    x[i].assign(game.num_actions(i), 0.0);
    double mass = modes[i].binding ? 1.0 - game.cap()->alpha : 1.0;
    if (modes[i].binding) x[i][game.cap()->action] = game.cap()->alpha;
    double sum = 0.0;
    if (hint) {
      for (int a : modes[i].support) sum += (*hint)[i][a];
    }
    for (int a : modes[i].support) {
      x[i][a] = sum > 1e-9 ? mass * (*hint)[i][a] / sum
                           : mass / modes[i].support.size();
    }
  }
  return x;
}

struct Candidate {
  MixedProfile profile;
  double residual;
};

std::optional<Candidate> SolveOnModes(const AbsorbingGame& game, double lambda,
                                      const std::vector<Mode>& modes,
                                      const MixedProfile* hint, double tol,
                                      std::mt19937_64* rng, int extra_starts) {
  SupportSystem system(game, lambda, modes);
  for (int start = 0; start <= extra_starts; ++start) {
    MixedProfile x0;
    if (start == 0) {
      x0 = StartOnModes(game, modes, hint);
    } else {
      MixedProfile r = RandomFeasibleProfile(game, *rng);
      x0 = StartOnModes(game, modes, &r);
    }
    Eigen::VectorXd v = system.FromProfile(x0);
    if (!system.Newton(v)) continue;
    MixedProfile x = system.ToProfile(v);
    if (!CleanProfile(game, x)) continue;
    double res = EquilibriumResidual(game, x, lambda);
    if (res <= tol) return Candidate{x, res};
  }
  return std::nullopt;
}

std::vector<Mode> ModesOf(const AbsorbingGame& game, const MixedProfile& x,
                          double threshold) {
  std::vector<Mode> modes(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    const auto& cap = game.cap();
    bool capped = cap && cap->player == i && cap->alpha < 1.0;
    bool bind = capped && cap->alpha > 0.0 &&
                x[i][cap->action] >= cap->alpha - threshold;
    for (int a = 0; a < game.num_actions(i); ++a) {
      if (bind && a == cap->action) continue;
      if (x[i][a] > threshold) modes[i].support.push_back(a);
    }
    modes[i].binding = bind && !modes[i].support.empty();
    if (modes[i].support.empty()) {
      int best = static_cast<int>(
          std::max_element(x[i].begin(), x[i].end()) - x[i].begin());
      modes[i].support.push_back(best);
      modes[i].binding = false;
    }
  }
  return modes;
}

// Calls visit(modes) for every product of player modes in order of total
// support size; stops when visit returns true.
template <typename Visit>
void ForEachModeProfile(const std::vector<std::vector<Mode>>& lists,
                        Visit&& visit) {
  int n = static_cast<int>(lists.size());
  int max_size = 0;
  for (const auto& l : lists) {
    int m = 0;
    for (const auto& mode : l) {
      m = std::max(m, static_cast<int>(mode.support.size() + mode.binding));
    }
    max_size += m;
  }
  std::vector<Mode> current(n);
  for (int total = n; total <= max_size; ++total) {
    std::vector<size_t> idx(n, 0);
    while (true) {
      int size = 0;
      for (int i = 0; i < n; ++i) {
        const Mode& m = lists[i][idx[i]];
        size += static_cast<int>(m.support.size()) + m.binding;
      }
      if (size == total) {
        for (int i = 0; i < n; ++i) current[i] = lists[i][idx[i]];
        if (visit(current)) return;
      }
      int k = n - 1;
      while (k >= 0 && ++idx[k] == lists[k].size()) idx[k--] = 0;
      if (k < 0) break;
    }
  }
}

double ProductCount(const std::vector<std::vector<Mode>>& lists) {
  double count = 1.0;
  for (const auto& l : lists) count *= static_cast<double>(l.size());
  return count;
}

}  // namespace

std::vector<DiscountedEquilibrium> EnumerateEquilibria(
    const AbsorbingGame& game, double lambda, const SolverOptions& options,
    int limit) {
  std::vector<std::vector<Mode>> lists;
  for (int i = 0; i < game.num_players(); ++i) {
    lists.push_back(PlayerModes(game, i));
  }
  std::vector<DiscountedEquilibrium> found;
  if (ProductCount(lists) > 2e5) return found;
  std::mt19937_64 rng(options.seed ^ 0x5eedULL);
  ForEachModeProfile(lists, [&](const std::vector<Mode>& modes) {
    auto c = SolveOnModes(game, lambda, modes, nullptr, options.tol, &rng, 2);
    if (c) {
      bool fresh = true;
      for (const auto& e : found) {
        if (ProfileDistance(e.profile, c->profile) < 1e-7) fresh = false;
      }
      if (fresh) found.push_back({c->profile, lambda, c->residual});
    }
    return static_cast<int>(found.size()) >= limit;
  });
  return found;
}

DiscountedEquilibrium StationaryEquilibrium(const AbsorbingGame& game,
                                            double lambda,
                                            const SolverOptions& options) {
  if (!(lambda > 0.0 && lambda < 1.0)) InputError("lambda must be in (0,1)");
  std::mt19937_64 rng(options.seed);
  int max_actions = 0;
  for (int i = 0; i < game.num_players(); ++i) {
    max_actions = std::max(max_actions, game.num_actions(i));
  }
  bool enumerable = max_actions <= 3;

  if (options.warm_start) {
    const MixedProfile& w = *options.warm_start;
    for (double threshold : {1e-9, 1e-6, 1e-3}) {
      auto c = SolveOnModes(game, lambda, ModesOf(game, w, threshold), &w,
                            options.tol, &rng, 0);
      if (c) return {c->profile, lambda, c->residual};
    }
    if (enumerable) {
      auto all = EnumerateEquilibria(game, lambda, options);
      if (!all.empty()) {
        auto best = std::min_element(
            all.begin(), all.end(), [&](const auto& a, const auto& b) {
              return ProfileDistance(a.profile, w) <
                     ProfileDistance(b.profile, w);
            });
        return *best;
      }
    }
  }

  // Damped best response from seeded starts, polished on its support.
  int seeds = enumerable ? options.br_seeds : 64;
  long iterations = enumerable ? options.br_iterations : 100000;
  double best_residual = std::numeric_limits<double>::infinity();
  MixedProfile best_profile;
  for (int s = 0; s < seeds; ++s) {
    MixedProfile x = s == 0 ? UniformProfile(game)
                            : RandomFeasibleProfile(game, rng);
    if (s == 0 && game.cap()) x = RandomFeasibleProfile(game, rng);
    for (long it = 0; it < iterations; ++it) {
      MixedProfile next = x;
      for (int i = 0; i < game.num_players(); ++i) {
        StationaryResponse br = BestStationaryResponse(game, x, i, lambda);
        for (size_t a = 0; a < x[i].size(); ++a) {
          next[i][a] = 0.5 * x[i][a] + 0.5 * br.mixed[a];
        }
      }
      x = std::move(next);
      if (it % 16 == 15) {
        double res = EquilibriumResidual(game, x, lambda);
        if (res < best_residual) {
          best_residual = res;
          best_profile = x;
        }
        if (res <= 1e-4) {
          auto c = SolveOnModes(game, lambda, ModesOf(game, x, 1e-6), &x,
                                options.tol, &rng, 0);
          if (c) return {c->profile, lambda, c->residual};
        }
        if (res <= options.tol) return {x, lambda, res};
      }
    }
  }

  if (enumerable) {
    auto all = EnumerateEquilibria(game, lambda, options, 1);
    if (!all.empty()) return all.front();
  }
  throw Error(ErrorKind::kSolverFailure,
              "no equilibrium found at tol (best residual " +
                  std::to_string(best_residual) + ")");
}

VanishingLimit VanishingDiscountLimit(const AbsorbingGame& game,
                                      const std::vector<double>& lambdas,
                                      const SolverOptions& options) {
  if (lambdas.size() < 4) InputError("sequence too short");
  for (size_t k = 1; k < lambdas.size(); ++k) {
    if (!(lambdas[k] < lambdas[k - 1])) {
      InputError("discount sequence must be decreasing");
    }
  }
  if (lambdas.back() > 1e-5) InputError("sequence must reach 1e-5");
  VanishingLimit out;
  SolverOptions opts = options;
  MixedProfile previous;
  for (size_t k = 0; k < lambdas.size(); ++k) {
    if (k > 0) opts.warm_start = &previous;
    DiscountedEquilibrium eq = StationaryEquilibrium(game, lambdas[k], opts);
    if (k > 0) {
      double d = ProfileDistance(previous, eq.profile);
      out.distances.push_back(d);
      out.max_distance = std::max(out.max_distance, d);
    }
    previous = eq.profile;
    out.path.push_back(eq);
  }
  for (size_t k = 1; k < out.distances.size(); ++k) {
    if (out.distances[k] > out.distances[k - 1] + 1e-9) out.converged = false;
  }
  out.profile = previous;
  return out;
}

double MatrixGameValue(const std::vector<std::vector<double>>& payoff,
                       std::vector<double>* column_strategy) {
  int rows = static_cast<int>(payoff.size());
  int cols = static_cast<int>(payoff[0].size());
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& r : payoff) {
    for (double v : r) lo = std::min(lo, v);
  }
  double shift = 1.0 - lo;  // shifted entries are >= 1
  // min s  s.t.  sum_b pi_b (G(a,b) + shift) <= s,  sum pi = 1.
  LinearProgram lp(cols + 1);
  lp.objective[cols] = -1.0;
  for (int a = 0; a < rows; ++a) {
    std::vector<double> coef(cols + 1);
    for (int b = 0; b < cols; ++b) coef[b] = payoff[a][b] + shift;
    coef[cols] = -1.0;
    lp.AddRow(coef, Sense::kLe, 0.0);
  }
  std::vector<double> ones(cols + 1, 1.0);
  ones[cols] = 0.0;
  lp.AddRow(ones, Sense::kEq, 1.0);
  LpResult res = SolveLp(lp, 1e-12);
  if (res.status != LpStatus::kOptimal) {
    throw Error(ErrorKind::kSolverFailure, "matrix game LP failed");
  }
  if (column_strategy) {
    column_strategy->assign(res.x.begin(), res.x.begin() + cols);
  }
  return res.x[cols] - shift;
}

MinMaxResult MinMax(const AbsorbingGame& game, int player, double lambda,
                    double tol) {
  if (player < 0 || player >= game.num_players()) InputError("bad player");
  if (!(lambda > 0.0 && lambda < 1.0)) InputError("lambda must be in (0,1)");
  std::vector<int> opp = OpponentProfiles(game, player);
  int m = game.num_actions(player);
  int stride = game.stride(player);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int k = 0; k < game.num_profiles(); ++k) {
    lo = std::min(lo, game.payoff(k, player));
    hi = std::max(hi, game.payoff(k, player));
  }
  auto operator_value = [&](double v, std::vector<double>* strategy) {
    std::vector<std::vector<double>> g(m, std::vector<double>(opp.size()));
    for (int a = 0; a < m; ++a) {
      for (size_t o = 0; o < opp.size(); ++o) {
        int k = opp[o] + a * stride;
        double u = game.payoff(k, player), p = game.absorb(k);
        g[a][o] = lambda * u + (1.0 - lambda) * (p * u + (1.0 - p) * v);
      }
    }
    return MatrixGameValue(g, strategy);
  };
  // val(G(V)) - V is strictly decreasing; bisect for its root.
  double a = lo, b = hi;
  while (b - a > tol) {
    double mid = 0.5 * (a + b);
    if (operator_value(mid, nullptr) > mid) {
      a = mid;
    } else {
      b = mid;
    }
  }
  MinMaxResult out;
  out.player = player;
  out.lambda = lambda;
  out.value = 0.5 * (a + b);
  operator_value(out.value, &out.punishment);
  // Report the value the punishment actually holds the player to.
  ResponseStats stats = ResponseToJoint(game, player, out.punishment);
  std::vector<std::vector<double>> pure;
  for (int act = 0; act < m; ++act) {
    std::vector<double> y(m, 0.0);
    y[act] = 1.0;
    pure.push_back(y);
  }
  out.value = BestStationaryResponse(stats, pure, lambda).value;
  return out;
}

}  // namespace absorbeq
