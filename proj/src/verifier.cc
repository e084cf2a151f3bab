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

#include "verifier.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "auxiliary.h"
#include "equilibrium.h"
#include "error.h"

namespace absorbeq {
namespace {

constexpr double kSupportTol = 1e-15;

// ---------------------------------------------------------------------------
// Conforming play.

std::vector<StageStats> PhaseStats(const AbsorbingGame& game,
                                   const Strategy& s) {
  std::vector<StageStats> out;
  for (const Phase& p : s.phases) {
    out.push_back(Stage(game, StageProfile(game, p)));
  }
  return out;
}

void CheckLambda(double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) InputError("lambda must be in (0,1]");
}

}  // namespace

std::vector<double> EvalStrategy(const AbsorbingGame& game, const Strategy& s,
                                 double lambda) {
  ValidateStrategy(game, s);
  CheckLambda(lambda);
  int n = game.num_players();
  std::vector<StageStats> stats = PhaseStats(game, s);
  // Value at a cycle start is a + m * (value at the next cycle start).
  std::vector<double> a(n, 0.0);
  double m = 1.0;
  for (int t = static_cast<int>(s.phases.size()) - 1; t >= 0; --t) {
    const StageStats& st = stats[t];
    double beta = (1.0 - lambda) * (1.0 - st.absorb);
    double len = static_cast<double>(s.phases[t].length);
    double slope = std::pow(beta, len);
    for (int i = 0; i < n; ++i) {
      double c = lambda * st.stage[i] + (1.0 - lambda) * st.absorbed[i];
      double geo = beta < 1.0 ? (1.0 - slope) / (1.0 - beta) : len;
      a[i] = c * geo + slope * a[i];
    }
    m *= slope;
  }
  for (double& v : a) v /= 1.0 - m;
  return a;
}

std::vector<double> EvalStrategyTStage(const AbsorbingGame& game,
                                       const Strategy& s, long horizon) {
  ValidateStrategy(game, s);
  if (horizon < 1) InputError("horizon must be positive");
  int n = game.num_players();
  std::vector<StageStats> stats = PhaseStats(game, s);
  double alive = 1.0;
  std::vector<double> frozen(n, 0.0), total(n, 0.0);
  size_t t = 0;
  long offset = 0;
  for (long k = 0; k < horizon; ++k) {
    const StageStats& st = stats[t];
    for (int i = 0; i < n; ++i) {
      total[i] += alive * st.stage[i] + frozen[i];
      frozen[i] += alive * st.absorbed[i];
    }
    alive *= 1.0 - st.absorb;
    if (++offset == s.phases[t].length) {
      offset = 0;
      t = (t + 1) % s.phases.size();
    }
  }
  for (double& v : total) v /= static_cast<double>(horizon);
  return total;
}

std::vector<double> EvalStrategyUndiscounted(const AbsorbingGame& game,
                                             const Strategy& s) {
  ValidateStrategy(game, s);
  int n = game.num_players();
  std::vector<StageStats> stats = PhaseStats(game, s);
  std::vector<double> a(n, 0.0);
  double m = 1.0;
  for (int t = static_cast<int>(s.phases.size()) - 1; t >= 0; --t) {
    const StageStats& st = stats[t];
    double len = static_cast<double>(s.phases[t].length);
    double keep = std::pow(1.0 - st.absorb, len);
    for (int i = 0; i < n; ++i) {
      // Absorbed payoff mass of the phase, divided by per-stage absorption.
      double mass = st.absorb > 0.0 ? st.absorbed[i] / st.absorb : 0.0;
      a[i] = mass * (1.0 - keep) + keep * a[i];
    }
    m *= keep;
  }
  if (m >= 1.0) {
    if (!Classify(game).recursive) {
      throw Error(ErrorKind::kUndefined,
                  "play never absorbs and the game is not recursive");
    }
    return std::vector<double>(n, 0.0);
  }
  for (double& v : a) v /= 1.0 - m;
  return a;
}

// ---------------------------------------------------------------------------
// Deviation search.

namespace {

struct ChoiceStats {
  double s = 0.0, b = 0.0, p = 0.0;
};

struct PhaseModel {
  std::vector<DeviationChoice> choices;
  std::vector<ChoiceStats> stats;
  std::vector<int> normal;   // layers 0 and 1
  std::vector<int> free;     // single unrestricted stage
  std::vector<int> longdev;  // phase-long deviation
  bool long_available = false;
  long long_horizon = 0;
  double miss = 0.0;
  long length = 1;
};

struct Model {
  int player = 0;
  std::vector<PhaseModel> phases;
  bool has_threat = false;
  std::vector<ChoiceStats> threat;  // per pure action vs the threat
  double lo = 0.0, hi = 0.0;
  bool long_once = false;  // finite horizon: phase-long deviation at stage 0
  long cycle = 1;
};

ChoiceStats Combine(const ResponseStats& r, const std::vector<double>& mix) {
  ChoiceStats c;
  for (size_t a = 0; a < mix.size(); ++a) {
    if (mix[a] == 0.0) continue;
    c.s += mix[a] * r.stage[a];
    c.b += mix[a] * r.absorbed[a];
    c.p += mix[a] * r.absorb[a];
  }
  return c;
}

std::vector<double> Unit(int m, int a) {
  std::vector<double> v(m, 0.0);
  v[a] = 1.0;
  return v;
}

Model BuildModel(const AbsorbingGame& game, const Strategy& s, int player) {
  ValidateStrategy(game, s);
  if (player < 0 || player >= game.num_players()) InputError("bad player");
  Model model;
  model.player = player;
  model.cycle = s.CycleLength();
  int m = game.num_actions(player);
  const auto& names = game.action_names(player);
  model.lo = std::numeric_limits<double>::infinity();
  model.hi = -model.lo;
  for (int k = 0; k < game.num_profiles(); ++k) {
    model.lo = std::min(model.lo, game.payoff(k, player));
    model.hi = std::max(model.hi, game.payoff(k, player));
  }
  const Punishment* threat = s.PunishmentFor(player);
  model.has_threat = threat != nullptr;
  if (threat) {
    ResponseStats r = ResponseToJoint(game, player, threat->joint);
    for (int a = 0; a < m; ++a) model.threat.push_back(Combine(r, Unit(m, a)));
  }
  bool stationary_monitors = s.kind == StrategyKind::kAlmostStationary;
  model.long_once = stationary_monitors;
  for (const Phase& phase : s.phases) {
    long longest = phase.length;
    for (const Monitor& mo : phase.monitors) {
      longest = std::max(longest, mo.window);
    }
    if (longest > kMaxExactLength) {
      throw Error(ErrorKind::kUnsupported,
                  "phase or monitoring window too long for exact evaluation");
    }
    PhaseModel pm;
    pm.length = phase.length;
    MixedProfile y = StageProfile(game, phase);
    ResponseStats r = ResponseToProfile(game, player, y);
    const std::vector<double>& own = y[player];
    std::vector<int> support;
    for (int a = 0; a < m; ++a) {
      if (own[a] > kSupportTol) support.push_back(a);
    }
    auto add = [&](std::vector<double> mix, bool seen, std::string label) {
      pm.choices.push_back({mix, seen, std::move(label)});
      pm.stats.push_back(Combine(r, mix));
      return static_cast<int>(pm.choices.size()) - 1;
    };
    pm.normal.push_back(add(own, false, "conform"));

    const Monitor* mon = nullptr;
    for (const Monitor& mo : phase.monitors) {
      if (mo.player == player) mon = &mo;
    }
    bool effective =
        mon && (stationary_monitors || phase.length >= mon->window);
    std::vector<int> pure_support;
    for (int a : support) {
      pure_support.push_back(add(Unit(m, a), false, "free " + names[a]));
    }
    if (effective) {
      pm.free = pure_support;
      pm.longdev = pure_support;
      pm.long_available = model.has_threat;
      pm.long_horizon = stationary_monitors ? mon->window : phase.length;
      pm.miss = mon->tolerance;
      double lo = std::max(0.0, mon->target - 2.0 * mon->tolerance);
      double hi = std::min(1.0, mon->target + 2.0 * mon->tolerance);
      int tested = mon->action;
      bool in_support = own[tested] > kSupportTol;
      for (int b : support) {
        if (b == tested) continue;
        for (double f : {lo, hi}) {
          if (!in_support && f > 0.0) continue;
          std::vector<double> mix(m, 0.0);
          mix[tested] = f;
          mix[b] = 1.0 - f;
          pm.normal.push_back(add(mix, false, "band " + names[b]));
        }
      }
      if (support.size() == 1 && support[0] == tested) {
        pm.normal.push_back(pure_support[0]);
      }
    } else {
      pm.normal.insert(pm.normal.end(), pure_support.begin(),
                       pure_support.end());
    }
    for (int a = 0; a < m; ++a) {
      if (own[a] > kSupportTol) continue;
      int idx = add(Unit(m, a), model.has_threat, "off " + names[a]);
      pm.normal.push_back(idx);
      pm.longdev.push_back(idx);
    }
    model.phases.push_back(std::move(pm));
  }
  return model;
}

// Choice lookup for replay; nullptr entries mean "maximize".
struct Selector {
  // [layer][phase][offset] (discounted) or [layer][stage] flattened into
  // phase 0 (finite horizon).
  std::vector<std::vector<std::vector<int>>> table;
  std::vector<bool> long_taken;  // per phase or per stage
  bool fixed = false;
};

struct Recorder {
  std::vector<std::vector<std::vector<int>>> table;
  std::vector<bool> long_taken;
};

// Maximizes (or applies the fixed choice) for one stage.
template <typename ValueFn>
double Pick(const std::vector<int>& allowed, const ValueFn& value,
            int fixed_choice, int* chosen) {
  if (fixed_choice >= 0) {
    *chosen = fixed_choice;
    return value(fixed_choice);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (int c : allowed) {
    double v = value(c);
    if (v > best) {
      best = v;
      *chosen = c;
    }
  }
  return best;
}

template <typename Fn>
double FixedPoint(double lo, double hi, const Fn& f) {
  // f(x) - x is strictly decreasing on [lo, hi] and changes sign there.
  double a = lo, b = hi;
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b));
       ++it) {
    double mid = 0.5 * (a + b);
    if (f(mid) > mid) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

// ----- discounted -----

class DiscountedSolver {
 public:
  DiscountedSolver(const Model& model, double lambda)
      : model_(model), lambda_(lambda) {
    if (model.has_threat) {
      threat_value_ = FixedPoint(model.lo, model.hi, [&](double v) {
        double best = -std::numeric_limits<double>::infinity();
        for (const ChoiceStats& c : model.threat) best = std::max(best, Step(c, v));
        return best;
      });
    }
  }

  double Step(const ChoiceStats& c, double cont) const {
    return lambda_ * c.s + (1.0 - lambda_) * (c.b + (1.0 - c.p) * cont);
  }
  double Seen(const PhaseModel& pm, int c, double cont) const {
    return pm.choices[c].seen ? threat_value_ : cont;
  }

  // Layer 1 backward pass from cycle-start value x; fills v1 when given.
  double PassSpent(double x, const Selector* sel, Recorder* rec,
                   std::vector<std::vector<double>>* v1) const {
    double v = x;
    int k = static_cast<int>(model_.phases.size());
    if (v1) v1->assign(k, {});
    for (int t = k - 1; t >= 0; --t) {
      const PhaseModel& pm = model_.phases[t];
      if (v1) (*v1)[t].assign(pm.length + 1, 0.0);
      if (v1) (*v1)[t][pm.length] = v;
      for (long m = pm.length - 1; m >= 0; --m) {
        int chosen = -1;
        int fixed = sel && sel->fixed ? sel->table[1][t][m] : -1;
        double cont = v;
        v = Pick(pm.normal,
                 [&](int c) { return Step(pm.stats[c], Seen(pm, c, cont)); },
                 fixed, &chosen);
        if (rec) rec->table[1][t][m] = chosen;
        if (v1) (*v1)[t][m] = v;
      }
    }
    return v;
  }

  double PassFresh(double x, const std::vector<std::vector<double>>& v1,
                   const Selector* sel, Recorder* rec) const {
    double v = x;
    int k = static_cast<int>(model_.phases.size());
    for (int t = k - 1; t >= 0; --t) {
      const PhaseModel& pm = model_.phases[t];
      double next_start = v;
      for (long m = pm.length - 1; m >= 0; --m) {
        double cont = v;
        double spent = v1[t][m + 1];
        auto value = [&](int c, bool free) {
          if (free) return Step(pm.stats[c], spent);
          return Step(pm.stats[c], Seen(pm, c, cont));
        };
        int fixed = sel && sel->fixed ? sel->table[0][t][m] : -1;
        int chosen = -1;
        double best;
        if (fixed >= 0) {
          chosen = fixed;
          bool is_free = fixed >= kFreeOffset;
          best = value(is_free ? fixed - kFreeOffset : fixed, is_free);
        } else {
          best = -std::numeric_limits<double>::infinity();
          for (int c : pm.normal) {
            double val = value(c, false);
            if (val > best) {
              best = val;
              chosen = c;
            }
          }
          for (int c : pm.free) {
            double val = value(c, true);
            if (val > best) {
              best = val;
              chosen = c + kFreeOffset;
            }
          }
        }
        if (rec) rec->table[0][t][m] = chosen;
        v = best;
      }
      if (pm.long_available) {
        double terminal = (1.0 - pm.miss) * threat_value_ + pm.miss * next_start;
        double vb = terminal;
        std::vector<int> local(pm.long_horizon, -1);
        for (long m = pm.long_horizon - 1; m >= 0; --m) {
          int fixed = sel && sel->fixed ? sel->table[2][t][m] : -1;
          int chosen = -1;
          double cont = vb;
          vb = Pick(pm.longdev,
                    [&](int c) { return Step(pm.stats[c], Seen(pm, c, cont)); },
                    fixed, &chosen);
          local[m] = chosen;
        }
        bool take = sel && sel->fixed ? static_cast<bool>(sel->long_taken[t])
                                      : vb > v;
        if (rec) {
          rec->long_taken[t] = take;
          rec->table[2][t] = local;
        }
        if (take) v = vb;
      }
    }
    return v;
  }

  double Solve(const Selector* sel, Recorder* rec) const {
    double x1 = FixedPoint(model_.lo, model_.hi, [&](double x) {
      return PassSpent(x, sel, nullptr, nullptr);
    });
    std::vector<std::vector<double>> v1;
    PassSpent(x1, sel, rec, &v1);
    double x0 = FixedPoint(model_.lo, model_.hi, [&](double x) {
      return PassFresh(x, v1, sel, nullptr);
    });
    PassFresh(x0, v1, sel, rec);
    return x0;
  }

  double Conform() const {
    return FixedPoint(model_.lo, model_.hi, [&](double x) {
      double v = x;
      for (int t = static_cast<int>(model_.phases.size()) - 1; t >= 0; --t) {
        const PhaseModel& pm = model_.phases[t];
        for (long m = 0; m < pm.length; ++m) v = Step(pm.stats[0], v);
      }
      return v;
    });
  }

  static constexpr int kFreeOffset = 1 << 20;

 private:
  const Model& model_;
  double lambda_;
  double threat_value_ = 0.0;
};

// ----- finite horizon -----

class FiniteSolver {
 public:
  FiniteSolver(const Model& model, long horizon)
      : model_(model), horizon_(horizon) {
    phase_of_.resize(horizon);
    offset_of_.resize(horizon);
    int t = 0;
    long off = 0;
    for (long k = 0; k < horizon; ++k) {
      phase_of_[k] = t;
      offset_of_[k] = off;
      if (++off == model.phases[t].length) {
        off = 0;
        t = (t + 1) % static_cast<int>(model.phases.size());
      }
    }
    threat_.assign(horizon + 1, 0.0);
    if (model.has_threat) {
      for (long r = 1; r <= horizon; ++r) {
        double best = -std::numeric_limits<double>::infinity();
        for (const ChoiceStats& c : model.threat) {
          best = std::max(best, Step(c, threat_[r - 1], r));
        }
        threat_[r] = best;
      }
    }
  }

  static double Step(const ChoiceStats& c, double cont, long remaining) {
    return c.b * static_cast<double>(remaining) + (c.s - c.b) +
           (1.0 - c.p) * cont;
  }

  // Sum of payoffs over the horizon; divide by it for the average.
  double Solve(const Selector* sel, Recorder* rec) const {
    long T = horizon_;
    std::vector<double> v1(T + 1, 0.0), v0(T + 1, 0.0);
    for (long k = T - 1; k >= 0; --k) {
      const PhaseModel& pm = model_.phases[phase_of_[k]];
      long r = T - k;
      int fixed = sel && sel->fixed ? sel->table[1][0][k] : -1;
      int chosen = -1;
      v1[k] = Pick(pm.normal,
                   [&](int c) {
                     double cont = pm.choices[c].seen ? threat_[r - 1] : v1[k + 1];
                     return Step(pm.stats[c], cont, r);
                   },
                   fixed, &chosen);
      if (rec) rec->table[1][0][k] = chosen;
    }
    for (long k = T - 1; k >= 0; --k) {
      const PhaseModel& pm = model_.phases[phase_of_[k]];
      long r = T - k;
      int fixed = sel && sel->fixed ? sel->table[0][0][k] : -1;
      int chosen = -1;
      double best;
      constexpr int off = DiscountedSolver::kFreeOffset;
      auto normal = [&](int c) {
        double cont = pm.choices[c].seen ? threat_[r - 1] : v0[k + 1];
        return Step(pm.stats[c], cont, r);
      };
      auto free = [&](int c) { return Step(pm.stats[c], v1[k + 1], r); };
      if (fixed >= 0) {
        chosen = fixed;
        best = fixed >= off ? free(fixed - off) : normal(fixed);
      } else {
        best = -std::numeric_limits<double>::infinity();
        for (int c : pm.normal) {
          double v = normal(c);
          if (v > best) {
            best = v;
            chosen = c;
          }
        }
        for (int c : pm.free) {
          double v = free(c);
          if (v > best) {
            best = v;
            chosen = c + off;
          }
        }
      }
      if (rec) rec->table[0][0][k] = chosen;
      bool start = model_.long_once ? k == 0 : offset_of_[k] == 0;
      if (pm.long_available && start) {
        long h = std::min(pm.long_horizon, T - k);
        long end = k + h;
        double terminal =
            (1.0 - pm.miss) * threat_[T - end] + pm.miss * v0[end];
        double vb = terminal;
        for (long j = end - 1; j >= k; --j) {
          long rr = T - j;
          int fx = sel && sel->fixed ? sel->table[2][0][j] : -1;
          int ch = -1;
          double cont = vb;
          vb = Pick(pm.longdev,
                    [&](int c) {
                      double cc = pm.choices[c].seen ? threat_[rr - 1] : cont;
                      return Step(pm.stats[c], cc, rr);
                    },
                    fx, &ch);
          if (rec) rec->table[2][0][j] = ch;
        }
        bool take = sel && sel->fixed ? static_cast<bool>(sel->long_taken[k])
                                      : vb > best;
        if (rec) rec->long_taken[k] = take;
        if (take) best = vb;
      }
      v0[k] = best;
    }
    return v0[0];
  }

  double Conform() const {
    double v = 0.0;
    for (long k = horizon_ - 1; k >= 0; --k) {
      const PhaseModel& pm = model_.phases[phase_of_[k]];
      v = Step(pm.stats[0], v, horizon_ - k);
    }
    return v;
  }

  int phase_of(long k) const { return phase_of_[k]; }

 private:
  const Model& model_;
  long horizon_;
  std::vector<int> phase_of_;
  std::vector<long> offset_of_;
  std::vector<double> threat_;
};

void Compress(const std::vector<int>& row, int layer, int phase,
              std::vector<PolicySegment>& out) {
  long start = 0;
  for (long k = 1; k <= static_cast<long>(row.size()); ++k) {
    if (k == static_cast<long>(row.size()) || row[k] != row[start]) {
      if (row[start] >= 0) {
        out.push_back({layer, phase, start, k, row[start]});
      }
      start = k;
    }
  }
}

Recorder MakeRecorder(const Model& model, bool finite, long horizon) {
  Recorder rec;
  rec.table.assign(3, {});
  if (finite) {
    for (auto& layer : rec.table) layer.assign(1, std::vector<int>(horizon, -1));
    rec.long_taken.assign(horizon, false);
  } else {
    for (int l = 0; l < 3; ++l) {
      for (const PhaseModel& pm : model.phases) {
        long len = l == 2 ? pm.long_horizon : pm.length;
        rec.table[l].push_back(std::vector<int>(len, -1));
      }
    }
    rec.long_taken.assign(model.phases.size(), false);
  }
  return rec;
}

DeviationPolicy ToPolicy(const Model& model, const Recorder& rec,
                         bool finite) {
  DeviationPolicy p;
  p.player = model.player;
  for (const PhaseModel& pm : model.phases) p.choices.push_back(pm.choices);
  for (int l = 0; l < 3; ++l) {
    for (size_t t = 0; t < rec.table[l].size(); ++t) {
      if (l == 2 && !finite && !rec.long_taken[t]) continue;
      Compress(rec.table[l][t], l, static_cast<int>(t), p.segments);
    }
  }
  for (size_t k = 0; k < rec.long_taken.size(); ++k) {
    if (rec.long_taken[k]) p.long_deviation_starts.push_back(k);
  }
  return p;
}

Selector FromPolicy(const Model& model, const DeviationPolicy& p) {
  Recorder shape = MakeRecorder(model, p.finite, p.horizon);
  Selector sel;
  sel.fixed = true;
  sel.table = shape.table;
  sel.long_taken = shape.long_taken;
  for (const PolicySegment& seg : p.segments) {
    if (seg.layer < 0 || seg.layer > 2 || seg.phase < 0 ||
        seg.phase >= static_cast<int>(sel.table[seg.layer].size())) {
      InputError("deviation segment out of range");
    }
    auto& row = sel.table[seg.layer][seg.phase];
    if (seg.from < 0 || seg.to > static_cast<long>(row.size())) {
      InputError("deviation segment out of range");
    }
    for (long k = seg.from; k < seg.to; ++k) row[k] = seg.choice;
  }
  for (long k : p.long_deviation_starts) {
    if (k < 0 || k >= static_cast<long>(sel.long_taken.size())) {
      InputError("deviation start out of range");
    }
    sel.long_taken[k] = true;
  }
  // Unset entries fall back to conforming play.
  for (int l = 0; l < 2; ++l) {
    for (auto& row : sel.table[l]) {
      for (int& c : row) {
        if (c < 0) c = 0;
      }
    }
  }
  for (auto& row : sel.table[2]) {
    for (int& c : row) {
      if (c < 0) c = 0;
    }
  }
  return sel;
}

}  // namespace

DeviationResult BestDeviation(const AbsorbingGame& game, const Strategy& s,
                              int player, double lambda) {
  CheckLambda(lambda);
  Model model = BuildModel(game, s, player);
  DiscountedSolver solver(model, lambda);
  Recorder rec = MakeRecorder(model, false, 0);
  DeviationResult out;
  out.value = solver.Solve(nullptr, &rec);
  out.conform = solver.Conform();
  out.policy = ToPolicy(model, rec, false);
  out.policy.lambda = lambda;
  out.policy.value = out.value;
  return out;
}

DeviationResult BestDeviationTStage(const AbsorbingGame& game,
                                    const Strategy& s, int player,
                                    long horizon) {
  if (horizon < 1) InputError("horizon must be positive");
  Model model = BuildModel(game, s, player);
  FiniteSolver solver(model, horizon);
  Recorder rec = MakeRecorder(model, true, horizon);
  DeviationResult out;
  double h = static_cast<double>(horizon);
  out.value = solver.Solve(nullptr, &rec) / h;
  out.conform = solver.Conform() / h;
  out.policy = ToPolicy(model, rec, true);
  out.policy.finite = true;
  out.policy.horizon = horizon;
  out.policy.value = out.value;
  return out;
}

double ReplayDeviation(const AbsorbingGame& game, const Strategy& s,
                       const DeviationPolicy& policy) {
  Model model = BuildModel(game, s, policy.player);
  Selector sel = FromPolicy(model, policy);
  if (policy.finite) {
    FiniteSolver solver(model, policy.horizon);
    return solver.Solve(&sel, nullptr) / static_cast<double>(policy.horizon);
  }
  CheckLambda(policy.lambda);
  DiscountedSolver solver(model, policy.lambda);
  return solver.Solve(&sel, nullptr);
}

// ---------------------------------------------------------------------------

int WorkerCount() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("ABSORBEQ_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return std::min(v, std::max(hw, v));
  }
  return hw;
}

namespace {

template <typename Fn>
void ParallelFor(int count, const Fn& fn) {
  int workers = std::min(WorkerCount(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

CertificationReport CertifyUniform(const AbsorbingGame& game,
                                   const Strategy& s, double epsilon,
                                   const std::vector<double>& lambda_grid,
                                   const std::vector<long>& t_grid) {
  ValidateStrategy(game, s);
  if (!(epsilon > 0.0)) InputError("epsilon must be positive");
  if (lambda_grid.empty() || t_grid.empty()) InputError("empty grid");
  for (size_t k = 1; k < lambda_grid.size(); ++k) {
    if (!(lambda_grid[k] < lambda_grid[k - 1])) {
      InputError("lambda grid must be decreasing");
    }
  }
  for (size_t k = 1; k < t_grid.size(); ++k) {
    if (!(t_grid[k] > t_grid[k - 1])) InputError("T grid must be increasing");
  }
  int n = game.num_players();
  CertificationReport rep;
  rep.epsilon = epsilon;
  rep.lambda_grid = lambda_grid;
  rep.t_grid = t_grid;
  int nl = static_cast<int>(lambda_grid.size());
  int tasks = (nl + static_cast<int>(t_grid.size())) * n;
  rep.entries.resize(tasks);
  ParallelFor(tasks, [&](int idx) {
    int point = idx / n, player = idx % n;
    GridEntry& e = rep.entries[idx];
    e.player = player;
    DeviationResult r;
    if (point < nl) {
      e.lambda = lambda_grid[point];
      r = BestDeviation(game, s, player, e.lambda);
    } else {
      e.finite = true;
      e.horizon = t_grid[point - nl];
      r = BestDeviationTStage(game, s, player, e.horizon);
    }
    e.conform = r.conform;
    e.deviation = r.value;
    e.gain = r.value - r.conform;
    e.policy = std::move(r.policy);
  });
  rep.max_gain = -std::numeric_limits<double>::infinity();
  for (const GridEntry& e : rep.entries) {
    rep.max_gain = std::max(rep.max_gain, e.gain);
  }
  rep.pass = rep.max_gain <= epsilon;
  rep.coverage =
      "grid-based check, not a proof for every lambda or T; deviations "
      "searched: every action at every stage (off-support actions are seen "
      "and punished unless they absorb), mixtures inside each monitor's "
      "2*tolerance band, one unrestricted stage inside the support, and a "
      "phase-long unrestricted deviation caught with probability "
      "1 - tolerance at the end of the monitored phase (almost stationary "
      "profiles: after one window; finite horizon: started at stage 0)";
  return rep;
}

// ---------------------------------------------------------------------------
// Simulation.

namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

int Sample(const std::vector<double>& mix, double u) {
  double acc = 0.0;
  int last = 0;
  for (size_t a = 0; a < mix.size(); ++a) {
    if (mix[a] <= 0.0) continue;
    last = static_cast<int>(a);
    acc += mix[a];
    if (u < acc) return last;
  }
  return last;
}

struct ChunkResult {
  std::vector<double> sum, sumsq, absorbed_sum;
  long absorbed = 0;
  std::vector<long> hist;
  std::vector<long> triggers, seen;
};

}  // namespace

double CounterUniform(uint64_t seed, uint64_t run, uint64_t stage,
                      uint64_t stream) {
  uint64_t x = SplitMix64(seed);
  x = SplitMix64(x ^ run);
  x = SplitMix64(x ^ stage);
  x = SplitMix64(x ^ stream);
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

MonteCarloSummary MonteCarlo(const AbsorbingGame& game, const Strategy& s,
                             long runs, long horizon, uint64_t seed,
                             double lambda,
                             const SimulationDeviation& deviation) {
  ValidateStrategy(game, s);
  if (runs < 1) InputError("runs must be at least 1");
  if (horizon < 1) InputError("horizon must be at least 1");
  CheckLambda(lambda);
  int n = game.num_players();
  if (deviation.player >= n) InputError("bad deviating player");
  std::vector<MixedProfile> stage;
  for (const Phase& p : s.phases) {
    MixedProfile y = StageProfile(game, p);
    stage.push_back(y);
  }
  std::vector<MixedProfile> played = stage;
  if (deviation.player >= 0) {
    for (auto& y : played) {
      if (deviation.mixed.size() != y[deviation.player].size()) {
        InputError("deviation mixture has wrong length");
      }
      y[deviation.player] = deviation.mixed;
    }
  }
  bool global = s.kind == StrategyKind::kAlmostStationary;
  const long chunk = 256;
  long chunks = (runs + chunk - 1) / chunk;
  std::vector<ChunkResult> results(chunks);
  int buckets = 1;
  while ((1L << buckets) <= horizon) ++buckets;
  ParallelFor(static_cast<int>(chunks), [&](int c) {
    ChunkResult& cr = results[c];
    cr.sum.assign(n, 0.0);
    cr.sumsq.assign(n, 0.0);
    cr.absorbed_sum.assign(n, 0.0);
    cr.hist.assign(buckets, 0);
    cr.triggers.assign(n, 0);
    cr.seen.assign(n, 0);
    std::vector<int> a(n);
    std::vector<double> pay(n);
    std::vector<long> count(n), elapsed(n), next_check(n);
    std::vector<bool> fired(n), seen(n);
    for (long run = c * chunk; run < std::min(runs, (c + 1) * chunk); ++run) {
      std::fill(pay.begin(), pay.end(), 0.0);
      std::fill(fired.begin(), fired.end(), false);
      std::fill(seen.begin(), seen.end(), false);
      double weight = 1.0;  // (1 - lambda)^t
      size_t t = 0;
      long offset = 0;
      auto reset_counters = [&] {
        for (int i = 0; i < n; ++i) {
          count[i] = 0;
          elapsed[i] = 0;
          next_check[i] = 0;
        }
      };
      reset_counters();
      bool absorbed = false;
      for (long k = 0; k < horizon; ++k) {
        const Phase& ph = s.phases[t];
        // Public signal: drawn every stage so runs stay aligned across
        // strategies; conforming on-path play does not consume it.
        (void)CounterUniform(seed, run, k, 0);
        int idx = 0;
        for (int i = 0; i < n; ++i) {
          a[i] = Sample(played[t][i], CounterUniform(seed, run, k, 1 + i));
          if (stage[t][i][a[i]] <= 0.0) seen[i] = true;
          idx += a[i] * game.stride(i);
        }
        for (const Monitor& m : ph.monitors) {
          int i = m.player;
          if (next_check[i] == 0) next_check[i] = m.window;
          ++elapsed[i];
          if (a[i] == m.action) ++count[i];
          if (elapsed[i] == next_check[i]) {
            double f = static_cast<double>(count[i]) / elapsed[i];
            if (std::abs(f - m.target) > m.tolerance) fired[i] = true;
            next_check[i] *= 2;
          }
        }
        double p = game.absorb(idx);
        bool hit = p > 0.0 && CounterUniform(seed, run, k, n + 1) < p;
        if (hit) {
          for (int i = 0; i < n; ++i) {
            pay[i] += weight * game.payoff(idx, i);
            cr.absorbed_sum[i] += game.payoff(idx, i);
          }
          ++cr.absorbed;
          int b = 0;
          while ((2L << b) <= k + 1) ++b;
          ++cr.hist[b];
          absorbed = true;
          break;
        }
        for (int i = 0; i < n; ++i) {
          pay[i] += weight * lambda * game.payoff(idx, i);
        }
        weight *= 1.0 - lambda;
        if (++offset == ph.length) {
          offset = 0;
          t = (t + 1) % s.phases.size();
          if (!global) reset_counters();
        }
      }
      (void)absorbed;
      for (int i = 0; i < n; ++i) {
        cr.sum[i] += pay[i];
        cr.sumsq[i] += pay[i] * pay[i];
        if (fired[i]) ++cr.triggers[i];
        if (seen[i]) ++cr.seen[i];
      }
    }
  });
  MonteCarloSummary out;
  out.runs = runs;
  out.horizon = horizon;
  out.seed = seed;
  out.lambda = lambda;
  std::vector<double> sum(n, 0.0), sumsq(n, 0.0), asum(n, 0.0);
  long absorbed = 0;
  out.absorption_histogram.assign(buckets, 0);
  out.triggers.assign(n, 0);
  out.seen_deviations.assign(n, 0);
  for (const ChunkResult& cr : results) {
    for (int i = 0; i < n; ++i) {
      sum[i] += cr.sum[i];
      sumsq[i] += cr.sumsq[i];
      asum[i] += cr.absorbed_sum[i];
      out.triggers[i] += cr.triggers[i];
      out.seen_deviations[i] += cr.seen[i];
    }
    absorbed += cr.absorbed;
    for (int b = 0; b < buckets; ++b) out.absorption_histogram[b] += cr.hist[b];
  }
  double r = static_cast<double>(runs);
  for (int i = 0; i < n; ++i) {
    double mean = sum[i] / r;
    double var = std::max(0.0, sumsq[i] / r - mean * mean);
    out.mean_discounted.push_back(mean);
    out.se_discounted.push_back(runs > 1 ? std::sqrt(var * r / (r - 1.0) / r)
                                         : 0.0);
    out.mean_absorbed.push_back(absorbed > 0 ? asum[i] / absorbed : 0.0);
  }
  out.absorbed_fraction = static_cast<double>(absorbed) / r;
  return out;
}

// ---------------------------------------------------------------------------

MinmaxRobustness CheckMinmaxRobustness(const AbsorbingGame& game,
                                       double epsilon,
                                       const std::vector<double>& delta_grid,
                                       double lambda) {
  RequireLShape(game);
  if (!(epsilon > 0.0)) InputError("epsilon must be positive");
  std::vector<double> grid = delta_grid;
  std::sort(grid.begin(), grid.end());
  for (double d : grid) {
    if (!(d > 0.0 && d <= 1.0)) InputError("delta grid must lie in (0,1]");
  }
  int n = game.num_players();
  MinmaxRobustness out;
  out.delta_grid = grid;
  for (int i = 0; i < n; ++i) {
    out.base_values.push_back(MinMax(game, i, lambda).value);
  }
  std::vector<double> levels = {0.0};
  levels.insert(levels.end(), grid.begin(), grid.end());
  int m = static_cast<int>(levels.size());
  // ok[a][b]: every player keeps value within epsilon at (levels a, b).
  std::vector<std::vector<bool>> ok(m, std::vector<bool>(m, false));
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      AbsorbingGame aux = BuildDeltaGame(game, levels[a], levels[b]);
      std::vector<double> v;
      bool good = true;
      for (int i = 0; i < n; ++i) {
        v.push_back(MinMax(aux, i, lambda).value);
        if (v.back() < out.base_values[i] - epsilon) good = false;
      }
      out.points.push_back({levels[a], levels[b]});
      out.values.push_back(v);
      ok[a][b] = good;
    }
  }
  for (int d = 1; d < m; ++d) {
    bool all = true;
    for (int a = 0; a <= d; ++a) {
      for (int b = 0; b <= d; ++b) all = all && ok[a][b];
    }
    if (!all) break;
    out.delta_prime = levels[d];
    out.nonempty = true;
  }
  return out;
}

}  // namespace absorbeq
