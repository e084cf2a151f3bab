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

#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>

#include "auxiliary.h"
#include "doctest.h"
#include "equilibrium.h"
#include "error.h"
#include "sample_games.h"
#include "verifier.h"

namespace absorbeq {
namespace {

using testing::QuittingGame;

AbsorbingGame RandomGame(std::mt19937_64& rng, std::vector<int> sizes) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::vector<std::string>> actions;
  for (int m : sizes) {
    std::vector<std::string> names;
    for (int a = 0; a < m; ++a) names.push_back("a" + std::to_string(a));
    actions.push_back(names);
  }
  int n = static_cast<int>(sizes.size());
  return BuildGame(actions, [&](const std::vector<int>&) {
    double p = unif(rng) < 0.3 ? 0.0 : unif(rng);
    std::vector<double> u(n);
    for (double& v : u) v = unif(rng);
    return std::make_pair(p, u);
  });
}

MixedProfile RandomProfile(const AbsorbingGame& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  MixedProfile x(g.num_players());
  for (int i = 0; i < g.num_players(); ++i) {
    double total = 0.0;
    for (int a = 0; a < g.num_actions(i); ++a) {
      x[i].push_back(unif(rng));
      total += x[i].back();
    }
    for (double& v : x[i]) v /= total;
  }
  return x;
}

// Two quitting players; Player 0 quits in phase 0, Player 1 in phase 1.
Strategy TwoPhasePlan(const AbsorbingGame& g) {
  Strategy s;
  s.kind = StrategyKind::kSunspot;
  s.epsilon = 0.5;
  for (int i = 0; i < 2; ++i) {
    Phase p;
    p.quitter = i;
    p.quit_action = 1;
    p.alpha = i == 0 ? 0.2 : 0.1;
    p.length = i == 0 ? 3 : 2;
    p.base = PureProfile(g, {0, 0});
    s.phases.push_back(p);
  }
  return s;
}

AbsorbingGame TwoQuitters() {
  return QuittingGame(2, [](const std::vector<int>& a) {
    if (a[0] && a[1]) return std::vector<double>{0.3, 0.3};
    if (a[0]) return std::vector<double>{0.4, 0.8};
    return std::vector<double>{0.7, 0.2};
  });
}

TEST_CASE("plan evaluation basics") {
  AbsorbingGame g = TwoQuitters();
  Strategy s = TwoPhasePlan(g);
  s.epsilon = 0.0;
  s.phases.resize(1);
  s.phases[0].alpha = 1.0;
  for (double lambda : {0.5, 0.01, 1e-4}) {
    std::vector<double> v = EvalStrategy(g, s, lambda);
    CHECK(v[0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(0.8).epsilon(1e-12));
  }
  s.phases[0].alpha = 0.0;
  std::vector<double> zero = EvalStrategy(g, s, 0.01);
  CHECK(zero[0] == 0.0);
  CHECK(EvalStrategyTStage(g, s, 100)[1] == 0.0);
  CHECK(EvalStrategyUndiscounted(g, s)[0] == 0.0);
}

TEST_CASE("stationary evaluation matches the payoff engine") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    AbsorbingGame g = RandomGame(rng, {2, 3});
    MixedProfile x = RandomProfile(g, rng);
    Strategy s = StationaryStrategy(x);
    for (double lambda : {0.3, 0.01}) {
      auto a = EvalStrategy(g, s, lambda);
      auto b = DiscountedPayoff(g, x, lambda);
      for (int i = 0; i < 2; ++i) CHECK(a[i] == doctest::Approx(b[i]));
    }
    auto t1 = EvalStrategyTStage(g, s, 50);
    auto t2 = TStagePayoff(g, x, 50);
    for (int i = 0; i < 2; ++i) CHECK(t1[i] == doctest::Approx(t2[i]));
  }
}

TEST_CASE("two-phase plan against simulation") {
  AbsorbingGame g = TwoQuitters();
  Strategy s = TwoPhasePlan(g);
  const double lambda = 0.01;
  std::vector<double> exact = EvalStrategy(g, s, lambda);
  MonteCarloSummary mc = MonteCarlo(g, s, 1000000, 4000, 17, lambda);
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(mc.mean_discounted[i] - exact[i]) <=
          3.0 * mc.se_discounted[i]);
  }
  std::vector<double> und = EvalStrategyUndiscounted(g, s);
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(mc.mean_absorbed[i] - und[i]) < 0.01);
  }
  CHECK(mc.absorbed_fraction == 1.0);
}

TEST_CASE("stationary best deviation equals pure enumeration") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    AbsorbingGame g = RandomGame(rng, {3, 2});
    MixedProfile x = RandomProfile(g, rng);
    Strategy s = StationaryStrategy(x);
    for (double lambda : {0.2, 0.01}) {
      for (int i = 0; i < 2; ++i) {
        double best = -1.0;
        for (int a = 0; a < g.num_actions(i); ++a) {
          MixedProfile y = x;
          y[i].assign(g.num_actions(i), 0.0);
          y[i][a] = 1.0;
          best = std::max(best, DiscountedPayoff(g, y, lambda)[i]);
        }
        DeviationResult r = BestDeviation(g, s, i, lambda);
        CHECK(r.value == doctest::Approx(best).epsilon(1e-10));
        CHECK(r.conform ==
              doctest::Approx(DiscountedPayoff(g, x, lambda)[i]).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("finite-horizon deviation against open-loop enumeration") {
  // Before absorption nothing changes, so open-loop action sequences are
  // all the deviator can use against stationary opponents.
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    AbsorbingGame g = RandomGame(rng, {2, 2});
    MixedProfile x = RandomProfile(g, rng);
    Strategy s = StationaryStrategy(x);
    const long T = 4;
    for (int i = 0; i < 2; ++i) {
      double best = -1.0;
      for (int code = 0; code < 16; ++code) {
        double alive = 1.0, total = 0.0, frozen = 0.0;
        for (int t = 0; t < T; ++t) {
          MixedProfile y = x;
          y[i] = {0.0, 0.0};
          y[i][(code >> t) & 1] = 1.0;
          StageStats st = Stage(g, y);
          total += alive * st.stage[i] + frozen;
          frozen += alive * st.absorbed[i];
          alive *= 1.0 - st.absorb;
        }
        best = std::max(best, total / T);
      }
      DeviationResult r = BestDeviationTStage(g, s, i, T);
      CHECK(r.value == doctest::Approx(best).epsilon(1e-12));
      CHECK(r.conform == doctest::Approx(TStagePayoff(g, x, T)[i]));
    }
  }
}

TEST_CASE("certification verdicts") {
  // Dominant profile: everybody quits and nobody can do better.
  AbsorbingGame g = QuittingGame(2, [](const std::vector<int>& a) {
    if (a[0] && a[1]) return std::vector<double>{0.9, 0.9};
    return std::vector<double>{0.5, 0.5};
  });
  Strategy dom = StationaryStrategy(PureProfile(g, {1, 1}));
  CertificationReport ok = CertifyUniform(g, dom, 0.01);
  CHECK(ok.pass);
  CHECK(ok.max_gain <= 1e-12);
  CHECK(ok.entries.size() == 12);

  // Known profitable deviation worth 0.2.
  AbsorbingGame h = BuildGame({{"x", "y"}, {"z"}},
                              [](const std::vector<int>& a) {
                                double u = a[0] == 0 ? 0.5 : 0.7;
                                return std::make_pair(1.0,
                                                      std::vector<double>{u, u});
                              });
  Strategy bad = StationaryStrategy(PureProfile(h, {0, 0}));
  CertificationReport fail = CertifyUniform(h, bad, 0.05);
  CHECK_FALSE(fail.pass);
  CHECK(fail.max_gain == doctest::Approx(0.2).epsilon(1e-9));
  bool reported = false;
  for (const GridEntry& e : fail.entries) {
    if (e.player == 0 && e.gain > 0.19) {
      reported = true;
      CHECK(ReplayDeviation(h, bad, e.policy) ==
            doctest::Approx(e.deviation).epsilon(1e-12));
    }
  }
  CHECK(reported);
  CHECK(CertifyUniform(h, bad, 0.25).pass);
  CHECK_FALSE(CertifyUniform(h, bad, 0.19).pass);
  CHECK_THROWS_AS(CertifyUniform(h, bad, 0.1, {1e-3, 1e-2}), Error);
}

TEST_CASE("replay reproduces reported deviations") {
  AbsorbingGame g = testing::LShapedTable(5);
  LShape s = RequireLShape(g);
  Strategy plan;
  plan.kind = StrategyKind::kSunspot;
  plan.epsilon = 0.1;
  Phase p;
  p.quitter = s.player1;
  p.quit_action = 2;
  p.alpha = 0.05;
  p.length = 40;
  p.base = PureProfile(g, {s.c1[0], s.c2[0]});
  p.base[s.player2] = {0.7, 0.3, 0.0};
  p.monitors.push_back(AttachMonitoring(s.player2, s.c2[1], 0.3, 0.45));
  plan.phases.push_back(p);
  Phase q = p;
  q.quitter = s.player2;
  q.quit_action = 2;
  q.monitors.clear();
  q.base[s.player2] = {1.0, 0.0, 0.0};
  q.length = 7;
  plan.phases.push_back(q);
  for (int i = 0; i < 2; ++i) {
    MinMaxResult mm = MinMax(g, i, 1e-3);
    plan.punishments.push_back({i, mm.punishment, mm.value});
  }
  for (int i = 0; i < 2; ++i) {
    for (double lambda : {0.05, 1e-3}) {
      DeviationResult r = BestDeviation(g, plan, i, lambda);
      CHECK(r.value >= r.conform - 1e-12);
      CHECK(ReplayDeviation(g, plan, r.policy) ==
            doctest::Approx(r.value).epsilon(1e-9));
      DeviationPolicy conform = r.policy;
      conform.segments.clear();
      conform.long_deviation_starts.clear();
      CHECK(ReplayDeviation(g, plan, conform) ==
            doctest::Approx(r.conform).epsilon(1e-9));
    }
    DeviationResult t = BestDeviationTStage(g, plan, i, 500);
    CHECK(ReplayDeviation(g, plan, t.policy) ==
          doctest::Approx(t.value).epsilon(1e-9));
  }
  auto v = EvalStrategy(g, plan, 1e-3);
  for (int i = 0; i < 2; ++i) {
    CHECK(BestDeviation(g, plan, i, 1e-3).conform ==
          doctest::Approx(v[i]).epsilon(1e-10));
  }
}

TEST_CASE("monitoring windows") {
  CHECK(HoeffdingWindow(0.5) <= 64);
  long prev = 0;
  for (double tol : {0.4, 0.2, 0.1, 0.05, 0.02}) {
    long w = HoeffdingWindow(tol);
    CHECK(w > prev);
    prev = w;
    // Direct evaluation of the bound at w and w - 1.
    auto bound = [&](double t) {
      double sum = 0.0;
      for (int k = 0; k < 60; ++k) {
        sum += 2.0 * std::exp(-2.0 * std::ldexp(t, k) * tol * tol);
      }
      return sum;
    };
    CHECK(bound(w) <= tol);
    CHECK(bound(w - 1) > tol);
  }
  CHECK(AttachMonitoring(0, 1, 1.0, 0.1).window == 1);
}

TEST_CASE("monitor catches a frequency shift") {
  // Player 0 mixes two continue actions; nothing absorbs.
  AbsorbingGame g = BuildGame({{"l", "r"}, {"c"}},
                              [](const std::vector<int>&) {
                                return std::make_pair(
                                    0.0, std::vector<double>{0.0, 0.0});
                              });
  const double tol = 0.1;
  Strategy s;
  s.kind = StrategyKind::kAlmostStationary;
  Phase p;
  p.base = {{0.5, 0.5}, {1.0}};
  p.monitors.push_back(AttachMonitoring(0, 0, 0.5, tol));
  s.phases.push_back(p);
  s.punishments.push_back({0, {1.0}, 0.0});
  long w = p.monitors[0].window;
  SimulationDeviation dev{0, {0.5 + 2 * tol, 0.5 - 2 * tol}};
  MonteCarloSummary mc = MonteCarlo(g, s, 10000, 4 * w, 5, 0.01, dev);
  CHECK(mc.triggers[0] >= (1.0 - tol) * 10000);
  MonteCarloSummary conform = MonteCarlo(g, s, 10000, 4 * w, 5, 0.01);
  CHECK(conform.triggers[0] <= tol * 10000);
}

TEST_CASE("simulation determinism and point masses") {
  AbsorbingGame g = TwoQuitters();
  Strategy s = TwoPhasePlan(g);
  setenv("ABSORBEQ_THREADS", "1", 1);
  MonteCarloSummary a = MonteCarlo(g, s, 5000, 500, 99);
  setenv("ABSORBEQ_THREADS", "3", 1);
  MonteCarloSummary b = MonteCarlo(g, s, 5000, 500, 99);
  unsetenv("ABSORBEQ_THREADS");
  CHECK(a.mean_discounted == b.mean_discounted);
  CHECK(a.se_discounted == b.se_discounted);
  CHECK(a.absorption_histogram == b.absorption_histogram);
  MonteCarloSummary c = MonteCarlo(g, s, 5000, 500, 100);
  CHECK(a.mean_discounted != c.mean_discounted);

  Strategy point = StationaryStrategy(PureProfile(g, {1, 0}));
  MonteCarloSummary d = MonteCarlo(g, point, 1000, 10, 1);
  CHECK(d.absorbed_fraction == 1.0);
  CHECK(d.absorption_histogram[0] == 1000);
  CHECK(d.mean_absorbed[0] == doctest::Approx(0.4));
  CHECK(d.mean_absorbed[1] == doctest::Approx(0.8));

  Strategy idle = s;
  for (Phase& p : idle.phases) p.alpha = 0.0;
  MonteCarloSummary e = MonteCarlo(g, idle, 100, 50, 1);
  CHECK(e.absorbed_fraction == 0.0);
  CHECK(e.mean_discounted[0] == 0.0);

  CHECK_THROWS_AS(MonteCarlo(g, s, 0, 10, 1), Error);
  CHECK(CounterUniform(1, 2, 3, 4) == CounterUniform(1, 2, 3, 4));
  CHECK(CounterUniform(1, 2, 3, 4) != CounterUniform(1, 2, 3, 5));
}

TEST_CASE("min-max robustness") {
  AbsorbingGame g = testing::LShapedTable(3);
  MinmaxRobustness r =
      CheckMinmaxRobustness(g, 0.1, {0.001, 0.01, 0.1, 0.5}, 1e-3);
  REQUIRE(r.values.size() == 25);
  for (int i = 0; i < 2; ++i) {
    CHECK(r.values[0][i] == doctest::Approx(r.base_values[i]));
  }
  CHECK(r.nonempty);

  AbsorbingGame g3 = testing::LShaped3(4);
  MinmaxRobustness r3 = CheckMinmaxRobustness(g3, 0.1, {0.001, 0.01}, 1e-3);
  CHECK(r3.nonempty);
  CHECK(r3.delta_prime >= 0.001);
  CHECK_THROWS_AS(CheckMinmaxRobustness(testing::SpottedTable(), 0.1, {0.1},
                                        1e-3),
                  Error);
}

}  // namespace
}  // namespace absorbeq
