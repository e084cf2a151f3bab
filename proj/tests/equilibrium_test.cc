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
#include <random>

#include "doctest.h"
#include "equilibrium.h"
#include "error.h"
#include "payoff_oracle.h"
#include "sample_games.h"

namespace absorbeq {
namespace {

using testing::OracleResidual;

TEST_CASE("one-player game picks the best action") {
  AbsorbingGame g({{"a", "b", "c"}}, {1.0, 1.0, 0.0}, {0.3, 0.8, 0.0});
  DiscountedEquilibrium eq = StationaryEquilibrium(g, 0.1);
  CHECK(eq.profile[0][1] == doctest::Approx(1.0));
  CHECK(eq.residual <= 1e-12);
}

TEST_CASE("dominant profile") {
  AbsorbingGame g = BuildGame({{"a", "b"}, {"x", "y"}}, [](auto& a) {
    std::vector<double> u = {0.2 + 0.5 * a[0], 0.2 + 0.5 * a[1]};
    return std::make_pair(1.0, u);
  });
  DiscountedEquilibrium eq = StationaryEquilibrium(g, 0.05);
  CHECK(eq.profile[0][1] == doctest::Approx(1.0));
  CHECK(eq.profile[1][1] == doctest::Approx(1.0));
}

TEST_CASE("two-player quitting game with grid oracle") {
  auto g = testing::QuittingGame(2, [](const std::vector<int>& a) {
    if (a[0] && a[1]) return std::vector<double>{0.5, 0.5};
    if (a[0]) return std::vector<double>{1.0, 0.0};
    return std::vector<double>{0.0, 1.0};
  });
  const double lambda = 0.1;
  DiscountedEquilibrium eq = StationaryEquilibrium(g, lambda);
  CHECK(eq.residual <= 1e-6);
  CHECK(OracleResidual(g, eq.profile, lambda) <= 1e-6);
  // Grid search at step 1e-3 over quit probabilities: the returned profile
  // must sit next to grid points of near-zero residual.
  double best_near = 1.0;
  for (int s = 0; s <= 1000; ++s) {
    for (int t = 0; t <= 1000; ++t) {
      double a = s * 1e-3, b = t * 1e-3;
      if (std::fabs(a - eq.profile[0][1]) > 1.5e-3 ||
          std::fabs(b - eq.profile[1][1]) > 1.5e-3) {
        continue;
      }
      MixedProfile y = {{1 - a, a}, {1 - b, b}};
      best_near = std::min(best_near, OracleResidual(g, y, lambda));
    }
  }
  CHECK(best_near <= 5e-3);
}

TEST_CASE("enumeration finds every equilibrium of a coordination game") {
  AbsorbingGame g = BuildGame({{"a", "b"}, {"x", "y"}}, [](auto& a) {
    double v = a[0] == a[1] ? (a[0] ? 0.6 : 0.4) : 0.0;
    return std::make_pair(1.0, std::vector<double>{v, v});
  });
  auto all = EnumerateEquilibria(g, 0.5, SolverOptions{});
  CHECK(all.size() == 3);
  for (const auto& e : all) CHECK(OracleResidual(g, e.profile, 0.5) <= 1e-9);
}

TEST_CASE("random games solve to tolerance") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    int n = 2 + trial % 2;
    std::vector<std::vector<std::string>> actions(n, {"a", "b", "c"});
    AbsorbingGame g = BuildGame(actions, [&](auto&) {
      std::vector<double> u(n);
      for (double& v : u) v = unif(rng);
      double p = unif(rng) < 0.3 ? 0.0 : unif(rng);
      if (p == 0.0) std::fill(u.begin(), u.end(), 0.0);
      return std::make_pair(p, u);
    });
    for (double lambda : {1e-2, 1e-3}) {
      SolverOptions opts;
      opts.seed = trial;
      DiscountedEquilibrium eq = StationaryEquilibrium(g, lambda, opts);
      CHECK(OracleResidual(g, eq.profile, lambda) <= 1e-6);
    }
  }
}

TEST_CASE("cap is respected") {
  AbsorbingGame g({{"a", "b"}}, {1.0, 1.0}, {0.2, 0.9});
  g.set_cap(ActionCap{0, 1, 0.3});
  DiscountedEquilibrium eq = StationaryEquilibrium(g, 0.1);
  CHECK(eq.profile[0][1] <= 0.3 + 1e-12);
  CHECK(eq.profile[0][1] == doctest::Approx(0.3));
}

TEST_CASE("vanishing discount limit") {
  AbsorbingGame g = BuildGame({{"a", "b"}, {"x", "y"}}, [](auto& a) {
    std::vector<double> u = {0.2 + 0.5 * a[0], 0.2 + 0.5 * a[1]};
    return std::make_pair(1.0, u);
  });
  VanishingLimit lim =
      VanishingDiscountLimit(g, {1e-2, 1e-3, 1e-4, 1e-5});
  CHECK(lim.max_distance <= 1e-9);
  CHECK(lim.converged);
  CHECK(lim.profile[0][1] == doctest::Approx(1.0));
  CHECK_THROWS_WITH_AS(VanishingDiscountLimit(g, {1e-5}), "sequence too short",
                       Error);
}

TEST_CASE("min-max with a guaranteed quit") {
  AbsorbingGame g = BuildGame({{"c", "q"}, {"x", "y"}}, [](auto& a) {
    if (a[0] == 1) return std::make_pair(1.0, std::vector<double>{1.0, 0.3});
    return std::make_pair(a[1] == 1 ? 1.0 : 0.0,
                          std::vector<double>{a[1] ? 0.2 : 0.0, 0.0});
  });
  CHECK(MinMax(g, 0, 1e-3).value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("min-max of a player without a quit") {
  // Player 0 only continues; player 1 can keep the game going.
  AbsorbingGame g = BuildGame({{"c"}, {"c", "q"}}, [](auto& a) {
    if (a[1] == 1) return std::make_pair(1.0, std::vector<double>{0.7, 0.1});
    return std::make_pair(0.0, std::vector<double>{0.0, 0.0});
  });
  MinMaxResult r = MinMax(g, 0, 1e-4);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.punishment[0] == doctest::Approx(1.0));
}

TEST_CASE("min-max of an absorbing matching-pennies game") {
  // Closed-form value of a 2x2 game without a saddle point.
  double a = 0.9, b = 0.2, c = 0.1, d = 0.7;
  AbsorbingGame g = BuildGame({{"h", "t"}, {"h", "t"}}, [&](auto& p) {
    double v = p[0] == 0 ? (p[1] == 0 ? a : b) : (p[1] == 0 ? c : d);
    return std::make_pair(1.0, std::vector<double>{v, 1 - v});
  });
  double expect = (a * d - b * c) / (a + d - b - c);
  MinMaxResult r = MinMax(g, 0, 1e-4);
  CHECK(r.value == doctest::Approx(expect).epsilon(1e-9));
  double mix = (d - b) / (a + d - b - c);  // column weight on "h"
  CHECK(r.punishment[0] == doctest::Approx(mix).epsilon(1e-9));
}

TEST_CASE("min-max is monotone in own payoffs") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    AbsorbingGame g = BuildGame({{"a", "b", "c"}, {"x", "y"}}, [&](auto& a) {
      bool cont = a[0] == 0 && a[1] == 0;
      if (cont) return std::make_pair(0.0, std::vector<double>{0.0, 0.0});
      return std::make_pair(unif(rng),
                            std::vector<double>{0.8 * unif(rng), unif(rng)});
    });
    double base = MinMax(g, 0, 1e-3).value;
    AbsorbingGame h = g;
    for (int k = 0; k < h.num_profiles(); ++k) {
      if (h.absorb(k) > 0) h.set_payoff(k, 0, h.payoff(k, 0) + 0.2 * unif(rng));
    }
    CHECK(MinMax(h, 0, 1e-3).value >= base - 1e-9);
  }
}

TEST_CASE("punishment caps every stationary response") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    AbsorbingGame g = BuildGame({{"a", "b"}, {"x", "y"}, {"u", "v"}},
                                [&](auto&) {
      return std::make_pair(unif(rng), std::vector<double>{
                                           unif(rng), unif(rng), unif(rng)});
    });
    for (int i = 0; i < 3; ++i) {
      MinMaxResult r = MinMax(g, i, 1e-3);
      ResponseStats s = ResponseToJoint(g, i, r.punishment);
      for (int a = 0; a < 2; ++a) {
        double v = DiscountedValue(s.stage[a], s.absorbed[a], s.absorb[a],
                                   1e-3);
        CHECK(v <= r.value + 1e-9);
      }
    }
  }
}

}  // namespace
}  // namespace absorbeq
