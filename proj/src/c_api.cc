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

#include "absorbeq/absorbeq.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "error.h"
#include "io.h"
#include "lcp.h"
#include "strategy.h"
#include "synth.h"
#include "verifier.h"

struct absorbeq_game {
  absorbeq::AbsorbingGame game;
};

struct absorbeq_strategy {
  absorbeq::Strategy strategy;
};

namespace {

thread_local std::string last_error;

int StatusFor(const absorbeq::Error& e) {
  switch (e.kind()) {
    case absorbeq::ErrorKind::kInvalidInput:
      return ABSORBEQ_INPUT_ERROR;
    case absorbeq::ErrorKind::kSynthesisFailed:
      return ABSORBEQ_SYNTH_FAILED;
    case absorbeq::ErrorKind::kUnsupported:
      return ABSORBEQ_UNSUPPORTED;
    case absorbeq::ErrorKind::kUndefined:
    case absorbeq::ErrorKind::kSolverFailure:
      return ABSORBEQ_INTERNAL_ERROR;
  }
  return ABSORBEQ_INTERNAL_ERROR;
}

template <typename F>
int Guard(F&& f) {
  last_error.clear();
  try {
    return f();
  } catch (const absorbeq::Error& e) {
    last_error = e.what();
    return StatusFor(e);
  } catch (const std::exception& e) {
    last_error = e.what();
    return ABSORBEQ_INTERNAL_ERROR;
  }
}

void Need(const void* p, const char* what) {
  if (!p) absorbeq::InputError(std::string(what) + " is null");
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Put(char** out, const std::string& s) {
  if (out) *out = Dup(s);
}

absorbeq::Matrix Rows(const double* r, int n) {
  Need(r, "matrix");
  if (n < 1) absorbeq::InputError("matrix dimension must be positive");
  absorbeq::Matrix m(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i][j] = r[i * n + j];
  }
  return m;
}

absorbeq::LcpVariant Variant(int v) {
  if (v == ABSORBEQ_LCP_VERBATIM) return absorbeq::LcpVariant::kVerbatim;
  if (v == ABSORBEQ_LCP_EQUILIBRIUM) return absorbeq::LcpVariant::kEquilibrium;
  absorbeq::InputError("unknown LCP variant");
}

absorbeq::SynthOptions Options(const absorbeq_options* o) {
  absorbeq::SynthOptions s;
  if (!o) return s;
  if (!(o->epsilon > 0.0)) absorbeq::InputError("epsilon must be positive");
  s.epsilon = o->epsilon;
  if (o->lambda_grid) {
    if (o->lambda_count == 0) absorbeq::InputError("lambda grid is empty");
    s.lambda_grid.assign(o->lambda_grid, o->lambda_grid + o->lambda_count);
  }
  if (o->t_grid) {
    if (o->t_count == 0) absorbeq::InputError("T grid is empty");
    s.t_grid.assign(o->t_grid, o->t_grid + o->t_count);
  }
  s.seed = o->seed;
  if (o->density < 1) absorbeq::InputError("density must be positive");
  s.density = o->density;
  if (!(o->budget_secs > 0.0)) absorbeq::InputError("budget must be positive");
  s.budget_secs = o->budget_secs;
  return s;
}

}  // namespace

extern "C" {

const char* absorbeq_version(void) { return absorbeq::kVersion; }

const char* absorbeq_last_error(void) { return last_error.c_str(); }

void absorbeq_string_free(char* s) { std::free(s); }

void absorbeq_options_default(absorbeq_options* options) {
  if (!options) return;
  absorbeq::SynthOptions d;
  options->epsilon = d.epsilon;
  options->lambda_grid = nullptr;
  options->lambda_count = 0;
  options->t_grid = nullptr;
  options->t_count = 0;
  options->seed = d.seed;
  options->density = d.density;
  options->budget_secs = d.budget_secs;
}

int absorbeq_game_from_json(const char* text, absorbeq_game** out) {
  return Guard([&] {
    Need(text, "text");
    Need(out, "out");
    *out = new absorbeq_game{absorbeq::GameFromText(text)};
    return ABSORBEQ_OK;
  });
}

int absorbeq_game_load(const char* path, absorbeq_game** out) {
  return Guard([&] {
    Need(path, "path");
    Need(out, "out");
    *out = new absorbeq_game{absorbeq::LoadGame(path)};
    return ABSORBEQ_OK;
  });
}

void absorbeq_game_free(absorbeq_game* game) { delete game; }

int absorbeq_game_num_players(const absorbeq_game* game) {
  return game ? game->game.num_players() : -1;
}

int absorbeq_game_num_actions(const absorbeq_game* game, int player) {
  if (!game || player < 0 || player >= game->game.num_players()) return -1;
  return game->game.num_actions(player);
}

int absorbeq_game_to_json(const absorbeq_game* game, char** out) {
  return Guard([&] {
    Need(game, "game");
    Put(out, absorbeq::GameToJson(game->game).dump());
    return ABSORBEQ_OK;
  });
}

int absorbeq_classify(const absorbeq_game* game, char** out) {
  return Guard([&] {
    Need(game, "game");
    absorbeq::GameClassification c = absorbeq::Classify(game->game);
    Put(out, absorbeq::ClassificationToJson(game->game, c).dump());
    return ABSORBEQ_OK;
  });
}

int absorbeq_strategy_from_json(const char* text, absorbeq_strategy** out) {
  return Guard([&] {
    Need(text, "text");
    Need(out, "out");
    *out = new absorbeq_strategy{absorbeq::StrategyFromText(text)};
    return ABSORBEQ_OK;
  });
}

void absorbeq_strategy_free(absorbeq_strategy* s) { delete s; }

int absorbeq_strategy_to_json(const absorbeq_strategy* s, char** out) {
  return Guard([&] {
    Need(s, "strategy");
    Put(out, absorbeq::StrategyToJson(s->strategy).dump());
    return ABSORBEQ_OK;
  });
}

int absorbeq_strategy_validate(const absorbeq_game* game,
                               const absorbeq_strategy* s) {
  return Guard([&] {
    Need(game, "game");
    Need(s, "strategy");
    absorbeq::ValidateStrategy(game->game, s->strategy);
    return ABSORBEQ_OK;
  });
}

int absorbeq_lcp_solve(const double* r, const double* q, int n, int variant,
                       double tol, double* z, double* w) {
  return Guard([&] {
    absorbeq::Matrix m = Rows(r, n);
    Need(q, "q");
    std::vector<double> qv(q, q + n);
    std::optional<absorbeq::LcpSolution> sol =
        absorbeq::SolveLcp(m, qv, tol, Variant(variant));
    if (!sol) return static_cast<int>(ABSORBEQ_INFEASIBLE);
    if (z) std::copy(sol->z.begin(), sol->z.end(), z);
    if (w) std::copy(sol->w.begin(), sol->w.end(), w);
    return static_cast<int>(ABSORBEQ_OK);
  });
}

int absorbeq_q_test(const double* r, int n, int variant, int density,
                    double tol, int* is_q, double* witness) {
  return Guard([&] {
    absorbeq::Matrix m = Rows(r, n);
    absorbeq::QVerdict v =
        absorbeq::IsQMatrix(m, density, tol, Variant(variant));
    if (is_q) *is_q = v.q_certified ? 1 : 0;
    if (!v.q_certified && v.witness && witness) {
      std::copy(v.witness->begin(), v.witness->end(), witness);
    }
    return static_cast<int>(v.q_certified ? ABSORBEQ_OK : ABSORBEQ_INFEASIBLE);
  });
}

int absorbeq_synthesize(const absorbeq_game* game,
                        const absorbeq_options* options,
                        absorbeq_strategy** strategy, char** report_json,
                        char** log_json) {
  return Guard([&] {
    Need(game, "game");
    Need(strategy, "strategy");
    absorbeq::SynthResult r =
        absorbeq::Synthesize(game->game, Options(options));
    *strategy = new absorbeq_strategy{r.strategy};
    Put(report_json, absorbeq::ReportToJson(r.report).dump());
    Put(log_json, absorbeq::Json(r.log).dump());
    return ABSORBEQ_OK;
  });
}

int absorbeq_certify(const absorbeq_game* game, const absorbeq_strategy* s,
                     const absorbeq_options* options, int* pass,
                     double* max_gain, char** report_json) {
  return Guard([&] {
    Need(game, "game");
    Need(s, "strategy");
    absorbeq::SynthOptions o = Options(options);
    absorbeq::ValidateStrategy(game->game, s->strategy);
    absorbeq::CertificationReport r = absorbeq::CertifyUniform(
        game->game, s->strategy, o.epsilon, o.lambda_grid, o.t_grid);
    if (pass) *pass = r.pass ? 1 : 0;
    if (max_gain) *max_gain = r.max_gain;
    Put(report_json, absorbeq::ReportToJson(r).dump());
    return ABSORBEQ_OK;
  });
}

int absorbeq_eval_strategy(const absorbeq_game* game,
                           const absorbeq_strategy* s, double lambda,
                           double* out) {
  return Guard([&] {
    Need(game, "game");
    Need(s, "strategy");
    Need(out, "out");
    absorbeq::ValidateStrategy(game->game, s->strategy);
    std::vector<double> v =
        absorbeq::EvalStrategy(game->game, s->strategy, lambda);
    std::copy(v.begin(), v.end(), out);
    return ABSORBEQ_OK;
  });
}

int absorbeq_simulate(const absorbeq_game* game, const absorbeq_strategy* s,
                      long runs, long horizon, uint64_t seed, double lambda,
                      char** summary_json, char** summary_csv) {
  return Guard([&] {
    Need(game, "game");
    Need(s, "strategy");
    absorbeq::ValidateStrategy(game->game, s->strategy);
    absorbeq::MonteCarloSummary m = absorbeq::MonteCarlo(
        game->game, s->strategy, runs, horizon, seed, lambda);
    Put(summary_json, absorbeq::MonteCarloToJson(m).dump());
    Put(summary_csv, absorbeq::MonteCarloCsv(m));
    return ABSORBEQ_OK;
  });
}

int absorbeq_validate_output(const char* kind, const char* json) {
  return Guard([&] {
    Need(kind, "kind");
    Need(json, "json");
    absorbeq::ValidateOutput(kind, absorbeq::ParseJson(json, "output"));
    return ABSORBEQ_OK;
  });
}

}  // extern "C"
