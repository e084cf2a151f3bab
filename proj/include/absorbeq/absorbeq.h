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

#ifndef ABSORBEQ_INCLUDE_ABSORBEQ_ABSORBEQ_H_
#define ABSORBEQ_INCLUDE_ABSORBEQ_ABSORBEQ_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ABSORBEQ_API __declspec(dllexport)
#else
#define ABSORBEQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

// Status codes; the CLI uses them as exit codes.
typedef enum {
  ABSORBEQ_OK = 0,
  ABSORBEQ_INFEASIBLE = 1,      // LCP infeasible, or the matrix is not Q
  ABSORBEQ_INPUT_ERROR = 2,     // malformed input, failed precondition
  ABSORBEQ_SYNTH_FAILED = 3,    // no certified strategy within budgets
  ABSORBEQ_UNSUPPORTED = 4,     // game class or size not supported
  ABSORBEQ_INTERNAL_ERROR = 5,  // solver failure or undefined quantity
} absorbeq_status;

typedef enum {
  ABSORBEQ_LCP_VERBATIM = 0,
  ABSORBEQ_LCP_EQUILIBRIUM = 1,
} absorbeq_lcp_variant;

typedef struct absorbeq_game absorbeq_game;
typedef struct absorbeq_strategy absorbeq_strategy;

typedef struct {
  double epsilon;
  const double* lambda_grid;  // NULL: default grid
  size_t lambda_count;
  const long* t_grid;         // NULL: default grid
  size_t t_count;
  uint64_t seed;
  int density;
  double budget_secs;
} absorbeq_options;

ABSORBEQ_API const char* absorbeq_version(void);
// Message of the last failing call on this thread ("" when none).
ABSORBEQ_API const char* absorbeq_last_error(void);
// Frees strings returned through char** out-parameters.
ABSORBEQ_API void absorbeq_string_free(char* s);
ABSORBEQ_API void absorbeq_options_default(absorbeq_options* options);

// Games (JSON schema documented in the README).
ABSORBEQ_API int absorbeq_game_from_json(const char* text,
                                         absorbeq_game** out);
ABSORBEQ_API int absorbeq_game_load(const char* path, absorbeq_game** out);
ABSORBEQ_API void absorbeq_game_free(absorbeq_game* game);
ABSORBEQ_API int absorbeq_game_num_players(const absorbeq_game* game);
ABSORBEQ_API int absorbeq_game_num_actions(const absorbeq_game* game,
                                           int player);
ABSORBEQ_API int absorbeq_game_to_json(const absorbeq_game* game, char** out);
ABSORBEQ_API int absorbeq_classify(const absorbeq_game* game, char** out);

// Strategies.
ABSORBEQ_API int absorbeq_strategy_from_json(const char* text,
                                             absorbeq_strategy** out);
ABSORBEQ_API void absorbeq_strategy_free(absorbeq_strategy* s);
ABSORBEQ_API int absorbeq_strategy_to_json(const absorbeq_strategy* s,
                                           char** out);
// Checks the strategy against the game (shapes, probabilities, threats).
ABSORBEQ_API int absorbeq_strategy_validate(const absorbeq_game* game,
                                            const absorbeq_strategy* s);

// Complementarity problems; r is row-major n x n. z has n + 1 entries
// (z[0] weighs q), w has n.
ABSORBEQ_API int absorbeq_lcp_solve(const double* r, const double* q, int n,
                                    int variant, double tol, double* z,
                                    double* w);
// Sets *is_q; on a negative verdict fills witness (n entries).
ABSORBEQ_API int absorbeq_q_test(const double* r, int n, int variant,
                                 int density, double tol, int* is_q,
                                 double* witness);

// Synthesis and verification. JSON outputs are the report documents.
ABSORBEQ_API int absorbeq_synthesize(const absorbeq_game* game,
                                     const absorbeq_options* options,
                                     absorbeq_strategy** strategy,
                                     char** report_json, char** log_json);
ABSORBEQ_API int absorbeq_certify(const absorbeq_game* game,
                                  const absorbeq_strategy* s,
                                  const absorbeq_options* options, int* pass,
                                  double* max_gain, char** report_json);
// Discounted payoff of conforming play; out has one entry per player.
ABSORBEQ_API int absorbeq_eval_strategy(const absorbeq_game* game,
                                        const absorbeq_strategy* s,
                                        double lambda, double* out);
ABSORBEQ_API int absorbeq_simulate(const absorbeq_game* game,
                                   const absorbeq_strategy* s, long runs,
                                   long horizon, uint64_t seed, double lambda,
                                   char** summary_json, char** summary_csv);

// Validates a command output document of the given kind.
ABSORBEQ_API int absorbeq_validate_output(const char* kind, const char* json);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // ABSORBEQ_INCLUDE_ABSORBEQ_ABSORBEQ_H_
