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

#ifndef ABSORBEQ_SRC_IO_H_
#define ABSORBEQ_SRC_IO_H_

#include <string>
#include <vector>

#include "json.hpp"

#include "equilibrium.h"
#include "game.h"
#include "lcp.h"
#include "strategy.h"
#include "synth.h"
#include "verifier.h"

namespace absorbeq {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

// Parses JSON text; syntax errors name the line and column.
Json ParseJson(const std::string& text, const std::string& what);
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

// Game files: {"players": n, "actions": [[names]], "entries": [{"profile":
// [indices], "p": prob, "u": [payoffs]}], "cap": {"player", "action",
// "alpha"}}; every profile appears exactly once, "cap" is optional.
AbsorbingGame GameFromText(const std::string& text);
AbsorbingGame LoadGame(const std::string& path);
Json GameToJson(const AbsorbingGame& game);

// Matrix files: an array of rows, or {"R": rows, "q": vector}.
struct MatrixFile {
  Matrix r;
  std::vector<double> q;  // empty when absent
};
MatrixFile MatrixFromText(const std::string& text);

Json ProfileToJson(const MixedProfile& x);
MixedProfile ProfileFromJson(const Json& j);

Json StrategyToJson(const Strategy& s);
Strategy StrategyFromJson(const Json& j);
Strategy StrategyFromText(const std::string& text);

Json ClassificationToJson(const AbsorbingGame& game,
                          const GameClassification& c);
Json LcpSolutionToJson(const LcpSolution& s);
Json QVerdictToJson(const QVerdict& v);
Json PolicyToJson(const DeviationPolicy& p);
Json ReportToJson(const CertificationReport& r);
Json MonteCarloToJson(const MonteCarloSummary& m);
std::string MonteCarloCsv(const MonteCarloSummary& m);
std::string ReportCsv(const CertificationReport& r);

// Output documents; `kind` is one of "classification", "lcp", "qtest",
// "synth", "verify", "simulate". Throws kInvalidInput on a schema mismatch.
void ValidateOutput(const std::string& kind, const Json& doc);

}  // namespace absorbeq

#endif  // ABSORBEQ_SRC_IO_H_
