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

#include "io.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "error.h"
#include "payoff.h"

namespace absorbeq {
namespace {

std::string LineCol(const std::string& text, size_t byte) {
  size_t line = 1, col = 1;
  for (size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

// Line of the k-th occurrence of `key` (quoted) in the raw text.
std::string KeyLine(const std::string& text, const std::string& key, int k) {
  std::string needle = "\"" + key + "\"";
  size_t pos = 0;
  for (int seen = 0;; ++seen) {
    pos = text.find(needle, pos);
    if (pos == std::string::npos) return "";
    if (seen == k) break;
    pos += needle.size();
  }
  size_t line = 1;
  for (size_t i = 0; i < pos; ++i) line += text[i] == '\n';
  return " (line " + std::to_string(line) + ")";
}

const Json& Field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    InputError(where + ": missing \"" + key + "\"");
  }
  return j.at(key);
}

double Number(const Json& j, const std::string& where) {
  if (!j.is_number()) InputError(where + ": expected a number");
  return j.get<double>();
}

long Integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) InputError(where + ": expected an integer");
  return j.get<long>();
}

std::vector<double> Numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) InputError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const Json& v : j) out.push_back(Number(v, where));
  return out;
}

Json Num(double v) {
  // JSON has no NaN or infinity.
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? 1e308 : -1e308;
  return v;
}

Json Nums(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(Num(x));
  return a;
}

void Require(const Json& doc, const char* key, Json::value_t type,
             const std::string& kind) {
  if (!doc.contains(key)) InputError(kind + " output: missing \"" + key + "\"");
  const Json& v = doc.at(key);
  bool ok = v.type() == type ||
            (type == Json::value_t::number_float && v.is_number()) ||
            (type == Json::value_t::number_integer && v.is_number_integer());
  if (!ok) InputError(kind + " output: \"" + key + "\" has the wrong type");
}

}  // namespace

Json ParseJson(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    InputError(what + ": parse error at " + LineCol(text, e.byte) + ": " +
               e.what());
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) InputError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) InputError("cannot write " + path);
  out << contents;
  if (!out) InputError("cannot write " + path);
}

AbsorbingGame GameFromText(const std::string& text) {
  Json j = ParseJson(text, "game");
  std::string where = "game";
  long n = Integer(Field(j, "players", where), where + ".players");
  if (n < 1) InputError("game: players must be positive");
  const Json& acts = Field(j, "actions", where);
  if (!acts.is_array() || static_cast<long>(acts.size()) != n) {
    InputError("game: \"actions\" must list one array per player");
  }
  std::vector<std::vector<std::string>> actions;
  for (const Json& row : acts) {
    if (!row.is_array() || row.empty()) {
      InputError("game: each player needs a nonempty action list");
    }
    std::vector<std::string> names;
    for (const Json& a : row) {
      if (!a.is_string()) InputError("game: action names must be strings");
      names.push_back(a.get<std::string>());
    }
    actions.push_back(names);
  }
  long total = 1;
  for (const auto& a : actions) {
    total *= static_cast<long>(a.size());
    if (total > (1L << 22)) InputError("game: too many profiles");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> absorb(total, nan), payoff(total * n, nan);
  bool relaxed = j.value("relaxed_range", false);
  AbsorbingGame shape(actions, absorb, payoff, relaxed);
  const Json& entries = Field(j, "entries", where);
  if (!entries.is_array()) InputError("game: \"entries\" must be an array");
  std::vector<bool> seen(total, false);
  for (size_t k = 0; k < entries.size(); ++k) {
    std::string at = "game: entry " + std::to_string(k) +
                     KeyLine(text, "profile", static_cast<int>(k));
    const Json& e = entries[k];
    const Json& prof = Field(e, "profile", at);
    if (!prof.is_array() || static_cast<long>(prof.size()) != n) {
      InputError(at + ": profile must list one action per player");
    }
    std::vector<int> a;
    for (long i = 0; i < n; ++i) {
      long v = Integer(prof[i], at);
      if (v < 0 || v >= static_cast<long>(actions[i].size())) {
        InputError(at + ": action index out of range");
      }
      a.push_back(static_cast<int>(v));
    }
    int idx = shape.ProfileIndex(a);
    if (seen[idx]) InputError(at + ": profile listed twice");
    seen[idx] = true;
    absorb[idx] = Number(Field(e, "p", at), at);
    std::vector<double> u = Numbers(Field(e, "u", at), at);
    if (static_cast<long>(u.size()) != n) {
      InputError(at + ": payoff vector has wrong length");
    }
    for (long i = 0; i < n; ++i) payoff[idx * n + i] = u[i];
  }
  for (long k = 0; k < total; ++k) {
    if (!seen[k]) InputError("game: profile " + shape.ProfileString(k) +
                             " is missing");
  }
  AbsorbingGame game(actions, absorb, payoff, relaxed);
  if (j.contains("cap") && !j["cap"].is_null()) {
    const Json& c = j["cap"];
    ActionCap cap;
    cap.player = static_cast<int>(Integer(Field(c, "player", "cap"), "cap"));
    cap.action = static_cast<int>(Integer(Field(c, "action", "cap"), "cap"));
    cap.alpha = Number(Field(c, "alpha", "cap"), "cap");
    game.set_cap(cap);
  }
  Validate(game);
  return game;
}

AbsorbingGame LoadGame(const std::string& path) {
  return GameFromText(ReadFile(path));
}

Json GameToJson(const AbsorbingGame& game) {
  Json j;
  j["players"] = game.num_players();
  j["actions"] = game.actions();
  if (game.relaxed_range()) j["relaxed_range"] = true;
  Json entries = Json::array();
  for (int k = 0; k < game.num_profiles(); ++k) {
    Json e;
    e["profile"] = game.Profile(k);
    e["p"] = game.absorb(k);
    std::vector<double> u(game.payoffs(k), game.payoffs(k) + game.num_players());
    e["u"] = u;
    entries.push_back(e);
  }
  j["entries"] = entries;
  if (game.cap()) {
    j["cap"] = {{"player", game.cap()->player},
                {"action", game.cap()->action},
                {"alpha", game.cap()->alpha}};
  }
  return j;
}

MatrixFile MatrixFromText(const std::string& text) {
  Json j = ParseJson(text, "matrix");
  MatrixFile out;
  const Json* rows = &j;
  if (j.is_object()) {
    rows = &Field(j, "R", "matrix");
    if (j.contains("q")) out.q = Numbers(j["q"], "matrix.q");
  }
  if (!rows->is_array() || rows->empty()) {
    InputError("matrix: expected a nonempty array of rows");
  }
  for (size_t i = 0; i < rows->size(); ++i) {
    out.r.push_back(Numbers((*rows)[i], "matrix row " + std::to_string(i)));
    if (out.r.back().size() != rows->size()) InputError("matrix: not square");
  }
  if (!out.q.empty() && out.q.size() != out.r.size()) {
    InputError("matrix: q has wrong length");
  }
  return out;
}

Json ProfileToJson(const MixedProfile& x) {
  Json a = Json::array();
  for (const auto& row : x) a.push_back(Nums(row));
  return a;
}

MixedProfile ProfileFromJson(const Json& j) {
  if (!j.is_array()) InputError("profile: expected an array of rows");
  MixedProfile x;
  for (const Json& row : j) x.push_back(Numbers(row, "profile"));
  return x;
}

Json StrategyToJson(const Strategy& s) {
  Json j;
  j["kind"] = KindName(s.kind);
  j["epsilon"] = s.epsilon;
  j["route"] = s.route;
  Json phases = Json::array();
  for (const Phase& p : s.phases) {
    Json ph;
    if (p.quitter >= 0) {
      ph["quitter"] = p.quitter;
      ph["quit_action"] = p.quit_action;
      ph["alpha"] = p.alpha;
    }
    ph["length"] = p.length;
    ph["base"] = ProfileToJson(p.base);
    if (p.design_rho >= 0.0) ph["design_rho"] = p.design_rho;
    Json mons = Json::array();
    for (const Monitor& m : p.monitors) {
      mons.push_back({{"player", m.player},
                      {"action", m.action},
                      {"target", m.target},
                      {"tolerance", m.tolerance},
                      {"window", m.window}});
    }
    ph["monitors"] = mons;
    phases.push_back(ph);
  }
  j["phases"] = phases;
  Json pun = Json::array();
  for (const Punishment& p : s.punishments) {
    pun.push_back(
        {{"player", p.player}, {"joint", Nums(p.joint)}, {"value", p.value}});
  }
  j["punishments"] = pun;
  return j;
}

Strategy StrategyFromJson(const Json& j) {
  std::string where = "strategy";
  Strategy s;
  const Json& kind = Field(j, "kind", where);
  if (!kind.is_string()) InputError("strategy: kind must be a string");
  s.kind = KindFromName(kind.get<std::string>());
  s.epsilon = Number(Field(j, "epsilon", where), where);
  if (j.contains("route") && j["route"].is_string()) s.route = j["route"];
  const Json& phases = Field(j, "phases", where);
  if (!phases.is_array()) InputError("strategy: phases must be an array");
  for (size_t t = 0; t < phases.size(); ++t) {
    std::string at = "strategy phase " + std::to_string(t);
    const Json& ph = phases[t];
    Phase p;
    if (ph.contains("quitter")) {
      p.quitter = static_cast<int>(Integer(ph["quitter"], at));
      p.quit_action = static_cast<int>(
          Integer(Field(ph, "quit_action", at), at));
      p.alpha = Number(Field(ph, "alpha", at), at);
    }
    p.length = Integer(Field(ph, "length", at), at);
    p.base = ProfileFromJson(Field(ph, "base", at));
    if (ph.contains("design_rho")) p.design_rho = Number(ph["design_rho"], at);
    if (ph.contains("monitors")) {
      if (!ph["monitors"].is_array()) InputError(at + ": monitors not array");
      for (const Json& m : ph["monitors"]) {
        Monitor mo;
        mo.player = static_cast<int>(Integer(Field(m, "player", at), at));
        mo.action = static_cast<int>(Integer(Field(m, "action", at), at));
        mo.target = Number(Field(m, "target", at), at);
        mo.tolerance = Number(Field(m, "tolerance", at), at);
        mo.window = Integer(Field(m, "window", at), at);
        p.monitors.push_back(mo);
      }
    }
    s.phases.push_back(p);
  }
  if (j.contains("punishments")) {
    if (!j["punishments"].is_array()) InputError("strategy: bad punishments");
    for (const Json& p : j["punishments"]) {
      Punishment pu;
      pu.player = static_cast<int>(Integer(Field(p, "player", where), where));
      pu.joint = Numbers(Field(p, "joint", where), where);
      if (p.contains("value")) pu.value = Number(p["value"], where);
      s.punishments.push_back(pu);
    }
  }
  return s;
}

Strategy StrategyFromText(const std::string& text) {
  return StrategyFromJson(ParseJson(text, "strategy"));
}

Json ClassificationToJson(const AbsorbingGame& game,
                          const GameClassification& c) {
  Json j;
  j["players"] = game.num_players();
  j["profiles"] = game.num_profiles();
  j["recursive"] = c.recursive;
  j["positive"] = c.positive;
  j["generic"] = c.generic;
  j["general_quitting"] = c.general_quitting;
  j["quitting"] = c.quitting;
  j["quitting_absorbing"] = c.quitting_absorbing;
  j["two_dimension"] = c.two_dimension;
  j["spotted"] = c.spotted;
  j["l_shaped"] = c.l_shaped;
  if (c.l_shape) {
    const LShape& l = *c.l_shape;
    j["labeling"] = {{"player1", l.player1},
                     {"player2", l.player2},
                     {"c1", {l.c1[0], l.c1[1]}},
                     {"c2", {l.c2[0], l.c2[1]}},
                     {"rest", l.rest},
                     {"a1", game.ProfileString(l.a1)},
                     {"a2", game.ProfileString(l.a2)},
                     {"a3", game.ProfileString(l.a3)},
                     {"a4", game.ProfileString(l.a4)}};
  } else {
    j["labeling"] = nullptr;
  }
  return j;
}

Json LcpSolutionToJson(const LcpSolution& s) {
  return {{"z", Nums(s.z)},
          {"w", Nums(s.w)},
          {"support", s.support},
          {"dominates_diagonal", s.dominates_diagonal}};
}

Json QVerdictToJson(const QVerdict& v) {
  Json j;
  j["q_matrix"] = v.q_certified;
  j["witness"] = v.witness ? Nums(*v.witness) : Json(nullptr);
  j["density"] = v.density;
  j["samples"] = v.samples;
  return j;
}

Json PolicyToJson(const DeviationPolicy& p) {
  Json j;
  j["player"] = p.player;
  j["finite"] = p.finite;
  if (p.finite) {
    j["horizon"] = p.horizon;
  } else {
    j["lambda"] = p.lambda;
  }
  Json choices = Json::array();
  for (const auto& phase : p.choices) {
    Json row = Json::array();
    for (const DeviationChoice& c : phase) {
      row.push_back({{"label", c.label}, {"seen", c.seen}, {"mixed", Nums(c.mixed)}});
    }
    choices.push_back(row);
  }
  j["choices"] = choices;
  Json segs = Json::array();
  for (const PolicySegment& s : p.segments) {
    segs.push_back({s.layer, s.phase, s.from, s.to, s.choice});
  }
  j["segments"] = segs;  // [layer, phase, from, to, choice]
  j["long_deviation_starts"] = p.long_deviation_starts;
  j["value"] = Num(p.value);
  return j;
}

Json ReportToJson(const CertificationReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["epsilon"] = r.epsilon;
  j["max_gain"] = Num(r.max_gain);
  j["lambda_grid"] = r.lambda_grid;
  j["t_grid"] = r.t_grid;
  j["coverage"] = r.coverage;
  Json entries = Json::array();
  for (const GridEntry& e : r.entries) {
    Json x;
    x["finite"] = e.finite;
    if (e.finite) {
      x["horizon"] = e.horizon;
    } else {
      x["lambda"] = e.lambda;
    }
    x["player"] = e.player;
    x["conform"] = Num(e.conform);
    x["deviation"] = Num(e.deviation);
    x["gain"] = Num(e.gain);
    x["policy"] = PolicyToJson(e.policy);
    entries.push_back(x);
  }
  j["entries"] = entries;
  return j;
}

std::string ReportCsv(const CertificationReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "kind,parameter,player,conform,deviation,gain\n";
  for (const GridEntry& e : r.entries) {
    os << (e.finite ? "horizon," : "lambda,");
    if (e.finite) {
      os << e.horizon;
    } else {
      os << e.lambda;
    }
    os << ',' << e.player << ',' << e.conform << ',' << e.deviation << ','
       << e.gain << '\n';
  }
  return os.str();
}

Json MonteCarloToJson(const MonteCarloSummary& m) {
  Json j;
  j["runs"] = m.runs;
  j["horizon"] = m.horizon;
  j["seed"] = m.seed;
  j["lambda"] = m.lambda;
  j["mean_discounted"] = Nums(m.mean_discounted);
  j["se_discounted"] = Nums(m.se_discounted);
  j["mean_absorbed"] = Nums(m.mean_absorbed);
  j["absorbed_fraction"] = m.absorbed_fraction;
  j["absorption_histogram"] = m.absorption_histogram;
  j["triggers"] = m.triggers;
  j["seen_deviations"] = m.seen_deviations;
  return j;
}

std::string MonteCarloCsv(const MonteCarloSummary& m) {
  std::ostringstream os;
  os.precision(17);
  os << "player,mean_discounted,se_discounted,mean_absorbed,triggers,"
        "seen_deviations\n";
  for (size_t i = 0; i < m.mean_discounted.size(); ++i) {
    os << i << ',' << m.mean_discounted[i] << ',' << m.se_discounted[i]
       << ',' << m.mean_absorbed[i] << ',' << m.triggers[i] << ','
       << m.seen_deviations[i] << '\n';
  }
  os << "\nbucket_from,bucket_to,count\n";
  for (size_t k = 0; k < m.absorption_histogram.size(); ++k) {
    os << (1L << k) << ',' << (1L << (k + 1)) << ','
       << m.absorption_histogram[k] << '\n';
  }
  return os.str();
}

void ValidateOutput(const std::string& kind, const Json& doc) {
  using T = Json::value_t;
  if (!doc.is_object()) InputError(kind + " output: expected an object");
  Require(doc, "tool", T::object, kind);
  Require(doc, "command", T::string, kind);
  const Json& tool = doc["tool"];
  if (!tool.contains("name") || !tool.contains("version")) {
    InputError(kind + " output: tool needs name and version");
  }
  auto check_report = [&](const Json& r) {
    for (const char* k : {"pass"}) Require(r, k, T::boolean, kind);
    for (const char* k : {"epsilon", "max_gain"}) {
      Require(r, k, T::number_float, kind);
    }
    for (const char* k : {"lambda_grid", "t_grid", "entries"}) {
      Require(r, k, T::array, kind);
    }
    Require(r, "coverage", T::string, kind);
    for (const Json& e : r["entries"]) {
      Require(e, "finite", T::boolean, kind);
      Require(e, "player", T::number_integer, kind);
      for (const char* k : {"conform", "deviation", "gain"}) {
        Require(e, k, T::number_float, kind);
      }
      Require(e, "policy", T::object, kind);
    }
  };
  if (kind == "classification") {
    for (const char* k :
         {"recursive", "positive", "generic", "general_quitting", "quitting",
          "quitting_absorbing", "two_dimension", "spotted", "l_shaped"}) {
      Require(doc, k, T::boolean, kind);
    }
    if (!doc.contains("labeling")) InputError(kind + " output: no labeling");
  } else if (kind == "lcp") {
    Require(doc, "feasible", T::boolean, kind);
    if (doc["feasible"].get<bool>()) Require(doc, "solution", T::object, kind);
  } else if (kind == "qtest") {
    Require(doc, "q_matrix", T::boolean, kind);
    Require(doc, "variant", T::string, kind);
    if (!doc.contains("witness")) InputError(kind + " output: no witness");
  } else if (kind == "synth") {
    Require(doc, "seed", T::number_integer, kind);
    Require(doc, "budgets", T::object, kind);
    Require(doc, "strategy", T::object, kind);
    Require(doc, "report", T::object, kind);
    Require(doc, "log", T::array, kind);
    StrategyFromJson(doc["strategy"]);
    check_report(doc["report"]);
  } else if (kind == "verify") {
    Require(doc, "report", T::object, kind);
    check_report(doc["report"]);
  } else if (kind == "simulate") {
    Require(doc, "summary", T::object, kind);
    const Json& s = doc["summary"];
    for (const char* k : {"runs", "horizon", "seed"}) {
      Require(s, k, T::number_integer, kind);
    }
    for (const char* k : {"mean_discounted", "se_discounted", "mean_absorbed",
                          "absorption_histogram", "triggers",
                          "seen_deviations"}) {
      Require(s, k, T::array, kind);
    }
  } else {
    InputError("unknown output kind '" + kind + "'");
  }
}

}  // namespace absorbeq
