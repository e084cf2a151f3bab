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

// Command-line front end over the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absorbeq/absorbeq.h"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

struct Common {
  double epsilon = 0.05;
  std::string lambda_grid = "1e-2,1e-3,1e-4";
  std::string t_grid = "1000,10000,100000";
  uint64_t seed = 0;
  int density = 20;
  double budget_secs = 600;
  std::string out;
  std::string format = "json";
};

// Error raised inside the front end; carries the exit code.
struct Exit {
  int code;
  std::string message;
};

std::vector<double> ParseDoubles(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Exit{ABSORBEQ_INPUT_ERROR,
                 std::string("bad number in ") + what + ": '" + item + "'"};
    }
  }
  if (out.empty()) throw Exit{ABSORBEQ_INPUT_ERROR, std::string(what) + " is empty"};
  return out;
}

std::vector<long> ParseLongs(const std::string& s, const char* what) {
  std::vector<long> out;
  for (double v : ParseDoubles(s, what)) {
    if (v != static_cast<double>(static_cast<long>(v)) || v < 1) {
      throw Exit{ABSORBEQ_INPUT_ERROR,
                 std::string(what) + " needs positive integers"};
    }
    out.push_back(static_cast<long>(v));
  }
  return out;
}

void Check(int status) {
  if (status != ABSORBEQ_OK) throw Exit{status, absorbeq_last_error()};
}

// Owns a string returned by the library.
std::string Take(char* s) {
  std::string out = s ? s : "";
  absorbeq_string_free(s);
  return out;
}

Json Tool(const std::string& command) {
  Json j;
  j["tool"] = {{"name", "absorbeq"}, {"version", absorbeq_version()}};
  j["command"] = command;
  return j;
}

void Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw Exit{ABSORBEQ_INPUT_ERROR, "cannot write " + path};
}

std::string Doc(const std::string& kind, const Json& doc) {
  std::string text = doc.dump(2) + "\n";
  // Every document is checked against its own schema before it is written.
  Check(absorbeq_validate_output(kind.c_str(), text.c_str()));
  return text;
}

class Game {
 public:
  explicit Game(const std::string& path) {
    Check(absorbeq_game_load(path.c_str(), &g_));
  }
  ~Game() { absorbeq_game_free(g_); }
  Game(const Game&) = delete;
  Game& operator=(const Game&) = delete;
  absorbeq_game* get() const { return g_; }

 private:
  absorbeq_game* g_ = nullptr;
};

class Strat {
 public:
  Strat() = default;
  explicit Strat(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Exit{ABSORBEQ_INPUT_ERROR, "cannot read " + path};
    std::stringstream ss;
    ss << f.rdbuf();
    Check(absorbeq_strategy_from_json(ss.str().c_str(), &s_));
  }
  ~Strat() { absorbeq_strategy_free(s_); }
  Strat(const Strat&) = delete;
  Strat& operator=(const Strat&) = delete;
  absorbeq_strategy* get() const { return s_; }
  absorbeq_strategy** slot() { return &s_; }

 private:
  absorbeq_strategy* s_ = nullptr;
};

struct Options {
  std::vector<double> lambdas;
  std::vector<long> ts;
  absorbeq_options o;
};

Options MakeOptions(const Common& c) {
  Options out;
  out.lambdas = ParseDoubles(c.lambda_grid, "--lambda-grid");
  out.ts = ParseLongs(c.t_grid, "--t-grid");
  absorbeq_options_default(&out.o);
  out.o.epsilon = c.epsilon;
  out.o.lambda_grid = out.lambdas.data();
  out.o.lambda_count = out.lambdas.size();
  out.o.t_grid = out.ts.data();
  out.o.t_count = out.ts.size();
  out.o.seed = c.seed;
  out.o.density = c.density;
  out.o.budget_secs = c.budget_secs;
  return out;
}

Json Budgets(const Common& c, const Options& o) {
  return {{"epsilon", c.epsilon},
          {"lambda_grid", o.lambdas},
          {"t_grid", o.ts},
          {"density", c.density},
          {"budget_secs", c.budget_secs}};
}

std::string ReportText(const Json& r) {
  std::ostringstream os;
  os << (r["pass"].get<bool>() ? "PASS" : "FAIL") << " epsilon "
     << r["epsilon"] << " max gain " << r["max_gain"] << "\n";
  for (const Json& e : r["entries"]) {
    os << (e["finite"].get<bool>() ? "  T=" : "  lambda=")
       << (e["finite"].get<bool>() ? e["horizon"] : e["lambda"]) << " player "
       << e["player"] << " conform " << e["conform"] << " deviation "
       << e["deviation"] << " gain " << e["gain"] << "\n";
  }
  os << "  coverage: " << r["coverage"].get<std::string>() << "\n";
  return os.str();
}

std::string ReportCsv(const Json& r) {
  std::ostringstream os;
  os << "kind,parameter,player,conform,deviation,gain\n";
  for (const Json& e : r["entries"]) {
    bool fin = e["finite"].get<bool>();
    os << (fin ? "horizon," : "lambda,") << (fin ? e["horizon"] : e["lambda"])
       << ',' << e["player"] << ',' << e["conform"] << ',' << e["deviation"]
       << ',' << e["gain"] << '\n';
  }
  return os.str();
}

int Classify(const std::string& game_path, const Common& c) {
  Game g(game_path);
  char* out = nullptr;
  Check(absorbeq_classify(g.get(), &out));
  Json doc = Tool("classify");
  doc["game"] = game_path;
  Json flags = Json::parse(Take(out));
  for (auto& [k, v] : flags.items()) doc[k] = v;
  if (c.format == "text") {
    std::ostringstream os;
    for (const char* k : {"recursive", "positive", "generic",
                          "general_quitting", "quitting", "quitting_absorbing",
                          "two_dimension", "spotted", "l_shaped"}) {
      os << k << ": " << (doc[k].get<bool>() ? "yes" : "no") << "\n";
    }
    Emit(c.out, os.str());
  } else {
    Emit(c.out, Doc("classification", doc));
  }
  return ABSORBEQ_OK;
}

int Lcp(const std::string& path, const std::string& q_flag, bool qtest,
        const std::string& variant_name, double tol, const Common& c) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Exit{ABSORBEQ_INPUT_ERROR, "cannot read " + path};
  std::stringstream ss;
  ss << f.rdbuf();
  Json j;
  try {
    j = Json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw Exit{ABSORBEQ_INPUT_ERROR, std::string("matrix: ") + e.what()};
  }
  Json rows = j.is_object() && j.contains("R") ? j["R"] : j;
  std::vector<double> q;
  if (j.is_object() && j.contains("q")) {
    if (!j["q"].is_array()) {
      throw Exit{ABSORBEQ_INPUT_ERROR, "matrix: q must be an array"};
    }
    for (const Json& v : j["q"]) {
      if (!v.is_number()) {
        throw Exit{ABSORBEQ_INPUT_ERROR, "matrix: q entry is not a number"};
      }
      q.push_back(v.get<double>());
    }
  }
  if (!q_flag.empty()) q = ParseDoubles(q_flag, "--q");
  if (!rows.is_array() || rows.empty()) {
    throw Exit{ABSORBEQ_INPUT_ERROR, "matrix: expected an array of rows"};
  }
  int n = static_cast<int>(rows.size());
  std::vector<double> r;
  for (const Json& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw Exit{ABSORBEQ_INPUT_ERROR, "matrix must be square"};
    }
    for (const Json& v : row) {
      if (!v.is_number()) throw Exit{ABSORBEQ_INPUT_ERROR, "matrix entry is not a number"};
      r.push_back(v.get<double>());
    }
  }
  int variant;
  if (variant_name == "verbatim") {
    variant = ABSORBEQ_LCP_VERBATIM;
  } else if (variant_name == "equilibrium") {
    variant = ABSORBEQ_LCP_EQUILIBRIUM;
  } else {
    throw Exit{ABSORBEQ_INPUT_ERROR, "unknown variant '" + variant_name + "'"};
  }
  Json doc = Tool("lcp");
  doc["variant"] = variant_name;
  doc["n"] = n;
  int status;
  if (qtest) {
    int is_q = 0;
    std::vector<double> witness(n, 0.0);
    status = absorbeq_q_test(r.data(), n, variant, c.density, tol, &is_q,
                             witness.data());
    if (status != ABSORBEQ_OK && status != ABSORBEQ_INFEASIBLE) Check(status);
    doc["q_matrix"] = is_q == 1;
    doc["witness"] = is_q ? Json(nullptr) : Json(witness);
    doc["density"] = c.density;
    Emit(c.out, c.format == "text"
                    ? std::string(is_q ? "Q\n" : "NotQ witness " +
                                                     Json(witness).dump() + "\n")
                    : Doc("qtest", doc));
    return status;
  }
  if (static_cast<int>(q.size()) != n) {
    throw Exit{ABSORBEQ_INPUT_ERROR, "q must have one entry per row"};
  }
  std::vector<double> z(n + 1), w(n);
  status = absorbeq_lcp_solve(r.data(), q.data(), n, variant, tol, z.data(),
                              w.data());
  if (status != ABSORBEQ_OK && status != ABSORBEQ_INFEASIBLE) Check(status);
  doc["q"] = q;
  doc["feasible"] = status == ABSORBEQ_OK;
  if (status == ABSORBEQ_OK) {
    doc["solution"] = {{"z", z}, {"w", w}};
  } else {
    doc["solution"] = nullptr;
  }
  Emit(c.out, c.format == "text"
                  ? (status == ABSORBEQ_OK ? "z " + Json(z).dump() + "\nw " +
                                                 Json(w).dump() + "\n"
                                           : std::string("infeasible\n"))
                  : Doc("lcp", doc));
  return status;
}

int Synth(const std::string& game_path, const std::string& report_path,
          const Common& c) {
  Game g(game_path);
  Options o = MakeOptions(c);
  Strat s;
  char* report = nullptr;
  char* log = nullptr;
  Check(absorbeq_synthesize(g.get(), &o.o, s.slot(), &report, &log));
  char* strategy = nullptr;
  Check(absorbeq_strategy_to_json(s.get(), &strategy));
  Json strat = Json::parse(Take(strategy));
  Json doc = Tool("synth");
  doc["game"] = game_path;
  doc["seed"] = c.seed;
  doc["budgets"] = Budgets(c, o);
  doc["strategy"] = strat;
  doc["report"] = Json::parse(Take(report));
  doc["log"] = Json::parse(Take(log));
  std::string text = Doc("synth", doc);
  bool pass = doc["report"]["pass"].get<bool>();
  if (c.out.empty()) {
    Emit("", c.format == "text" ? ReportText(doc["report"]) : text);
  } else {
    Emit(c.out, strat.dump(2) + "\n");
    std::string rp = report_path.empty() ? c.out + ".report.json" : report_path;
    Emit(rp, text);
    if (c.format == "text") std::cout << ReportText(doc["report"]);
  }
  return pass ? ABSORBEQ_OK : ABSORBEQ_SYNTH_FAILED;
}

int Verify(const std::string& game_path, const std::string& strat_path,
           const Common& c) {
  Game g(game_path);
  Strat s(strat_path);
  Options o = MakeOptions(c);
  int pass = 0;
  double gain = 0.0;
  char* report = nullptr;
  Check(absorbeq_certify(g.get(), s.get(), &o.o, &pass, &gain, &report));
  Json doc = Tool("verify");
  doc["game"] = game_path;
  doc["strategy"] = strat_path;
  doc["budgets"] = Budgets(c, o);
  doc["report"] = Json::parse(Take(report));
  if (c.format == "text") {
    Emit(c.out, ReportText(doc["report"]));
  } else if (c.format == "csv") {
    Emit(c.out, ReportCsv(doc["report"]));
  } else {
    Emit(c.out, Doc("verify", doc));
  }
  return pass ? ABSORBEQ_OK : ABSORBEQ_INFEASIBLE;
}

int Simulate(const std::string& game_path, const std::string& strat_path,
             long runs, long horizon, double lambda, const Common& c) {
  Game g(game_path);
  Strat s(strat_path);
  char* summary = nullptr;
  char* csv = nullptr;
  Check(absorbeq_simulate(g.get(), s.get(), runs, horizon, c.seed, lambda,
                          &summary, &csv));
  Json doc = Tool("simulate");
  doc["game"] = game_path;
  doc["strategy"] = strat_path;
  doc["summary"] = Json::parse(Take(summary));
  std::string table = Take(csv);
  Emit(c.out, c.format == "csv" ? table : Doc("simulate", doc));
  return ABSORBEQ_OK;
}

void AddCommon(CLI::App* app, Common& c, bool grids) {
  app->add_option("--out", c.out, "output path (default: stdout)");
  app->add_option("--format", c.format, "json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--density", c.density, "Q-matrix sampling density")
      ->check(CLI::PositiveNumber);
  if (grids) {
    app->add_option("--epsilon", c.epsilon, "target slack")
        ->check(CLI::PositiveNumber);
    app->add_option("--lambda-grid", c.lambda_grid,
                    "comma-separated discount factors");
    app->add_option("--t-grid", c.t_grid, "comma-separated horizons");
    app->add_option("--budget-secs", c.budget_secs, "time budget")
        ->check(CLI::PositiveNumber);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"absorbeq: equilibria of multiplayer absorbing games"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(absorbeq_version()));
  Common common;
  std::string game, strategy, matrix, q_flag, variant = "verbatim",
                                              report_path;
  bool qtest = false;
  double tol = 1e-9, lambda = 1e-2;
  long runs = 100000, horizon = 10000;

  CLI::App* classify = app.add_subcommand("classify", "classify a game");
  classify->add_option("game", game, "game JSON")->required();
  AddCommon(classify, common, false);

  CLI::App* lcp = app.add_subcommand("lcp", "solve an LCP or test for Q");
  lcp->add_option("matrix", matrix, "matrix JSON")->required();
  lcp->add_option("--q", q_flag, "comma-separated q vector");
  lcp->add_flag("--qtest", qtest, "test the Q property instead");
  lcp->add_option("--variant", variant, "verbatim or equilibrium");
  lcp->add_option("--tol", tol, "tolerance");
  AddCommon(lcp, common, false);

  CLI::App* synth = app.add_subcommand("synth", "synthesize a strategy");
  synth->add_option("game", game, "game JSON")->required();
  synth->add_option("--report", report_path,
                    "report path (default: <out>.report.json)");
  AddCommon(synth, common, true);

  CLI::App* verify = app.add_subcommand("verify", "certify a strategy");
  verify->add_option("game", game, "game JSON")->required();
  verify->add_option("strategy", strategy, "strategy JSON")->required();
  AddCommon(verify, common, true);

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo summary");
  simulate->add_option("game", game, "game JSON")->required();
  simulate->add_option("strategy", strategy, "strategy JSON")->required();
  simulate->add_option("--runs", runs, "number of runs");
  simulate->add_option("--horizon", horizon, "stages per run");
  simulate->add_option("--lambda", lambda, "discount for the summary");
  AddCommon(simulate, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : ABSORBEQ_INPUT_ERROR;
  }
  try {
    if (*classify) return Classify(game, common);
    if (*lcp) return Lcp(matrix, q_flag, qtest, variant, tol, common);
    if (*synth) return Synth(game, report_path, common);
    if (*verify) return Verify(game, strategy, common);
    if (*simulate) {
      return Simulate(game, strategy, runs, horizon, lambda, common);
    }
  } catch (const Exit& e) {
    const char* label = e.code == ABSORBEQ_UNSUPPORTED ? "unsupported: "
                        : e.code == ABSORBEQ_SYNTH_FAILED ? ""
                                                          : "error: ";
    std::cerr << label << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ABSORBEQ_INTERNAL_ERROR;
  }
  return ABSORBEQ_INPUT_ERROR;
}
