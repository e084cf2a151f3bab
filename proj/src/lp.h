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

#ifndef ABSORBEQ_SRC_LP_H_
#define ABSORBEQ_SRC_LP_H_

#include <vector>

namespace absorbeq {

// Small dense linear programs: maximize c.x subject to rows, x >= 0.
// Two-phase tableau simplex with Bland's rule; meant for a few dozen
// variables and constraints.
enum class Sense { kLe, kEq, kGe };

struct LinearProgram {
  struct Row {
    std::vector<double> coef;
    Sense sense;
    double rhs;
  };
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Row> rows;

  explicit LinearProgram(int n) : num_vars(n), objective(n, 0.0) {}
  void AddRow(std::vector<double> coef, Sense sense, double rhs) {
    rows.push_back({std::move(coef), sense, rhs});
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double value = 0.0;
  // Phase-one residual (sum of artificial variables).
  double infeasibility = 0.0;
};

LpResult SolveLp(const LinearProgram& lp, double tol = 1e-9);

}  // namespace absorbeq

#endif  // ABSORBEQ_SRC_LP_H_
