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

#include "lp.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.h"

namespace absorbeq {
namespace {

class Tableau {
 public:
  Tableau(int rows, int cols)
      : m_(rows), n_(cols), a_(rows, std::vector<double>(cols + 1, 0.0)),
        obj_(cols + 1, 0.0), basis_(rows, -1) {}

  double& at(int i, int j) { return a_[i][j]; }
  double& rhs(int i) { return a_[i][n_]; }
  int& basis(int i) { return basis_[i]; }
  int rows() const { return m_; }
  int cols() const { return n_; }

  // Sets reduced costs for minimizing cost.x under the current basis.
  void SetCost(const std::vector<double>& cost) {
    for (int j = 0; j <= n_; ++j) obj_[j] = j < n_ ? cost[j] : 0.0;
    for (int i = 0; i < m_; ++i) {
      double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j <= n_; ++j) obj_[j] -= cb * a_[i][j];
    }
  }

  // Current minimized objective value.
  double Value() const { return -obj_[n_]; }

  void Pivot(int r, int c) {
    double p = a_[r][c];
    for (double& v : a_[r]) v /= p;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double f = a_[i][c];
      if (f == 0.0) continue;
      for (int j = 0; j <= n_; ++j) a_[i][j] -= f * a_[r][j];
      a_[i][c] = 0.0;
    }
    double f = obj_[c];
    if (f != 0.0) {
      for (int j = 0; j <= n_; ++j) obj_[j] -= f * a_[r][j];
      obj_[c] = 0.0;
    }
    basis_[r] = c;
  }

  // Returns false if unbounded.
  bool Optimize(const std::vector<bool>& allowed, double tol) {
    const int max_iter = 50000;
    for (int iter = 0; iter < max_iter; ++iter) {
      int enter = -1;
      for (int j = 0; j < n_; ++j) {
        if (allowed[j] && obj_[j] < -tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (a_[i][enter] > tol) {
          double ratio = a_[i][n_] / a_[i][enter];
          if (leave < 0 || ratio < best - 1e-12) {
            best = ratio;
            leave = i;
          } else if (ratio <= best + 1e-12 && basis_[i] < basis_[leave]) {
            best = std::min(best, ratio);
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      Pivot(leave, enter);
    }
    throw Error(ErrorKind::kSolverFailure, "simplex iteration limit");
  }

 private:
  int m_, n_;
  std::vector<std::vector<double>> a_;
  std::vector<double> obj_;
  std::vector<int> basis_;
};

}  // namespace

LpResult SolveLp(const LinearProgram& lp, double tol) {
  int n = lp.num_vars;
  int m = static_cast<int>(lp.rows.size());
  int slacks = 0, artificials = 0;
  std::vector<double> sign(m, 1.0);
  std::vector<Sense> sense(m);
  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    if (static_cast<int>(row.coef.size()) != n) {
      InputError("LP row has wrong length");
    }
    sense[i] = row.sense;
    if (row.rhs < 0.0) {
      sign[i] = -1.0;
      if (sense[i] == Sense::kLe) {
        sense[i] = Sense::kGe;
      } else if (sense[i] == Sense::kGe) {
        sense[i] = Sense::kLe;
      }
    }
    if (sense[i] != Sense::kEq) ++slacks;
    if (sense[i] != Sense::kLe) ++artificials;
  }
  int cols = n + slacks + artificials;
  Tableau t(m, cols);
  int next_slack = n, next_art = n + slacks;
  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    for (int j = 0; j < n; ++j) t.at(i, j) = sign[i] * row.coef[j];
    t.rhs(i) = sign[i] * row.rhs;
    if (sense[i] == Sense::kLe) {
      t.at(i, next_slack) = 1.0;
      t.basis(i) = next_slack++;
    } else {
      if (sense[i] == Sense::kGe) t.at(i, next_slack++) = -1.0;
      t.at(i, next_art) = 1.0;
      t.basis(i) = next_art++;
    }
  }

  LpResult result;
  std::vector<bool> allowed(cols, true);
  if (artificials > 0) {
    std::vector<double> cost(cols, 0.0);
    for (int j = n + slacks; j < cols; ++j) cost[j] = 1.0;
    t.SetCost(cost);
    t.Optimize(allowed, tol);
    result.infeasibility = t.Value();
    double scale = 1.0;
    for (const auto& row : lp.rows) scale = std::max(scale, std::fabs(row.rhs));
    if (result.infeasibility > tol * scale) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    // Drive remaining artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (t.basis(i) < n + slacks) continue;
      int best = -1;
      double mag = tol;
      for (int j = 0; j < n + slacks; ++j) {
        if (std::fabs(t.at(i, j)) > mag) {
          mag = std::fabs(t.at(i, j));
          best = j;
        }
      }
      if (best >= 0) t.Pivot(i, best);
    }
    for (int j = n + slacks; j < cols; ++j) allowed[j] = false;
  }
  std::vector<double> cost(cols, 0.0);
  for (int j = 0; j < n; ++j) cost[j] = -lp.objective[j];
  t.SetCost(cost);
  if (!t.Optimize(allowed, tol)) {
    result.status = LpStatus::kUnbounded;
    return result;
  }
  result.status = LpStatus::kOptimal;
  result.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i) {
    if (t.basis(i) < n) result.x[t.basis(i)] = std::max(0.0, t.rhs(i));
  }
  result.value = 0.0;
  for (int j = 0; j < n; ++j) result.value += lp.objective[j] * result.x[j];
  return result;
}

}  // namespace absorbeq
