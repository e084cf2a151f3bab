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

#include "lcp.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "error.h"
#include "lp.h"

namespace absorbeq {

const char* VariantName(LcpVariant variant) {
  return variant == LcpVariant::kVerbatim ? "verbatim" : "equilibrium";
}

void CheckLcpDims(const Matrix& r, const std::vector<double>& q) {
  size_t n = r.size();
  if (n == 0) InputError("dimension mismatch: empty matrix");
  for (const auto& row : r) {
    if (row.size() != n) InputError("dimension mismatch: matrix not square");
    for (double v : row) {
      if (!std::isfinite(v)) InputError("matrix entry not finite");
    }
  }
  if (q.size() != n) InputError("dimension mismatch: q length");
  for (double v : q) {
    if (!std::isfinite(v)) InputError("q entry not finite");
  }
}

namespace {

// Supports in the order (cardinality, lexicographic).
std::vector<std::vector<int>> OrderedSupports(int n) {
  std::vector<std::vector<int>> out;
  for (int size = 0; size <= n; ++size) {
    std::vector<int> pick(size);
    for (int k = 0; k < size; ++k) pick[k] = k;
    while (true) {
      out.push_back(pick);
      int k = size - 1;
      while (k >= 0 && pick[k] == n - size + k) --k;
      if (k < 0) break;
      ++pick[k];
      for (int l = k + 1; l < size; ++l) pick[l] = pick[l - 1] + 1;
    }
  }
  return out;
}

const std::vector<std::vector<int>>& SupportsFor(int n) {
  static thread_local std::vector<std::vector<std::vector<int>>> cache;
  if (static_cast<int>(cache.size()) <= n) cache.resize(n + 1);
  if (cache[n].empty()) cache[n] = OrderedSupports(n);
  return cache[n];
}

std::optional<LcpSolution> SolveSupport(const Matrix& r,
                                        const std::vector<double>& q,
                                        const std::vector<int>& support,
                                        double tol, LcpVariant variant,
                                        bool minimize_z0) {
  int n = static_cast<int>(r.size());
  std::vector<bool> in(n, false);
  for (int i : support) {
    if (r[i][i] < -tol) return std::nullopt;  // w_i = R_ii would be negative
    in[i] = true;
  }
  int k = static_cast<int>(support.size());
  // Variables: z_0, then z_j for j in support.
  LinearProgram lp(k + 1);
  std::vector<double> ones(k + 1, 1.0);
  lp.AddRow(ones, Sense::kEq, 1.0);
  for (int i = 0; i < n; ++i) {
    std::vector<double> coef(k + 1);
    coef[0] = q[i];
    for (int s = 0; s < k; ++s) coef[s + 1] = r[i][support[s]];
    if (in[i]) {
      lp.AddRow(coef, Sense::kEq, r[i][i]);
    } else {
      double floor = variant == LcpVariant::kEquilibrium
                         ? std::max(0.0, r[i][i])
                         : 0.0;
      lp.AddRow(coef, Sense::kGe, floor);
    }
  }
  if (minimize_z0) lp.objective[0] = -1.0;
  LpResult res = SolveLp(lp, std::min(tol, 1e-9));
  if (res.status != LpStatus::kOptimal) return std::nullopt;
  LcpSolution sol;
  sol.z.assign(n + 1, 0.0);
  sol.z[0] = res.x[0];
  for (int s = 0; s < k; ++s) sol.z[support[s] + 1] = res.x[s + 1];
  sol.w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double w = sol.z[0] * q[i];
    for (int j = 0; j < n; ++j) w += r[i][j] * sol.z[j + 1];
    sol.w[i] = w;
  }
  sol.support = support;
  sol.dominates_diagonal = true;
  for (int i = 0; i < n; ++i) {
    if (sol.w[i] < r[i][i] - tol) sol.dominates_diagonal = false;
  }
  if (!CheckLcpSolution(r, q, sol, 10.0 * tol, variant)) return std::nullopt;
  return sol;
}

}  // namespace

bool CheckLcpSolution(const Matrix& r, const std::vector<double>& q,
                      const LcpSolution& s, double tol, LcpVariant variant) {
  size_t n = r.size();
  if (s.z.size() != n + 1 || s.w.size() != n) return false;
  double sum = 0.0;
  for (double v : s.z) {
    if (v < -tol) return false;
    sum += v;
  }
  if (std::fabs(sum - 1.0) > tol) return false;
  for (size_t i = 0; i < n; ++i) {
    double w = s.z[0] * q[i];
    for (size_t j = 0; j < n; ++j) w += r[i][j] * s.z[j + 1];
    if (std::fabs(w - s.w[i]) > tol) return false;
    if (s.w[i] < -tol) return false;
    if (s.z[i + 1] > tol && std::fabs(s.w[i] - r[i][i]) > tol) return false;
    if (variant == LcpVariant::kEquilibrium && s.w[i] < r[i][i] - tol) {
      return false;
    }
  }
  return true;
}

std::optional<LcpSolution> SolveLcp(const Matrix& r,
                                    const std::vector<double>& q, double tol,
                                    LcpVariant variant) {
  CheckLcpDims(r, q);
  if (!(tol >= 1e-12 && tol <= 1e-4)) InputError("tol outside [1e-12, 1e-4]");
  for (const auto& support : SupportsFor(static_cast<int>(r.size()))) {
    auto sol = SolveSupport(r, q, support, tol, variant, false);
    if (sol) return sol;
  }
  return std::nullopt;
}

std::vector<LcpSolution> AllLcpSolutions(const Matrix& r,
                                         const std::vector<double>& q,
                                         double tol, LcpVariant variant) {
  CheckLcpDims(r, q);
  std::vector<LcpSolution> out;
  for (const auto& support : SupportsFor(static_cast<int>(r.size()))) {
    auto sol = SolveSupport(r, q, support, tol, variant, true);
    if (sol) out.push_back(*sol);
  }
  return out;
}

namespace {

// Point on the unit sphere in R^n from hyperspherical angle indices.
std::vector<double> SpherePoint(int n, const std::vector<int>& idx,
                                int density) {
  std::vector<double> out(n, 1.0);
  const double pi = std::numbers::pi;
  double carry = 1.0;
  for (int k = 0; k < n - 1; ++k) {
    double angle;
    if (k == n - 2) {
      angle = 2.0 * pi * idx[k] / density;
    } else {
      angle = pi * (idx[k] + 0.5) / density;
    }
    out[k] = carry * std::cos(angle);
    carry *= std::sin(angle);
  }
  out[n - 1] = carry;
  return out;
}

}  // namespace

QVerdict IsQMatrix(const Matrix& r, int density, double tol,
                   LcpVariant variant,
                   const std::vector<std::vector<double>>& known_witnesses,
                   long max_samples) {
  int n = static_cast<int>(r.size());
  if (n > kMaxQDimension) InputError("dimension too large");
  CheckLcpDims(r, std::vector<double>(n, 0.0));
  if (density < 1) InputError("density must be positive");
  QVerdict verdict;
  verdict.density = density;
  auto test = [&](const std::vector<double>& q) {
    ++verdict.samples;
    if (!SolveLcp(r, q, tol, variant)) {
      verdict.witness = q;
      return true;
    }
    return false;
  };

  for (const auto& q : known_witnesses) {
    if (static_cast<int>(q.size()) == n && test(q)) return verdict;
  }
  const double radii[] = {1.0, 0.25, 4.0};
  for (double radius : radii) {
    for (int i = 0; i < n; ++i) {
      for (double s : {-1.0, 1.0}) {
        std::vector<double> q(n, 0.0);
        q[i] = s * radius;
        if (test(q)) return verdict;
      }
    }
    if (n <= 10) {
      for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<double> q(n);
        for (int i = 0; i < n; ++i) {
          q[i] = ((mask >> i) & 1 ? 1.0 : -1.0) * radius / std::sqrt(n);
        }
        if (test(q)) return verdict;
      }
    }
  }

  // Angle grid, shrunk until it fits the sample budget.
  int used = density;
  if (n >= 2) {
    const long radii_count = 3;
    while (used > 2 &&
           std::pow(static_cast<double>(used), n - 1) * radii_count >
               static_cast<double>(max_samples)) {
      --used;
    }
    std::vector<int> idx(n - 1, 0);
    while (true) {
      std::vector<double> base = SpherePoint(n, idx, used);
      for (double radius : radii) {
        std::vector<double> q = base;
        for (double& v : q) v *= radius;
        if (test(q)) {
          verdict.density = used;
          return verdict;
        }
      }
      int k = 0;
      while (k < n - 1 && ++idx[k] == used) idx[k++] = 0;
      if (k == n - 1) break;
    }
  }
  verdict.density = used;
  verdict.q_certified = true;
  return verdict;
}

std::optional<std::vector<double>> FindWitness(const Matrix& r, int density,
                                               double tol,
                                               LcpVariant variant) {
  QVerdict v = IsQMatrix(r, density, tol, variant);
  if (!v.witness) return std::nullopt;
  if (SolveLcp(r, *v.witness, tol, variant)) {
    throw Error(ErrorKind::kSolverFailure, "witness failed re-verification");
  }
  return v.witness;
}

}  // namespace absorbeq
