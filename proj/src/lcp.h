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

#ifndef ABSORBEQ_SRC_LCP_H_
#define ABSORBEQ_SRC_LCP_H_

#include <optional>
#include <string>
#include <vector>

namespace absorbeq {

using Matrix = std::vector<std::vector<double>>;  // row-major

// The normalized complementarity problem: find z in the simplex over
// {0..n} and w = z_0 q + R z >= 0 with z_i = 0 or w_i = R_ii for every i.
//
// kVerbatim is exactly that problem. kEquilibrium additionally requires
// w_i >= R_ii for every i, the condition under which a solution describes
// quitting phases where nobody prefers to quit on their own.
enum class LcpVariant { kVerbatim, kEquilibrium };

struct LcpSolution {
  std::vector<double> w;
  std::vector<double> z;     // z[0] is the weight on q
  std::vector<int> support;  // 0-based coordinates i with w_i = R_ii
  bool dominates_diagonal = false;  // w_i >= R_ii - tol for every i
};

inline constexpr double kDefaultLcpTol = 1e-9;
inline constexpr int kDefaultDensity = 40;

void CheckLcpDims(const Matrix& r, const std::vector<double>& q);

// First feasible support in the order (cardinality, lexicographic).
std::optional<LcpSolution> SolveLcp(const Matrix& r,
                                    const std::vector<double>& q,
                                    double tol = kDefaultLcpTol,
                                    LcpVariant variant = LcpVariant::kVerbatim);

// One solution per feasible support, each minimizing z_0 on its support.
std::vector<LcpSolution> AllLcpSolutions(const Matrix& r,
                                         const std::vector<double>& q,
                                         double tol, LcpVariant variant);

// Independent check of every constraint at the given tolerance.
bool CheckLcpSolution(const Matrix& r, const std::vector<double>& q,
                      const LcpSolution& s, double tol, LcpVariant variant);

struct QVerdict {
  bool q_certified = false;  // numerically: no witness found
  std::optional<std::vector<double>> witness;
  int density = 0;           // density actually used
  long samples = 0;
};

inline constexpr int kMaxQDimension = 12;

QVerdict IsQMatrix(const Matrix& r, int density = kDefaultDensity,
                   double tol = kDefaultLcpTol,
                   LcpVariant variant = LcpVariant::kVerbatim,
                   const std::vector<std::vector<double>>& known_witnesses = {},
                   long max_samples = 60000);

std::optional<std::vector<double>> FindWitness(
    const Matrix& r, int density = kDefaultDensity,
    double tol = kDefaultLcpTol, LcpVariant variant = LcpVariant::kVerbatim);

const char* VariantName(LcpVariant variant);

}  // namespace absorbeq

#endif  // ABSORBEQ_SRC_LCP_H_
