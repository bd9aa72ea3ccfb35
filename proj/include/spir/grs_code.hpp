// Copyright 2026 The spircap authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <vector>

#include "spir/error.hpp"
#include "spir/finite_field.hpp"

namespace spir {

// Generator of an (n, k) generalized Reed-Solomon code:
// matrix(i, j) = multipliers[j] * eval_points[j]^i for i in [0, k).
struct GrsGenerator {
  int n = 0;
  int k = 0;
  PrimeField field{2};
  FieldVector eval_points;
  FieldVector multipliers;
  FieldMatrix matrix{0, 0, PrimeField(2)};
};

inline GrsGenerator BuildGrs(int n, int k, const PrimeField& field,
                             const FieldVector& eval_points,
                             const FieldVector& multipliers) {
  SPIR_ENFORCE(k >= 0 && k <= n, ErrorCode::kInvalidArgument,
               "GRS code needs 0 <= k <= n");
  SPIR_ENFORCE(static_cast<int>(eval_points.size()) == n &&
                   static_cast<int>(multipliers.size()) == n,
               ErrorCode::kInvalidArgument, "need n points and n multipliers");
  for (int a = 0; a < n; ++a) {
    SPIR_ENFORCE(!multipliers[a].IsZero(), ErrorCode::kInvalidArgument,
                 "GRS multipliers must be nonzero");
    for (int b = a + 1; b < n; ++b) {
      SPIR_ENFORCE(eval_points[a] != eval_points[b], ErrorCode::kInvalidArgument,
                   "GRS evaluation points must be distinct");
    }
  }
  GrsGenerator g{n, k, field, eval_points, multipliers, FieldMatrix(k, n, field)};
  for (int j = 0; j < n; ++j) {
    FieldElement power = multipliers[j];
    for (int i = 0; i < k; ++i) {
      g.matrix.Set(i, j, power);
      power = power * eval_points[j];
    }
  }
  return g;
}

/// Classical Reed-Solomon instance: points 0..n-1, unit multipliers.
inline GrsGenerator BuildGrs(int n, int k, const PrimeField& field) {
  SPIR_ENFORCE(static_cast<std::uint64_t>(n) <= field.modulus(),
               ErrorCode::kNotEnoughPoints,
               "GF(" + std::to_string(field.modulus()) + ") has fewer than " +
                   std::to_string(n) + " distinct points");
  FieldVector points, ones;
  for (int j = 0; j < n; ++j) {
    points.push_back(field(j));
    ones.push_back(field.One());
  }
  return BuildGrs(n, k, field, points, ones);
}

/// True iff every k-column subset of `generator` (k rows) has rank k.
/// Enumerates all C(n, k) subsets.
inline bool CheckMds(const FieldMatrix& generator) {
  int k = generator.rows();
  int n = generator.cols();
  if (k == 0) return true;
  if (k > n) return false;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + k, true);
  do {
    std::vector<int> cols;
    for (int j = 0; j < n; ++j) {
      if (pick[j]) cols.push_back(j);
    }
    if (Rank(generator.SelectColumns(cols)) != k) return false;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return true;
}

inline bool CheckMds(const GrsGenerator& g) { return CheckMds(g.matrix); }

// The Vandermonde argument: distinct points and nonzero multipliers make
// every k x k minor a nonzero multiple of a Vandermonde determinant.
inline bool CheckMdsStructural(const GrsGenerator& g) {
  for (int a = 0; a < g.n; ++a) {
    if (g.multipliers[a].IsZero()) return false;
    for (int b = a + 1; b < g.n; ++b) {
      if (g.eval_points[a] == g.eval_points[b]) return false;
    }
  }
  return g.matrix.rows() == g.k && g.matrix.cols() == g.n;
}

inline double BinomialCount(int n, int k) {
  double c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace spir
