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
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spir/error.hpp"
#include "spir/pattern.hpp"
#include "spir/rational.hpp"

namespace spir {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

// Variable indices in `basis`: [0, n) are the structural variables, then
// one slack (LP1) or surplus (LP2) per constraint row.
struct LpSolution {
  std::vector<Rational> vector;
  Rational value = 0;
  std::vector<int> basis;
  LpStatus status = LpStatus::kOptimal;
};

namespace detail {

enum class RowSense { kLessEqual, kGreaterEqual };

// Dense tableau simplex over the rationals, Bland's rule throughout.
// Every row has b >= 0; <= rows start on their slack, >= rows on an
// artificial driven out by phase one.
class RationalSimplex {
 public:
  RationalSimplex(const std::vector<std::vector<Rational>>& a,
                  const std::vector<Rational>& b,
                  const std::vector<RowSense>& sense,
                  const std::vector<Rational>& objective)
      : rows_(static_cast<int>(a.size())),
        structural_(static_cast<int>(objective.size())),
        objective_(objective) {
    int n_artificial = 0;
    for (auto s : sense) n_artificial += s == RowSense::kGreaterEqual;
    logical_end_ = structural_ + rows_;
    cols_ = logical_end_ + n_artificial;
    tableau_.assign(rows_, std::vector<Rational>(cols_ + 1, Rational(0)));
    basis_.assign(rows_, -1);
    int next_art = logical_end_;
    for (int i = 0; i < rows_; ++i) {
      SPIR_ENFORCE(b[i] >= 0, ErrorCode::kInvalidArgument,
                   "right-hand side must be non-negative");
      for (int j = 0; j < structural_; ++j) tableau_[i][j] = a[i][j];
      tableau_[i][cols_] = b[i];
      if (sense[i] == RowSense::kLessEqual) {
        tableau_[i][structural_ + i] = 1;
        basis_[i] = structural_ + i;
      } else {
        tableau_[i][structural_ + i] = -1;
        tableau_[i][next_art] = 1;
        basis_[i] = next_art++;
      }
    }
  }

  // Maximizes objective . x.
  LpStatus Solve() {
    if (cols_ > logical_end_) {
      std::vector<Rational> phase_one(cols_, Rational(0));
      for (int j = logical_end_; j < cols_; ++j) phase_one[j] = -1;
      Optimize(phase_one, logical_end_);  // bounded above by zero
      if (ObjectiveValue(phase_one) < 0) return LpStatus::kInfeasible;
      DriveOutArtificials();
    }
    std::vector<Rational> c(cols_, Rational(0));
    for (int j = 0; j < structural_; ++j) c[j] = objective_[j];
    return Optimize(c, logical_end_);
  }

  std::vector<Rational> Primal() const {
    std::vector<Rational> x(structural_, Rational(0));
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] >= 0 && basis_[i] < structural_) {
        x[basis_[i]] = tableau_[i][cols_];
      }
    }
    return x;
  }

  std::vector<int> Basis() const {
    std::vector<int> out;
    for (int v : basis_) {
      if (v >= 0) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  Rational ObjectiveValue(const std::vector<Rational>& c) const {
    Rational v = 0;
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] >= 0) v += c[basis_[i]] * tableau_[i][cols_];
    }
    return v;
  }

  // Reduced cost of column j under cost vector c: c_j - c_B . column_j.
  Rational ReducedCost(const std::vector<Rational>& c, int j) const {
    Rational r = c[j];
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] >= 0 && tableau_[i][j] != 0) {
        r -= c[basis_[i]] * tableau_[i][j];
      }
    }
    return r;
  }

  void Pivot(int row, int col) {
    Rational p = tableau_[row][col];
    for (auto& v : tableau_[row]) v /= p;
    for (int i = 0; i < rows_; ++i) {
      if (i == row || tableau_[i][col] == 0) continue;
      Rational f = tableau_[i][col];
      for (int j = 0; j <= cols_; ++j) {
        if (tableau_[row][j] != 0) tableau_[i][j] -= f * tableau_[row][j];
      }
    }
    basis_[row] = col;
  }

  // Columns >= `col_limit` may not enter.
  LpStatus Optimize(const std::vector<Rational>& c, int col_limit) {
    for (;;) {
      int entering = -1;
      for (int j = 0; j < col_limit; ++j) {
        if (IsBasic(j)) continue;
        if (ReducedCost(c, j) > 0) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return LpStatus::kOptimal;
      int leaving = -1;
      Rational best_ratio;
      for (int i = 0; i < rows_; ++i) {
        if (basis_[i] < 0 || tableau_[i][entering] <= 0) continue;
        Rational ratio = tableau_[i][cols_] / tableau_[i][entering];
        if (leaving < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (leaving < 0) return LpStatus::kUnbounded;
      Pivot(leaving, entering);
    }
  }

  bool IsBasic(int j) const {
    for (int v : basis_) {
      if (v == j) return true;
    }
    return false;
  }

  // After a feasible phase one, artificials left in the basis sit at zero.
  // Swap each for any non-artificial column; rows with none are redundant.
  void DriveOutArtificials() {
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < logical_end_) continue;
      int col = -1;
      for (int j = 0; j < logical_end_ && col < 0; ++j) {
        if (!IsBasic(j) && tableau_[i][j] != 0) col = j;
      }
      if (col >= 0) {
        Pivot(i, col);
      } else {
        basis_[i] = -1;
        for (auto& v : tableau_[i]) v = 0;
      }
    }
  }

  int rows_;
  int structural_;
  int logical_end_ = 0;
  int cols_ = 0;
  std::vector<Rational> objective_;
  std::vector<std::vector<Rational>> tableau_;
  std::vector<int> basis_;
};

inline void RequireUsableMatrix(const IncidenceMatrix& b) {
  SPIR_ENFORCE(b.rows >= 1, ErrorCode::kInvalidArgument,
               "incidence matrix has no server rows");
  for (int m = 0; m < b.cols; ++m) {
    int ones = 0;
    for (int n = 0; n < b.rows; ++n) ones += b.at(n, m);
    SPIR_ENFORCE(ones > 0, ErrorCode::kInvalidArgument,
                 "incidence matrix column " + std::to_string(m) + " is empty");
  }
}

}  // namespace detail

/// Packing LP: maximize 1'y subject to B'y <= 1, y >= 0.
inline LpSolution SolveLp1(const IncidenceMatrix& b) {
  detail::RequireUsableMatrix(b);
  std::vector<std::vector<Rational>> a(b.cols,
                                       std::vector<Rational>(b.rows, Rational(0)));
  for (int m = 0; m < b.cols; ++m) {
    for (int n = 0; n < b.rows; ++n) a[m][n] = b.at(n, m);
  }
  detail::RationalSimplex simplex(
      a, std::vector<Rational>(b.cols, Rational(1)),
      std::vector<detail::RowSense>(b.cols, detail::RowSense::kLessEqual),
      std::vector<Rational>(b.rows, Rational(1)));
  auto status = simplex.Solve();
  SPIR_ENFORCE(status != LpStatus::kUnbounded, ErrorCode::kUnboundedLp,
               "LP1 is unbounded: some server lies in no pattern set");
  LpSolution s;
  s.status = status;
  s.vector = simplex.Primal();
  s.value = Sum(s.vector);
  s.basis = simplex.Basis();
  return s;
}

/// Covering LP: minimize 1'x subject to Bx >= 1, x >= 0.
inline LpSolution SolveLp2(const IncidenceMatrix& b) {
  detail::RequireUsableMatrix(b);
  std::vector<std::vector<Rational>> a(b.rows,
                                       std::vector<Rational>(b.cols, Rational(0)));
  for (int n = 0; n < b.rows; ++n) {
    for (int m = 0; m < b.cols; ++m) a[n][m] = b.at(n, m);
  }
  detail::RationalSimplex simplex(
      a, std::vector<Rational>(b.rows, Rational(1)),
      std::vector<detail::RowSense>(b.rows, detail::RowSense::kGreaterEqual),
      std::vector<Rational>(b.cols, Rational(-1)));
  auto status = simplex.Solve();
  SPIR_ENFORCE(status != LpStatus::kInfeasible, ErrorCode::kInfeasibleLp,
               "LP2 is infeasible: some server lies in no pattern set");
  LpSolution s;
  s.status = status;
  s.vector = simplex.Primal();
  s.value = Sum(s.vector);
  s.basis = simplex.Basis();
  return s;
}

// B'y (one entry per pattern set).
inline std::vector<Rational> SetLoads(const IncidenceMatrix& b,
                                      const std::vector<Rational>& y) {
  std::vector<Rational> out(b.cols, Rational(0));
  for (int m = 0; m < b.cols; ++m) {
    for (int n = 0; n < b.rows; ++n) {
      if (b.at(n, m)) out[m] += y[n];
    }
  }
  return out;
}

// Bx (one entry per server).
inline std::vector<Rational> ServerCover(const IncidenceMatrix& b,
                                         const std::vector<Rational>& x) {
  std::vector<Rational> out(b.rows, Rational(0));
  for (int n = 0; n < b.rows; ++n) {
    for (int m = 0; m < b.cols; ++m) {
      if (b.at(n, m)) out[n] += x[m];
    }
  }
  return out;
}

inline bool IsLp1Feasible(const IncidenceMatrix& b,
                          const std::vector<Rational>& y) {
  if (static_cast<int>(y.size()) != b.rows) return false;
  for (const auto& v : y) {
    if (v < 0) return false;
  }
  for (const auto& load : SetLoads(b, y)) {
    if (load > 1) return false;
  }
  return true;
}

inline bool IsLp2Feasible(const IncidenceMatrix& b,
                          const std::vector<Rational>& x) {
  if (static_cast<int>(x.size()) != b.cols) return false;
  for (const auto& v : x) {
    if (v < 0) return false;
  }
  for (const auto& c : ServerCover(b, x)) {
    if (c < 1) return false;
  }
  return true;
}

struct DualityCertificate {
  Rational value = 0;  // F* = F2*
  LpSolution packing;   // LP1
  LpSolution covering;  // LP2
  bool complementary_slackness = false;
};

/// y_n > 0 forces server n to be covered exactly once; x_m > 0 forces set m
/// to be packed exactly to capacity.
inline bool ComplementarySlackness(const IncidenceMatrix& b,
                                   const std::vector<Rational>& y,
                                   const std::vector<Rational>& x) {
  auto cover = ServerCover(b, x);
  auto loads = SetLoads(b, y);
  for (int n = 0; n < b.rows; ++n) {
    if (y[n] != 0 && cover[n] != 1) return false;
  }
  for (int m = 0; m < b.cols; ++m) {
    if (x[m] != 0 && loads[m] != 1) return false;
  }
  return true;
}

inline DualityCertificate VerifyDuality(const IncidenceMatrix& b) {
  DualityCertificate cert;
  cert.packing = SolveLp1(b);
  cert.covering = SolveLp2(b);
  SPIR_ENFORCE(IsLp1Feasible(b, cert.packing.vector) &&
                   IsLp2Feasible(b, cert.covering.vector),
               ErrorCode::kDualityGap, "solver returned an infeasible vertex");
  SPIR_ENFORCE(cert.packing.value == cert.covering.value,
               ErrorCode::kDualityGap,
               "LP1 value " + ToString(cert.packing.value) +
                   " differs from LP2 value " + ToString(cert.covering.value));
  cert.complementary_slackness =
      ComplementarySlackness(b, cert.packing.vector, cert.covering.vector);
  SPIR_ENFORCE(cert.complementary_slackness, ErrorCode::kDualityGap,
               "complementary slackness violated");
  cert.value = cert.packing.value;
  return cert;
}

}  // namespace spir
