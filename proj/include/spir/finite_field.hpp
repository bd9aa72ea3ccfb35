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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "spir/error.hpp"

namespace spir {

inline bool IsPrime(std::uint64_t q) {
  if (q < 2) return false;
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) return false;
  }
  return true;
}

class FieldElement;

/// GF(q) for prime q. Small moduli only: products are formed in 128 bits.
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t q) : q_(q) {
    SPIR_ENFORCE(IsPrime(q), ErrorCode::kInvalidArgument,
                 std::to_string(q) + " is not prime");
  }

  std::uint64_t modulus() const { return q_; }
  FieldElement operator()(std::int64_t value) const;
  FieldElement Zero() const;
  FieldElement One() const;

  template <typename Rng>
  FieldElement Uniform(Rng& rng) const;

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint64_t q_;
};

class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(std::uint64_t value, std::uint64_t modulus)
      : value_(value % modulus), q_(modulus) {}

  std::uint64_t value() const { return value_; }
  std::uint64_t modulus() const { return q_; }
  PrimeField field() const { return PrimeField(q_); }
  bool IsZero() const { return value_ == 0; }

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  std::uint64_t value_ = 0;
  std::uint64_t q_ = 2;
};

inline FieldElement PrimeField::operator()(std::int64_t value) const {
  auto q = static_cast<std::int64_t>(q_);
  std::int64_t r = value % q;
  if (r < 0) r += q;
  return FieldElement(static_cast<std::uint64_t>(r), q_);
}
inline FieldElement PrimeField::Zero() const { return FieldElement(0, q_); }
inline FieldElement PrimeField::One() const { return FieldElement(1, q_); }

template <typename Rng>
FieldElement PrimeField::Uniform(Rng& rng) const {
  std::uniform_int_distribution<std::uint64_t> dist(0, q_ - 1);
  return FieldElement(dist(rng), q_);
}

namespace detail {
inline void SameField(const FieldElement& a, const FieldElement& b) {
  SPIR_ENFORCE(a.modulus() == b.modulus(), ErrorCode::kFieldMismatch,
               "GF(" + std::to_string(a.modulus()) + ") vs GF(" +
                   std::to_string(b.modulus()) + ")");
}
}  // namespace detail

inline FieldElement Add(const FieldElement& a, const FieldElement& b) {
  detail::SameField(a, b);
  std::uint64_t s = a.value() + b.value();
  return FieldElement(s >= a.modulus() ? s - a.modulus() : s, a.modulus());
}

inline FieldElement Neg(const FieldElement& a) {
  return FieldElement(a.IsZero() ? 0 : a.modulus() - a.value(), a.modulus());
}

inline FieldElement Sub(const FieldElement& a, const FieldElement& b) {
  return Add(a, Neg(b));
}

inline FieldElement Mul(const FieldElement& a, const FieldElement& b) {
  detail::SameField(a, b);
  unsigned __int128 p =
      static_cast<unsigned __int128>(a.value()) * b.value() % a.modulus();
  return FieldElement(static_cast<std::uint64_t>(p), a.modulus());
}

// Extended Euclid.
inline FieldElement Inv(const FieldElement& a) {
  SPIR_ENFORCE(!a.IsZero(), ErrorCode::kDivisionByZero,
               "zero has no inverse in GF(" + std::to_string(a.modulus()) + ")");
  std::int64_t t = 0, new_t = 1;
  auto r = static_cast<std::int64_t>(a.modulus());
  auto new_r = static_cast<std::int64_t>(a.value());
  while (new_r != 0) {
    std::int64_t quot = r / new_r;
    std::int64_t tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quot * new_r;
    r = new_r;
    new_r = tmp;
  }
  return a.field()(t);
}

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  return Add(a, b);
}
inline FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  return Sub(a, b);
}
inline FieldElement operator-(const FieldElement& a) { return Neg(a); }
inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  return Mul(a, b);
}
inline FieldElement& operator+=(FieldElement& a, const FieldElement& b) {
  return a = Add(a, b);
}

/// Choose the smallest prime q >= max(l_bar, 2), which gives l_bar distinct
/// evaluation points.
inline PrimeField ChooseField(std::uint64_t l_bar) {
  SPIR_ENFORCE(l_bar >= 1, ErrorCode::kInvalidArgument, "l_bar must be >= 1");
  std::uint64_t q = l_bar < 2 ? 2 : l_bar;
  while (!IsPrime(q)) ++q;
  return PrimeField(q);
}

using FieldVector = std::vector<FieldElement>;

// Row-major dense matrix over one prime field.
class FieldMatrix {
 public:
  FieldMatrix(int rows, int cols, const PrimeField& field)
      : rows_(rows), cols_(cols), q_(field.modulus()),
        values_(static_cast<std::size_t>(rows) * cols, 0) {
    SPIR_ENFORCE(rows >= 0 && cols >= 0, ErrorCode::kInvalidArgument,
                 "negative matrix dimension");
  }

  static FieldMatrix Identity(int n, const PrimeField& field) {
    FieldMatrix m(n, n, field);
    for (int i = 0; i < n; ++i) m.Set(i, i, field.One());
    return m;
  }

  static FieldMatrix FromValues(const PrimeField& field,
                                const std::vector<std::vector<std::int64_t>>& v) {
    int rows = static_cast<int>(v.size());
    int cols = rows ? static_cast<int>(v[0].size()) : 0;
    FieldMatrix m(rows, cols, field);
    for (int i = 0; i < rows; ++i) {
      SPIR_ENFORCE(static_cast<int>(v[i].size()) == cols,
                   ErrorCode::kInvalidArgument, "ragged matrix");
      for (int j = 0; j < cols; ++j) m.Set(i, j, field(v[i][j]));
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  PrimeField field() const { return PrimeField(q_); }

  FieldElement at(int i, int j) const {
    return FieldElement(values_[Index(i, j)], q_);
  }
  std::uint64_t raw(int i, int j) const { return values_[Index(i, j)]; }
  void Set(int i, int j, const FieldElement& v) {
    SPIR_ENFORCE(v.modulus() == q_, ErrorCode::kFieldMismatch,
                 "element from another field");
    values_[Index(i, j)] = v.value();
  }

  FieldVector Row(int i) const {
    FieldVector out;
    for (int j = 0; j < cols_; ++j) out.push_back(at(i, j));
    return out;
  }
  FieldVector Column(int j) const {
    FieldVector out;
    for (int i = 0; i < rows_; ++i) out.push_back(at(i, j));
    return out;
  }

  FieldMatrix Transpose() const {
    FieldMatrix t(cols_, rows_, field());
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) t.values_[t.Index(j, i)] = raw(i, j);
    }
    return t;
  }

  FieldMatrix SelectColumns(const std::vector<int>& columns) const {
    FieldMatrix out(rows_, static_cast<int>(columns.size()), field());
    for (int i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < columns.size(); ++j) {
        out.values_[out.Index(i, static_cast<int>(j))] = raw(i, columns[j]);
      }
    }
    return out;
  }

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

 private:
  std::size_t Index(int i, int j) const {
    SPIR_ENFORCE(i >= 0 && i < rows_ && j >= 0 && j < cols_,
                 ErrorCode::kIndexOutOfRange, "matrix index out of range");
    return static_cast<std::size_t>(i) * cols_ + j;
  }

  int rows_;
  int cols_;
  std::uint64_t q_;
  std::vector<std::uint64_t> values_;
};

inline FieldMatrix Multiply(const FieldMatrix& a, const FieldMatrix& b) {
  SPIR_ENFORCE(a.field() == b.field(), ErrorCode::kFieldMismatch,
               "matrices over different fields");
  SPIR_ENFORCE(a.cols() == b.rows(), ErrorCode::kInvalidArgument,
               "dimension mismatch in matrix product");
  auto f = a.field();
  FieldMatrix c(a.rows(), b.cols(), f);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      FieldElement acc = f.Zero();
      for (int l = 0; l < a.cols(); ++l) acc += a.at(i, l) * b.at(l, j);
      c.Set(i, j, acc);
    }
  }
  return c;
}

// Row vector times matrix.
inline FieldVector Multiply(const FieldVector& v, const FieldMatrix& m) {
  SPIR_ENFORCE(static_cast<int>(v.size()) == m.rows(),
               ErrorCode::kInvalidArgument, "dimension mismatch in v*M");
  FieldVector out;
  auto f = m.field();
  for (int j = 0; j < m.cols(); ++j) {
    FieldElement acc = f.Zero();
    for (int i = 0; i < m.rows(); ++i) acc += v[i] * m.at(i, j);
    out.push_back(acc);
  }
  return out;
}

inline FieldElement Dot(const FieldVector& a, const FieldVector& b) {
  SPIR_ENFORCE(a.size() == b.size() && !a.empty(), ErrorCode::kInvalidArgument,
               "dot product of mismatched vectors");
  FieldElement acc = a[0].field().Zero();
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

namespace detail {
// Reduced row echelon form in place; returns the rank.
inline int RowReduce(std::vector<std::vector<FieldElement>>& m, int cols) {
  int rank = 0;
  int rows = static_cast<int>(m.size());
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (!m[r][c].IsZero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    FieldElement inv = Inv(m[rank][c]);
    for (auto& v : m[rank]) v = v * inv;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || m[r][c].IsZero()) continue;
      FieldElement factor = m[r][c];
      for (std::size_t j = 0; j < m[r].size(); ++j) {
        m[r][j] = m[r][j] - factor * m[rank][j];
      }
    }
    ++rank;
  }
  return rank;
}

inline std::vector<std::vector<FieldElement>> ToRows(const FieldMatrix& m) {
  std::vector<std::vector<FieldElement>> rows;
  for (int i = 0; i < m.rows(); ++i) rows.push_back(m.Row(i));
  return rows;
}
}  // namespace detail

inline int Rank(const FieldMatrix& m) {
  auto rows = detail::ToRows(m);
  return detail::RowReduce(rows, m.cols());
}

inline FieldMatrix Invert(const FieldMatrix& m) {
  SPIR_ENFORCE(m.rows() == m.cols(), ErrorCode::kInvalidArgument,
               "only square matrices can be inverted");
  int n = m.rows();
  auto f = m.field();
  auto rows = detail::ToRows(m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) rows[i].push_back(i == j ? f.One() : f.Zero());
  }
  SPIR_ENFORCE(detail::RowReduce(rows, n) == n, ErrorCode::kSingularMatrix,
               "matrix is singular");
  FieldMatrix inv(n, n, f);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) inv.Set(i, j, rows[i][n + j]);
  }
  return inv;
}

/// Solves m * x = rhs (rhs may have several columns).
inline FieldMatrix Solve(const FieldMatrix& m, const FieldMatrix& rhs) {
  SPIR_ENFORCE(m.rows() == m.cols() && rhs.rows() == m.rows(),
               ErrorCode::kInvalidArgument, "solve needs square m and matching rhs");
  SPIR_ENFORCE(m.field() == rhs.field(), ErrorCode::kFieldMismatch,
               "matrices over different fields");
  int n = m.rows();
  auto rows = detail::ToRows(m);
  for (int i = 0; i < n; ++i) {
    auto extra = rhs.Row(i);
    rows[i].insert(rows[i].end(), extra.begin(), extra.end());
  }
  SPIR_ENFORCE(detail::RowReduce(rows, n) == n, ErrorCode::kSingularMatrix,
               "matrix is singular");
  FieldMatrix x(n, rhs.cols(), m.field());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < rhs.cols(); ++j) x.Set(i, j, rows[i][n + j]);
  }
  return x;
}

inline std::vector<std::uint64_t> RawValues(const FieldVector& v) {
  std::vector<std::uint64_t> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(e.value());
  return out;
}

}  // namespace spir
