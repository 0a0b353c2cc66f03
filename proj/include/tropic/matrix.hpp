#pragma once

#include <optional>

#include "tropic/rational.hpp"

namespace tropic {

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  static QMatrix identity(size_t n) {
    QMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static QMatrix fromRows(const std::vector<QVector>& rows, size_t cols = 0) {
    QMatrix m(rows.size(), rows.empty() ? cols : rows[0].size());
    for (size_t i = 0; i < m.rows_; ++i) {
      if (rows[i].size() != m.cols_) throw SchemaError("ragged matrix");
      for (size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }
  static QMatrix fromColumns(const std::vector<QVector>& cols, size_t rows = 0) {
    return fromRows(cols, rows).transpose();
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Rational& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  QVector row(size_t i) const { return QVector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }
  QVector column(size_t j) const {
    QVector c(rows_);
    for (size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<QVector> columns() const {
    std::vector<QVector> r;
    for (size_t j = 0; j < cols_; ++j) r.push_back(column(j));
    return r;
  }
  std::vector<QVector> rowList() const {
    std::vector<QVector> r;
    for (size_t i = 0; i < rows_; ++i) r.push_back(row(i));
    return r;
  }

  QMatrix transpose() const {
    QMatrix t(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool isIntegral() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return isInteger(x); });
  }

  bool operator==(const QMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

inline QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows()) throw Error("matrix product shape mismatch");
  QMatrix r(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (size_t j = 0; j < b.cols(); ++j) r(i, j) += a(i, k) * b(k, j);
    }
  return r;
}

inline QVector operator*(const QMatrix& a, const QVector& v) {
  if (a.cols() != v.size()) throw Error("matrix-vector shape mismatch");
  QVector r = zeros(a.rows());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) r[i] += a(i, j) * v[j];
  return r;
}

inline QMatrix operator*(const Rational& s, const QMatrix& a) {
  QMatrix r = a;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) r(i, j) *= s;
  return r;
}

inline QMatrix operator+(const QMatrix& a, const QMatrix& b) {
  QMatrix r = a;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) r(i, j) += b(i, j);
  return r;
}

inline QMatrix hconcat(const QMatrix& a, const QMatrix& b) {
  QMatrix r(a.rows(), a.cols() + b.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
    for (size_t j = 0; j < b.cols(); ++j) r(i, a.cols() + j) = b(i, j);
  }
  return r;
}

struct RowEchelon {
  QMatrix reduced;
  std::vector<size_t> pivots;
};

/// Reduced row echelon form by Gauss-Jordan elimination.
inline RowEchelon rref(QMatrix a) {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != r)
      for (size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
    Rational inv = 1 / a(r, c);
    for (size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
    for (size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      Rational f = a(i, c);
      for (size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(a), std::move(pivots)};
}

inline size_t rank(const QMatrix& a) { return rref(a).pivots.size(); }

inline size_t rankOf(const std::vector<QVector>& vectors, size_t dim) {
  if (vectors.empty()) return 0;
  return rank(QMatrix::fromRows(vectors, dim));
}

/// Basis of {x : a x = 0}.
inline std::vector<QVector> nullspace(const QMatrix& a) {
  auto [r, piv] = rref(a);
  std::vector<bool> isPivot(a.cols(), false);
  for (auto p : piv) isPivot[p] = true;
  std::vector<QVector> basis;
  for (size_t f = 0; f < a.cols(); ++f) {
    if (isPivot[f]) continue;
    QVector x = zeros(a.cols());
    x[f] = 1;
    for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = -r(i, f);
    basis.push_back(std::move(x));
  }
  return basis;
}

/// Some solution of a x = b, if one exists.
inline std::optional<QVector> solve(const QMatrix& a, const QVector& b) {
  QMatrix aug(a.rows(), a.cols() + 1);
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  auto [r, piv] = rref(aug);
  if (!piv.empty() && piv.back() == a.cols()) return std::nullopt;
  QVector x = zeros(a.cols());
  for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = r(i, a.cols());
  return x;
}

/// Solves a X = b column by column; throws when some column has no solution.
inline QMatrix solveMatrix(const QMatrix& a, const QMatrix& b) {
  QMatrix x(a.cols(), b.cols());
  for (size_t j = 0; j < b.cols(); ++j) {
    auto s = solve(a, b.column(j));
    if (!s) throw ValidationError("linear system has no solution");
    for (size_t i = 0; i < a.cols(); ++i) x(i, j) = (*s)[i];
  }
  return x;
}

inline Rational determinant(QMatrix a) {
  if (a.rows() != a.cols()) throw Error("determinant of non-square matrix");
  size_t n = a.rows();
  Rational det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (size_t i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      Rational f = a(i, c) / a(c, c);
      for (size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

inline QMatrix inverse(const QMatrix& a) {
  size_t n = a.rows();
  if (a.cols() != n) throw Error("inverse of non-square matrix");
  auto [r, piv] = rref(hconcat(a, QMatrix::identity(n)));
  if (piv.size() < n || piv[n - 1] != n - 1) throw ValidationError("matrix is singular");
  QMatrix inv(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv(i, j) = r(i, n + j);
  return inv;
}

/// Basis of the row space, as reduced rows.
inline std::vector<QVector> rowSpaceBasis(const std::vector<QVector>& vectors, size_t dim) {
  if (vectors.empty()) return {};
  auto [r, piv] = rref(QMatrix::fromRows(vectors, dim));
  std::vector<QVector> basis;
  for (size_t i = 0; i < piv.size(); ++i) basis.push_back(r.row(i));
  return basis;
}

/// Basis of the orthogonal complement of span(vectors) in Q^dim.
inline std::vector<QVector> orthogonalComplement(const std::vector<QVector>& vectors, size_t dim) {
  if (vectors.empty()) {
    std::vector<QVector> all;
    for (size_t i = 0; i < dim; ++i) all.push_back(unitVector(dim, i));
    return all;
  }
  return nullspace(QMatrix::fromRows(vectors, dim));
}

}  // namespace tropic
