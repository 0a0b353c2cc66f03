#pragma once

#include "tropic/matrix.hpp"

namespace tropic {

using ZMatrix = std::vector<std::vector<Integer>>;

inline ZMatrix zIdentity(size_t n) {
  ZMatrix m(n, std::vector<Integer>(n, 0));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline ZMatrix toZMatrix(const QMatrix& a) {
  if (!a.isIntegral()) throw ValidationError("matrix is not integral");
  ZMatrix z(a.rows(), std::vector<Integer>(a.cols()));
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) z[i][j] = a(i, j).get_num();
  return z;
}

inline QMatrix toQMatrix(const ZMatrix& z, size_t cols = 0) {
  QMatrix a(z.size(), z.empty() ? cols : z[0].size());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) a(i, j) = z[i][j];
  return a;
}

/// U * A * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... .
struct SmithForm {
  ZMatrix U, D, V;
  size_t rank = 0;
  std::vector<Integer> diagonal() const {
    std::vector<Integer> d;
    for (size_t i = 0; i < rank; ++i) d.push_back(D[i][i]);
    return d;
  }
};

inline SmithForm smithNormalForm(const ZMatrix& a, size_t cols = 0) {
  size_t m = a.size(), n = a.empty() ? cols : a[0].size();
  SmithForm s{zIdentity(m), a, zIdentity(n), 0};
  auto& D = s.D;
  auto swapRows = [&](size_t i, size_t j) {
    std::swap(D[i], D[j]);
    std::swap(s.U[i], s.U[j]);
  };
  auto swapCols = [&](size_t i, size_t j) {
    for (auto& row : D) std::swap(row[i], row[j]);
    for (auto& row : s.V) std::swap(row[i], row[j]);
  };
  // row_i -= f * row_j
  auto addRow = [&](size_t i, size_t j, const Integer& f) {
    for (size_t k = 0; k < n; ++k) D[i][k] -= f * D[j][k];
    for (size_t k = 0; k < m; ++k) s.U[i][k] -= f * s.U[j][k];
  };
  auto addCol = [&](size_t i, size_t j, const Integer& f) {
    for (size_t k = 0; k < m; ++k) D[k][i] -= f * D[k][j];
    for (size_t k = 0; k < n; ++k) s.V[k][i] -= f * s.V[k][j];
  };
  for (size_t t = 0; t < std::min(m, n); ++t) {
    while (true) {
      // pivot: smallest nonzero absolute value in the trailing block, first in row-major order
      bool found = false;
      size_t pi = t, pj = t;
      for (size_t i = t; i < m; ++i)
        for (size_t j = t; j < n; ++j)
          if (D[i][j] != 0 && (!found || abs(D[i][j]) < abs(D[pi][pj]))) {
            found = true;
            pi = i;
            pj = j;
          }
      if (!found) return s;
      swapRows(t, pi);
      swapCols(t, pj);
      bool clean = true;
      for (size_t i = t + 1; i < m; ++i) {
        if (D[i][t] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), D[i][t].get_mpz_t(), D[t][t].get_mpz_t());
        addRow(i, t, q);
        if (D[i][t] != 0) clean = false;
      }
      for (size_t j = t + 1; j < n; ++j) {
        if (D[t][j] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), D[t][j].get_mpz_t(), D[t][t].get_mpz_t());
        addCol(j, t, q);
        if (D[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      bool divides = true;
      for (size_t i = t + 1; i < m && divides; ++i)
        for (size_t j = t + 1; j < n; ++j)
          if (D[i][j] % D[t][t] != 0) {
            addRow(t, i, -1);
            divides = false;
            break;
          }
      if (!divides) continue;
      if (D[t][t] < 0) {
        for (size_t k = 0; k < n; ++k) D[t][k] = -D[t][k];
        for (size_t k = 0; k < m; ++k) s.U[t][k] = -s.U[t][k];
      }
      s.rank = t + 1;
      break;
    }
  }
  return s;
}

/// Smallest common multiple of denominators over all entries.
inline Integer denominatorLcm(const QMatrix& a) {
  Integer d = 1;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) d = lcm(d, a(i, j).get_den());
  return d;
}

/// Basis of the lattice {x in Z^n : a x = 0} for rational a.
inline std::vector<QVector> integerKernel(const QMatrix& a) {
  size_t n = a.cols();
  if (a.rows() == 0) {
    std::vector<QVector> all;
    for (size_t i = 0; i < n; ++i) all.push_back(unitVector(n, i));
    return all;
  }
  Integer d = denominatorLcm(a);
  auto s = smithNormalForm(toZMatrix(Rational(d) * a), n);
  std::vector<QVector> basis;
  for (size_t j = s.rank; j < n; ++j) {
    QVector v(n);
    for (size_t i = 0; i < n; ++i) v[i] = s.V[i][j];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Some integer solution of a x = b, if one exists.
inline std::optional<QVector> integerSolution(const QMatrix& a, const QVector& b) {
  size_t n = a.cols();
  Integer d = lcm(denominatorLcm(a), denominatorLcm(b));
  auto s = smithNormalForm(toZMatrix(Rational(d) * a), n);
  QVector c = zeros(a.rows());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t k = 0; k < a.rows(); ++k) c[i] += Rational(s.U[i][k]) * b[k] * d;
  QVector y = zeros(n);
  for (size_t i = 0; i < a.rows(); ++i) {
    if (i < s.rank) {
      Rational q = c[i] / Rational(s.D[i][i]);
      if (!isInteger(q)) return std::nullopt;
      y[i] = q;
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  QVector x = zeros(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k) x[i] += Rational(s.V[i][k]) * y[k];
  return x;
}

/// Canonical basis (column Hermite normal form) of the lattice generated by rational vectors.
/// The result is linearly independent; its pivot rows increase and pivots are positive.
inline std::vector<QVector> hermiteBasis(const std::vector<QVector>& gens, size_t dim) {
  if (gens.empty()) return {};
  QMatrix g = QMatrix::fromColumns(gens, dim);
  Integer d = denominatorLcm(g);
  ZMatrix a = toZMatrix(Rational(d) * g);
  size_t m = dim, n = gens.size();
  size_t col = 0;
  for (size_t row = 0; row < m && col < n; ++row) {
    // gcd-combine entries of this row into column `col`
    for (size_t j = col + 1; j < n; ++j) {
      if (a[row][j] == 0) continue;
      Integer g2, s, t;
      mpz_gcdext(g2.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a[row][col].get_mpz_t(),
                 a[row][j].get_mpz_t());
      Integer u = a[row][col] / g2, v = a[row][j] / g2;
      for (size_t i = 0; i < m; ++i) {
        Integer x = a[i][col], y = a[i][j];
        a[i][col] = s * x + t * y;
        a[i][j] = -v * x + u * y;
      }
    }
    if (a[row][col] == 0) continue;
    if (a[row][col] < 0)
      for (size_t i = 0; i < m; ++i) a[i][col] = -a[i][col];
    for (size_t j = 0; j < col; ++j) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), a[row][j].get_mpz_t(), a[row][col].get_mpz_t());
      if (q != 0)
        for (size_t i = 0; i < m; ++i) a[i][j] -= q * a[i][col];
    }
    ++col;
  }
  std::vector<QVector> basis;
  for (size_t j = 0; j < col; ++j) {
    QVector v(m);
    for (size_t i = 0; i < m; ++i) v[i] = frac(a[i][j], d);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Basis of span(vectors) intersected with Z^dim, in Hermite form.
inline std::vector<QVector> saturatedBasis(const std::vector<QVector>& vectors, size_t dim) {
  std::vector<QVector> gens;
  for (const auto& v : vectors)
    if (!isZero(v)) gens.push_back(primitive(v));
  if (gens.empty()) return {};
  auto s = smithNormalForm(toZMatrix(QMatrix::fromColumns(gens, dim)), gens.size());
  // the first rank columns of U^{-1} span the saturation
  QMatrix uinv = inverse(toQMatrix(s.U));
  std::vector<QVector> cols;
  for (size_t j = 0; j < s.rank; ++j) cols.push_back(uinv.column(j));
  return hermiteBasis(cols, dim);
}

}  // namespace tropic
