#pragma once

#include <cstdint>

#include "tropic/matrix.hpp"

namespace tropic {

namespace detail {

using Bits = std::vector<uint64_t>;

inline void setBit(Bits& b, size_t i) { b[i / 64] |= uint64_t(1) << (i % 64); }

inline size_t popcount(const Bits& b) {
  size_t c = 0;
  for (auto w : b) c += static_cast<size_t>(__builtin_popcountll(w));
  return c;
}

inline bool subsetOf(const Bits& a, const Bits& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

inline Bits intersect(const Bits& a, const Bits& b) {
  Bits r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] & b[i];
  return r;
}

}  // namespace detail

/// Extreme rays of the pointed cone {x : a x >= 0}, each scaled to a primitive integer vector.
/// Rows are inserted in order; rank(a) must equal a.cols().
inline std::vector<QVector> extremeRays(const QMatrix& a) {
  using namespace detail;
  size_t m = a.rows(), D = a.cols();
  if (D == 0) return {};
  std::vector<size_t> basisRows;
  std::vector<QVector> chosen;
  for (size_t i = 0; i < m && basisRows.size() < D; ++i) {
    chosen.push_back(a.row(i));
    if (rankOf(chosen, D) == chosen.size())
      basisRows.push_back(i);
    else
      chosen.pop_back();
  }
  if (basisRows.size() < D) throw Error("cone has a lineality space");

  size_t words = (m + 63) / 64;
  QMatrix rinv = inverse(QMatrix::fromRows(chosen, D));
  std::vector<QVector> rays;
  std::vector<Bits> zero;
  for (size_t k = 0; k < D; ++k) {
    rays.push_back(primitive(rinv.column(k)));
    Bits z(words, 0);
    for (size_t j = 0; j < D; ++j)
      if (j != k) setBit(z, basisRows[j]);
    zero.push_back(std::move(z));
  }
  std::vector<bool> inBasis(m, false);
  for (auto i : basisRows) inBasis[i] = true;

  for (size_t i = 0; i < m; ++i) {
    if (inBasis[i]) continue;
    QVector row = a.row(i);
    std::vector<Rational> s(rays.size());
    std::vector<size_t> pos, neg;
    std::vector<QVector> nextRays;
    std::vector<Bits> nextZero;
    for (size_t k = 0; k < rays.size(); ++k) {
      s[k] = dot(row, rays[k]);
      if (s[k] > 0) pos.push_back(k);
      if (s[k] < 0) neg.push_back(k);
      if (s[k] >= 0) {
        nextRays.push_back(rays[k]);
        nextZero.push_back(zero[k]);
        if (s[k] == 0) setBit(nextZero.back(), i);
      }
    }
    for (auto p : pos)
      for (auto n : neg) {
        Bits z = intersect(zero[p], zero[n]);
        if (D >= 2 && popcount(z) + 2 < D) continue;
        bool adjacent = true;
        for (size_t r = 0; r < rays.size() && adjacent; ++r)
          if (r != p && r != n && subsetOf(z, zero[r])) adjacent = false;
        if (!adjacent) continue;
        nextRays.push_back(primitive(s[p] * rays[n] - s[n] * rays[p]));
        setBit(z, i);
        nextZero.push_back(std::move(z));
      }
    rays = std::move(nextRays);
    zero = std::move(nextZero);
  }
  std::sort(rays.begin(), rays.end());
  return rays;
}

struct ConeGenerators {
  std::vector<QVector> rays;       // extreme rays of the pointed part
  std::vector<QVector> lineality;  // basis of the lineality space
};

/// Generators of {x in Q^dim : h x >= 0 for h in ineqs}.
inline ConeGenerators coneFromInequalities(const std::vector<QVector>& ineqs, size_t dim) {
  ConeGenerators g;
  std::vector<QVector> nonzero;
  for (const auto& h : ineqs)
    if (!isZero(h)) nonzero.push_back(h);
  if (nonzero.empty()) {
    for (size_t i = 0; i < dim; ++i) g.lineality.push_back(unitVector(dim, i));
    return g;
  }
  QMatrix a = QMatrix::fromRows(nonzero, dim);
  for (const auto& l : rowSpaceBasis(nullspace(a), dim)) g.lineality.push_back(primitive(l));
  auto q = rowSpaceBasis(nonzero, dim);
  QMatrix qc = QMatrix::fromColumns(q, dim);
  for (const auto& y : extremeRays(a * qc)) g.rays.push_back(primitive(qc * y));
  std::sort(g.rays.begin(), g.rays.end());
  return g;
}

}  // namespace tropic
