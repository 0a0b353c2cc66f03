#pragma once

#include <functional>

#include "tropic/cone.hpp"

namespace tropic {

/// Finite polytopal complex: closed under faces, any two cells meet in a common face or not at all.
/// Cells are ordered by (dimension, sorted vertex list).
class PolytopalComplex {
 public:
  PolytopalComplex() = default;

  static PolytopalComplex build(size_t n, const std::vector<Polytope>& cells, bool validate = true) {
    std::map<std::vector<QVector>, Polytope> closure;
    for (const auto& c : cells) {
      if (c.ambientDim() != n) throw SchemaError("cell of wrong ambient dimension");
      for (size_t f = 0; f < c.faceLattice().faces.size(); ++f) {
        std::vector<QVector> key;
        for (auto i : c.faceLattice().faces[f]) key.push_back(c.vertices()[i]);
        if (!closure.count(key)) closure.emplace(key, c.facePolytope(f));
      }
    }
    PolytopalComplex K;
    K.n_ = n;
    for (auto& [k, p] : closure) K.cells_.push_back(p);
    std::sort(K.cells_.begin(), K.cells_.end());
    for (size_t i = 0; i < K.cells_.size(); ++i) K.index_[K.cells_[i].vertices()] = i;
    K.faces_.resize(K.cells_.size());
    K.cofaces_.resize(K.cells_.size());
    for (size_t j = 0; j < K.cells_.size(); ++j) {
      const auto& c = K.cells_[j];
      for (const auto& f : c.faceLattice().faces) {
        std::vector<QVector> key;
        for (auto i : f) key.push_back(c.vertices()[i]);
        size_t i = K.index_.at(key);
        K.faces_[j].push_back(i);
        K.cofaces_[i].push_back(j);
      }
    }
    for (auto& v : K.faces_) std::sort(v.begin(), v.end());
    for (auto& v : K.cofaces_) std::sort(v.begin(), v.end());
    if (validate) K.checkIntersections();
    return K;
  }

  size_t ambientDim() const { return n_; }
  const std::vector<Polytope>& cells() const { return cells_; }
  size_t size() const { return cells_.size(); }
  const Polytope& cell(size_t i) const { return cells_[i]; }

  int dim() const { return cells_.empty() ? -1 : cells_.back().dim(); }

  std::optional<size_t> indexOf(const Polytope& p) const {
    auto it = index_.find(p.vertices());
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Faces of cell i, including itself.
  const std::vector<size_t>& facesOf(size_t i) const { return faces_[i]; }
  /// Cells having cell i as a face, including itself.
  const std::vector<size_t>& star(size_t i) const { return cofaces_[i]; }

  /// Cells of dimension k in the star of cell i.
  std::vector<size_t> star(size_t i, int k) const {
    std::vector<size_t> out;
    for (auto j : cofaces_[i])
      if (cells_[j].dim() == k) out.push_back(j);
    return out;
  }

  std::vector<size_t> cellsOfDim(int k) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < cells_.size(); ++i)
      if (cells_[i].dim() == k) out.push_back(i);
    return out;
  }

  /// Pairs (face, cell) with face a proper face of cell.
  std::vector<std::pair<size_t, size_t>> incidence() const {
    std::vector<std::pair<size_t, size_t>> out;
    for (size_t j = 0; j < cells_.size(); ++j)
      for (auto i : faces_[j])
        if (i != j) out.emplace_back(i, j);
    return out;
  }

  /// The cell whose relative interior contains u.
  std::optional<size_t> locate(const QVector& u) const {
    for (size_t i = 0; i < cells_.size(); ++i)
      if (cells_[i].containsInRelativeInterior(u)) return i;
    return std::nullopt;
  }

  bool supportContains(const QVector& u) const { return locate(u).has_value(); }

  std::vector<size_t> maximalCells() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < cells_.size(); ++i)
      if (cofaces_[i].size() == 1) out.push_back(i);
    return out;
  }

 private:
  void checkIntersections() const {
    auto maxi = maximalCells();
    for (size_t a = 0; a < maxi.size(); ++a)
      for (size_t b = a + 1; b < maxi.size(); ++b) {
        const auto& P = cells_[maxi[a]];
        const auto& Q = cells_[maxi[b]];
        auto I = intersect(P, Q);
        if (!I) continue;
        if (!P.hasFace(*I) || !Q.hasFace(*I))
          throw ValidationError("cells meet outside a common face",
                                "cells " + std::to_string(maxi[a]) + " and " + std::to_string(maxi[b]));
      }
  }

  size_t n_ = 0;
  std::vector<Polytope> cells_;
  std::map<std::vector<QVector>, size_t> index_;
  std::vector<std::vector<size_t>> faces_, cofaces_;
};

/// Each cell of `coarse` is a union of cells of `fine`, and every top cell of `fine` lies in `coarse`.
inline bool subdivides(const PolytopalComplex& fine, const PolytopalComplex& coarse) {
  for (const auto& delta : coarse.cells()) {
    Rational covered = 0;
    for (const auto& c : fine.cells())
      if (c.dim() == delta.dim() && delta.contains(c)) covered += volume(c);
    if (covered != volume(delta)) return false;
  }
  for (auto i : fine.maximalCells()) {
    bool inside = false;
    for (const auto& delta : coarse.cells())
      if (delta.contains(fine.cell(i))) inside = true;
    if (!inside) return false;
  }
  return true;
}

/// Periodic decomposition of Q^n under a full-rank lattice. One representative per cell class:
/// the translate whose vertex barycenter lies in the half-open fundamental parallelepiped.
class PeriodicComplex {
 public:
  PeriodicComplex() = default;

  static PeriodicComplex build(const QMatrix& basis, const std::vector<Polytope>& cells,
                               bool validate = true) {
    PeriodicComplex C;
    C.n_ = basis.rows();
    if (basis.cols() != C.n_) throw SchemaError("lattice basis must be square");
    C.basis_ = basis;
    C.basisInv_ = inverse(basis);
    std::map<std::vector<QVector>, Polytope> reps;
    for (const auto& c : cells) {
      if (c.ambientDim() != C.n_) throw SchemaError("cell of wrong ambient dimension");
      for (size_t f = 0; f < c.faceLattice().faces.size(); ++f) {
        auto r = C.canonical(c.facePolytope(f)).first;
        if (!reps.count(r.vertices())) reps.emplace(r.vertices(), r);
      }
    }
    for (auto& [k, p] : reps) C.reps_.push_back(p);
    std::sort(C.reps_.begin(), C.reps_.end());
    if (validate) C.validate();
    return C;
  }

  size_t ambientDim() const { return n_; }
  const QMatrix& latticeBasis() const { return basis_; }
  const std::vector<Polytope>& representatives() const { return reps_; }
  Rational covolume() const { return abs(determinant(basis_)); }

  QVector latticeVector(const QVector& coeffs) const { return basis_ * coeffs; }

  /// Representative of the class of p, and integer coefficients k with p = rep + B k.
  std::pair<Polytope, QVector> canonical(const Polytope& p) const {
    QVector x = basisInv_ * p.interiorPoint();
    QVector k(n_);
    for (size_t i = 0; i < n_; ++i) k[i] = Rational(floorOf(x[i]));
    return {translate(p, -(basis_ * k)), k};
  }

  std::optional<size_t> repIndex(const Polytope& rep) const {
    for (size_t i = 0; i < reps_.size(); ++i)
      if (reps_[i] == rep) return i;
    return std::nullopt;
  }

  /// Class index and lattice coefficients of an arbitrary cell, if it belongs to the complex.
  std::optional<std::pair<size_t, QVector>> classify(const Polytope& p) const {
    auto [rep, k] = canonical(p);
    auto i = repIndex(rep);
    if (!i) return std::nullopt;
    return std::make_pair(*i, k);
  }

  Polytope translateOf(size_t rep, const QVector& coeffs) const {
    return translate(reps_[rep], basis_ * coeffs);
  }

  /// (rep, coefficients) of all translates whose bounding box meets [lo, hi].
  std::vector<std::pair<size_t, QVector>> translatesMeeting(const QVector& lo, const QVector& hi) const {
    std::vector<std::pair<size_t, QVector>> out;
    auto [clo, chi] = latticeBox(box(lo, hi).vertices());
    for (size_t r = 0; r < reps_.size(); ++r) {
      auto [alo, ahi] = latticeBox(reps_[r].vertices());
      std::vector<Integer> from(n_), to(n_);
      bool any = true;
      for (size_t i = 0; i < n_; ++i) {
        from[i] = -floorOf(ahi[i] - clo[i]);
        to[i] = floorOf(chi[i] - alo[i]);
        if (from[i] > to[i]) any = false;
      }
      if (!any) continue;
      auto [rlo, rhi] = reps_[r].boundingBox();
      std::vector<Integer> k = from;
      while (true) {
        QVector kq(k.begin(), k.end());
        QVector t = basis_ * kq;
        bool meets = true;
        for (size_t i = 0; i < n_; ++i)
          if (rhi[i] + t[i] < lo[i] || rlo[i] + t[i] > hi[i]) meets = false;
        if (meets) out.emplace_back(r, kq);
        size_t i = 0;
        while (i < n_ && k[i] == to[i]) {
          k[i] = from[i];
          ++i;
        }
        if (i == n_) break;
        ++k[i];
      }
    }
    return out;
  }

  /// Finite complex of all translates whose bounding box meets [lo, hi].
  PolytopalComplex patch(const QVector& lo, const QVector& hi) const {
    std::vector<Polytope> cells;
    for (const auto& [r, k] : translatesMeeting(lo, hi)) cells.push_back(translateOf(r, k));
    return PolytopalComplex::build(n_, cells, false);
  }

  /// Top-dimensional translate containing u: (rep, coefficients).
  std::pair<size_t, QVector> locateTop(const QVector& u) const {
    for (const auto& [r, k] : translatesMeeting(u, u))
      if (reps_[r].dim() == static_cast<int>(n_) && translateOf(r, k).contains(u)) return {r, k};
    throw ValidationError("point " + toString(u) + " is not covered by the decomposition");
  }

  /// Translate whose relative interior contains u: (rep, coefficients).
  std::pair<size_t, QVector> locate(const QVector& u) const {
    for (const auto& [r, k] : translatesMeeting(u, u))
      if (translateOf(r, k).containsInRelativeInterior(u)) return {r, k};
    throw ValidationError("point " + toString(u) + " is not covered by the decomposition");
  }

  /// Number of open-face classes of codimension k modulo the lattice.
  size_t openFaceClassCount(int codim) const {
    size_t c = 0;
    for (const auto& r : reps_)
      if (r.dim() == static_cast<int>(n_) - codim) ++c;
    return c;
  }

  /// The decomposition (1/m) C, periodic under the same lattice.
  PeriodicComplex scaled(unsigned m) const {
    if (m == 0) throw ValidationError("scale factor must be positive");
    std::vector<Polytope> cells;
    std::vector<unsigned> a(n_, 0);
    Rational inv = frac(1, m);
    while (true) {
      QVector aq(a.begin(), a.end());
      QVector t = basis_ * aq;
      for (const auto& r : reps_)
        if (r.dim() == static_cast<int>(n_)) cells.push_back(scale(translate(r, t), inv));
      size_t i = 0;
      while (i < n_ && a[i] == m - 1) {
        a[i] = 0;
        ++i;
      }
      if (i == n_) break;
      ++a[i];
    }
    return build(basis_, cells, false);
  }

  /// Whether every representative maps injectively to the quotient torus.
  bool isInjective() const {
    for (size_t r = 0; r < reps_.size(); ++r) {
      auto [lo, hi] = reps_[r].boundingBox();
      for (const auto& [s, k] : translatesMeeting(lo, hi))
        if (s == r && !isZero(k) && intersect(reps_[r], translateOf(s, k))) return false;
    }
    return true;
  }

 private:
  std::pair<QVector, QVector> latticeBox(const std::vector<QVector>& pts) const {
    QVector lo = basisInv_ * pts[0], hi = lo;
    for (const auto& p : pts) {
      QVector x = basisInv_ * p;
      for (size_t i = 0; i < n_; ++i) {
        if (x[i] < lo[i]) lo[i] = x[i];
        if (x[i] > hi[i]) hi[i] = x[i];
      }
    }
    return {lo, hi};
  }

  void validate() const {
    Rational vol = 0;
    for (const auto& r : reps_)
      if (r.dim() == static_cast<int>(n_)) vol += r.lebesgueVolume();
    if (vol != covolume())
      throw ValidationError("top cells do not tile the fundamental domain",
                            "volume " + toString(vol) + " vs covolume " + toString(covolume()));
    for (size_t a = 0; a < reps_.size(); ++a) {
      if (reps_[a].dim() != static_cast<int>(n_)) continue;
      auto [lo, hi] = reps_[a].boundingBox();
      for (const auto& [b, k] : translatesMeeting(lo, hi)) {
        if (reps_[b].dim() != static_cast<int>(n_) || (b == a && isZero(k))) continue;
        Polytope Q = translateOf(b, k);
        auto I = intersect(reps_[a], Q);
        if (!I) continue;
        if (!reps_[a].hasFace(*I) || !Q.hasFace(*I))
          throw ValidationError("cells meet outside a common face",
                                "class " + std::to_string(a) + " and class " + std::to_string(b) +
                                    " shifted by " + toString(k));
      }
    }
  }

  size_t n_ = 0;
  QMatrix basis_, basisInv_;
  std::vector<Polytope> reps_;
};

struct TransversalityReport {
  bool transversal = true;
  std::optional<Polytope> witness;  // offending cell
  std::string reason;
};

namespace detail {

inline int pureDimension(const PolytopalSet& s) {
  auto maxi = s.maximalMembers();
  if (maxi.empty()) return -1;
  int d = maxi[0].dim();
  for (const auto& p : maxi)
    if (p.dim() != d) throw ValidationError("set is not of pure dimension");
  return d;
}

inline TransversalityReport transversalOver(const std::vector<Polytope>& cells, size_t n,
                                            const PolytopalSet& s) {
  int d = pureDimension(s);
  for (const auto& delta : cells) {
    std::vector<Polytope> pieces;
    for (const auto& p : s.members())
      if (auto i = intersect(delta, p)) pieces.push_back(*i);
    if (pieces.empty()) continue;
    int expected = d - (static_cast<int>(n) - delta.dim());
    for (const auto& piece : PolytopalSet(n, pieces).maximalMembers())
      if (piece.dim() != expected)
        return {false, delta,
                "intersection has dimension " + std::to_string(piece.dim()) + ", expected " +
                    std::to_string(expected)};
  }
  return {};
}

}  // namespace detail

/// Every cell meets S in the empty set or in a set of pure dimension dim S - codim(cell).
inline TransversalityReport isTransversal(const PolytopalComplex& c, const PolytopalSet& s) {
  return detail::transversalOver(c.cells(), c.ambientDim(), s);
}

inline std::pair<QVector, QVector> boundingBoxOf(const PolytopalSet& s) {
  auto [lo, hi] = s.members().at(0).boundingBox();
  for (const auto& p : s.members()) {
    auto [a, b] = p.boundingBox();
    for (size_t i = 0; i < lo.size(); ++i) {
      if (a[i] < lo[i]) lo[i] = a[i];
      if (b[i] > hi[i]) hi[i] = b[i];
    }
  }
  return {lo, hi};
}

inline TransversalityReport isTransversal(const PeriodicComplex& c, const PolytopalSet& s) {
  if (s.empty()) return {};
  auto [lo, hi] = boundingBoxOf(s);
  std::vector<Polytope> cells;
  for (const auto& [r, k] : c.translatesMeeting(lo, hi)) cells.push_back(c.translateOf(r, k));
  return detail::transversalOver(cells, c.ambientDim(), s);
}

struct TransversalVertex {
  QVector point;
  size_t classId;  // open faces of the complex are numbered in order of first appearance
  Polytope cell;   // cell whose relative interior contains the point
};

namespace detail {

inline std::vector<TransversalVertex> transversalVerticesOver(const std::vector<Polytope>& cells,
                                                             size_t n, const PolytopalSet& s) {
  auto report = transversalOver(cells, n, s);
  if (!report.transversal)
    throw ValidationError("complex is not transversal to the set: " + report.reason,
                          toString(report.witness->vertices().front()));
  int d = pureDimension(s);
  std::vector<TransversalVertex> out;
  std::map<std::vector<QVector>, size_t> classIds;
  std::set<QVector> seen;
  for (const auto& delta : cells) {
    if (static_cast<int>(n) - delta.dim() != d) continue;
    for (const auto& p : s.members()) {
      auto i = intersect(delta, p);
      if (!i) continue;
      const QVector& u = i->vertices().front();
      if (seen.count(u)) continue;
      seen.insert(u);
      auto [it, fresh] = classIds.emplace(delta.vertices(), classIds.size());
      out.push_back({u, it->second, delta});
    }
  }
  return out;
}

}  // namespace detail

/// Points of S on cells of codimension dim S, tagged by the open face containing them.
inline std::vector<TransversalVertex> transversalVertices(const PolytopalComplex& c,
                                                          const PolytopalSet& s) {
  return detail::transversalVerticesOver(c.cells(), c.ambientDim(), s);
}

inline std::vector<TransversalVertex> transversalVertices(const PeriodicComplex& c,
                                                          const PolytopalSet& s) {
  auto [lo, hi] = boundingBoxOf(s);
  std::vector<Polytope> cells;
  for (const auto& [r, k] : c.translatesMeeting(lo, hi)) cells.push_back(c.translateOf(r, k));
  return detail::transversalVerticesOver(cells, c.ambientDim(), s);
}

}  // namespace tropic
