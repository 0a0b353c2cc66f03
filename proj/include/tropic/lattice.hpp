#pragma once

#include "tropic/smith.hpp"

namespace tropic {

/// Discrete subgroup of Q^n given by a basis in Hermite normal form.
class Lattice {
 public:
  Lattice() = default;
  static Lattice generatedBy(const std::vector<QVector>& gens, size_t n) {
    for (const auto& g : gens)
      if (g.size() != n) throw SchemaError("lattice generator of wrong dimension");
    Lattice L;
    L.n_ = n;
    L.basis_ = hermiteBasis(gens, n);
    return L;
  }
  static Lattice standard(size_t n) {
    std::vector<QVector> e;
    for (size_t i = 0; i < n; ++i) e.push_back(unitVector(n, i));
    return generatedBy(e, n);
  }
  static Lattice fromBasisMatrix(const QMatrix& columns) {
    return generatedBy(columns.columns(), columns.rows());
  }

  size_t ambientDim() const { return n_; }
  size_t rank() const { return basis_.size(); }
  const std::vector<QVector>& basis() const { return basis_; }
  QMatrix basisMatrix() const { return QMatrix::fromColumns(basis_, n_); }
  bool isFullRank() const { return rank() == n_; }

  bool contains(const QVector& v) const {
    if (basis_.empty()) return isZero(v);
    auto x = solve(basisMatrix(), v);
    if (!x) return false;
    for (const auto& c : *x)
      if (!isInteger(c)) return false;
    return true;
  }

  bool operator==(const Lattice& o) const { return n_ == o.n_ && basis_ == o.basis_; }

 private:
  size_t n_ = 0;
  std::vector<QVector> basis_;
};

/// Symmetric bilinear form b(u, v) = u^T B v.
class BilinearForm {
 public:
  BilinearForm() = default;
  explicit BilinearForm(QMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw SchemaError("form matrix must be square");
    for (size_t i = 0; i < m_.rows(); ++i)
      for (size_t j = 0; j < i; ++j)
        if (m_(i, j) != m_(j, i)) throw ValidationError("form matrix is not symmetric");
  }
  static BilinearForm identity(size_t n) { return BilinearForm(QMatrix::identity(n)); }

  size_t dim() const { return m_.rows(); }
  const QMatrix& matrix() const { return m_; }
  Rational operator()(const QVector& u, const QVector& v) const { return dot(u, m_ * v); }
  /// q(u) = b(u, u) / 2.
  Rational quadratic(const QVector& u) const { return (*this)(u, u) / 2; }

  /// Sylvester's criterion on leading principal minors.
  bool isPositiveDefinite() const {
    for (size_t k = 1; k <= dim(); ++k) {
      QMatrix minor(k, k);
      for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) minor(i, j) = m_(i, j);
      if (determinant(minor) <= 0) return false;
    }
    return true;
  }

 private:
  QMatrix m_;
};

/// u' -> M u' + t with M an integer matrix.
struct AffineLatticeMap {
  QMatrix linear;  // n x d
  QVector translation;

  QVector operator()(const QVector& x) const { return linear * x + translation; }
  bool isInjective() const { return rank(linear) == linear.cols(); }
};

/// Index [target : image of M], via the Smith form of the coordinate matrix of M's columns.
/// Throws if the image is not a full-rank sublattice of target.
inline Integer indexOfImage(const QMatrix& m, const Lattice& target) {
  if (m.rows() != target.ambientDim()) throw SchemaError("dimension mismatch in index computation");
  if (rank(m) < target.rank() || m.cols() < target.rank())
    throw ValidationError("image has lower rank than the target lattice");
  QMatrix coords = solveMatrix(target.basisMatrix(), m);
  if (!coords.isIntegral()) throw ValidationError("image is not contained in the target lattice");
  auto s = smithNormalForm(toZMatrix(coords), coords.cols());
  if (s.rank < target.rank()) throw ValidationError("image has lower rank than the target lattice");
  Integer idx = 1;
  for (const auto& d : s.diagonal()) idx *= d;
  return idx;
}

/// span(L) cap Z^n.
inline Lattice saturate(const Lattice& l) {
  return Lattice::generatedBy(saturatedBasis(l.basis(), l.ambientDim()), l.ambientDim());
}

inline Lattice saturateSpan(const std::vector<QVector>& vectors, size_t n) {
  return Lattice::generatedBy(saturatedBasis(vectors, n), n);
}

/// Lambda cap L for a linear subspace L given by a spanning set.
inline Lattice stabilizerLattice(const Lattice& lambda, const std::vector<QVector>& span) {
  size_t n = lambda.ambientDim();
  auto normals = orthogonalComplement(span, n);
  if (normals.empty()) return lambda;
  QMatrix B = lambda.basisMatrix();
  QMatrix E = QMatrix::fromRows(normals, n);
  std::vector<QVector> gens;
  for (const auto& x : integerKernel(E * B)) gens.push_back(B * x);
  return Lattice::generatedBy(gens, n);
}

/// A lattice inside a subspace V, described in coordinates: V = frame * Q^r and the lattice basis
/// is frame * basis. Dual objects use the dual coordinates of the same frame.
struct FramedLattice {
  QMatrix frame;  // n x r
  QMatrix basis;  // r x r, columns

  size_t rank() const { return basis.cols(); }
};

/// Frames a full-rank lattice of its span using the saturated integer basis of the span.
inline FramedLattice frameLattice(const Lattice& l) {
  size_t n = l.ambientDim();
  QMatrix frame = QMatrix::fromColumns(saturatedBasis(l.basis(), n), n);
  return {frame, solveMatrix(frame, l.basisMatrix())};
}

inline FramedLattice frameLattice(const Lattice& l, const QMatrix& frame) {
  return {frame, solveMatrix(frame, l.basisMatrix())};
}

inline Rational covolume(const FramedLattice& l) {
  if (l.rank() == 0) return 1;
  return abs(determinant(l.basis));
}

inline Rational covolume(const Lattice& l) { return covolume(frameLattice(l)); }

/// {phi in V* : phi(L) in Z}: basis is the inverse transpose in dual coordinates.
inline FramedLattice dualLattice(const FramedLattice& l) {
  if (l.rank() == 0) return l;
  return {l.frame, inverse(l.basis).transpose()};
}

/// {b(., lambda) restricted to V : lambda in L}, in dual coordinates of the frame of V.
/// Throws when b restricted to V is degenerate.
inline FramedLattice formLattice(const BilinearForm& b, const Lattice& l, const QMatrix& frame) {
  QMatrix restricted = frame.transpose() * b.matrix() * frame;
  if (restricted.rows() > 0 && determinant(restricted) == 0)
    throw ValidationError("form is degenerate on the subspace");
  QMatrix gens = frame.transpose() * b.matrix() * l.basisMatrix();
  size_t r = frame.cols();
  auto basis = hermiteBasis(gens.columns(), r);
  if (basis.size() != r) throw ValidationError("form lattice is not of full rank");
  return {frame, QMatrix::fromColumns(basis, r)};
}

}  // namespace tropic
