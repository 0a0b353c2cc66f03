#pragma once

#include <map>
#include <memory>
#include <set>

#include "tropic/double_description.hpp"
#include "tropic/smith.hpp"

namespace tropic {

/// The closed halfspace normal . u >= offset. Normals are primitive integer vectors.
struct Halfspace {
  QVector normal;
  Rational offset;
  bool contains(const QVector& u) const { return dot(normal, u) >= offset; }
  bool tight(const QVector& u) const { return dot(normal, u) == offset; }
  bool operator==(const Halfspace&) const = default;
  auto operator<=>(const Halfspace& o) const {
    if (normal != o.normal) return normal < o.normal ? std::strong_ordering::less : std::strong_ordering::greater;
    if (offset != o.offset) return offset < o.offset ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
};

/// The hyperplane normal . u == offset.
struct Hyperplane {
  QVector normal;
  Rational offset;
  bool contains(const QVector& u) const { return dot(normal, u) == offset; }
  bool operator==(const Hyperplane&) const = default;
};

/// Scales (normal, offset) so that normal is a primitive integer vector.
inline Halfspace makeHalfspace(const QVector& normal, const Rational& offset) {
  QVector p = primitive(normal);
  size_t i = 0;
  while (normal[i] == 0) ++i;
  Rational scale = p[i] / normal[i];
  return {p, scale * offset};
}

struct FaceLattice {
  std::vector<std::vector<size_t>> faces;  // vertex index sets, sorted by (dim, indices)
  std::vector<int> dims;
  std::vector<std::vector<size_t>> facetsOf;  // faces of dimension one less contained in each face
};

class Polytope {
 public:
  /// Convex hull of a nonempty finite point set, of any dimension.
  static Polytope hull(std::vector<QVector> points) {
    if (points.empty()) throw ValidationError("convex hull of an empty point set");
    size_t n = points[0].size();
    for (const auto& p : points)
      if (p.size() != n) throw SchemaError("points of mixed dimension");
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    Polytope P;
    P.n_ = n;
    const QVector& p0 = points[0];
    std::vector<QVector> dirs;
    for (size_t i = 1; i < points.size(); ++i) dirs.push_back(points[i] - p0);
    std::vector<size_t> pivots;
    if (!dirs.empty()) pivots = rref(QMatrix::fromRows(dirs, n)).pivots;
    size_t k = pivots.size();
    P.dim_ = static_cast<int>(k);

    std::vector<QVector> eqNormals =
        dirs.empty() ? orthogonalComplement({}, n) : nullspace(QMatrix::fromRows(dirs, n));
    for (const auto& e : rowSpaceBasis(eqNormals, n)) {
      QVector m = primitive(e);
      P.equations_.push_back({m, dot(m, p0)});
    }
    if (k == 0) {
      P.vertices_ = {p0};
      P.buildFaces();
      return P;
    }

    auto project = [&](const QVector& u) {
      QVector y(k);
      for (size_t j = 0; j < k; ++j) y[j] = u[pivots[j]];
      return y;
    };
    QMatrix cons(points.size(), k + 1);
    for (size_t i = 0; i < points.size(); ++i) {
      QVector y = project(points[i]);
      for (size_t j = 0; j < k; ++j) cons(i, j) = y[j];
      cons(i, k) = -1;
    }
    std::vector<QVector> projectedNormals;
    for (const auto& ray : extremeRays(cons)) {
      QVector a(ray.begin(), ray.begin() + static_cast<long>(k));
      Integer g = 0;
      for (const auto& x : a) g = gcd(g, x.get_num());
      QVector normal = zeros(n);
      for (size_t j = 0; j < k; ++j) normal[pivots[j]] = a[j] / g;
      P.facets_.push_back({normal, ray[k] / Rational(g)});
    }
    std::sort(P.facets_.begin(), P.facets_.end());
    for (const auto& p : points) {
      std::vector<QVector> tightNormals;
      for (const auto& f : P.facets_)
        if (f.tight(p)) tightNormals.push_back(project(f.normal));
      if (rankOf(tightNormals, k) == k) P.vertices_.push_back(p);
    }
    P.buildFaces();
    return P;
  }

  /// The set {u : equations hold, inequalities hold}, or nullopt if empty. Throws if unbounded.
  static std::optional<Polytope> fromHalfspaces(size_t n, const std::vector<Hyperplane>& eqs,
                                                const std::vector<Halfspace>& ineqs) {
    QVector p = zeros(n);
    std::vector<QVector> N;
    if (eqs.empty()) {
      for (size_t i = 0; i < n; ++i) N.push_back(unitVector(n, i));
    } else {
      std::vector<QVector> rows;
      QVector rhs;
      for (const auto& e : eqs) {
        rows.push_back(e.normal);
        rhs.push_back(e.offset);
      }
      QMatrix E = QMatrix::fromRows(rows, n);
      auto sol = solve(E, rhs);
      if (!sol) return std::nullopt;
      p = *sol;
      N = nullspace(E);
    }
    size_t k = N.size();
    QMatrix Nm = QMatrix::fromColumns(N, n);
    std::vector<QVector> A;
    QVector b;
    for (const auto& h : ineqs) {
      QVector a = Nm.transpose() * h.normal;
      Rational rhs = h.offset - dot(h.normal, p);
      if (isZero(a)) {
        if (rhs > 0) return std::nullopt;
        continue;
      }
      A.push_back(a);
      b.push_back(rhs);
    }
    if (k == 0) return hull({p});
    if (A.empty()) throw ValidationError("unbounded halfspace intersection");
    auto Q = rowSpaceBasis(A, k);
    size_t r = Q.size();
    QMatrix Qm = QMatrix::fromColumns(Q, k);
    QMatrix Am = QMatrix::fromRows(A, k) * Qm;
    QMatrix cone(A.size() + 1, r + 1);
    for (size_t i = 0; i < A.size(); ++i) {
      for (size_t j = 0; j < r; ++j) cone(i, j) = Am(i, j);
      cone(i, r) = -b[i];
    }
    cone(A.size(), r) = 1;
    std::vector<QVector> verts;
    bool recession = false;
    for (const auto& ray : extremeRays(cone)) {
      if (ray[r] == 0) {
        recession = true;
        continue;
      }
      QVector z(ray.begin(), ray.begin() + static_cast<long>(r));
      QVector y = Qm * ((1 / ray[r]) * z);
      verts.push_back(p + Nm * y);
    }
    if (verts.empty()) return std::nullopt;
    if (recession || r < k) throw ValidationError("unbounded halfspace intersection");
    return hull(std::move(verts));
  }

  size_t ambientDim() const { return n_; }
  int dim() const { return dim_; }
  const std::vector<QVector>& vertices() const { return vertices_; }
  const std::vector<Halfspace>& facets() const { return facets_; }
  const std::vector<Hyperplane>& equations() const { return equations_; }

  /// Full H-representation: facet inequalities plus both sides of each equation.
  std::vector<Halfspace> halfspaces() const {
    std::vector<Halfspace> h = facets_;
    for (const auto& e : equations_) {
      h.push_back({e.normal, e.offset});
      h.push_back({-e.normal, -e.offset});
    }
    return h;
  }

  bool contains(const QVector& u) const {
    for (const auto& e : equations_)
      if (!e.contains(u)) return false;
    for (const auto& f : facets_)
      if (!f.contains(u)) return false;
    return true;
  }

  bool containsInRelativeInterior(const QVector& u) const {
    if (!contains(u)) return false;
    for (const auto& f : facets_)
      if (f.tight(u)) return false;
    return true;
  }

  bool contains(const Polytope& q) const {
    for (const auto& v : q.vertices_)
      if (!contains(v)) return false;
    return true;
  }

  QVector interiorPoint() const { return centroid(vertices_); }

  /// Basis of the linear space parallel to the affine span.
  std::vector<QVector> directions() const {
    std::vector<QVector> d;
    for (size_t i = 1; i < vertices_.size(); ++i) d.push_back(vertices_[i] - vertices_[0]);
    return rowSpaceBasis(d, n_);
  }

  const FaceLattice& faceLattice() const { return *lattice_; }

  /// Index into faceLattice() of the smallest face containing u; throws if u is outside.
  size_t openFaceContaining(const QVector& u) const {
    if (!contains(u)) throw ValidationError("point " + toString(u) + " is not in the polytope");
    std::vector<size_t> verts(vertices_.size());
    for (size_t i = 0; i < verts.size(); ++i) verts[i] = i;
    for (size_t f = 0; f < facets_.size(); ++f) {
      if (!facets_[f].tight(u)) continue;
      std::vector<size_t> keep;
      std::set_intersection(verts.begin(), verts.end(), facetVertices_[f].begin(),
                            facetVertices_[f].end(), std::back_inserter(keep));
      verts = std::move(keep);
    }
    return faceIndex(verts);
  }

  size_t faceIndex(const std::vector<size_t>& verts) const {
    const auto& F = lattice_->faces;
    for (size_t i = 0; i < F.size(); ++i)
      if (F[i] == verts) return i;
    throw Error("vertex set is not a face");
  }

  Polytope facePolytope(size_t faceIdx) const {
    std::vector<QVector> pts;
    for (auto i : lattice_->faces[faceIdx]) pts.push_back(vertices_[i]);
    return hull(std::move(pts));
  }

  /// All faces of dimension k.
  std::vector<Polytope> faces(int k) const {
    if (k < 0 || k > dim_) throw ValidationError("face dimension " + std::to_string(k) + " out of range");
    std::vector<Polytope> out;
    for (size_t i = 0; i < lattice_->faces.size(); ++i)
      if (lattice_->dims[i] == k) out.push_back(facePolytope(i));
    return out;
  }

  /// Whether q is a face of this polytope.
  bool hasFace(const Polytope& q) const {
    std::vector<size_t> idx;
    for (const auto& v : q.vertices_) {
      auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
      if (it == vertices_.end() || *it != v) return false;
      idx.push_back(static_cast<size_t>(it - vertices_.begin()));
    }
    for (const auto& f : lattice_->faces)
      if (f == idx) return true;
    return false;
  }

  /// Simplices (as vertex index lists) of a triangulation of the given face.
  std::vector<std::vector<size_t>> triangulate(size_t faceIdx) const {
    const auto& L = *lattice_;
    const auto& F = L.faces[faceIdx];
    if (L.dims[faceIdx] == 0) return {{F[0]}};
    size_t apex = F[0];
    std::vector<std::vector<size_t>> out;
    for (auto g : L.facetsOf[faceIdx]) {
      if (std::binary_search(L.faces[g].begin(), L.faces[g].end(), apex)) continue;
      for (auto s : triangulate(g)) {
        s.insert(s.begin(), apex);
        out.push_back(std::move(s));
      }
    }
    return out;
  }

  /// n-dimensional Lebesgue volume; zero when the polytope is lower dimensional.
  Rational lebesgueVolume() const {
    if (static_cast<size_t>(dim_) < n_) return 0;
    if (n_ == 0) return 1;
    Rational total = 0;
    for (const auto& s : triangulate(lattice_->faces.size() - 1)) {
      QMatrix m(n_, n_);
      for (size_t j = 0; j < n_; ++j)
        for (size_t i = 0; i < n_; ++i) m(i, j) = vertices_[s[j + 1]][i] - vertices_[s[0]][i];
      total += abs(determinant(m));
    }
    return total / Rational(factorial(static_cast<unsigned>(n_)));
  }

  /// Volume measured in the coordinates y of u = vertices()[0] + frame * y.
  Rational volumeInFrame(const QMatrix& frame) const {
    if (static_cast<size_t>(dim_) != frame.cols()) throw Error("frame does not match dimension");
    if (dim_ == 0) return 1;
    std::vector<QVector> ys;
    for (const auto& v : vertices_) {
      auto y = solve(frame, v - vertices_[0]);
      if (!y) throw Error("frame does not span the affine hull");
      ys.push_back(*y);
    }
    return hull(std::move(ys)).lebesgueVolume();
  }

  bool operator==(const Polytope& o) const { return n_ == o.n_ && vertices_ == o.vertices_; }
  bool operator<(const Polytope& o) const {
    if (dim_ != o.dim_) return dim_ < o.dim_;
    return vertices_ < o.vertices_;
  }

  std::pair<QVector, QVector> boundingBox() const {
    QVector lo = vertices_[0], hi = vertices_[0];
    for (const auto& v : vertices_)
      for (size_t i = 0; i < n_; ++i) {
        if (v[i] < lo[i]) lo[i] = v[i];
        if (v[i] > hi[i]) hi[i] = v[i];
      }
    return {lo, hi};
  }

 private:
  void buildFaces() {
    facetVertices_.clear();
    for (const auto& f : facets_) {
      std::vector<size_t> idx;
      for (size_t i = 0; i < vertices_.size(); ++i)
        if (f.tight(vertices_[i])) idx.push_back(i);
      facetVertices_.push_back(std::move(idx));
    }
    std::vector<size_t> all(vertices_.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::set<std::vector<size_t>> seen{all};
    std::vector<std::vector<size_t>> queue{all};
    for (size_t q = 0; q < queue.size(); ++q)
      for (const auto& fv : facetVertices_) {
        std::vector<size_t> g;
        std::set_intersection(queue[q].begin(), queue[q].end(), fv.begin(), fv.end(),
                              std::back_inserter(g));
        if (g.empty() || seen.count(g)) continue;
        seen.insert(g);
        queue.push_back(std::move(g));
      }
    std::vector<std::pair<int, std::vector<size_t>>> faces;
    for (auto& f : queue) {
      std::vector<QVector> d;
      for (size_t i = 1; i < f.size(); ++i) d.push_back(vertices_[f[i]] - vertices_[f[0]]);
      faces.emplace_back(static_cast<int>(rankOf(d, n_)), std::move(f));
    }
    std::sort(faces.begin(), faces.end());
    auto L = std::make_shared<FaceLattice>();
    for (auto& [d, f] : faces) {
      L->dims.push_back(d);
      L->faces.push_back(std::move(f));
    }
    L->facetsOf.resize(L->faces.size());
    for (size_t i = 0; i < L->faces.size(); ++i)
      for (size_t j = 0; j < L->faces.size(); ++j)
        if (L->dims[j] + 1 == L->dims[i] &&
            std::includes(L->faces[i].begin(), L->faces[i].end(), L->faces[j].begin(),
                          L->faces[j].end()))
          L->facetsOf[i].push_back(j);
    lattice_ = std::move(L);
  }

  size_t n_ = 0;
  int dim_ = -1;
  std::vector<QVector> vertices_;
  std::vector<Hyperplane> equations_;
  std::vector<Halfspace> facets_;
  std::vector<std::vector<size_t>> facetVertices_;
  std::shared_ptr<const FaceLattice> lattice_;
};

inline Polytope hullFromPoints(std::vector<QVector> points) { return Polytope::hull(std::move(points)); }

inline std::optional<Polytope> intersect(const Polytope& a, const Polytope& b) {
  if (a.ambientDim() != b.ambientDim()) throw Error("ambient dimension mismatch");
  auto [alo, ahi] = a.boundingBox();
  auto [blo, bhi] = b.boundingBox();
  for (size_t i = 0; i < a.ambientDim(); ++i)
    if (ahi[i] < blo[i] || bhi[i] < alo[i]) return std::nullopt;
  auto eqs = a.equations();
  eqs.insert(eqs.end(), b.equations().begin(), b.equations().end());
  auto ineqs = a.facets();
  ineqs.insert(ineqs.end(), b.facets().begin(), b.facets().end());
  return Polytope::fromHalfspaces(a.ambientDim(), eqs, ineqs);
}

inline Polytope minkowskiSum(const Polytope& a, const Polytope& b) {
  if (a.ambientDim() != b.ambientDim()) throw SchemaError("Minkowski sum of polytopes in different dimensions");
  std::vector<QVector> pts;
  for (const auto& u : a.vertices())
    for (const auto& v : b.vertices()) pts.push_back(u + v);
  return Polytope::hull(std::move(pts));
}

inline Polytope translate(const Polytope& p, const QVector& t) {
  std::vector<QVector> pts;
  for (const auto& v : p.vertices()) pts.push_back(v + t);
  return Polytope::hull(std::move(pts));
}

inline Polytope scale(const Polytope& p, const Rational& s) {
  std::vector<QVector> pts;
  for (const auto& v : p.vertices()) pts.push_back(s * v);
  return Polytope::hull(std::move(pts));
}

inline Polytope affineImage(const Polytope& p, const QMatrix& m, const QVector& t) {
  std::vector<QVector> pts;
  for (const auto& v : p.vertices()) pts.push_back(m * v + t);
  return Polytope::hull(std::move(pts));
}

/// Box [lo, hi] in Q^n.
inline Polytope box(const QVector& lo, const QVector& hi) {
  size_t n = lo.size();
  std::vector<QVector> pts;
  for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
    QVector p(n);
    for (size_t i = 0; i < n; ++i) p[i] = (mask >> i) & 1 ? hi[i] : lo[i];
    pts.push_back(std::move(p));
  }
  return Polytope::hull(std::move(pts));
}

/// The simplex {u >= 0, sum u <= s} in Q^d.
inline Polytope standardSimplex(size_t d, const Rational& s) {
  std::vector<QVector> pts{zeros(d)};
  for (size_t i = 0; i < d; ++i) pts.push_back(s * unitVector(d, i));
  return Polytope::hull(std::move(pts));
}

/// Relative volume in lattice-normalized coordinates: a basis of the saturated lattice
/// span(P - P) cap Z^n has unit covolume. Points have volume 1.
inline Rational volume(const Polytope& p) {
  if (p.dim() == 0) return 1;
  if (static_cast<size_t>(p.dim()) == p.ambientDim()) return p.lebesgueVolume();
  auto basis = saturatedBasis(p.directions(), p.ambientDim());
  return p.volumeInFrame(QMatrix::fromColumns(basis, p.ambientDim()));
}

}  // namespace tropic
