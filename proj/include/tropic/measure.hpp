#pragma once

#include <functional>

#include "tropic/lattice.hpp"
#include "tropic/polytope.hpp"

namespace tropic {

/// Mixed volume of d polytopes in Q^d by polarization; V(P, ..., P) = vol(P).
inline Rational mixedVolume(const std::vector<Polytope>& ps) {
  size_t d = ps.size();
  if (d == 0) return 1;
  for (const auto& p : ps)
    if (p.ambientDim() != d) throw ValidationError("mixed volume needs d polytopes in dimension d");
  Rational total = 0;
  for (size_t mask = 1; mask < (size_t(1) << d); ++mask) {
    std::optional<Polytope> sum;
    size_t count = 0;
    for (size_t i = 0; i < d; ++i)
      if ((mask >> i) & 1) {
        sum = sum ? minkowskiSum(*sum, ps[i]) : ps[i];
        ++count;
      }
    Rational v = sum->lebesgueVolume();
    total += (d - count) % 2 ? Rational(-v) : v;
  }
  return total / Rational(factorial(static_cast<unsigned>(d)));
}

/// Multilinear extension of a homogeneous degree-d function P of d symmetric matrices:
/// V(B_1, ..., B_d) = (1/d!) sum over nonempty S of (-1)^(d - |S|) P(sum_{j in S} B_j).
/// With P(B) the covolume of a form lattice this is the mixed volume of the fundamental domains,
/// normalized so that V(B, ..., B) = P(B).
inline Rational polarize(const std::vector<QMatrix>& forms, const std::function<Rational(const QMatrix&)>& P) {
  size_t d = forms.size();
  if (d == 0) return 1;
  Rational total = 0;
  for (size_t mask = 1; mask < (size_t(1) << d); ++mask) {
    QMatrix sum = forms[0];
    bool first = true;
    size_t count = 0;
    for (size_t i = 0; i < d; ++i)
      if ((mask >> i) & 1) {
        sum = first ? forms[i] : sum + forms[i];
        first = false;
        ++count;
      }
    Rational v = P(sum);
    total += (d - count) % 2 ? Rational(-v) : v;
  }
  return total / Rational(factorial(static_cast<unsigned>(d)));
}

/// Parallelepiped spanned by the columns of a matrix.
inline Polytope parallelepiped(const QMatrix& columns) {
  size_t d = columns.rows(), k = columns.cols();
  std::vector<QVector> pts;
  for (size_t mask = 0; mask < (size_t(1) << k); ++mask) {
    QVector p = zeros(d);
    for (size_t j = 0; j < k; ++j)
      if ((mask >> j) & 1) p = p + columns.column(j);
    pts.push_back(std::move(p));
  }
  return Polytope::hull(std::move(pts));
}

struct HaarPiece {
  Polytope support;
  Rational density;  // with respect to lattice-normalized Lebesgue measure in `frame` coordinates
  QMatrix frame;     // columns: Z-basis of the direction space of the support
  Rational volume;   // of the support, in frame coordinates
};

struct PiecewiseHaarMeasure {
  std::vector<HaarPiece> pieces;
};

inline Rational totalMass(const PiecewiseHaarMeasure& mu) {
  Rational m = 0;
  for (const auto& p : mu.pieces) m += p.density * p.volume;
  return m;
}

// ---------------------------------------------------------------------------------------------
// Tropical cycles in R^n / Lambda

/// Affine image u' -> M u' + t of the simplex {u' >= 0, sum u' <= vpi}.
struct CycleSimplex {
  QMatrix M;  // n x d, integral
  QVector t;
  Rational vpi;

  Polytope polytope() const {
    return affineImage(standardSimplex(M.cols(), vpi), M, t);
  }
};

struct TropicalCycleInput {
  size_t n = 0;
  Lattice lattice;
  Integer degree = 1;
  std::vector<CycleSimplex> simplices;

  size_t dim() const { return simplices.empty() ? 0 : simplices[0].M.cols(); }
};

/// Simplices sharing an affine span modulo Lambda, expressed in coordinates z of that span:
/// u = point + frame * stabilizer * z, so the stabilizer lattice becomes Z^d.
struct SpanGroup {
  QVector point;
  QMatrix frame;       // n x d, Z-basis of L cap Z^n
  QMatrix stabilizer;  // d x d, basis of Lambda cap L in frame coordinates
  std::vector<size_t> members;
  std::vector<Polytope> local;  // member simplices in z coordinates, shifted into the span

  QVector toAmbient(const QVector& z) const { return point + frame * (stabilizer * z); }
};

struct Atom {
  size_t group;
  std::vector<size_t> J;
  std::vector<Polytope> pieces;  // in z coordinates of the group
};

struct AtomDecomposition {
  std::vector<SpanGroup> groups;
  std::vector<Atom> atoms;
};

namespace detail {

inline std::vector<std::vector<long>> integerBoxPoints(const std::vector<Integer>& from,
                                                       const std::vector<Integer>& to) {
  std::vector<std::vector<long>> out;
  size_t d = from.size();
  for (size_t i = 0; i < d; ++i)
    if (from[i] > to[i]) return out;
  std::vector<long> k(d);
  for (size_t i = 0; i < d; ++i) k[i] = from[i].get_si();
  while (true) {
    out.push_back(k);
    size_t i = 0;
    while (i < d && k[i] == to[i].get_si()) {
      k[i] = from[i].get_si();
      ++i;
    }
    if (i == d) break;
    ++k[i];
  }
  return out;
}

/// Integer shifts k with bbox(p + k) meeting [lo, hi].
inline std::vector<QVector> shiftsMeeting(const Polytope& p, const QVector& lo, const QVector& hi) {
  auto [plo, phi] = p.boundingBox();
  std::vector<Integer> from, to;
  for (size_t i = 0; i < lo.size(); ++i) {
    from.push_back(-floorOf(phi[i] - lo[i]));
    to.push_back(floorOf(hi[i] - plo[i]));
  }
  std::vector<QVector> out;
  for (const auto& k : integerBoxPoints(from, to)) {
    QVector q(k.size());
    for (size_t i = 0; i < k.size(); ++i) q[i] = k[i];
    out.push_back(q);
  }
  return out;
}

}  // namespace detail

inline void validateCycleInput(const TropicalCycleInput& in) {
  if (in.simplices.empty()) throw ValidationError("tropical cycle has no simplices");
  if (in.degree < 1) throw ValidationError("degree must be a positive integer");
  if (!in.lattice.isFullRank() || in.lattice.ambientDim() != in.n)
    throw ValidationError("lattice must have full rank in the ambient space");
  size_t d = in.dim();
  for (size_t j = 0; j < in.simplices.size(); ++j) {
    const auto& s = in.simplices[j];
    std::string w = "simplex " + std::to_string(j);
    if (s.M.rows() != in.n || s.M.cols() != d || s.t.size() != in.n)
      throw SchemaError("simplex " + std::to_string(j) + " has the wrong shape");
    if (!s.M.isIntegral()) throw ValidationError("linear part must be integral", w);
    if (rank(s.M) != d) throw ValidationError("linear part is not one-to-one", w);
    if (s.vpi <= 0) throw ValidationError("simplex size must be positive", w);
  }
}

/// Atoms of the covering by the simplices modulo Lambda, by common refinement in each span.
inline AtomDecomposition atoms(const TropicalCycleInput& in) {
  validateCycleInput(in);
  size_t n = in.n, d = in.dim();
  QMatrix B = in.lattice.basisMatrix();
  AtomDecomposition out;

  struct Pending {
    QMatrix frame;
    QVector point;
    std::vector<std::pair<size_t, QVector>> members;  // index, shift into the span
  };
  std::vector<Pending> pending;
  for (size_t j = 0; j < in.simplices.size(); ++j) {
    const auto& s = in.simplices[j];
    QMatrix frame = QMatrix::fromColumns(saturatedBasis(s.M.columns(), n), n);
    bool placed = false;
    for (auto& g : pending) {
      if (!(g.frame == frame)) continue;
      auto normals = orthogonalComplement(frame.columns(), n);
      QVector shift = zeros(n);
      if (!normals.empty()) {
        QMatrix E = QMatrix::fromRows(normals, n);
        auto x = integerSolution(E * B, E * (g.point - s.t));
        if (!x) continue;
        shift = B * *x;
      }
      g.members.emplace_back(j, shift);
      placed = true;
      break;
    }
    if (!placed) pending.push_back({frame, s.t, {{j, zeros(n)}}});
  }

  for (auto& p : pending) {
    SpanGroup g;
    g.point = p.point;
    g.frame = p.frame;
    Lattice stab = stabilizerLattice(in.lattice, p.frame.columns());
    if (stab.rank() != d) throw ValidationError("affine span is not Lambda-rational");
    g.stabilizer = solveMatrix(p.frame, stab.basisMatrix());
    QMatrix toZ = inverse(g.stabilizer);
    for (const auto& [j, shift] : p.members) {
      g.members.push_back(j);
      std::vector<QVector> zs;
      Polytope rho = in.simplices[j].polytope();
      for (const auto& v : rho.vertices()) {
        QVector y = *solve(p.frame, v + shift - p.point);
        zs.push_back(toZ * y);
      }
      g.local.push_back(Polytope::hull(std::move(zs)));
    }
    // each simplex must embed in the torus away from its boundary
    for (size_t a = 0; a < g.local.size(); ++a) {
      auto [lo, hi] = g.local[a].boundingBox();
      for (const auto& k : detail::shiftsMeeting(g.local[a], lo, hi)) {
        if (isZero(k)) continue;
        auto meet = intersect(g.local[a], translate(g.local[a], k));
        if (meet && meet->dim() == static_cast<int>(d))
          throw ValidationError("simplex overlaps its own lattice translate",
                                "simplex " + std::to_string(g.members[a]));
      }
    }
    out.groups.push_back(std::move(g));
  }

  for (size_t gi = 0; gi < out.groups.size(); ++gi) {
    const auto& g = out.groups[gi];
    QVector lo = zeros(d), hi(d, Rational(1));
    std::vector<std::pair<size_t, Polytope>> translates;
    std::set<Halfspace> cuts;
    for (size_t a = 0; a < g.local.size(); ++a)
      for (const auto& k : detail::shiftsMeeting(g.local[a], lo, hi)) {
        Polytope t = translate(g.local[a], k);
        for (const auto& f : t.facets()) cuts.insert(f);
        translates.emplace_back(a, std::move(t));
      }
    std::vector<Polytope> cells{box(lo, hi)};
    for (const auto& h : cuts) {
      std::vector<Polytope> next;
      for (const auto& c : cells) {
        bool above = false, below = false;
        for (const auto& v : c.vertices()) {
          Rational s = dot(h.normal, v) - h.offset;
          if (s > 0) above = true;
          if (s < 0) below = true;
        }
        if (!(above && below)) {
          next.push_back(c);
          continue;
        }
        for (int sign : {1, -1}) {
          auto ineqs = c.facets();
          ineqs.push_back(sign > 0 ? h : Halfspace{-h.normal, -h.offset});
          auto part = Polytope::fromHalfspaces(d, {}, ineqs);
          if (part && part->dim() == static_cast<int>(d)) next.push_back(*part);
        }
      }
      cells = std::move(next);
    }
    std::map<std::vector<size_t>, std::vector<Polytope>> byJ;
    for (const auto& c : cells) {
      QVector z = c.interiorPoint();
      std::set<size_t> J;
      for (const auto& [a, t] : translates)
        if (t.containsInRelativeInterior(z)) J.insert(g.members[a]);
      if (!J.empty()) byJ[{J.begin(), J.end()}].push_back(c);
    }
    for (auto& [J, pieces] : byJ) out.atoms.push_back({gi, J, std::move(pieces)});
  }
  return out;
}

/// Generalized index [Z^d : image] = covolume(image) for a full-rank image lattice.
inline Rational generalizedIndex(const QMatrix& imageBasis) {
  Rational idx = abs(determinant(imageBasis));
  if (imageBasis.isIntegral()) {
    Integer viaSmith = indexOfImage(imageBasis, Lattice::standard(imageBasis.rows()));
    if (Rational(viaSmith) != idx) throw Error("index mismatch");
  }
  return idx;
}

struct AtomDensityTerms {
  std::vector<Rational> indices;  // per j in J
  Rational mixedVolume;
  Rational covolume;      // of Lambda(A) in frame coordinates
  Rational dualCovolume;  // of Lambda(A)* in dual frame coordinates
  Rational density;
};

/// Density of the canonical measure on an atom, computed in the coordinates of `frame`
/// (a basis of the span directions; lattice-normalized when it is a Z-basis of L cap Z^n).
inline AtomDensityTerms atomDensity(const TropicalCycleInput& in, const SpanGroup& g,
                                    const std::vector<size_t>& J, const std::vector<BilinearForm>& forms,
                                    const QMatrix& frame) {
  size_t d = in.dim();
  if (forms.size() != d) throw ValidationError("need one form per dimension of the cycle");
  Lattice stab = stabilizerLattice(in.lattice, frame.columns());
  FramedLattice lam = frameLattice(stab, frame);
  FramedLattice dual = dualLattice(lam);
  AtomDensityTerms t;
  t.covolume = covolume(lam);
  t.dualCovolume = covolume(dual);
  std::vector<QMatrix> ms;
  for (const auto& b : forms) {
    if (!b.isPositiveDefinite()) throw ValidationError("form is not positive definite");
    ms.push_back(b.matrix());
  }
  t.mixedVolume = polarize(ms, [&](const QMatrix& m) -> Rational { return covolume(formLattice(BilinearForm(m), stab, frame)); });
  Rational sum = 0;
  for (auto j : J) {
    QMatrix G = solveMatrix(frame, in.simplices[j].M);  // linear part in frame coordinates
    // dual map on Lambda(A)*: w -> G^T w
    Rational idx = generalizedIndex(G.transpose() * dual.basis);
    t.indices.push_back(idx);
    sum += idx;
  }
  (void)g;
  t.density = Rational(factorial(static_cast<unsigned>(d))) / Rational(in.degree) * sum * t.mixedVolume /
              (t.dualCovolume * t.covolume);
  return t;
}

/// Canonical measure of a tropical cycle: constant density on each atom.
inline PiecewiseHaarMeasure canonicalMeasure(const TropicalCycleInput& in, const std::vector<BilinearForm>& forms) {
  auto dec = atoms(in);
  PiecewiseHaarMeasure mu;
  for (const auto& atom : dec.atoms) {
    const auto& g = dec.groups[atom.group];
    auto terms = atomDensity(in, g, atom.J, forms, g.frame);
    Rational zScale = abs(determinant(g.stabilizer));
    for (const auto& piece : atom.pieces) {
      std::vector<QVector> verts;
      for (const auto& z : piece.vertices()) verts.push_back(g.toAmbient(z));
      mu.pieces.push_back({Polytope::hull(verts), terms.density, g.frame, zScale * piece.lebesgueVolume()});
    }
  }
  return mu;
}

/// Signed measure for forms given as differences b = plus - minus of positive definite forms,
/// expanded multilinearly.
inline PiecewiseHaarMeasure canonicalMeasureSigned(
    const TropicalCycleInput& in, const std::vector<std::pair<BilinearForm, BilinearForm>>& pairs) {
  size_t d = pairs.size();
  PiecewiseHaarMeasure total;
  for (size_t mask = 0; mask < (size_t(1) << d); ++mask) {
    std::vector<BilinearForm> forms;
    int sign = 1;
    for (size_t i = 0; i < d; ++i) {
      bool minus = (mask >> i) & 1;
      forms.push_back(minus ? pairs[i].second : pairs[i].first);
      if (minus) sign = -sign;
    }
    auto mu = canonicalMeasure(in, forms);
    if (total.pieces.empty()) {
      total = mu;
      for (auto& p : total.pieces) p.density *= sign;
    } else {
      for (size_t i = 0; i < mu.pieces.size(); ++i) total.pieces[i].density += sign * mu.pieces[i].density;
    }
  }
  return total;
}

/// Multiplicity (1/[X':X]) sum_j ind(Delta, f_j) of the component attached to a codimension-d cell.
inline Rational multiplicityOfComponent(const Polytope& delta, const TropicalCycleInput& in) {
  validateCycleInput(in);
  size_t n = in.n, d = in.dim();
  if (delta.dim() != static_cast<int>(n - d)) throw ValidationError("cell must have codimension d");
  auto dirs = delta.directions();
  QMatrix N = QMatrix::fromColumns(saturatedBasis(dirs, n), n);
  QMatrix B = in.lattice.basisMatrix(), Binv = inverse(B);
  Integer sum = 0;
  for (size_t j = 0; j < in.simplices.size(); ++j) {
    const auto& s = in.simplices[j];
    Polytope rho = s.polytope();
    // translates delta + B k meeting rho, found in lattice coordinates
    std::vector<QVector> zr, zd;
    for (const auto& v : rho.vertices()) zr.push_back(Binv * v);
    for (const auto& v : delta.vertices()) zd.push_back(Binv * v);
    Polytope pr = Polytope::hull(zr), pd = Polytope::hull(zd);
    auto [lo, hi] = pr.boundingBox();
    bool meets = false;
    for (const auto& k : detail::shiftsMeeting(pd, lo, hi))
      if (intersect(pr, translate(pd, k))) meets = true;
    if (!meets) continue;
    std::vector<QVector> both = dirs;
    for (const auto& c : s.M.columns()) both.push_back(c);
    if (rankOf(both, n) != n)
      throw ValidationError("cell is not transversal to simplex " + std::to_string(j));
    sum += indexOfImage(hconcat(N, s.M), Lattice::standard(n));
  }
  return Rational(sum) / Rational(in.degree);
}

// ---------------------------------------------------------------------------------------------
// Skeleta of strictly semistable models

struct Stratum {
  std::string id;
  std::vector<std::string> components;  // the first one carries the omitted coordinate
  Rational vpi;
  std::vector<std::string> closureOf;   // strata whose closure contains this one
  QMatrix M;                            // n x (components - 1)
  QVector t;
};

/// Glued simplices Delta_S = {u in R^{I_S}_{>=0} : sum u = vpi}, one per stratum.
class SkeletonComplex {
 public:
  static SkeletonComplex build(std::vector<Stratum> strata) {
    SkeletonComplex K;
    K.strata_ = std::move(strata);
    auto& S = K.strata_;
    for (size_t i = 0; i < S.size(); ++i) {
      if (K.byId_.count(S[i].id)) throw ValidationError("duplicate stratum id", S[i].id);
      K.byId_[S[i].id] = i;
      if (S[i].components.empty()) throw ValidationError("stratum without components", S[i].id);
      if (S[i].vpi <= 0) throw ValidationError("uniformizer valuation must be positive", S[i].id);
      auto c = S[i].components;
      std::sort(c.begin(), c.end());
      if (std::adjacent_find(c.begin(), c.end()) != c.end())
        throw ValidationError("repeated component", S[i].id);
    }
    // closure relation: parents[i] = strata whose closure contains i
    K.parents_.resize(S.size());
    for (size_t i = 0; i < S.size(); ++i)
      for (const auto& pid : S[i].closureOf) {
        auto it = K.byId_.find(pid);
        if (it == K.byId_.end()) throw ValidationError("unknown stratum in closure relation", S[i].id + " -> " + pid);
        size_t p = it->second;
        if (p == i) continue;
        const auto& sub = S[p].components;
        for (const auto& c : sub)
          if (std::find(S[i].components.begin(), S[i].components.end(), c) == S[i].components.end())
            throw ValidationError("components not nested along closure", S[i].id + " -> " + pid);
        if (sub.size() >= S[i].components.size())
          throw ValidationError("closure relation is not a strict order", S[i].id + " -> " + pid);
        if (S[p].vpi != S[i].vpi) throw ValidationError("glued strata have different metrics", S[i].id + " -> " + pid);
        K.parents_[i].push_back(p);
      }
    // faces (stratum, component subset) glued through shared closures
    std::map<std::pair<size_t, std::vector<std::string>>, size_t> node;
    auto nodeOf = [&](size_t s, std::vector<std::string> T) {
      std::sort(T.begin(), T.end());
      auto key = std::make_pair(s, T);
      auto it = node.find(key);
      if (it != node.end()) return it->second;
      size_t id = K.uf_.size();
      K.uf_.push_back(id);
      node.emplace(key, id);
      K.faceKeys_.push_back(key);
      return id;
    };
    for (size_t s = 0; s < S.size(); ++s) {
      size_t r = S[s].components.size();
      for (size_t mask = 1; mask < (size_t(1) << r); ++mask) {
        std::vector<std::string> T;
        for (size_t i = 0; i < r; ++i)
          if ((mask >> i) & 1) T.push_back(S[s].components[i]);
        nodeOf(s, T);
      }
    }
    for (size_t s = 0; s < S.size(); ++s)
      for (auto p : K.parents_[s]) {
        size_t r = S[p].components.size();
        for (size_t mask = 1; mask < (size_t(1) << r); ++mask) {
          std::vector<std::string> T;
          for (size_t i = 0; i < r; ++i)
            if ((mask >> i) & 1) T.push_back(S[p].components[i]);
          K.unite(nodeOf(s, T), nodeOf(p, T));
        }
      }
    return K;
  }

  const std::vector<Stratum>& strata() const { return strata_; }
  size_t simplexCount() const { return strata_.size(); }

  /// Number of distinct points after gluing among the simplex vertices.
  size_t vertexCount() const {
    std::set<size_t> roots;
    for (size_t i = 0; i < faceKeys_.size(); ++i)
      if (faceKeys_[i].second.size() == 1) roots.insert(find(i));
    return roots.size();
  }

  /// Glued face pairs: (stratum, stratum, shared component set).
  std::vector<std::tuple<size_t, size_t, std::vector<std::string>>> gluedFaces() const {
    std::vector<std::tuple<size_t, size_t, std::vector<std::string>>> out;
    std::map<size_t, size_t> first;
    for (size_t i = 0; i < faceKeys_.size(); ++i) {
      size_t r = find(i);
      auto it = first.find(r);
      if (it == first.end()) {
        first[r] = i;
        continue;
      }
      const auto& a = faceKeys_[it->second];
      const auto& b = faceKeys_[i];
      out.emplace_back(a.first, b.first, b.second);
    }
    return out;
  }

  /// Image of the vertex of Delta_S at component c under the stratum's affine map.
  QVector vertexImage(size_t s, const std::string& c) const {
    const auto& st = strata_[s];
    auto pos = static_cast<size_t>(std::find(st.components.begin(), st.components.end(), c) - st.components.begin());
    if (pos == 0) return st.t;
    return st.vpi * st.M.column(pos - 1) + st.t;
  }

  /// Stratum index with the largest rank of linear part, and that rank.
  std::pair<size_t, size_t> maxRank() const {
    size_t best = 0, r = 0;
    for (size_t s = 0; s < strata_.size(); ++s) {
      size_t k = strata_[s].M.cols() == 0 ? 0 : rank(strata_[s].M);
      if (k > r || s == 0) {
        r = k;
        best = s;
      }
    }
    return {best, r};
  }

 private:
  size_t find(size_t i) const {
    while (uf_[i] != i) i = uf_[i];
    return i;
  }
  void unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) uf_[std::max(a, b)] = std::min(a, b);
  }

  std::vector<Stratum> strata_;
  std::map<std::string, size_t> byId_;
  std::vector<std::vector<size_t>> parents_;
  std::vector<size_t> uf_;
  std::vector<std::pair<size_t, std::vector<std::string>>> faceKeys_;
};

inline SkeletonComplex buildSkeleton(std::vector<Stratum> strata) { return SkeletonComplex::build(std::move(strata)); }

/// Checks that the per-stratum affine maps agree on glued faces, up to one lattice vector per face
/// when a lattice is given.
inline void skeletonAffineMap(const SkeletonComplex& k, const std::optional<Lattice>& lambda = std::nullopt) {
  for (const auto& st : k.strata()) {
    if (st.M.cols() + 1 != st.components.size())
      throw SchemaError("stratum " + st.id + ": map needs one column per non-initial component");
    if (!st.M.isIntegral()) throw ValidationError("linear part must be integral", st.id);
  }
  for (const auto& [a, b, T] : k.gluedFaces()) {
    std::optional<QVector> shift;
    for (const auto& c : T) {
      QVector diff = k.vertexImage(a, c) - k.vertexImage(b, c);
      bool ok = lambda ? lambda->contains(diff) && (!shift || *shift == diff) : isZero(diff);
      if (!ok)
        throw ValidationError("affine maps disagree on a glued face",
                              k.strata()[a].id + "/" + k.strata()[b].id + " at component " + c);
      shift = diff;
    }
  }
}

struct SkeletonPiece {
  size_t stratum;
  Rational density;
};

/// Measure on the skeleton: density d! V(Lambda_S^{L_1..L_d}) / covol(Lambda_S) on each
/// non-degenerate d-simplex, zero on degenerate ones. Supports are the simplices
/// {u' >= 0, sum u' <= vpi} in the stratum's own coordinates.
inline PiecewiseHaarMeasure skeletonMeasure(const SkeletonComplex& k, const Lattice& lambda,
                                            const std::vector<BilinearForm>& forms) {
  size_t d = forms.size();
  size_t n = lambda.ambientDim();
  for (const auto& b : forms)
    if (!b.isPositiveDefinite()) throw ValidationError("form is not positive definite");
  PiecewiseHaarMeasure mu;
  for (const auto& st : k.strata()) {
    if (st.components.size() != d + 1) continue;
    Polytope support = standardSimplex(d, st.vpi);
    QMatrix frame = QMatrix::identity(d);
    if (st.M.rows() != n) throw SchemaError("stratum " + st.id + ": map has wrong target dimension");
    if (rank(st.M) < d) {
      mu.pieces.push_back({support, 0, frame, support.lebesgueVolume()});
      continue;
    }
    Lattice inSpan = stabilizerLattice(lambda, st.M.columns());
    QMatrix pre = solveMatrix(st.M, inSpan.basisMatrix());  // basis of Lambda_S
    Rational covol = abs(determinant(pre));
    std::vector<QMatrix> ms;
    for (const auto& b : forms) ms.push_back(b.matrix());
    // form lattice {b(l(.), l(mu)) : mu in Lambda_S}, the periodicity lattice of the dual decomposition
    auto formCovolume = [&](const QMatrix& m) -> Rational { return abs(determinant(st.M.transpose() * m * st.M * pre)); };
    Rational density = Rational(factorial(static_cast<unsigned>(d))) * polarize(ms, formCovolume) / covol;
    mu.pieces.push_back({support, density, frame, support.lebesgueVolume()});
  }
  return mu;
}

struct DimensionBound {
  size_t bound;
  std::string witness;
  size_t components;
};

/// Largest dimension of an image simplex, with a stratum attaining it.
inline DimensionBound dimensionBound(const SkeletonComplex& k) {
  if (k.strata().empty()) throw ValidationError("empty skeleton");
  auto [s, r] = k.maxRank();
  return {r, k.strata()[s].id, k.strata()[s].components.size()};
}

}  // namespace tropic
