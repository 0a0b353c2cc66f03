#pragma once

#include "tropic/complex.hpp"

namespace tropic {

using Exponent = std::vector<long>;

/// f = sum a_m x^m over a valued field, recorded by exponents m and valuations v(a_m).
class TropicalPolynomial {
 public:
  struct Term {
    Exponent exp;
    Rational val;
  };

  TropicalPolynomial() = default;
  TropicalPolynomial(size_t n, std::vector<Term> terms) : n_(n), terms_(std::move(terms)) {
    if (terms_.empty()) throw ValidationError("tropical polynomial has no terms");
    for (const auto& t : terms_)
      if (t.exp.size() != n_) throw SchemaError("exponent of wrong dimension");
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.exp < b.exp; });
    for (size_t i = 1; i < terms_.size(); ++i)
      if (terms_[i].exp == terms_[i - 1].exp) throw ValidationError("repeated exponent in polynomial");
  }

  size_t dim() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }

  QVector exponentVector(size_t i) const {
    QVector e(n_);
    for (size_t j = 0; j < n_; ++j) e[j] = terms_[i].exp[j];
    return e;
  }

  /// Shifts valuations by m . c, which translates the corner locus by -c.
  TropicalPolynomial shifted(const QVector& c) const {
    auto t = terms_;
    for (size_t i = 0; i < t.size(); ++i) t[i].val += dot(exponentVector(i), c);
    return TropicalPolynomial(n_, t);
  }

 private:
  size_t n_ = 0;
  std::vector<Term> terms_;
};

struct ValResult {
  Rational value;
  std::vector<size_t> argmin;  // term indices attaining the minimum
};

/// min_m v(a_m) + m . u, with its minimizing terms.
inline ValResult valFunction(const TropicalPolynomial& f, const QVector& u) {
  ValResult r;
  for (size_t i = 0; i < f.terms().size(); ++i) {
    Rational v = f.terms()[i].val + dot(f.exponentVector(i), u);
    if (r.argmin.empty() || v < r.value) {
      r.value = v;
      r.argmin = {i};
    } else if (v == r.value) {
      r.argmin.push_back(i);
    }
  }
  return r;
}

/// Minimum of the valuation function over a polytope; attained at a vertex.
inline Rational supValuation(const TropicalPolynomial& f, const Polytope& delta) {
  Rational best = valFunction(f, delta.vertices()[0]).value;
  for (const auto& v : delta.vertices()) best = std::min(best, Rational(valFunction(f, v).value));
  return best;
}

struct TropicalHypersurface {
  Polytope window;
  PolytopalComplex complex;                   // corner locus inside the window
  std::vector<std::vector<size_t>> minimizers;  // per cell, at a relative interior point
  std::vector<Integer> weights;                 // lattice length of the dual edge; 0 off top cells

  PolytopalSet asSet() const {
    std::vector<Polytope> cells;
    for (auto i : complex.maximalCells()) cells.push_back(complex.cell(i));
    return PolytopalSet(complex.ambientDim(), cells);
  }
};

/// Corner locus of val(f) within a full-dimensional window.
inline TropicalHypersurface tropicalHypersurface(const TropicalPolynomial& f, const Polytope& window) {
  size_t n = f.dim();
  if (window.ambientDim() != n || window.dim() != static_cast<int>(n))
    throw ValidationError("window must be a full-dimensional polytope");
  const auto& T = f.terms();
  std::vector<Polytope> regions;
  for (size_t i = 0; i < T.size(); ++i)
    for (size_t j = i + 1; j < T.size(); ++j) {
      QVector mi = f.exponentVector(i), mj = f.exponentVector(j);
      std::vector<Hyperplane> eqs{{mi - mj, T[j].val - T[i].val}};
      std::vector<Halfspace> ineqs = window.facets();
      for (size_t k = 0; k < T.size(); ++k)
        if (k != i && k != j) {
          QVector d = f.exponentVector(k) - mi;
          ineqs.push_back({d, T[i].val - T[k].val});
        }
      if (auto r = Polytope::fromHalfspaces(n, eqs, ineqs)) regions.push_back(*r);
    }
  TropicalHypersurface h{window, PolytopalComplex::build(n, regions), {}, {}};
  for (const auto& c : h.complex.cells()) {
    auto r = valFunction(f, c.interiorPoint());
    h.minimizers.push_back(r.argmin);
    Integer w = 0;
    if (c.dim() + 1 == static_cast<int>(n)) {
      std::vector<Exponent> ex;
      for (auto i : r.argmin) ex.push_back(T[i].exp);
      std::sort(ex.begin(), ex.end());
      for (size_t k = 0; k < n; ++k) w = gcd(w, Integer(ex.back()[k] - ex.front()[k]));
    }
    h.weights.push_back(w);
  }
  return h;
}

/// Common zero set of several hypersurfaces inside the window.
inline PolytopalSet prevariety(const std::vector<TropicalPolynomial>& fs, const Polytope& window) {
  if (fs.empty()) return PolytopalSet(window.ambientDim(), {window});
  auto current = tropicalHypersurface(fs[0], window).asSet().members();
  for (size_t k = 1; k < fs.size(); ++k) {
    auto next = tropicalHypersurface(fs[k], window).asSet().members();
    std::vector<Polytope> meet;
    for (const auto& a : current)
      for (const auto& b : next)
        if (auto i = intersect(a, b)) meet.push_back(*i);
    std::sort(meet.begin(), meet.end());
    meet.erase(std::unique(meet.begin(), meet.end()), meet.end());
    current = PolytopalSet(window.ambientDim(), meet).maximalMembers();
  }
  return PolytopalSet(window.ambientDim(), current);
}

inline bool onBoundary(const Polytope& window, const QVector& u) {
  for (const auto& f : window.facets())
    if (f.tight(u)) return true;
  return false;
}

/// Whether p lies inside one facet of the window.
inline bool inBoundary(const Polytope& window, const Polytope& p) {
  for (const auto& f : window.facets()) {
    bool all = true;
    for (const auto& v : p.vertices())
      if (!f.tight(v)) all = false;
    if (all) return true;
  }
  return false;
}

struct PureDimensionReport {
  bool pure = true;
  std::vector<Polytope> witnesses;  // maximal members of the wrong dimension
};

/// Every maximal member has dimension d. With a window, members lying in its boundary are ignored.
inline PureDimensionReport checkPureDimension(const PolytopalSet& s, int d,
                                              const std::optional<Polytope>& window = std::nullopt) {
  PureDimensionReport r;
  for (const auto& p : s.maximalMembers()) {
    if (p.dim() == d) continue;
    if (window && inBoundary(*window, p)) continue;
    r.pure = false;
    r.witnesses.push_back(p);
  }
  return r;
}

struct ConcavityReport {
  bool concave = true;
  size_t checked = 0;
  std::vector<QVector> witnesses;
};

/// Relative interior points of every face of every member.
inline std::vector<QVector> faceSamples(const PolytopalSet& s) {
  std::set<QVector> pts;
  for (const auto& p : s.members())
    for (const auto& f : p.faceLattice().faces) {
      std::vector<QVector> vs;
      for (auto i : f) vs.push_back(p.vertices()[i]);
      pts.insert(centroid(vs));
    }
  return {pts.begin(), pts.end()};
}

/// Concavity at each sample off the window boundary. Empty samples means one per open face.
inline ConcavityReport checkTotalConcavity(const PolytopalSet& s, std::vector<QVector> samples,
                                           const std::optional<Polytope>& window = std::nullopt) {
  if (samples.empty()) samples = faceSamples(s);
  ConcavityReport r;
  for (const auto& u : samples) {
    if (window && onBoundary(*window, u)) continue;
    if (!s.contains(u)) continue;
    ++r.checked;
    if (!isConcaveAt(s, u)) {
      r.concave = false;
      r.witnesses.push_back(u);
    }
  }
  return r;
}

/// Each member is cut out by halfspaces with integer normals and offsets in the value group,
/// which for an algebraically closed field with rational valuations is Q. Checks that the stored
/// H-description has primitive integer normals and reproduces the vertex set.
inline bool isGammaRational(const PolytopalSet& s) {
  for (const auto& p : s.members()) {
    for (const auto& h : p.halfspaces())
      for (const auto& x : h.normal)
        if (!isInteger(x)) return false;
    auto back = Polytope::fromHalfspaces(p.ambientDim(), p.equations(), p.facets());
    if (!back || !(*back == p)) return false;
  }
  return true;
}

}  // namespace tropic
