#pragma once

#include <random>

#include "tropic/lattice.hpp"
#include "tropic/tropical.hpp"

namespace tropic {

/// u -> peg . u + c.
struct AffinePiece {
  QVector peg;
  Rational c;
  Rational operator()(const QVector& u) const { return dot(peg, u) + c; }
  bool operator==(const AffinePiece&) const = default;
};

/// Automorphy data z_lambda(u) = z_lambda(0) + b(u, lambda) with z_lambda(0) = q(lambda) + l(lambda).
struct CocycleData {
  QMatrix latticeBasis;  // columns
  BilinearForm form;
  QVector linear;

  /// Determines the linear part from the values z_{e_i}(0) on the lattice basis.
  static CocycleData fromBasisValues(const QMatrix& basis, const BilinearForm& b, const QVector& z) {
    size_t n = basis.rows();
    QVector rhs(n);
    for (size_t i = 0; i < n; ++i) rhs[i] = z[i] - b.quadratic(basis.column(i));
    return {basis, b, *solve(basis.transpose(), rhs)};
  }

  Rational z0(const QVector& lambda) const { return form.quadratic(lambda) + dot(linear, lambda); }
  Rational z(const QVector& lambda, const QVector& u) const { return z0(lambda) + form(u, lambda); }

  /// The piece on Delta + lambda determined by the piece on Delta.
  AffinePiece transport(const AffinePiece& p, const QVector& lambda) const {
    QVector peg = p.peg + form.matrix() * lambda;
    return {peg, p.c + z0(lambda) - dot(peg, lambda)};
  }
};

struct CheckReport {
  bool ok = true;
  std::string reason;
  std::string witness;
};

/// Continuous piecewise affine function with one affine piece per top cell, on a window complex or
/// on a periodic decomposition (pieces on representatives, extended by a cocycle).
class PLFunction {
 public:
  struct Located {
    Polytope cell;
    AffinePiece piece;
  };

  static PLFunction onComplex(PolytopalComplex c, std::map<size_t, AffinePiece> pieces) {
    PLFunction f;
    f.n_ = c.ambientDim();
    for (auto i : c.cellsOfDim(static_cast<int>(f.n_)))
      if (!pieces.count(i)) throw ValidationError("missing piece for top cell " + std::to_string(i));
    f.window_ = std::move(c);
    f.pieces_ = std::move(pieces);
    return f;
  }

  static PLFunction onPeriodic(PeriodicComplex c, std::map<size_t, AffinePiece> pieces, CocycleData z) {
    PLFunction f;
    f.n_ = c.ambientDim();
    for (size_t i = 0; i < c.representatives().size(); ++i)
      if (c.representatives()[i].dim() == static_cast<int>(f.n_) && !pieces.count(i))
        throw ValidationError("missing piece for top class " + std::to_string(i));
    f.periodic_ = std::move(c);
    f.pieces_ = std::move(pieces);
    f.cocycle_ = std::move(z);
    return f;
  }

  size_t ambientDim() const { return n_; }
  bool isPeriodic() const { return periodic_.has_value(); }
  const PeriodicComplex& periodicComplex() const { return *periodic_; }
  const PolytopalComplex& windowComplex() const { return *window_; }
  const CocycleData& cocycle() const { return *cocycle_; }
  const std::map<size_t, AffinePiece>& pieces() const { return pieces_; }

  /// All cells of the complex: window cells, or class representatives.
  const std::vector<Polytope>& cells() const {
    return periodic_ ? periodic_->representatives() : window_->cells();
  }

  Rational evaluate(const QVector& u) const { return locateTop(u).piece(u); }

  Located locateTop(const QVector& u) const {
    if (periodic_) {
      auto [r, k] = periodic_->locateTop(u);
      return translated(r, k);
    }
    for (const auto& [i, p] : pieces_)
      if (window_->cell(i).contains(u)) return {window_->cell(i), p};
    throw ValidationError("point " + toString(u) + " is outside the complex");
  }

  /// Top cells containing sigma, with their pieces.
  std::vector<Located> topCellsAround(const Polytope& sigma) const {
    std::vector<Located> out;
    if (periodic_) {
      auto [lo, hi] = sigma.boundingBox();
      for (const auto& [r, k] : periodic_->translatesMeeting(lo, hi)) {
        if (periodic_->representatives()[r].dim() != static_cast<int>(n_)) continue;
        auto loc = translated(r, k);
        if (loc.cell.contains(sigma)) out.push_back(std::move(loc));
      }
    } else {
      for (const auto& [i, p] : pieces_)
        if (window_->cell(i).contains(sigma)) out.push_back({window_->cell(i), p});
    }
    return out;
  }

  struct Wall {
    Polytope tau;
    Located a, b;
  };

  /// Codimension-one cells with exactly two adjacent top cells.
  std::vector<Wall> walls() const {
    std::vector<Wall> out;
    for (const auto& tau : cells()) {
      if (tau.dim() + 1 != static_cast<int>(n_)) continue;
      auto around = topCellsAround(tau);
      if (around.size() == 2) out.push_back({tau, around[0], around[1]});
    }
    return out;
  }

  CheckReport checkContinuity() const {
    for (const auto& w : walls())
      for (const auto& v : w.tau.vertices())
        if (w.a.piece(v) != w.b.piece(v))
          return {false, "pieces disagree on a shared face", toString(v)};
    return {};
  }

  /// Local convexity across every wall; on a convex support this is global convexity.
  CheckReport checkConvexity() const {
    auto cont = checkContinuity();
    if (!cont.ok) return cont;
    for (const auto& w : walls()) {
      QVector pa = w.a.cell.interiorPoint(), pb = w.b.cell.interiorPoint();
      if (w.b.piece(pa) > w.a.piece(pa) || w.a.piece(pb) > w.b.piece(pb))
        return {false, "not convex across a wall", toString(w.tau.interiorPoint())};
    }
    return {};
  }

  /// Convex, with distinct slopes on adjacent top cells (every top cell is a domain of affinity).
  CheckReport ampleCheck() const {
    auto conv = checkConvexity();
    if (!conv.ok) return conv;
    for (const auto& w : walls())
      if (w.a.piece.peg == w.b.piece.peg)
        return {false, "equal slopes on adjacent top cells", toString(w.tau.interiorPoint())};
    return {};
  }

  /// f(u + lambda) = f(u) + z_lambda(u), checked where transported pieces meet.
  CheckReport checkCocycle(const CocycleData& data) const {
    if (!periodic_) throw ValidationError("cocycle check needs a periodic decomposition");
    const auto& reps = periodic_->representatives();
    for (const auto& [a, pa] : pieces_) {
      auto [lo, hi] = reps[a].boundingBox();
      for (const auto& [b, k] : periodic_->translatesMeeting(lo, hi)) {
        if (reps[b].dim() != static_cast<int>(n_) || (a == b && isZero(k))) continue;
        Polytope other = periodic_->translateOf(b, k);
        auto meet = intersect(reps[a], other);
        if (!meet) continue;
        AffinePiece moved = data.transport(pieces_.at(b), periodic_->latticeVector(k));
        for (const auto& v : meet->vertices())
          if (moved(v) != pa(v))
            return {false, "transported piece disagrees", "class " + std::to_string(a) + " at " + toString(v)};
      }
    }
    return {};
  }

  /// Smallest N with N * peg integral for all pegs, including lattice shifts of slopes.
  Integer modelDenominator() const {
    Integer N = 1;
    for (const auto& [i, p] : pieces_) N = lcm(N, denominatorLcm(p.peg));
    if (cocycle_) {
      QMatrix shifts = cocycle_->form.matrix() * cocycle_->latticeBasis;
      N = lcm(N, denominatorLcm(shifts));
    }
    return N;
  }

  PLFunction scaledBy(const Rational& s) const {
    PLFunction g = *this;
    for (auto& [i, p] : g.pieces_) p = {s * p.peg, s * p.c};
    if (g.cocycle_) {
      g.cocycle_->form = BilinearForm(s * g.cocycle_->form.matrix());
      g.cocycle_->linear = s * g.cocycle_->linear;
    }
    return g;
  }

  /// conv{peg(Delta) : Delta a top cell containing sigma}.
  Polytope dualCell(const Polytope& sigma) const {
    std::vector<QVector> pegs;
    for (const auto& loc : topCellsAround(sigma)) pegs.push_back(loc.piece.peg);
    if (pegs.empty()) throw ValidationError("cell has no adjacent top cells");
    return Polytope::hull(std::move(pegs));
  }

  /// {w : w . (u - u0) <= peg(Delta) . (u - u0) for u in Delta, Delta around u0} at a vertex u0.
  std::optional<Polytope> dualCellByInequalities(const QVector& u0) const {
    std::vector<Halfspace> h;
    std::vector<QVector> normals;
    for (const auto& loc : topCellsAround(hullFromPoints({u0})))
      for (const auto& v : loc.cell.vertices()) {
        QVector d = u0 - v;
        if (isZero(d)) continue;
        h.push_back({d, dot(d, loc.piece.peg)});
        normals.push_back(d);
      }
    if (rankOf(normals, n_) < n_) return std::nullopt;
    return Polytope::fromHalfspaces(n_, {}, h);
  }

  /// Pairs (cell, dual cell) over all cells.
  std::vector<std::pair<Polytope, Polytope>> dualComplex() const {
    std::vector<std::pair<Polytope, Polytope>> out;
    for (const auto& c : cells())
      if (!topCellsAround(c).empty()) out.emplace_back(c, dualCell(c));
    return out;
  }

  /// d! vol(dual cell) / vol(Z^n cap Delta(u)^perp) at a point whose open face has dimension n - d.
  Integer degreeAt(const QVector& u, unsigned d) const {
    Polytope face = openFace(u);
    if (face.dim() != static_cast<int>(n_) - static_cast<int>(d))
      throw ValidationError("open face at " + toString(u) + " has dimension " + std::to_string(face.dim()));
    for (const auto& loc : topCellsAround(face))
      for (const auto& x : loc.piece.peg)
        if (!isInteger(x)) throw ValidationError("degree needs integral slopes");
    Polytope dual = dualCell(face);
    if (dual.dim() < static_cast<int>(d)) return 0;
    Rational deg = Rational(factorial(d)) * volume(dual);
    if (!isInteger(deg)) throw Error("non-integral degree");
    return deg.get_num();
  }

  /// Cell containing u in its relative interior.
  Polytope openFace(const QVector& u) const {
    if (periodic_) {
      auto [r, k] = periodic_->locate(u);
      return periodic_->translateOf(r, k);
    }
    auto i = window_->locate(u);
    if (!i) throw ValidationError("point " + toString(u) + " is outside the complex");
    return window_->cell(*i);
  }

 private:
  Located translated(size_t rep, const QVector& k) const {
    return {periodic_->translateOf(rep, k), cocycle_->transport(pieces_.at(rep), periodic_->latticeVector(k))};
  }

  size_t n_ = 0;
  std::optional<PolytopalComplex> window_;
  std::optional<PeriodicComplex> periodic_;
  std::map<size_t, AffinePiece> pieces_;
  std::optional<CocycleData> cocycle_;
};

/// Whether f (with its own cocycle) is a model function: rational slopes always are; reports N.
struct ModelCheck {
  bool ok;
  Integer N;
};

inline ModelCheck modelFunctionCheck(const PLFunction& f) { return {true, f.modelDenominator()}; }

// ---------------------------------------------------------------------------------------------
// Voronoi model functions

/// Perturbation of the slopes and constants attached to the points of (1/2) Lambda mod Lambda.
struct ModelPerturbation {
  std::vector<QVector> slope;
  std::vector<Rational> constant;
};

namespace detail {

inline std::vector<QVector> halfLatticePoints(size_t n) {
  std::vector<QVector> th;
  for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
    QVector t(n);
    for (size_t i = 0; i < n; ++i) t[i] = (mask >> i) & 1 ? Rational(1, 2) : Rational(0);
    th.push_back(t);
  }
  return th;
}

}  // namespace detail

/// g = max over i, lambda of A_{i,lambda} with A_{i,lambda}(u) = b(u, u_i + lambda) - q(u_i + lambda)
/// for u_i in (1/2) Lambda mod Lambda, optionally perturbed. For a nonzero linear part l the
/// construction is run for the form 2b and the result is halved and shifted by l.
inline PLFunction voronoiModelFunction(const Lattice& lambda, const BilinearForm& b, const QVector& ell,
                                       const std::optional<ModelPerturbation>& pert = std::nullopt) {
  size_t n = lambda.ambientDim();
  if (!lambda.isFullRank()) throw ValidationError("lattice must have full rank");
  if (b.dim() != n || ell.size() != n) throw SchemaError("form or linear part of wrong dimension");
  if (!b.isPositiveDefinite()) throw ValidationError("form is not positive definite");
  QMatrix L = lambda.basisMatrix();
  QMatrix Bh = Rational(2) * b.matrix();
  BilinearForm bh(Bh);
  auto thetas = detail::halfLatticePoints(n);
  size_t r = thetas.size();
  std::vector<QVector> u(r), m(r);
  std::vector<Rational> c(r);
  for (size_t i = 0; i < r; ++i) {
    u[i] = L * thetas[i];
    m[i] = Bh * u[i];
    c[i] = -bh.quadratic(u[i]);
    if (pert) {
      m[i] = m[i] + pert->slope.at(i);
      c[i] += pert->constant.at(i);
    }
  }
  auto piece = [&](size_t i, const QVector& lam) {
    return AffinePiece{m[i] + Bh * lam, c[i] - bh.quadratic(lam) - dot(m[i], lam)};
  };
  QMatrix Linv = inverse(L);

  std::vector<Polytope> cells;
  for (long R = 2; R <= 5 && cells.empty(); ++R) {
    bool ok = true;
    std::vector<Polytope> found;
    for (size_t i = 0; i < r && ok; ++i) {
      AffinePiece self = piece(i, zeros(n));
      std::vector<Halfspace> h;
      std::vector<long> a(n, -R);
      while (true) {
        QVector lam = L * QVector(a.begin(), a.end());
        for (size_t j = 0; j < r; ++j) {
          if (j == i && isZero(lam)) continue;
          AffinePiece other = piece(j, lam);
          QVector d = self.peg - other.peg;
          if (isZero(d)) continue;
          h.push_back({d, other.c - self.c});
        }
        size_t k = 0;
        while (k < n && a[k] == R) {
          a[k] = -R;
          ++k;
        }
        if (k == n) break;
        ++a[k];
      }
      // bounding region in lattice coordinates, |x - theta_i| <= R / 2
      std::vector<Halfspace> boxH;
      for (size_t k = 0; k < n; ++k) {
        QVector row = Linv.row(k);
        boxH.push_back({row, thetas[i][k] - Rational(R, 2)});
        boxH.push_back({-row, -thetas[i][k] - Rational(R, 2)});
      }
      auto all = h;
      all.insert(all.end(), boxH.begin(), boxH.end());
      auto cell = Polytope::fromHalfspaces(n, {}, all);
      if (!cell || cell->dim() != static_cast<int>(n)) {
        ok = false;
        break;
      }
      for (const auto& v : cell->vertices())
        for (const auto& bh2 : boxH)
          if (bh2.tight(v)) ok = false;
      found.push_back(*cell);
    }
    Rational vol = 0;
    for (const auto& p : found) vol += p.lebesgueVolume();
    if (ok && vol == abs(determinant(L))) cells = std::move(found);
  }
  if (cells.empty()) throw ValidationError("could not resolve the Voronoi decomposition");

  PeriodicComplex C = PeriodicComplex::build(L, cells);
  CocycleData z{L, b, ell};
  std::map<size_t, AffinePiece> pieces;
  for (size_t i = 0; i < r; ++i) {
    auto [rep, k] = C.canonical(cells[i]);
    AffinePiece p = piece(i, -(L * k));
    pieces[*C.repIndex(rep)] = {Rational(1, 2) * p.peg + ell, Rational(1, 2) * p.c};
  }
  return PLFunction::onPeriodic(std::move(C), std::move(pieces), z);
}

struct GenericityReport {
  bool generic = true;
  std::string reason;
  std::optional<Polytope> sigma, delta;
};

/// Closure of a finite polytope list under taking faces, deduplicated.
inline std::vector<Polytope> faceClosure(const std::vector<Polytope>& ps) {
  std::map<std::vector<QVector>, Polytope> all;
  for (const auto& p : ps)
    for (size_t f = 0; f < p.faceLattice().faces.size(); ++f) {
      auto q = p.facePolytope(f);
      all.emplace(q.vertices(), q);
    }
  std::vector<Polytope> out;
  for (auto& [k, p] : all) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

/// Genericity of (1/m) C against the periodic polyhedral set generated by sigma: for every
/// sigma and every translate of every cell Delta, with D = dim sigma + dim Delta - n, the affine
/// spans meet in dimension D when D >= 0 and are disjoint when D < 0.
inline GenericityReport isGeneric(const PeriodicComplex& c, const std::vector<Polytope>& sigma, unsigned m) {
  size_t n = c.ambientDim();
  PeriodicComplex cm = m == 1 ? c : c.scaled(m);
  QMatrix B = c.latticeBasis();
  for (const auto& s : faceClosure(sigma))
    for (const auto& delta : cm.representatives()) {
      int D = s.dim() + delta.dim() - static_cast<int>(n);
      auto ls = s.directions(), ld = delta.directions();
      auto sum = ls;
      sum.insert(sum.end(), ld.begin(), ld.end());
      if (D >= 0) {
        if (rankOf(sum, n) != n)
          return {false, "affine spans meet in the wrong dimension", s, delta};
        continue;
      }
      // A_sigma meets A_delta + lambda iff lambda in (p_sigma - p_delta) + L_sigma + L_delta
      auto normals = orthogonalComplement(sum, n);
      QMatrix E = QMatrix::fromRows(normals, n);
      QVector rhs = E * (s.vertices()[0] - delta.vertices()[0]);
      if (integerSolution(E * B, rhs))
        return {false, "affine spans meet although dimensions are complementary-deficient", s, delta};
    }
  return {};
}

struct PerturbResult {
  PLFunction model;
  unsigned attempts = 0;  // 0 when the unperturbed construction was already generic
  std::vector<GenericityReport> perScale;
  TransversalityReport transversality;
};

/// Seeded rational perturbation of the Voronoi model until (1/m) C is generic for m <= mMax,
/// transversal to the top-dimensional members of sigma, and the model function stays ample.
inline PerturbResult perturbToGeneric(const Lattice& lambda, const BilinearForm& b, const QVector& ell,
                                      const std::vector<Polytope>& sigma, unsigned mMax, uint64_t seed,
                                      unsigned maxAttempts = 40) {
  size_t n = lambda.ambientDim();
  std::mt19937_64 rng(seed);
  Integer D = lcm(denominatorLcm(lambda.basisMatrix()), denominatorLcm(b.matrix()));
  for (const auto& s : sigma)
    for (const auto& v : s.vertices()) D = lcm(D, denominatorLcm(v));
  D = lcm(D, Integer(4));

  std::vector<Polytope> top;
  int sdim = -1;
  for (const auto& s : sigma) sdim = std::max(sdim, s.dim());
  for (const auto& s : sigma)
    if (s.dim() == sdim) top.push_back(s);

  for (unsigned attempt = 0; attempt <= maxAttempts; ++attempt) {
    std::optional<ModelPerturbation> pert;
    if (attempt > 0) {
      ModelPerturbation p;
      // constants get an extra prime in the denominator so that walls avoid lattice translates
      // of the rational points of sigma
      Integer den = D * attempt * 8 * 97;
      auto draw = [&](const Integer& q) {
        long r = static_cast<long>(rng() % 193) - 96;
        if (r % 101 == 0) r += 1;
        return frac(Integer(r), q);
      };
      for (size_t i = 0; i < (size_t(1) << n); ++i) {
        QVector s(n);
        for (auto& x : s) x = draw(den);
        p.slope.push_back(s);
        p.constant.push_back(draw(den * 101));
      }
      pert = p;
    }
    std::optional<PLFunction> g;
    try {
      g = voronoiModelFunction(lambda, b, ell, pert);
    } catch (const ValidationError&) {
      continue;
    }
    if (!g->ampleCheck().ok) continue;
    PerturbResult res{*g, attempt, {}, {}};
    bool good = true;
    for (unsigned m = 1; m <= mMax && good; ++m) {
      res.perScale.push_back(isGeneric(g->periodicComplex(), sigma, m));
      if (!res.perScale.back().generic) good = false;
    }
    if (!good) continue;
    if (!top.empty()) {
      for (unsigned m = 1; m <= mMax && good; ++m) {
        auto cm = m == 1 ? g->periodicComplex() : g->periodicComplex().scaled(m);
        res.transversality = isTransversal(cm, PolytopalSet(n, top));
        if (!res.transversality.transversal) good = false;
      }
      if (!good) continue;
    }
    return res;
  }
  throw ValidationError("no generic perturbation found");
}

}  // namespace tropic
