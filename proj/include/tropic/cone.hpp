#pragma once

#include "tropic/polytope.hpp"

namespace tropic {

/// Polyhedral cone {sum t_i g_i : t_i >= 0}. Generators are normalized: extreme rays of the
/// pointed part plus both signs of a lineality basis.
class Cone {
 public:
  static Cone generatedBy(const std::vector<QVector>& gens, size_t n) {
    std::vector<QVector> nz;
    for (const auto& g : gens)
      if (!isZero(g)) nz.push_back(g);
    Cone c;
    c.n_ = n;
    auto dual = coneFromInequalities(nz, n);  // generators of the dual cone
    for (const auto& r : dual.rays) c.inequalities_.push_back(r);
    for (const auto& l : dual.lineality) {
      c.inequalities_.push_back(l);
      c.inequalities_.push_back(-l);
    }
    if (nz.empty()) {
      c.inequalities_.clear();
      for (size_t i = 0; i < n; ++i) {
        c.inequalities_.push_back(unitVector(n, i));
        c.inequalities_.push_back(-unitVector(n, i));
      }
    }
    auto prim = coneFromInequalities(c.inequalities_, n);
    c.rays_ = prim.rays;
    c.lineality_ = prim.lineality;
    return c;
  }

  static Cone fromInequalities(const std::vector<QVector>& ineqs, size_t n) {
    auto g = coneFromInequalities(ineqs, n);
    std::vector<QVector> gens = g.rays;
    for (const auto& l : g.lineality) {
      gens.push_back(l);
      gens.push_back(-l);
    }
    return generatedBy(gens, n);
  }

  size_t ambientDim() const { return n_; }
  const std::vector<QVector>& rays() const { return rays_; }
  const std::vector<QVector>& lineality() const { return lineality_; }
  /// h . x >= 0 for each row h describes the cone.
  const std::vector<QVector>& inequalities() const { return inequalities_; }

  std::vector<QVector> generators() const {
    std::vector<QVector> g = rays_;
    for (const auto& l : lineality_) {
      g.push_back(l);
      g.push_back(-l);
    }
    return g;
  }

  bool contains(const QVector& x) const {
    for (const auto& h : inequalities_)
      if (dot(h, x) < 0) return false;
    return true;
  }

  bool isLinearSubspace() const { return rays_.empty(); }

  int dim() const { return static_cast<int>(rankOf(generators(), n_)); }

 private:
  size_t n_ = 0;
  std::vector<QVector> rays_, lineality_, inequalities_;
};

/// {w : g . w >= 0 for every generator g}.
inline Cone dualCone(const Cone& c) { return Cone::fromInequalities(c.generators(), c.ambientDim()); }

/// Tangent cone of P at u: the cone generated by P - u.
inline Cone tangentCone(const Polytope& p, const QVector& u) {
  std::vector<QVector> gens;
  for (const auto& v : p.vertices()) gens.push_back(v - u);
  return Cone::generatedBy(gens, p.ambientDim());
}

/// Finite union of polytopes in a common ambient space.
class PolytopalSet {
 public:
  PolytopalSet() = default;
  PolytopalSet(size_t n, std::vector<Polytope> members) : n_(n), members_(std::move(members)) {
    for (const auto& p : members_)
      if (p.ambientDim() != n_) throw SchemaError("polytope of wrong ambient dimension");
  }
  size_t ambientDim() const { return n_; }
  const std::vector<Polytope>& members() const { return members_; }
  bool empty() const { return members_.empty(); }

  int dim() const {
    int d = -1;
    for (const auto& p : members_) d = std::max(d, p.dim());
    return d;
  }

  bool contains(const QVector& u) const {
    for (const auto& p : members_)
      if (p.contains(u)) return true;
    return false;
  }

  /// Members not contained in another member (duplicates kept once).
  std::vector<Polytope> maximalMembers() const {
    std::vector<Polytope> out;
    for (size_t i = 0; i < members_.size(); ++i) {
      bool maximal = true;
      for (size_t j = 0; j < members_.size() && maximal; ++j) {
        if (i == j || !members_[j].contains(members_[i])) continue;
        if (members_[j] == members_[i] && j > i) continue;
        if (members_[j] == members_[i] && j < i) maximal = false;
        if (!(members_[j] == members_[i])) maximal = false;
      }
      if (maximal) out.push_back(members_[i]);
    }
    return out;
  }

 private:
  size_t n_ = 0;
  std::vector<Polytope> members_;
};

/// Local cones at u of the members of S that contain u.
inline std::vector<Cone> localCone(const PolytopalSet& s, const QVector& u) {
  std::vector<Cone> cones;
  for (const auto& p : s.members())
    if (p.contains(u)) cones.push_back(tangentCone(p, u));
  if (cones.empty()) throw ValidationError("point " + toString(u) + " is not in the set");
  return cones;
}

/// Concavity at u: the convex hull of the local cone is a linear subspace, i.e. the negation of
/// each extreme direction lies in the hull.
inline bool isConcaveAt(const PolytopalSet& s, const QVector& u) {
  std::vector<QVector> gens;
  for (const auto& c : localCone(s, u)) {
    auto g = c.generators();
    gens.insert(gens.end(), g.begin(), g.end());
  }
  Cone hull = Cone::generatedBy(gens, s.ambientDim());
  for (const auto& r : hull.rays())
    if (!hull.contains(-r)) return false;
  return true;
}

}  // namespace tropic
