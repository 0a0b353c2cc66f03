#include <gtest/gtest.h>

#include <random>

#include "tropic/plc.hpp"

using namespace tropic;

namespace {

QVector pt(std::initializer_list<Rational> xs) { return QVector(xs); }

// max over v in (1/2) Lambda near u of b(u, v) - q(v), plus the linear part
Rational voronoiOracle(const Lattice& lambda, const BilinearForm& b, const QVector& ell, const QVector& u) {
  size_t n = u.size();
  QMatrix L = lambda.basisMatrix();
  QVector x = inverse(L) * u;
  std::optional<Rational> best;
  std::vector<long> a(n);
  std::vector<long> base(n);
  for (size_t i = 0; i < n; ++i) base[i] = 2 * floorOf(x[i]).get_si() - 6;
  for (size_t i = 0; i < n; ++i) a[i] = base[i];
  while (true) {
    QVector h(n);
    for (size_t i = 0; i < n; ++i) h[i] = frac(a[i], 2);
    QVector v = L * h;
    Rational val = b(u, v) - b.quadratic(v);
    if (!best || val > *best) best = val;
    size_t i = 0;
    while (i < n && a[i] == base[i] + 14) {
      a[i] = base[i];
      ++i;
    }
    if (i == n) break;
    ++a[i];
  }
  return *best + dot(ell, u);
}

Rational dualCoveringSum(const PLFunction& g) {
  Rational sum = 0;
  const auto& C = g.periodicComplex();
  for (const auto& r : C.representatives())
    if (r.dim() == 0) sum += g.dualCell(r).lebesgueVolume();
  return sum;
}

Integer degreeSum(const PLFunction& g, Integer& N) {
  N = g.modelDenominator();
  auto h = g.scaledBy(Rational(N));
  Integer total = 0;
  unsigned n = static_cast<unsigned>(g.ambientDim());
  for (const auto& r : g.periodicComplex().representatives())
    if (r.dim() == 0) total += h.degreeAt(r.vertices()[0], n);
  return total;
}

}  // namespace

TEST(Cocycle, TransportMatchesDefinition) {
  BilinearForm b(QMatrix::fromRows({pt({2, 1}), pt({1, 2})}, 2));
  CocycleData z{QMatrix::identity(2), b, pt({frac(1, 3), 0})};
  AffinePiece p{pt({1, 2}), 5};
  QVector lambda = pt({1, -2}), u = pt({frac(1, 7), frac(2, 5)});
  AffinePiece q = z.transport(p, lambda);
  EXPECT_EQ(q(u + lambda), p(u) + z.z(lambda, u));
  auto back = CocycleData::fromBasisValues(QMatrix::identity(2), b, {z.z0(pt({1, 0})), z.z0(pt({0, 1}))});
  EXPECT_EQ(back.linear, z.linear);
}

TEST(Voronoi, OneDimensionalUnitForm) {
  auto g = voronoiModelFunction(Lattice::standard(1), BilinearForm::identity(1), pt({0}));
  const auto& C = g.periodicComplex();
  EXPECT_EQ(C.openFaceClassCount(0), 2u);
  EXPECT_EQ(C.openFaceClassCount(1), 2u);
  EXPECT_EQ(g.evaluate(pt({frac(1, 8)})), Rational(0));
  EXPECT_EQ(g.modelDenominator(), Integer(2));
  EXPECT_TRUE(g.ampleCheck().ok);
  EXPECT_TRUE(g.checkCocycle(g.cocycle()).ok);
}

TEST(Voronoi, ValuesMatchBruteForceMaximum) {
  std::mt19937_64 rng(31);
  struct Case {
    Lattice lambda;
    BilinearForm b;
    QVector ell;
  };
  std::vector<Case> cases{
      {Lattice::standard(1), BilinearForm(QMatrix::fromRows({pt({2})}, 1)), pt({0})},
      {Lattice::standard(2), BilinearForm::identity(2), pt({0, 0})},
      {Lattice::standard(2), BilinearForm(QMatrix::fromRows({pt({2, 1}), pt({1, 2})}, 2)), pt({frac(1, 3), 0})},
      {Lattice::generatedBy({pt({2, 0}), pt({1, 1})}, 2), BilinearForm(QMatrix::fromRows({pt({1, 0}), pt({0, 3})}, 2)),
       pt({0, frac(1, 2)})},
  };
  for (size_t c = 0; c < cases.size(); ++c) {
    const auto& k = cases[c];
    auto g = voronoiModelFunction(k.lambda, k.b, k.ell);
    size_t n = k.ell.size();
    for (int s = 0; s < 25; ++s) {
      QVector u(n);
      for (auto& x : u) x = frac(static_cast<long>(rng() % 81) - 40, 16);
      EXPECT_EQ(g.evaluate(u), voronoiOracle(k.lambda, k.b, k.ell, u)) << "case " << c << " at " << toString(u);
    }
    EXPECT_TRUE(g.ampleCheck().ok) << "case " << c;
    EXPECT_TRUE(g.checkCocycle(g.cocycle()).ok) << "case " << c;
    // dual cells of vertex classes tile the torus of the form lattice
    QMatrix BL = k.b.matrix() * k.lambda.basisMatrix();
    EXPECT_EQ(dualCoveringSum(g), abs(determinant(BL))) << "case " << c;
  }
}

TEST(Voronoi, HexagonalForm) {
  auto g = voronoiModelFunction(Lattice::standard(2), BilinearForm(QMatrix::fromRows({pt({2, 1}), pt({1, 2})}, 2)),
                                pt({frac(1, 3), 0}));
  const auto& C = g.periodicComplex();
  EXPECT_EQ(C.openFaceClassCount(0), 4u);
  EXPECT_EQ(C.openFaceClassCount(1), 12u);
  EXPECT_EQ(C.openFaceClassCount(2), 8u);
}

TEST(Degrees, SumEqualsScaledDualVolume) {
  auto g1 = voronoiModelFunction(Lattice::standard(1), BilinearForm::identity(1), pt({0}));
  Integer N;
  EXPECT_EQ(degreeSum(g1, N), Integer(2));
  EXPECT_EQ(N, Integer(2));
  auto g2 = voronoiModelFunction(Lattice::standard(1), BilinearForm(QMatrix::fromRows({pt({2})}, 1)), pt({0}));
  EXPECT_EQ(degreeSum(g2, N), Integer(2));
  EXPECT_EQ(N, Integer(1));
  auto g3 = voronoiModelFunction(Lattice::standard(2), BilinearForm::identity(2), pt({0, 0}));
  EXPECT_EQ(degreeSum(g3, N), Integer(8));
  EXPECT_EQ(N, Integer(2));
}

TEST(PLFunction, ConvexityAndAmpleness) {
  auto K = PolytopalComplex::build(1, {hullFromPoints({pt({-1}), pt({0})}), hullFromPoints({pt({0}), pt({1})})});
  auto left = *K.indexOf(hullFromPoints({pt({-1}), pt({0})}));
  auto right = *K.indexOf(hullFromPoints({pt({0}), pt({1})}));
  auto convex = PLFunction::onComplex(K, {{left, {pt({-1}), 0}}, {right, {pt({1}), 0}}});
  EXPECT_TRUE(convex.ampleCheck().ok);
  EXPECT_EQ(convex.evaluate(pt({frac(-1, 2)})), frac(1, 2));
  auto concave = PLFunction::onComplex(K, {{left, {pt({1}), 0}}, {right, {pt({-1}), 0}}});
  EXPECT_FALSE(concave.checkConvexity().ok);
  auto flat = PLFunction::onComplex(K, {{left, {pt({1}), 0}}, {right, {pt({1}), 0}}});
  EXPECT_TRUE(flat.checkConvexity().ok);
  EXPECT_FALSE(flat.ampleCheck().ok);
  auto broken = PLFunction::onComplex(K, {{left, {pt({-1}), 0}}, {right, {pt({1}), 1}}});
  EXPECT_FALSE(broken.checkContinuity().ok);
  EXPECT_EQ(convex.dualCell(hullFromPoints({pt({0})})), hullFromPoints({pt({-1}), pt({1})}));
  EXPECT_EQ(convex.degreeAt(pt({0}), 1), Integer(2));
}

TEST(PLFunction, DualCellFromInequalitiesAgrees) {
  auto g = voronoiModelFunction(Lattice::standard(2), BilinearForm::identity(2), pt({0, 0}));
  for (const auto& r : g.periodicComplex().representatives())
    if (r.dim() == 0) {
      auto viaIneq = g.dualCellByInequalities(r.vertices()[0]);
      ASSERT_TRUE(viaIneq.has_value());
      EXPECT_EQ(*viaIneq, g.dualCell(r));
    }
}

TEST(Genericity, UnperturbedGridIsNotGeneric) {
  auto g = voronoiModelFunction(Lattice::standard(2), BilinearForm::identity(2), pt({0, 0}));
  std::vector<Polytope> sigma{hullFromPoints({pt({0, 0}), pt({1, 1})})};
  EXPECT_FALSE(isGeneric(g.periodicComplex(), sigma, 1).generic);
}

TEST(Genericity, PerturbationReachesGenericDecomposition) {
  std::vector<Polytope> sigma{hullFromPoints({pt({0, 0}), pt({frac(1, 3), frac(1, 2)})}),
                              hullFromPoints({pt({frac(1, 3), frac(1, 2)}), pt({1, frac(1, 2)})})};
  auto r = perturbToGeneric(Lattice::standard(2), BilinearForm::identity(2), pt({0, 0}), sigma, 3, 7);
  for (unsigned m = 1; m <= 3; ++m) EXPECT_TRUE(isGeneric(r.model.periodicComplex(), sigma, m).generic) << m;
  EXPECT_TRUE(r.transversality.transversal);
  EXPECT_TRUE(r.model.ampleCheck().ok);
  EXPECT_TRUE(r.model.checkCocycle(r.model.cocycle()).ok);
  auto again = perturbToGeneric(Lattice::standard(2), BilinearForm::identity(2), pt({0, 0}), sigma, 3, 7);
  EXPECT_EQ(again.attempts, r.attempts);
  EXPECT_EQ(again.model.pieces(), r.model.pieces());
}
