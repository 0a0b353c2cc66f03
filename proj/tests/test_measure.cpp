#include <gtest/gtest.h>

#include <random>

#include "tropic/measure.hpp"
#include "tropic/plc.hpp"

using namespace tropic;

namespace {

QVector pt(std::initializer_list<Rational> xs) { return QVector(xs); }

Polytope segment(const QVector& a) { return hullFromPoints({zeros(a.size()), a}); }

QMatrix diag(std::initializer_list<Rational> xs) {
  QMatrix m(xs.size(), xs.size());
  size_t i = 0;
  for (const auto& x : xs) m(i, i) = x, ++i;
  return m;
}

BilinearForm hexForm() { return BilinearForm(QMatrix::fromRows({pt({2, 1}), pt({1, 2})}, 2)); }

// the torus R^n / Z^n as a cycle: one simplex in dimension 1, the two halves of the unit square in dimension 2
TropicalCycleInput wholeTorus(size_t n) {
  TropicalCycleInput in;
  in.n = n;
  in.lattice = Lattice::standard(n);
  in.simplices.push_back({QMatrix::identity(n), zeros(n), 1});
  if (n == 2) in.simplices.push_back({Rational(-1) * QMatrix::identity(2), pt({1, 1}), 1});
  return in;
}

QMatrix randomUnimodular(std::mt19937_64& rng, size_t d) {
  QMatrix u = QMatrix::identity(d);
  if (d < 2) return rng() % 2 ? u : Rational(-1) * u;
  for (int step = 0; step < 6; ++step) {
    size_t i = rng() % d, j = (i + 1 + rng() % (d - 1)) % d;
    long k = static_cast<long>(rng() % 5) - 2;
    QMatrix e = QMatrix::identity(d);
    e(i, j) = k;
    u = u * e;
  }
  return u;
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

Stratum stratum(std::string id, std::vector<std::string> comps, std::vector<std::string> closure, QMatrix M, QVector t) {
  return {std::move(id), std::move(comps), 1, std::move(closure), std::move(M), std::move(t)};
}

std::vector<Stratum> triangleSkeleton(QVector y2 = pt({0, 1})) {
  QMatrix e = QMatrix::fromColumns({pt({1, 0})}, 2), f = QMatrix::fromColumns({y2}, 2);
  QMatrix g = QMatrix::fromColumns({y2 - pt({1, 0})}, 2);
  return {stratum("P", {"Y0", "Y1", "Y2"}, {"E01", "E02", "E12"}, QMatrix::fromColumns({pt({1, 0}), y2}, 2), pt({0, 0})),
          stratum("E01", {"Y0", "Y1"}, {"Y0", "Y1"}, e, pt({0, 0})),
          stratum("E02", {"Y0", "Y2"}, {"Y0", "Y2"}, f, pt({0, 0})),
          stratum("E12", {"Y1", "Y2"}, {"Y1", "Y2"}, g, pt({1, 0})),
          stratum("Y0", {"Y0"}, {}, QMatrix(2, 0), pt({0, 0})),
          stratum("Y1", {"Y1"}, {}, QMatrix(2, 0), pt({1, 0})),
          stratum("Y2", {"Y2"}, {}, QMatrix(2, 0), y2)};
}

}  // namespace

TEST(MixedVolume, SegmentsGiveHalfDeterminant) {
  std::mt19937_64 rng(41);
  EXPECT_EQ(mixedVolume({segment(pt({1, 0})), segment(pt({0, 1}))}), frac(1, 2));
  for (int trial = 0; trial < 20; ++trial) {
    QVector a = pt({static_cast<long>(rng() % 7) - 3, static_cast<long>(rng() % 7) - 3});
    QVector b = pt({static_cast<long>(rng() % 7) - 3, static_cast<long>(rng() % 7) - 3});
    Rational det = a[0] * b[1] - a[1] * b[0];
    EXPECT_EQ(mixedVolume({segment(a), segment(b)}), abs(det) / 2) << toString(a) << " " << toString(b);
  }
}

TEST(MixedVolume, SymmetricMultilinearAndDiagonal) {
  std::mt19937_64 rng(43);
  auto randomSegment = [&] {
    return segment(pt({static_cast<long>(rng() % 5) - 2, static_cast<long>(rng() % 5) - 2}));
  };
  for (int trial = 0; trial < 15; ++trial) {
    auto p = randomSegment(), q = randomSegment(), r = randomSegment();
    EXPECT_EQ(mixedVolume({p, r}), mixedVolume({r, p}));
    EXPECT_EQ(mixedVolume({minkowskiSum(p, q), r}), mixedVolume({p, r}) + mixedVolume({q, r}));
    auto poly = minkowskiSum(minkowskiSum(p, q), r);
    EXPECT_EQ(mixedVolume({poly, poly}), poly.lebesgueVolume());
  }
  auto tri = standardSimplex(3, 1);
  EXPECT_EQ(mixedVolume({tri, tri, tri}), frac(1, 6));
  EXPECT_THROW(mixedVolume({tri, tri}), ValidationError);
}

TEST(MixedVolume, PolarizedCovolumeMatchesBoxesForDiagonalForms) {
  for (long a1 = 1; a1 <= 3; ++a1)
    for (long a2 = 1; a2 <= 3; ++a2)
      for (long b1 = 1; b1 <= 3; ++b1)
        for (long b2 = 1; b2 <= 3; ++b2) {
          auto det = [](const QMatrix& m) -> Rational { return abs(determinant(m)); };
          Rational viaForms = polarize({diag({a1, a2}), diag({b1, b2})}, det);
          Rational viaBoxes = mixedVolume({box(pt({0, 0}), pt({a1, a2})), box(pt({0, 0}), pt({b1, b2}))});
          EXPECT_EQ(viaForms, viaBoxes);
        }
  EXPECT_EQ(polarize({hexForm().matrix(), hexForm().matrix()}, [](const QMatrix& m) -> Rational { return abs(determinant(m)); }),
            Rational(3));
}

TEST(Atoms, OverlappingSegmentsOnACircle) {
  TropicalCycleInput in;
  in.n = 1;
  in.lattice = Lattice::standard(1);
  in.simplices = {{QMatrix::identity(1), pt({0}), frac(1, 2)}, {QMatrix::identity(1), pt({frac(1, 4)}), frac(1, 2)}};
  auto dec = atoms(in);
  ASSERT_EQ(dec.groups.size(), 1u);
  std::map<std::vector<size_t>, Rational> lengths;
  for (const auto& a : dec.atoms)
    for (const auto& p : a.pieces) lengths[a.J] += p.lebesgueVolume();
  std::map<std::vector<size_t>, Rational> expected{{{0}, frac(1, 4)}, {{0, 1}, frac(1, 4)}, {{1}, frac(1, 4)}};
  EXPECT_EQ(lengths, expected);
  auto mu = canonicalMeasure(in, {BilinearForm::identity(1)});
  // each simplex carries density d! * vol(form lattice) on its own support
  EXPECT_EQ(totalMass(mu), Rational(1));
}

TEST(Atoms, RejectsSelfOverlapAndBadShapes) {
  TropicalCycleInput in;
  in.n = 1;
  in.lattice = Lattice::standard(1);
  in.simplices = {{QMatrix::identity(1), pt({0}), frac(3, 2)}};
  EXPECT_THROW(atoms(in), ValidationError);
  in.simplices = {{QMatrix::fromRows({pt({frac(1, 2)})}), pt({0}), 1}};
  EXPECT_THROW(atoms(in), ValidationError);
  in.simplices = {{QMatrix::identity(1), pt({0}), 0}};
  EXPECT_THROW(atoms(in), ValidationError);
  in.simplices = {{QMatrix::identity(2), pt({0}), 1}};
  EXPECT_THROW(atoms(in), SchemaError);
}

TEST(CanonicalMeasure, TorusMassEqualsDegreeOfTheLineBundle) {
  struct Case {
    size_t n;
    BilinearForm b;
  };
  std::vector<Case> cases{{1, BilinearForm::identity(1)},
                          {1, BilinearForm(QMatrix::fromRows({pt({2})}))},
                          {2, BilinearForm::identity(2)}};
  for (const auto& c : cases) {
    auto in = wholeTorus(c.n);
    std::vector<BilinearForm> forms(c.n, c.b);
    Rational mass = totalMass(canonicalMeasure(in, forms));
    auto g = voronoiModelFunction(Lattice::standard(c.n), c.b, zeros(c.n));
    Integer N;
    Integer deg = degreeSum(g, N);
    Integer scale = 1;
    for (size_t i = 0; i < c.n; ++i) scale *= N;
    EXPECT_EQ(mass, Rational(deg) / Rational(scale)) << "n " << c.n;
  }
}

TEST(CanonicalMeasure, DensityOnTheTorusWithMixedForms) {
  auto in = wholeTorus(2);
  auto mu = canonicalMeasure(in, {BilinearForm::identity(2), BilinearForm(diag({2, 1}))});
  for (const auto& p : mu.pieces) EXPECT_EQ(p.density, Rational(3));
  EXPECT_EQ(totalMass(mu), Rational(3));
}

TEST(CanonicalMeasure, DensityIsBasisInvariant) {
  std::mt19937_64 rng(47);
  auto in = wholeTorus(2);
  std::vector<std::vector<BilinearForm>> formSets{
      {BilinearForm::identity(2), BilinearForm(diag({2, 1}))},
      {BilinearForm::identity(2), hexForm()},
      {hexForm(), BilinearForm(QMatrix::fromRows({pt({3, -1}), pt({-1, 1})}))}};
  auto dec = atoms(in);
  for (const auto& forms : formSets)
    for (const auto& atom : dec.atoms) {
      const auto& g = dec.groups[atom.group];
      Rational base = atomDensity(in, g, atom.J, forms, g.frame).density;
      EXPECT_GT(base, 0);
      for (int k = 0; k < 3; ++k) {
        QMatrix U = randomUnimodular(rng, 2);
        ASSERT_EQ(abs(determinant(U)), Rational(1));
        EXPECT_EQ(atomDensity(in, g, atom.J, forms, g.frame * U).density, base);
      }
      // doubling the frame vectors quadruples the density in the new coordinates
      EXPECT_EQ(atomDensity(in, g, atom.J, forms, Rational(2) * g.frame).density, base * 4);
    }
}

TEST(CanonicalMeasure, ChangingTheLatticeBasisChangesNothing) {
  auto in = wholeTorus(2);
  auto other = in;
  other.lattice = Lattice::generatedBy({pt({1, 1}), pt({1, 2})}, 2);
  std::vector<BilinearForm> forms{BilinearForm::identity(2), hexForm()};
  auto a = canonicalMeasure(in, forms), b = canonicalMeasure(other, forms);
  EXPECT_EQ(totalMass(a), totalMass(b));
  // d! times the mixed discriminant D(I, B) = tr(B) / 2
  EXPECT_EQ(totalMass(a), Rational(2) * Rational(2 + 2) / 2);
}

TEST(CanonicalMeasure, SignedFormsExpandMultilinearly) {
  auto in = wholeTorus(2);
  BilinearForm I = BilinearForm::identity(2), twice(diag({2, 2}));
  auto direct = canonicalMeasure(in, {I, hexForm()});
  BilinearForm hexPlus(hexForm().matrix() + diag({1, 1}));
  auto signedMu = canonicalMeasureSigned(in, {{twice, I}, {hexPlus, I}});
  ASSERT_EQ(direct.pieces.size(), signedMu.pieces.size());
  for (size_t i = 0; i < direct.pieces.size(); ++i) EXPECT_EQ(signedMu.pieces[i].density, direct.pieces[i].density);
  auto negative = canonicalMeasureSigned(in, {{I, twice}, {I, I}});
  for (const auto& p : negative.pieces) EXPECT_EQ(p.density, Rational(0));
  auto neg1 = canonicalMeasureSigned(wholeTorus(1), {{BilinearForm::identity(1), BilinearForm(diag({3}))}});
  EXPECT_EQ(totalMass(neg1), Rational(-2));
}

TEST(CanonicalMeasure, RejectsIndefiniteFormsAndWrongCounts) {
  auto in = wholeTorus(2);
  EXPECT_THROW(canonicalMeasure(in, {BilinearForm::identity(2)}), ValidationError);
  BilinearForm indefinite(QMatrix::fromRows({pt({1, 2}), pt({2, 1})}));
  EXPECT_THROW(canonicalMeasure(in, {indefinite, indefinite}), ValidationError);
}

TEST(Multiplicity, IndexOfTransversalCell) {
  TropicalCycleInput in;
  in.n = 2;
  in.lattice = Lattice::standard(2);
  in.simplices = {{QMatrix::fromColumns({pt({2, 1})}, 2), pt({0, 0}), 1}};
  auto vertical = hullFromPoints({pt({1, 0}), pt({1, 1})});
  QMatrix both = QMatrix::fromColumns({pt({0, 1}), pt({2, 1})}, 2);
  EXPECT_EQ(multiplicityOfComponent(vertical, in), abs(determinant(both)));
  in.degree = 2;
  EXPECT_EQ(multiplicityOfComponent(vertical, in), Rational(1));
  auto parallel = hullFromPoints({pt({0, 0}), pt({2, 1})});
  EXPECT_THROW(multiplicityOfComponent(parallel, in), ValidationError);
  auto far = hullFromPoints({pt({frac(1, 2), frac(4, 10)}), pt({frac(1, 2), frac(5, 10)})});
  EXPECT_EQ(multiplicityOfComponent(far, in), Rational(0));
}

TEST(Skeleton, TriangleGluesIntoThreeVertices) {
  auto K = buildSkeleton(triangleSkeleton());
  EXPECT_EQ(K.simplexCount(), 7u);
  EXPECT_EQ(K.vertexCount(), 3u);
  EXPECT_NO_THROW(skeletonAffineMap(K));
  auto mu = skeletonMeasure(K, Lattice::standard(2), {BilinearForm::identity(2), BilinearForm(diag({2, 1}))});
  ASSERT_EQ(mu.pieces.size(), 1u);
  EXPECT_EQ(mu.pieces[0].density, Rational(3));
  EXPECT_EQ(mu.pieces[0].volume, frac(1, 2));
}

TEST(Skeleton, AgreesWithCycleFormulaOnTheOverlap) {
  std::vector<std::vector<BilinearForm>> formSets{{BilinearForm::identity(2), BilinearForm(diag({2, 1}))},
                                                 {hexForm(), BilinearForm::identity(2)},
                                                 {hexForm(), hexForm()}};
  auto in = wholeTorus(2);
  auto K = buildSkeleton(triangleSkeleton());
  for (const auto& forms : formSets) {
    auto sk = skeletonMeasure(K, Lattice::standard(2), forms);
    auto cyc = canonicalMeasure(in, forms);
    for (const auto& p : cyc.pieces) EXPECT_EQ(p.density, sk.pieces[0].density);
  }
}

TEST(Skeleton, SubtorusCarriesTheRestrictedDegree) {
  // a closed curve along e1 in R^2 / Z^2; the restricted form b(e1, e1) = 2 is its degree
  TropicalCycleInput in;
  in.n = 2;
  in.lattice = Lattice::standard(2);
  in.simplices = {{QMatrix::fromColumns({pt({1, 0})}, 2), pt({0, 0}), 1}};
  auto cyc = canonicalMeasure(in, {hexForm()});
  EXPECT_EQ(totalMass(cyc), hexForm()(pt({1, 0}), pt({1, 0})));
  auto K = buildSkeleton({stratum("E", {"Y0", "Y1"}, {}, QMatrix::fromColumns({pt({1, 0})}, 2), pt({0, 0}))});
  auto sk = skeletonMeasure(K, Lattice::standard(2), {hexForm()});
  EXPECT_EQ(totalMass(sk), totalMass(cyc));
}

TEST(Skeleton, DetectsMismatchedMaps) {
  auto strata = triangleSkeleton();
  strata[3].t = pt({2, 0});
  auto K = buildSkeleton(strata);
  EXPECT_THROW(skeletonAffineMap(K), ValidationError);
  // E12 moved by (1, 0) on both of its vertices is a single lattice shift
  EXPECT_NO_THROW(skeletonAffineMap(K, Lattice::standard(2)));
  strata[3].M = QMatrix::fromColumns({pt({-2, 1})}, 2);
  auto twisted = buildSkeleton(strata);
  EXPECT_THROW(skeletonAffineMap(twisted, Lattice::standard(2)), ValidationError);
  strata[3].t = pt({frac(3, 2), 0});
  strata[3].M = QMatrix::fromColumns({pt({-1, 1})}, 2);
  EXPECT_THROW(skeletonAffineMap(buildSkeleton(strata), Lattice::standard(2)), ValidationError);

}

TEST(Skeleton, RejectsBrokenClosureRelations) {
  auto strata = triangleSkeleton();
  strata[1].closureOf = {"Y2"};
  EXPECT_THROW(buildSkeleton(strata), ValidationError);
  strata = triangleSkeleton();
  strata[0].closureOf.push_back("nowhere");
  EXPECT_THROW(buildSkeleton(strata), ValidationError);
  strata = triangleSkeleton();
  strata.push_back(strata[4]);
  EXPECT_THROW(buildSkeleton(strata), ValidationError);
}

TEST(Skeleton, DegenerateSimplexHasDensityZero) {
  auto K = buildSkeleton(triangleSkeleton(pt({2, 0})));
  auto mu = skeletonMeasure(K, Lattice::standard(2), {BilinearForm::identity(2), BilinearForm::identity(2)});
  ASSERT_EQ(mu.pieces.size(), 1u);
  EXPECT_EQ(mu.pieces[0].density, Rational(0));
  EXPECT_EQ(dimensionBound(K).bound, 1u);
}

TEST(DimensionBound, Cases) {
  auto full = dimensionBound(buildSkeleton(triangleSkeleton()));
  EXPECT_EQ(full.bound, 2u);
  EXPECT_EQ(full.witness, "P");
  EXPECT_EQ(full.components, 3u);
  auto points = dimensionBound(buildSkeleton({stratum("A", {"Y0"}, {}, QMatrix(2, 0), pt({0, 0})),
                                              stratum("B", {"Y1"}, {}, QMatrix(2, 0), pt({1, 0}))}));
  EXPECT_EQ(points.bound, 0u);
  auto flat = dimensionBound(buildSkeleton(
      {stratum("E", {"Y0", "Y1"}, {}, QMatrix::fromColumns({pt({1, 0})}, 2), pt({0, 0})),
       stratum("F", {"Y0", "Y1", "Y2"}, {}, QMatrix::fromColumns({pt({1, 0}), pt({2, 0})}, 2), pt({0, 0}))}));
  EXPECT_EQ(flat.bound, 1u);
  EXPECT_THROW(dimensionBound(buildSkeleton({})), ValidationError);
}
