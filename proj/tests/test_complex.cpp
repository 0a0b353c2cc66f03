#include <gtest/gtest.h>

#include "tropic/complex.hpp"

using namespace tropic;

namespace {

QVector pt(std::initializer_list<Rational> xs) { return QVector(xs); }

Polytope rect(Rational x0, Rational y0, Rational x1, Rational y1) {
  return hullFromPoints({pt({x0, y0}), pt({x1, y0}), pt({x1, y1}), pt({x0, y1})});
}

// open-face classes of an explicit list of cells in [0,1)^n modulo Z^n, keyed by the translate
// whose vertex centroid has coordinates in [0,1)
std::map<int, size_t> classCounts(const std::vector<Polytope>& tops, size_t n) {
  std::set<std::vector<QVector>> seen;
  std::map<int, size_t> counts;
  for (const auto& t : tops)
    for (size_t f = 0; f < t.faceLattice().faces.size(); ++f) {
      Polytope face = t.facePolytope(f);
      QVector c = face.interiorPoint(), shift(n);
      for (size_t i = 0; i < n; ++i) shift[i] = -Rational(floorOf(c[i]));
      auto key = translate(face, shift).vertices();
      if (seen.insert(key).second) ++counts[static_cast<int>(n) - face.dim()];
    }
  return counts;
}

std::vector<Polytope> gridTops(unsigned m, size_t n) {
  std::vector<Polytope> out;
  Rational s = frac(1, m);
  if (n == 1) {
    for (unsigned i = 0; i < m; ++i) out.push_back(hullFromPoints({pt({i * s}), pt({(i + 1) * s})}));
  } else {
    for (unsigned i = 0; i < m; ++i)
      for (unsigned j = 0; j < m; ++j) out.push_back(rect(i * s, j * s, (i + 1) * s, (j + 1) * s));
  }
  return out;
}

}  // namespace

TEST(Complex, TwoSquaresShareAnEdge) {
  auto K = PolytopalComplex::build(2, {rect(0, 0, 1, 1), rect(1, 0, 2, 1)});
  EXPECT_EQ(K.cellsOfDim(2).size(), 2u);
  EXPECT_EQ(K.cellsOfDim(1).size(), 7u);
  EXPECT_EQ(K.cellsOfDim(0).size(), 6u);
  auto shared = K.indexOf(hullFromPoints({pt({1, 0}), pt({1, 1})}));
  ASSERT_TRUE(shared.has_value());
  EXPECT_EQ(K.star(*shared, 2).size(), 2u);
  auto mid = K.locate(pt({1, frac(1, 2)}));
  ASSERT_TRUE(mid.has_value());
  EXPECT_EQ(*mid, *shared);
  EXPECT_FALSE(K.locate(pt({3, 3})).has_value());
}

TEST(Complex, RejectsOverlappingCells) {
  EXPECT_THROW(PolytopalComplex::build(2, {rect(0, 0, 2, 1), rect(1, 0, 3, 1)}), ValidationError);
  EXPECT_THROW(PolytopalComplex::build(2, {rect(0, 0, 2, 1), rect(1, 1, 2, 2)}), ValidationError);
}

TEST(Complex, Subdivision) {
  auto coarse = PolytopalComplex::build(2, {rect(0, 0, 2, 1)});
  auto fine = PolytopalComplex::build(2, {rect(0, 0, 1, 1), rect(1, 0, 2, 1)});
  EXPECT_TRUE(subdivides(fine, coarse));
  EXPECT_FALSE(subdivides(coarse, fine));
}

TEST(Periodic, UnitIntervalModuloIntegers) {
  auto C = PeriodicComplex::build(QMatrix::identity(1), {hullFromPoints({pt({0}), pt({1})})});
  EXPECT_EQ(C.openFaceClassCount(0), 1u);
  EXPECT_EQ(C.openFaceClassCount(1), 1u);
  EXPECT_FALSE(C.isInjective());
  auto C3 = C.scaled(3);
  EXPECT_EQ(C3.openFaceClassCount(0), 3u);
  EXPECT_EQ(C3.openFaceClassCount(1), 3u);
  EXPECT_TRUE(C3.isInjective());
}

TEST(Periodic, GridCountsMatchExplicitEnumeration) {
  for (size_t n : {1u, 2u})
    for (unsigned m : {1u, 2u, 3u, 4u}) {
      auto C = PeriodicComplex::build(QMatrix::identity(n), gridTops(1, n)).scaled(m);
      auto expected = classCounts(gridTops(m, n), n);
      for (int k = 0; k <= static_cast<int>(n); ++k)
        EXPECT_EQ(C.openFaceClassCount(k), expected[k]) << "n " << n << " m " << m << " codim " << k;
    }
}

TEST(Periodic, TriangulatedSquare) {
  auto lower = hullFromPoints({pt({0, 0}), pt({1, 0}), pt({0, 1})});
  auto upper = hullFromPoints({pt({1, 0}), pt({1, 1}), pt({0, 1})});
  auto C = PeriodicComplex::build(QMatrix::identity(2), {lower, upper});
  EXPECT_EQ(C.openFaceClassCount(0), 2u);
  EXPECT_EQ(C.openFaceClassCount(1), 3u);
  EXPECT_EQ(C.openFaceClassCount(2), 1u);
  auto C2 = C.scaled(2);
  auto explicitTops = classCounts({scale(lower, frac(1, 2)), scale(upper, frac(1, 2)),
                                   translate(scale(lower, frac(1, 2)), pt({frac(1, 2), 0})),
                                   translate(scale(upper, frac(1, 2)), pt({frac(1, 2), 0})),
                                   translate(scale(lower, frac(1, 2)), pt({0, frac(1, 2)})),
                                   translate(scale(upper, frac(1, 2)), pt({0, frac(1, 2)})),
                                   translate(scale(lower, frac(1, 2)), pt({frac(1, 2), frac(1, 2)})),
                                   translate(scale(upper, frac(1, 2)), pt({frac(1, 2), frac(1, 2)}))},
                                  2);
  for (int k = 0; k <= 2; ++k) EXPECT_EQ(C2.openFaceClassCount(k), explicitTops[k]);
}

TEST(Periodic, RejectsGapsAndOverlaps) {
  EXPECT_THROW(PeriodicComplex::build(QMatrix::identity(1), {hullFromPoints({pt({0}), pt({frac(1, 2)})})}),
               ValidationError);
  EXPECT_THROW(PeriodicComplex::build(QMatrix::identity(1), {hullFromPoints({pt({0}), pt({1})}),
                                                              hullFromPoints({pt({0}), pt({frac(1, 2)})})}),
               ValidationError);
}

TEST(Periodic, TranslatesMeetingMatchesBruteForce) {
  QMatrix B = QMatrix::fromColumns({pt({2, 0}), pt({1, 1})}, 2);
  auto C = PeriodicComplex::build(B, {hullFromPoints({pt({0, 0}), pt({2, 0}), pt({3, 1}), pt({1, 1})})});
  QVector lo = pt({frac(-1, 2), frac(1, 3)}), hi = pt({frac(5, 2), frac(7, 3)});
  std::set<std::pair<size_t, QVector>> got;
  for (const auto& x : C.translatesMeeting(lo, hi)) got.insert(x);
  std::set<std::pair<size_t, QVector>> expected;
  for (size_t r = 0; r < C.representatives().size(); ++r)
    for (long a = -6; a <= 6; ++a)
      for (long b = -6; b <= 6; ++b) {
        auto [plo, phi] = C.translateOf(r, pt({a, b})).boundingBox();
        bool meets = true;
        for (size_t i = 0; i < 2; ++i)
          if (phi[i] < lo[i] || plo[i] > hi[i]) meets = false;
        if (meets) expected.insert({r, pt({a, b})});
      }
  EXPECT_EQ(got, expected);
}

TEST(Transversality, GridAgainstSegments) {
  auto K = PolytopalComplex::build(2, {rect(0, 0, 1, 1), rect(1, 0, 2, 1)});
  PolytopalSet along(2, {hullFromPoints({pt({-1, 0}), pt({3, 0})})});
  auto bad = isTransversal(K, along);
  EXPECT_FALSE(bad.transversal);
  ASSERT_TRUE(bad.witness.has_value());
  EXPECT_TRUE(intersect(*bad.witness, along.members()[0]).has_value());
  PolytopalSet across(2, {hullFromPoints({pt({-1, frac(1, 2)}), pt({3, frac(1, 2)})})});
  EXPECT_TRUE(isTransversal(K, across).transversal);
  auto verts = transversalVertices(K, across);
  EXPECT_EQ(verts.size(), 3u);
}

TEST(Transversality, PeriodicGrid) {
  auto C = PeriodicComplex::build(QMatrix::identity(2), gridTops(1, 2));
  PolytopalSet diag(2, {hullFromPoints({pt({frac(1, 3), frac(1, 5)}), pt({frac(4, 3), frac(6, 5)})})});
  EXPECT_TRUE(isTransversal(C, diag).transversal);
  // an endpoint on an edge meets the square below in a single point
  PolytopalSet touching(2, {hullFromPoints({pt({frac(1, 3), 0}), pt({frac(4, 3), 1})})});
  EXPECT_FALSE(isTransversal(C, touching).transversal);
  PolytopalSet through(2, {hullFromPoints({pt({0, 0}), pt({1, 1})})});
  EXPECT_FALSE(isTransversal(C, through).transversal);
}
