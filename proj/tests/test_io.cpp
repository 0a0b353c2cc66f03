#include <gtest/gtest.h>

#include "tropic/json_io.hpp"

using namespace tropic;
using nlohmann::json;

namespace {

QVector pt(std::initializer_list<Rational> xs) { return QVector(xs); }

}  // namespace

TEST(Json, RationalsAreStringsOrIntegers) {
  EXPECT_EQ(io::rationalFrom(json("-3/6")), frac(-1, 2));
  EXPECT_EQ(io::rationalFrom(json(4)), Rational(4));
  EXPECT_EQ(io::toJson(frac(6, 4)), json("3/2"));
  EXPECT_THROW(io::rationalFrom(json(0.5)), SchemaError);
  EXPECT_THROW(io::rationalFrom(json("1/0")), SchemaError);
  EXPECT_THROW(io::rationalFrom(json("abc")), SchemaError);
}

TEST(Json, PolytopeRoundTrip) {
  auto p = hullFromPoints({pt({0, 0}), pt({2, 0}), pt({0, frac(1, 3)})});
  auto back = io::polytopeFrom(io::toJson(p));
  EXPECT_EQ(back, p);
  json h = {{"ambient_dim", 1}, {"halfspaces", {{{"normal", {"-1"}}, {"offset", "-2"}}, {{"normal", {"1"}}, {"offset", "0"}}}}};
  EXPECT_EQ(io::polytopeFrom(h), hullFromPoints({pt({0}), pt({2})}));
  json bad = {{"ambient_dim", 2}, {"vertices", {{"0", "0", "1"}}}};
  EXPECT_THROW(io::polytopeFrom(bad), SchemaError);
  json mismatch = {{"ambient_dim", 1}, {"vertices", {{"0"}, {"1"}}}, {"halfspaces", h["halfspaces"]}};
  EXPECT_THROW(io::polytopeFrom(mismatch), Error);
}

TEST(Json, LatticeFormAndPolynomial) {
  auto L = Lattice::generatedBy({pt({2, 0}), pt({1, 1})}, 2);
  EXPECT_EQ(covolume(io::latticeFrom(io::toJson(L))), Rational(2));
  EXPECT_EQ(covolume(io::latticeFrom(json::parse("[[1, 0], [0, 3]]"))), Rational(3));
  BilinearForm b(QMatrix::fromRows({pt({2, 1}), pt({1, 2})}));
  EXPECT_EQ(io::formFrom(io::toJson(b)).matrix(), b.matrix());
  TropicalPolynomial f(2, {{{0, 0}, 0}, {{1, 0}, frac(1, 2)}});
  auto g = io::polynomialFrom(io::toJson(f));
  EXPECT_EQ(g.terms().size(), 2u);
  EXPECT_EQ(g.terms()[1].val, frac(1, 2));
  EXPECT_THROW(io::polynomialFrom(json::parse(R"({"dim": 2, "terms": [{"exp": [1], "val": "0"}]})")), SchemaError);
  EXPECT_THROW(io::latticeFrom(json::parse(R"({"basis": [[1, 0], [0]]})")), SchemaError);
}

TEST(Json, CycleAndMeasureRoundTrip) {
  auto j = json::parse(R"({"n": 1, "degree": 1, "simplices": [{"M": [[1]], "t": ["0"], "vpi": "1"}]})");
  auto in = io::cycleFrom(j);
  auto again = io::cycleFrom(io::toJson(in));
  EXPECT_EQ(again.simplices.size(), 1u);
  EXPECT_EQ(again.simplices[0].vpi, Rational(1));
  auto mu = canonicalMeasure(in, {BilinearForm::identity(1)});
  auto mj = io::toJson(mu);
  EXPECT_EQ(mj["total_mass"], json("1"));
  auto back = io::measureFrom(mj);
  EXPECT_EQ(totalMass(back), totalMass(mu));
  EXPECT_THROW(io::cycleFrom(json::parse(R"({"n": 1, "simplices": []})")), SchemaError);
  EXPECT_THROW(io::cycleFrom(json::parse(R"({"simplices": []})")), SchemaError);
}

TEST(Json, SkeletonDefaultsAndRoundTrip) {
  auto j = json::parse(R"({"strata": [
    {"components": ["a", "b"], "vpi": "1", "closure_of": ["1", "2"], "M": [[1]], "t": ["0"]},
    {"components": ["a"], "vpi": "1", "M": [], "t": ["0"]},
    {"components": ["b"], "vpi": "1", "M": [], "t": ["1"]}]})");
  auto s = io::skeletonFrom(j);
  EXPECT_EQ(s.n, 1u);
  EXPECT_EQ(s.strata[0].id, "0");
  EXPECT_EQ(s.strata[1].M.cols(), 0u);
  auto again = io::skeletonFrom(io::toJson(s));
  auto K = buildSkeleton(again.strata);
  EXPECT_EQ(K.vertexCount(), 2u);
  EXPECT_NO_THROW(skeletonAffineMap(K));
  j["strata"][2]["t"] = {"1", "0"};
  EXPECT_THROW(io::skeletonFrom(j), SchemaError);
}
