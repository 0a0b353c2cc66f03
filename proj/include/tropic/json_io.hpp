#pragma once

#include <json.hpp>

#include "tropic/measure.hpp"
#include "tropic/plc.hpp"

namespace tropic::io {

using json = nlohmann::json;

inline json toJson(const Rational& r) { return toString(r); }

inline Rational rationalFrom(const json& j) {
  if (j.is_string()) return parseRational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  throw SchemaError("expected a rational string, got " + j.dump());
}

inline json toJson(const QVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(toJson(x));
  return a;
}

inline QVector vectorFrom(const json& j) {
  if (!j.is_array()) throw SchemaError("expected an array, got " + j.dump());
  QVector v;
  for (const auto& x : j) v.push_back(rationalFrom(x));
  return v;
}

inline QVector vectorFrom(const json& j, size_t n) {
  QVector v = vectorFrom(j);
  if (v.size() != n) throw SchemaError("expected " + std::to_string(n) + " entries, got " + j.dump());
  return v;
}

/// Integer entries are written as JSON numbers when they fit, rationals otherwise.
inline json toJsonIntegral(const QVector& v) {
  json a = json::array();
  for (const auto& x : v) {
    if (isInteger(x) && x.get_num().fits_slong_p())
      a.push_back(x.get_num().get_si());
    else
      a.push_back(toJson(x));
  }
  return a;
}

/// Matrices are lists of rows.
inline json toJson(const QMatrix& m) {
  json a = json::array();
  for (size_t i = 0; i < m.rows(); ++i) a.push_back(toJsonIntegral(m.row(i)));
  return a;
}

inline QMatrix matrixFrom(const json& j, size_t cols = 0) {
  if (!j.is_array()) throw SchemaError("expected a matrix (list of rows)");
  std::vector<QVector> rows;
  for (const auto& r : j) rows.push_back(vectorFrom(r));
  if (!rows.empty()) cols = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != cols) throw SchemaError("ragged matrix");
  return QMatrix::fromRows(rows, cols);
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline size_t sizeFrom(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) throw SchemaError(std::string("field \"") + key + "\" must be a nonnegative integer");
  return v.get<size_t>();
}

// ---------------------------------------------------------------------------------------------

inline json toJson(const Polytope& p) {
  json verts = json::array(), hs = json::array();
  for (const auto& v : p.vertices()) verts.push_back(toJson(v));
  for (const auto& h : p.halfspaces()) hs.push_back({{"normal", toJsonIntegral(h.normal)}, {"offset", toJson(h.offset)}});
  return {{"ambient_dim", p.ambientDim()}, {"vertices", verts}, {"halfspaces", hs}};
}

/// Reads the V-representation when present, else the H-representation. When both are given they
/// must describe the same set.
inline Polytope polytopeFrom(const json& j) {
  size_t n = sizeFrom(j, "ambient_dim");
  std::optional<Polytope> fromV, fromH;
  if (j.contains("vertices")) {
    std::vector<QVector> pts;
    for (const auto& v : j.at("vertices")) pts.push_back(vectorFrom(v, n));
    if (pts.empty()) throw SchemaError("polytope without vertices");
    fromV = Polytope::hull(std::move(pts));
  }
  if (j.contains("halfspaces")) {
    std::vector<Halfspace> hs;
    for (const auto& h : j.at("halfspaces")) {
      QVector normal = vectorFrom(field(h, "normal"), n);
      for (const auto& x : normal)
        if (!isInteger(x)) throw SchemaError("halfspace normal must be integral");
      if (isZero(normal)) throw SchemaError("halfspace normal must be nonzero");
      hs.push_back(makeHalfspace(normal, rationalFrom(field(h, "offset"))));
    }
    fromH = Polytope::fromHalfspaces(n, {}, hs);
    if (!fromH) throw ValidationError("halfspaces describe the empty set");
  }
  if (fromV && fromH && !(*fromV == *fromH))
    throw ValidationError("vertex and halfspace descriptions disagree");
  if (fromV) return *fromV;
  if (fromH) return *fromH;
  throw SchemaError("polytope needs \"vertices\" or \"halfspaces\"");
}

inline json toJson(const PolytopalComplex& c) {
  json cells = json::array();
  for (const auto& p : c.cells()) cells.push_back(toJson(p));
  return {{"ambient_dim", c.ambientDim()}, {"cells", cells}};
}

inline std::vector<Polytope> cellsFrom(const json& j, size_t n) {
  std::vector<Polytope> cells;
  for (const auto& c : field(j, "cells")) {
    auto p = polytopeFrom(c);
    if (p.ambientDim() != n) throw SchemaError("cell of wrong ambient dimension");
    cells.push_back(std::move(p));
  }
  return cells;
}

inline PolytopalComplex complexFrom(const json& j) {
  size_t n = sizeFrom(j, "ambient_dim");
  return PolytopalComplex::build(n, cellsFrom(j, n));
}

/// Lattice bases are lists of basis vectors.
inline QMatrix basisColumnsFrom(const json& j, size_t n) {
  std::vector<QVector> vs;
  for (const auto& v : j) vs.push_back(vectorFrom(v, n));
  return QMatrix::fromColumns(vs, n);
}

inline json basisToJson(const QMatrix& columns) { return toJson(columns.transpose()); }

inline json toJson(const PeriodicComplex& c) {
  json cells = json::array();
  for (const auto& p : c.representatives()) cells.push_back(toJson(p));
  return {{"ambient_dim", c.ambientDim()}, {"lattice_basis", basisToJson(c.latticeBasis())}, {"cells", cells}};
}

inline PeriodicComplex periodicComplexFrom(const json& j) {
  size_t n = sizeFrom(j, "ambient_dim");
  return PeriodicComplex::build(basisColumnsFrom(field(j, "lattice_basis"), n), cellsFrom(j, n));
}

inline json toJson(const Lattice& l) { return {{"basis", basisToJson(l.basisMatrix())}}; }

inline Lattice latticeFrom(const json& j) {
  const json& b = j.is_object() ? field(j, "basis") : j;
  if (!b.is_array() || b.empty()) throw SchemaError("lattice basis must be a nonempty list of vectors");
  size_t n = b[0].size();
  auto l = Lattice::generatedBy(basisColumnsFrom(b, n).columns(), n);
  if (l.rank() != b.size()) throw ValidationError("lattice basis vectors are linearly dependent");
  return l;
}

inline json toJson(const BilinearForm& b) { return {{"form", toJson(b.matrix())}}; }

inline BilinearForm formFrom(const json& j) {
  auto m = matrixFrom(j.is_object() ? field(j, "form") : j);
  return BilinearForm(m);
}

inline json toJson(const TropicalPolynomial& f) {
  json terms = json::array();
  for (const auto& t : f.terms()) terms.push_back({{"exp", t.exp}, {"val", toJson(t.val)}});
  return {{"dim", f.dim()}, {"terms", terms}};
}

inline TropicalPolynomial polynomialFrom(const json& j) {
  size_t n = sizeFrom(j, "dim");
  std::vector<TropicalPolynomial::Term> terms;
  for (const auto& t : field(j, "terms")) {
    const auto& e = field(t, "exp");
    Exponent exp;
    for (const auto& x : e) {
      if (!x.is_number_integer()) throw SchemaError("exponents must be integers");
      exp.push_back(x.get<long>());
    }
    terms.push_back({exp, rationalFrom(field(t, "val"))});
  }
  return TropicalPolynomial(n, std::move(terms));
}

inline json toJson(const TropicalHypersurface& h) {
  json j = toJson(h.complex);
  j["window"] = toJson(h.window);
  json weights = json::array(), top = json::array();
  int d = static_cast<int>(h.complex.ambientDim()) - 1;
  for (size_t i = 0; i < h.complex.size(); ++i) {
    weights.push_back(h.weights[i].get_str());
    if (h.complex.cell(i).dim() == d) top.push_back(i);
  }
  j["weights"] = weights;
  j["top_cells"] = top;
  return j;
}

inline json toJson(const CocycleData& z) {
  return {{"lattice_basis", basisToJson(z.latticeBasis)}, {"form", toJson(z.form.matrix())}, {"linear", toJson(z.linear)}};
}

inline json toJson(const PLFunction& f) {
  json j;
  json pieces = json::array();
  for (const auto& [cell, p] : f.pieces()) pieces.push_back({{"cell", cell}, {"peg", toJson(p.peg)}, {"c", toJson(p.c)}});
  if (f.isPeriodic()) {
    j["complex"] = toJson(f.periodicComplex());
    j["cocycle"] = toJson(f.cocycle());
  } else {
    j["complex"] = toJson(f.windowComplex());
  }
  j["pieces"] = pieces;
  return j;
}

inline PLFunction plFunctionFrom(const json& j) {
  const auto& cj = field(j, "complex");
  std::map<size_t, AffinePiece> pieces;
  size_t n = sizeFrom(cj, "ambient_dim");
  for (const auto& p : field(j, "pieces")) {
    size_t cell = sizeFrom(p, "cell");
    if (pieces.count(cell)) throw SchemaError("two pieces for cell " + std::to_string(cell));
    pieces[cell] = {vectorFrom(field(p, "peg"), n), rationalFrom(field(p, "c"))};
  }
  if (cj.contains("lattice_basis")) {
    auto C = periodicComplexFrom(cj);
    const auto& zj = field(j, "cocycle");
    CocycleData z{basisColumnsFrom(field(zj, "lattice_basis"), n), BilinearForm(matrixFrom(field(zj, "form"))),
                  vectorFrom(field(zj, "linear"), n)};
    for (const auto& [cell, p] : pieces)
      if (cell >= C.representatives().size()) throw SchemaError("piece refers to unknown cell");
    return PLFunction::onPeriodic(std::move(C), std::move(pieces), std::move(z));
  }
  auto C = complexFrom(cj);
  for (const auto& [cell, p] : pieces)
    if (cell >= C.size()) throw SchemaError("piece refers to unknown cell");
  return PLFunction::onComplex(std::move(C), std::move(pieces));
}

inline json toJson(const TropicalCycleInput& in) {
  json s = json::array();
  for (const auto& x : in.simplices)
    s.push_back({{"M", toJson(x.M)}, {"t", toJson(x.t)}, {"vpi", toJson(x.vpi)}});
  return {{"n", in.n}, {"lattice", toJson(in.lattice)}, {"degree", in.degree.get_str()}, {"simplices", s}};
}

inline Integer integerFrom(const json& j) {
  Rational r = rationalFrom(j);
  if (!isInteger(r)) throw SchemaError("expected an integer, got " + j.dump());
  return r.get_num();
}

inline TropicalCycleInput cycleFrom(const json& j) {
  TropicalCycleInput in;
  in.n = sizeFrom(j, "n");
  in.lattice = j.contains("lattice") ? latticeFrom(j.at("lattice")) : Lattice::standard(in.n);
  if (in.lattice.ambientDim() != in.n) throw SchemaError("lattice of wrong dimension");
  in.degree = j.contains("degree") ? integerFrom(j.at("degree")) : Integer(1);
  for (const auto& s : field(j, "simplices")) {
    auto M = matrixFrom(field(s, "M"));
    if (M.rows() != in.n) throw SchemaError("simplex map must have n rows");
    in.simplices.push_back({M, vectorFrom(field(s, "t"), in.n), rationalFrom(field(s, "vpi"))});
  }
  if (in.simplices.empty()) throw SchemaError("cycle needs at least one simplex");
  for (const auto& s : in.simplices)
    if (s.M.cols() != in.simplices[0].M.cols()) throw SchemaError("simplices of different dimensions");
  return in;
}

struct SkeletonInput {
  std::vector<Stratum> strata;
  std::optional<Lattice> lattice;
  size_t n = 0;
};

inline json toJson(const SkeletonInput& s) {
  json strata = json::array();
  for (const auto& st : s.strata)
    strata.push_back({{"id", st.id},
                      {"components", st.components},
                      {"vpi", toJson(st.vpi)},
                      {"closure_of", st.closureOf},
                      {"M", toJson(st.M)},
                      {"t", toJson(st.t)}});
  json j = {{"strata", strata}};
  if (s.lattice) j["lattice"] = toJson(*s.lattice);
  return j;
}

/// Strata without "id" are named by their position. The ambient dimension is the length of "t".
inline SkeletonInput skeletonFrom(const json& j) {
  SkeletonInput out;
  if (j.contains("lattice")) out.lattice = latticeFrom(j.at("lattice"));
  size_t idx = 0;
  for (const auto& s : field(j, "strata")) {
    Stratum st;
    st.id = s.contains("id") ? s.at("id").get<std::string>() : std::to_string(idx);
    ++idx;
    for (const auto& c : field(s, "components")) st.components.push_back(c.is_string() ? c.get<std::string>() : c.dump());
    st.vpi = rationalFrom(field(s, "vpi"));
    if (s.contains("closure_of"))
      for (const auto& c : s.at("closure_of")) st.closureOf.push_back(c.is_string() ? c.get<std::string>() : c.dump());
    st.t = vectorFrom(field(s, "t"));
    if (out.n == 0) out.n = st.t.size();
    if (st.t.size() != out.n) throw SchemaError("stratum " + st.id + ": translation of wrong dimension");
    const auto& mj = field(s, "M");
    st.M = mj.empty() ? QMatrix(out.n, 0) : matrixFrom(mj);
    if (st.M.rows() != out.n) throw SchemaError("stratum " + st.id + ": map has wrong number of rows");
    out.strata.push_back(std::move(st));
  }
  if (out.lattice && out.lattice->ambientDim() != out.n) throw SchemaError("lattice of wrong dimension");
  return out;
}

inline json toJson(const PiecewiseHaarMeasure& mu) {
  json pieces = json::array();
  for (const auto& p : mu.pieces)
    pieces.push_back({{"support", toJson(p.support)},
                      {"density", toJson(p.density)},
                      {"basis", basisToJson(p.frame)},
                      {"volume", toJson(p.volume)}});
  return {{"pieces", pieces}, {"total_mass", toJson(totalMass(mu))}};
}

inline PiecewiseHaarMeasure measureFrom(const json& j) {
  PiecewiseHaarMeasure mu;
  for (const auto& p : field(j, "pieces")) {
    Polytope s = polytopeFrom(field(p, "support"));
    const auto& bj = field(p, "basis");
    QMatrix frame = bj.empty() ? QMatrix(s.ambientDim(), 0) : basisColumnsFrom(bj, s.ambientDim());
    Rational vol = p.contains("volume") ? rationalFrom(p.at("volume")) : s.volumeInFrame(frame);
    mu.pieces.push_back({s, rationalFrom(field(p, "density")), frame, vol});
  }
  return mu;
}

inline json toJson(const CheckReport& r) { return {{"ok", r.ok}, {"reason", r.reason}, {"witness", r.witness}}; }

}  // namespace tropic::io
