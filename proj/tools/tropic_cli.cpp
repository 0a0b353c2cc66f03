#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <unistd.h>

#include "tropic/json_io.hpp"
#include "tropic/svg.hpp"

using namespace tropic;
using io::json;

namespace {

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Run {
  std::string verb;
  json inputs = json::array();
  json verification = json::array();
  std::optional<json> result;
  std::string outputText;

  json read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot read " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    inputs.push_back({{"path", path}, {"fnv1a64", hex(fnv1a(text))}});
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw SchemaError(path + ": " + e.what());
    }
  }

  void verified(const std::string& what, bool ok, const std::string& witness = "") {
    verification.push_back({{"check", what}, {"ok", ok}});
    if (!ok) throw ValidationError("verification failed: " + what, witness);
  }
};

/// Writes through a temporary file in the same directory so readers never see partial output.
void writeAtomically(const std::string& path, const std::string& text) {
  std::filesystem::path target(path);
  auto tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out.flush()) throw Error("cannot write " + path);
  }
  std::filesystem::rename(tmp, target);
}

std::vector<Polytope> polytopeList(const json& j) {
  if (j.is_array()) {
    std::vector<Polytope> out;
    for (const auto& p : j) out.push_back(io::polytopeFrom(p));
    return out;
  }
  if (j.contains("complex")) return polytopeList(j.at("complex"));
  if (j.contains("cells")) return io::cellsFrom(j, io::sizeFrom(j, "ambient_dim"));
  return {io::polytopeFrom(j)};
}

QVector pointFrom(const json& j) { return io::vectorFrom(j.is_object() ? io::field(j, "point") : j); }

void checkRoundTrip(Run& run, const json& emitted, const std::function<json(const json&)>& reparse) {
  run.verified("json round trip", reparse(json::parse(emitted.dump())) == emitted);
}

void verifyHypersurface(Run& run, const TropicalHypersurface& h) {
  auto s = h.asSet();
  int d = static_cast<int>(h.complex.ambientDim()) - 1;
  auto pure = checkPureDimension(s, d, h.window);
  run.verified("pure dimension", pure.pure, pure.pure ? "" : toString(pure.witnesses[0].vertices()[0]));
  run.verified("rational polyhedra", isGammaRational(s));
  auto conc = checkTotalConcavity(s, {}, h.window);
  run.verified("total concavity", conc.concave, conc.concave ? "" : toString(conc.witnesses[0]));
}

void verifyModel(Run& run, const PLFunction& f) {
  auto c = f.checkContinuity();
  run.verified("continuity", c.ok, c.witness);
  auto a = f.ampleCheck();
  run.verified("ample", a.ok, a.witness);
  if (f.isPeriodic()) {
    auto z = f.checkCocycle(f.cocycle());
    run.verified("cocycle", z.ok, z.witness);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact tropical and polyhedral geometry toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  uint64_t seed = 7;
  bool verify = false;
  app.add_option("--out,-o", out, "output file (default: result in the run report)");
  app.add_option("--seed", seed, "seed for randomized steps");
  app.add_flag("--verify", verify, "check invariants of the result before writing");

  std::string poly, window, polytope, latticePath, formPath, linear, sigmaPath, plfPath, vertexPath, inputPath,
      complexPath, setPath, matrixPath, kind;
  std::vector<std::string> forms, polys, axes;
  unsigned mmax = 3, degreeDim = 0;
  std::string scaleText = "1";
  bool transversal = false, ample = false, cocycle = false, concave = false;

  auto* tropicalize = app.add_subcommand("tropicalize", "corner locus of a tropical polynomial in a window");
  tropicalize->add_option("--poly", poly)->required();
  tropicalize->add_option("--window", window)->required();

  auto* supval = app.add_subcommand("supval", "minimum of the valuation function over a polytope");
  supval->add_option("--poly", poly)->required();
  supval->add_option("--polytope", polytope)->required();

  auto* voronoi = app.add_subcommand("voronoi-model", "Voronoi model function of a lattice and form");
  voronoi->add_option("--lattice", latticePath)->required();
  voronoi->add_option("--form", formPath)->required();
  voronoi->add_option("--linear", linear, "JSON file with the linear part of the cocycle");

  auto* generic = app.add_subcommand("generic-decomposition", "perturbed Voronoi model generic to a set");
  generic->add_option("--lattice", latticePath)->required();
  generic->add_option("--form", formPath)->required();
  generic->add_option("--linear", linear);
  generic->add_option("--sigma", sigmaPath)->required();
  generic->add_option("--mmax", mmax);

  auto* dual = app.add_subcommand("dual-complex", "dual complex of a piecewise linear convex function");
  dual->add_option("--plf", plfPath)->required();

  auto* degree = app.add_subcommand("degree", "local degree at a point");
  degree->add_option("--plf", plfPath)->required();
  degree->add_option("--vertex", vertexPath)->required();
  degree->add_option("--scale", scaleText, "evaluate the degree of scale * f");
  degree->add_option("--dim", degreeDim, "codimension of the open face (default: ambient dimension)");

  auto* check = app.add_subcommand("check", "property checks");
  check->add_flag("--transversal", transversal);
  check->add_flag("--ample", ample);
  check->add_flag("--cocycle", cocycle);
  check->add_flag("--concave", concave);
  check->add_option("--complex", complexPath);
  check->add_option("--set", setPath);
  check->add_option("--plf", plfPath);

  auto* measure = app.add_subcommand("measure", "canonical measures");
  measure->require_subcommand(1);
  measure->fallthrough();
  auto* mCycle = measure->add_subcommand("cycle", "measure on a tropical cycle in a real torus");
  mCycle->add_option("--input", inputPath)->required();
  mCycle->add_option("--forms", forms)->required();
  auto* mSkel = measure->add_subcommand("skeleton", "measure on a skeleton");
  mSkel->add_option("--input", inputPath)->required();
  mSkel->add_option("--forms", forms)->required();

  auto* mixed = app.add_subcommand("mixed-volume", "mixed volume of d polytopes in dimension d");
  mixed->add_option("polytopes", polys)->required();

  auto* atomsCmd = app.add_subcommand("atoms", "atoms of a tropical cycle");
  atomsCmd->add_option("--input", inputPath)->required();

  auto* skeleton = app.add_subcommand("skeleton", "glue a skeleton and bound the image dimension");
  skeleton->add_option("--input", inputPath)->required();

  auto* plot = app.add_subcommand("plot", "SVG of a 2D object");
  plot->add_option("--input", inputPath)->required();
  plot->add_option("--kind", kind, "polytope | complex | hypersurface | dual-complex | measure")->required();
  plot->add_option("--axes", axes, "coordinate pair for projection")->expected(2);

  auto* snf = app.add_subcommand("snf", "Smith normal form of an integer matrix");
  snf->add_option("--matrix", matrixPath)->required();

  auto* index = app.add_subcommand("index", "index of the image of a matrix in a lattice");
  index->add_option("--matrix", matrixPath)->required();
  index->add_option("--lattice", latticePath);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  Run run;
  run.verb = app.get_subcommands().front()->get_name();
  auto start = std::chrono::steady_clock::now();
  int code = 0;
  json report;
  try {
    json result;
    std::function<json(const json&)> reparse;
    if (*tropicalize) {
      auto f = io::polynomialFrom(run.read(poly));
      auto w = io::polytopeFrom(run.read(window));
      auto h = tropicalHypersurface(f, w);
      if (verify) verifyHypersurface(run, h);
      result = io::toJson(h);
    } else if (*supval) {
      auto f = io::polynomialFrom(run.read(poly));
      auto d = io::polytopeFrom(run.read(polytope));
      result = {{"supval", io::toJson(supValuation(f, d))}};
    } else if (*voronoi || *generic) {
      auto L = io::latticeFrom(run.read(latticePath));
      auto b = io::formFrom(run.read(formPath));
      QVector ell = linear.empty() ? zeros(L.ambientDim()) : pointFrom(run.read(linear));
      if (*voronoi) {
        auto g = voronoiModelFunction(L, b, ell);
        if (verify) verifyModel(run, g);
        result = io::toJson(g);
        result["denominator"] = g.modelDenominator().get_str();
      } else {
        auto sigma = polytopeList(run.read(sigmaPath));
        auto r = perturbToGeneric(L, b, ell, sigma, mmax, seed);
        if (verify) {
          verifyModel(run, r.model);
          for (unsigned m = 1; m <= mmax; ++m)
            run.verified("generic at scale " + std::to_string(m), isGeneric(r.model.periodicComplex(), sigma, m).generic);
        }
        result = io::toJson(r.model);
        result["attempts"] = r.attempts;
        result["mmax"] = mmax;
      }
      reparse = [](const json& j) {
        json back = io::toJson(io::plFunctionFrom(j));
        for (const char* k : {"denominator", "attempts", "mmax"})
          if (j.contains(k)) back[k] = j.at(k);
        return back;
      };
    } else if (*dual) {
      auto f = io::plFunctionFrom(run.read(plfPath));
      json pairs = json::array();
      for (const auto& [cell, d] : f.dualComplex()) pairs.push_back({{"cell", io::toJson(cell)}, {"dual", io::toJson(d)}});
      result = {{"pairs", pairs}};
      if (verify) verifyModel(run, f);
    } else if (*degree) {
      auto f = io::plFunctionFrom(run.read(plfPath)).scaledBy(parseRational(scaleText));
      QVector u = pointFrom(run.read(vertexPath));
      unsigned d = degreeDim ? degreeDim : static_cast<unsigned>(f.ambientDim());
      result = {{"point", io::toJson(u)}, {"degree", f.degreeAt(u, d).get_str()}};
    } else if (*check) {
      if (!(transversal || ample || cocycle || concave)) throw SchemaError("check needs a property flag");
      json checks = json::array();
      if (transversal) {
        if (complexPath.empty() || setPath.empty()) throw SchemaError("--transversal needs --complex and --set");
        json cj = run.read(complexPath);
        auto set = PolytopalSet(io::sizeFrom(cj, "ambient_dim"), polytopeList(run.read(setPath)));
        TransversalityReport r;
        std::vector<Polytope> cells;
        if (cj.contains("lattice_basis")) {
          auto C = io::periodicComplexFrom(cj);
          r = isTransversal(C, set);
          cells = C.representatives();
        } else {
          auto C = io::complexFrom(cj);
          r = isTransversal(C, set);
          cells = C.cells();
        }
        if (!r.transversal) {
          std::string id = "cell " + toString(r.witness->interiorPoint());
          auto it = std::find(cells.begin(), cells.end(), *r.witness);
          if (it != cells.end()) id = "cell " + std::to_string(it - cells.begin());
          else if (cj.contains("lattice_basis")) {
            auto C = io::periodicComplexFrom(cj);
            if (auto cls = C.classify(*r.witness)) id = "cell " + std::to_string(cls->first);
          }
          throw ValidationError("not transversal: " + r.reason, id);
        }
        checks.push_back({{"check", "transversal"}, {"ok", true}});
      }
      if (ample || cocycle) {
        if (plfPath.empty()) throw SchemaError("--ample and --cocycle need --plf");
        auto f = io::plFunctionFrom(run.read(plfPath));
        if (ample) {
          auto r = f.ampleCheck();
          if (!r.ok) throw ValidationError("not ample: " + r.reason, r.witness);
          checks.push_back({{"check", "ample"}, {"ok", true}});
        }
        if (cocycle) {
          auto r = f.checkCocycle(f.cocycle());
          if (!r.ok) throw ValidationError("cocycle condition fails: " + r.reason, r.witness);
          checks.push_back({{"check", "cocycle"}, {"ok", true}});
        }
      }
      if (concave) {
        if (setPath.empty()) throw SchemaError("--concave needs --set");
        auto members = polytopeList(run.read(setPath));
        if (members.empty()) throw SchemaError("empty set");
        PolytopalSet s(members[0].ambientDim(), members);
        auto r = checkTotalConcavity(s, {});
        if (!r.concave) throw ValidationError("not totally concave", toString(r.witnesses[0]));
        checks.push_back({{"check", "concave"}, {"ok", true}, {"samples", r.checked}});
      }
      result = {{"checks", checks}};
    } else if (*measure) {
      std::vector<BilinearForm> bs;
      auto in = run.read(inputPath);
      for (const auto& p : forms) bs.push_back(io::formFrom(run.read(p)));
      PiecewiseHaarMeasure mu;
      if (*mCycle) {
        mu = canonicalMeasure(io::cycleFrom(in), bs);
      } else {
        auto s = io::skeletonFrom(in);
        Lattice L = s.lattice ? *s.lattice : Lattice::standard(s.n);
        auto K = buildSkeleton(s.strata);
        skeletonAffineMap(K, L);
        mu = skeletonMeasure(K, L, bs);
      }
      if (verify) {
        bool pd = std::all_of(bs.begin(), bs.end(), [](const BilinearForm& b) { return b.isPositiveDefinite(); });
        for (const auto& p : mu.pieces)
          if (pd && *mCycle) run.verified("positive density", p.density > 0, toString(p.support.vertices()[0]));
      }
      result = io::toJson(mu);
      reparse = [](const json& j) { return io::toJson(io::measureFrom(j)); };
    } else if (*mixed) {
      std::vector<Polytope> ps;
      for (const auto& p : polys) ps.push_back(io::polytopeFrom(run.read(p)));
      result = {{"mixed_volume", io::toJson(mixedVolume(ps))}};
    } else if (*atomsCmd) {
      auto in = io::cycleFrom(run.read(inputPath));
      auto dec = atoms(in);
      json list = json::array();
      for (const auto& a : dec.atoms) {
        const auto& g = dec.groups[a.group];
        json pieces = json::array();
        for (const auto& p : a.pieces) {
          std::vector<QVector> verts;
          for (const auto& z : p.vertices()) verts.push_back(g.toAmbient(z));
          pieces.push_back(io::toJson(Polytope::hull(verts)));
        }
        list.push_back({{"span", a.group}, {"J", a.J}, {"pieces", pieces}});
      }
      json groups = json::array();
      for (const auto& g : dec.groups)
        groups.push_back({{"point", io::toJson(g.point)},
                          {"basis", io::basisToJson(g.frame)},
                          {"stabilizer", io::basisToJson(g.stabilizer)},
                          {"simplices", g.members}});
      result = {{"spans", groups}, {"atoms", list}};
    } else if (*skeleton) {
      auto s = io::skeletonFrom(run.read(inputPath));
      auto K = buildSkeleton(s.strata);
      skeletonAffineMap(K, s.lattice);
      auto bound = dimensionBound(K);
      json glued = json::array();
      for (const auto& [a, b, T] : K.gluedFaces())
        glued.push_back({{"strata", {K.strata()[a].id, K.strata()[b].id}}, {"components", T}});
      result = {{"simplices", K.simplexCount()},
                {"vertices", K.vertexCount()},
                {"glued_faces", glued},
                {"dimension_bound", bound.bound},
                {"witness", {{"stratum", bound.witness}, {"components", bound.components}}}};
    } else if (*plot) {
      json in = run.read(inputPath);
      std::vector<SvgItem> items;
      if (kind == "polytope" || kind == "complex") {
        for (auto& p : polytopeList(in)) items.push_back({p, "", 0.35});
      } else if (kind == "hypersurface") {
        for (const auto& i : io::field(in, "top_cells")) items.push_back({io::polytopeFrom(in.at("cells").at(i.get<size_t>())), "", 0.35});
      } else if (kind == "dual-complex") {
        for (const auto& p : io::field(in, "pairs")) items.push_back({io::polytopeFrom(p.at("dual")), "", 0.2});
      } else if (kind == "measure") {
        auto mu = io::measureFrom(in);
        Rational top = 0;
        for (const auto& p : mu.pieces) top = std::max(top, Rational(abs(p.density)));
        for (const auto& p : mu.pieces)
          items.push_back({p.support, "density " + toString(p.density),
                           top == 0 ? 0.0 : 0.1 + 0.8 * Rational(abs(p.density) / top).get_d()});
      } else {
        throw SchemaError("unknown plot kind " + kind);
      }
      std::optional<std::pair<size_t, size_t>> proj;
      if (!axes.empty()) proj = std::make_pair(std::stoul(axes[0]), std::stoul(axes[1]));
      run.outputText = plotSvg(items, proj);
    } else if (*snf) {
      auto m = io::matrixFrom(run.read(matrixPath));
      if (!m.isIntegral()) throw ValidationError("matrix must be integral");
      auto s = smithNormalForm(toZMatrix(m), m.cols());
      json diag = json::array();
      for (const auto& d : s.diagonal()) diag.push_back(d.get_str());
      result = {{"diagonal", diag}, {"rank", s.rank}};
    } else if (*index) {
      auto m = io::matrixFrom(run.read(matrixPath));
      Lattice L = latticePath.empty() ? Lattice::standard(m.rows()) : io::latticeFrom(run.read(latticePath));
      result = {{"index", indexOfImage(m, L).get_str()}};
    }

    if (run.outputText.empty()) {
      if (verify && reparse) checkRoundTrip(run, result, reparse);
      run.outputText = result.dump(2) + "\n";
      run.result = result;
    }
    report["status"] = "ok";
    if (!out.empty()) {
      writeAtomically(out, run.outputText);
      report["output"] = {{"path", out}, {"fnv1a64", hex(fnv1a(run.outputText))}};
    } else if (run.result) {
      report["result"] = *run.result;
    } else {
      std::cout << run.outputText;
      return 0;
    }
  } catch (const SchemaError& e) {
    code = 3;
    report["status"] = "schema_error";
    report["error"] = e.what();
  } catch (const ValidationError& e) {
    code = 2;
    report["status"] = "validation_failure";
    report["error"] = e.what();
    report["witness"] = e.witness();
  } catch (const CLI::Error& e) {
    code = 3;
    report["status"] = "schema_error";
    report["error"] = e.what();
  } catch (const std::exception& e) {
    code = 1;
    report["status"] = "error";
    report["error"] = e.what();
  }
  auto elapsed = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);
  report["verb"] = run.verb;
  report["seed"] = seed;
  report["inputs"] = run.inputs;
  report["verification"] = run.verification;
  report["elapsed_us"] = elapsed.count();
  std::cout << report.dump(2) << "\n";
  return code;
}
