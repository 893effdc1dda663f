#include "pothenot/cli.hpp"

#include <cctype>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pothenot/classifier.hpp"
#include "pothenot/expression.hpp"
#include "pothenot/grunert.hpp"
#include "pothenot/oracle.hpp"
#include "pothenot/surface_export.hpp"

namespace pothenot::cli {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<std::string> sides, angles, cos;
  bool deg = false;
  bool json = false;
  double tol = 0;
  int samples = 200;
  std::uint64_t seed = 1;
  bool no_oracle = false;
  int grid = 256;
  std::string format = "csv";
  std::string path;
};

const char* shape_name(BaseShape s) {
  switch (s) {
    case BaseShape::Acute: return "acute";
    case BaseShape::Right: return "right";
    case BaseShape::Obtuse: return "obtuse";
  }
  return "?";
}

const char* kTildeNames[3] = {"\xC3\x83", "B\xCC\x83", "C\xCC\x83"};  // Ã, B̃, C̃
const char* kVertexNames[3] = {"A", "B", "C"};

double number(const std::string& text) {
  try {
    return parse_number(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

Triangle make_base(const Options& o) {
  if (o.sides.empty() == o.angles.empty()) throw UsageError("give exactly one of --sides or --angles");
  try {
    if (!o.sides.empty())
      return Triangle::from_sides(number(o.sides[0]), number(o.sides[1]), number(o.sides[2]));
    const double k = o.deg ? std::numbers::pi / 180 : 1.0;
    return Triangle::from_angles(k * number(o.angles[0]), k * number(o.angles[1]));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

CosTriple make_target(const Options& o) {
  if (o.cos.empty()) throw UsageError("--cos a1 a2 a3 is required");
  CosTriple a;
  for (int i = 0; i < 3; ++i) {
    double v = number(o.cos[i]);
    if (std::abs(v) > 1 + 1e-12) throw UsageError("cosines must lie in [-1, 1]");
    a(i) = std::clamp(v, -1.0, 1.0);
  }
  return a;
}

Tolerances make_tolerances(const Options& o) {
  Tolerances tol = default_tolerances();
  if (o.tol > 0) tol.accept = o.tol;
  return tol;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

std::string triple(const Eigen::Vector3d& v) {
  return "(" + fmt(v(0)) + ", " + fmt(v(1)) + ", " + fmt(v(2)) + ")";
}

Json base_json(const Triangle& T) {
  Json j;
  j["sides"] = {T.sides()(0), T.sides()(1), T.sides()(2)};
  j["cosines"] = {T.cosines()(0), T.cosines()(1), T.cosines()(2)};
  j["circumradius"] = T.circumradius();
  j["shape"] = shape_name(T.shape());
  return j;
}

Json prediction_json(const CountPrediction& p) {
  Json j;
  j["kind"] = p.kind == CountKind::Finite ? "finite" : p.kind == CountKind::Infinite ? "infinite" : "unsupported";
  if (p.kind == CountKind::Finite) j["count"] = p.count;
  else j["count"] = nullptr;
  j["provenance"] = p.provenance;
  return j;
}

std::string prediction_text(const CountPrediction& p) {
  if (p.kind == CountKind::Infinite) return "infinite";
  if (p.kind == CountKind::Unsupported) return "unsupported";
  return std::to_string(p.count);
}

void print_base(const Triangle& T, std::ostream& out) {
  out << "base: sides " << triple(T.sides()) << ", cosines " << triple(T.cosines()) << ", "
      << shape_name(T.shape()) << "\n";
}

struct Classified {
  bool ambiguous = false;
  std::string message;
  RegionLabel label;
  CountPrediction prediction;
};

Classified classify_target(const Triangle& T, const CosTriple& a, const Tolerances& tol) {
  Classified c;
  try {
    c.label = classify(T, a, tol);
    c.prediction = count_prediction(T, c.label);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::AmbiguousBand && e.code() != ErrorCode::EmptyRegion) throw;
    c.ambiguous = true;
    c.message = e.what();
  }
  return c;
}

int cmd_classify(const Options& o, std::ostream& out) {
  const Triangle T = make_base(o);
  const CosTriple a = make_target(o);
  const Tolerances tol = make_tolerances(o);
  const Classified c = classify_target(T, a, tol);
  if (o.json) {
    Json j;
    j["command"] = "classify";
    j["base"] = base_json(T);
    j["target"] = {a(0), a(1), a(2)};
    j["pillow_value"] = pillow_value(a);
    if (c.ambiguous) {
      j["region"] = nullptr;
      j["error"] = c.message;
    } else {
      j["region"] = {{"key", c.label.key()}, {"text", c.label.to_string()}};
      j["predicted"] = prediction_json(c.prediction);
    }
    out << j.dump(2) << "\n";
  } else if (c.ambiguous) {
    out << "inconclusive: " << c.message << "\n";
  } else {
    out << c.label.to_string() << ", predicted " << prediction_text(c.prediction) << "\n";
    out << "provenance: " << c.prediction.provenance << "\n";
  }
  return c.ambiguous ? kInconclusive : kOk;
}

int cmd_solve(const Options& o, std::ostream& out) {
  const Triangle T = make_base(o);
  const CosTriple a = make_target(o);
  const Tolerances tol = make_tolerances(o);
  const double f = pillow_value(a);
  const bool on_surface = std::abs(f) <= tol.eps_surface;

  Json j;
  j["command"] = "solve";
  j["base"] = base_json(T);
  j["target"] = {a(0), a(1), a(2)};
  j["pillow_value"] = f;
  j["on_surface"] = on_surface;

  if (!on_surface) {
    const std::string msg =
        "not on pillowcase; planar problem has no solution; spatial (3D) counting is out of scope";
    if (o.json) {
      j["region"] = {{"key", f > 0 ? "interior" : "off"}, {"text", msg}};
      j["kind"] = "finite";
      j["count"] = 0;
      j["solutions"] = Json::array();
      out << j.dump(2) << "\n";
    } else {
      print_base(T, out);
      out << msg << "\n";
    }
    return kOk;
  }

  const Classified c = classify_target(T, a, tol);
  const SolutionSet S = solve_on_pillowcase(T, a, tol);

  if (o.json) {
    if (c.ambiguous) {
      j["region"] = nullptr;
      j["error"] = c.message;
    } else {
      j["region"] = {{"key", c.label.key()}, {"text", c.label.to_string()}};
      j["predicted"] = prediction_json(c.prediction);
    }
    j["kind"] = S.kind == SolutionKind::Finite ? "finite" : "infinite_arc";
    if (S.kind == SolutionKind::Finite) j["count"] = S.count();
    else j["count"] = nullptr;
    if (S.arc_opposite) {
      const int v = static_cast<int>(*S.arc_opposite);
      j["arc"] = {{"opposite", kVertexNames[v]},
                  {"endpoints", {kVertexNames[(v + 1) % 3], kVertexNames[(v + 2) % 3]}}};
    } else {
      j["arc"] = nullptr;
    }
    Json sols = Json::array();
    for (const Solution& s : S.solutions) {
      sols.push_back({{"s1", s.distances.s(0)},
                      {"s2", s.distances.s(1)},
                      {"s3", s.distances.s(2)},
                      {"Dx", s.point(0)},
                      {"Dy", s.point(1)},
                      {"residual", s.distances.residual}});
    }
    j["solutions"] = std::move(sols);
    out << j.dump(2) << "\n";
  } else {
    print_base(T, out);
    out << "target: " << triple(a) << "\n";
    if (c.ambiguous) out << "region: inconclusive (" << c.message << ")\n";
    else out << "region: " << c.label.to_string() << ", predicted " << prediction_text(c.prediction) << "\n";
    if (S.kind == SolutionKind::InfiniteArc) {
      const int v = static_cast<int>(*S.arc_opposite);
      out << "tilde point " << kTildeNames[v] << ": infinitely many solutions on arc " << kVertexNames[(v + 1) % 3]
          << kVertexNames[(v + 2) % 3] << " (not containing " << kVertexNames[v] << ")\n";
    } else {
      if (S.pillow_vertex) out << "pillow vertex: no observer\n";
      out << "solutions: " << S.count() << "\n";
      for (const Solution& s : S.solutions) {
        out << "  s = " << triple(s.distances.s) << "  D = (" << fmt(s.point(0)) << ", " << fmt(s.point(1))
            << ")  residual " << fmt(s.distances.residual) << "\n";
      }
    }
  }
  return c.ambiguous ? kInconclusive : kOk;
}

int cmd_lambda(const Options& o, std::ostream& out) {
  const Triangle T = make_base(o);
  const CosTriple a = make_target(o);
  const Tolerances tol = make_tolerances(o);
  const LambdaCoeffs L = lambda_coeffs(T, a);
  std::vector<Root> roots;
  std::string note;
  try {
    roots = quartic_roots(L, tol);
  } catch (const Error& e) {
    note = e.what();
  }
  int degree = -1;
  for (int i = 0; i < 5; ++i)
    if (!L.negligible(i, tol.eps_lambda)) degree = i;
  if (o.json) {
    Json j;
    j["command"] = "lambda";
    j["base"] = base_json(T);
    j["target"] = {a(0), a(1), a(2)};
    j["pillow_value"] = pillow_value(a);
    j["lambda"] = {L[0], L[1], L[2], L[3], L[4]};
    j["bound"] = {L.bound[0], L.bound[1], L.bound[2], L.bound[3], L.bound[4]};
    j["effective_degree"] = degree;
    Json r = Json::array();
    for (const Root& x : roots) r.push_back({{"u", x.u}, {"multiplicity", x.multiplicity}, {"s1", std::sqrt(x.u)}});
    j["roots"] = std::move(r);
    if (!note.empty()) j["note"] = note;
    out << j.dump(2) << "\n";
  } else {
    print_base(T, out);
    for (int i = 0; i < 5; ++i)
      out << "L" << i << " = " << fmt(L[i]) << (L.negligible(i, tol.eps_lambda) ? "  (negligible)" : "") << "\n";
    out << "effective degree " << degree << "\n";
    if (!note.empty()) out << note << "\n";
    for (const Root& x : roots)
      out << "  u = " << fmt(x.u) << "  (s1 = " << fmt(std::sqrt(x.u)) << ", multiplicity " << x.multiplicity
          << ")\n";
  }
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const Triangle T = make_base(o);
  if (o.samples < 1) throw UsageError("--samples must be positive");
  SweepOptions opt;
  opt.tol = make_tolerances(o);
  opt.run_oracle = !o.no_oracle;
  const SweepReport rep = region_sweep(T, o.samples, o.seed, opt);
  if (o.json) {
    Json j;
    j["command"] = "verify";
    j["base"] = base_json(T);
    j["samples_per_octant"] = o.samples;
    j["seed"] = o.seed;
    Json regions = Json::object();
    for (const auto& [key, t] : rep.regions) {
      Json r;
      r["samples"] = t.samples;
      r["predicted"] = t.predicted;
      Json sc = Json::object(), oc = Json::object();
      for (const auto& [n, k] : t.solver_counts) sc[std::to_string(n)] = k;
      for (const auto& [n, k] : t.oracle_counts) oc[std::to_string(n)] = k;
      r["solver_counts"] = sc;
      r["oracle_counts"] = oc;
      r["solver_mismatches"] = t.solver_mismatches;
      r["oracle_mismatches"] = t.oracle_mismatches;
      regions[key] = r;
    }
    j["regions"] = regions;
    j["solver_mismatches"] = rep.solver_mismatches;
    j["oracle_mismatches"] = rep.oracle_mismatches;
    j["inconclusive"] = rep.inconclusive;
    j["details"] = rep.details;
    out << j.dump(2) << "\n";
  } else {
    print_base(T, out);
    out << std::left << std::setw(10) << "region" << std::setw(9) << "samples" << std::setw(10) << "predicted"
        << std::setw(12) << "solver!=" << "oracle!=\n";
    for (const auto& [key, t] : rep.regions) {
      out << std::setw(10) << key << std::setw(9) << t.samples << std::setw(10)
          << (t.samples ? std::to_string(t.predicted) : std::string("empty")) << std::setw(12)
          << t.solver_mismatches << t.oracle_mismatches << "\n";
    }
    out << "total " << rep.samples << " samples, " << rep.solver_mismatches << " solver and "
        << rep.oracle_mismatches << " oracle mismatches, " << rep.inconclusive << " inconclusive\n";
    for (const std::string& d : rep.details) out << "  " << d << "\n";
  }
  if (rep.solver_mismatches || rep.oracle_mismatches) return kMismatch;
  return rep.inconclusive ? kInconclusive : kOk;
}

int cmd_figure(const Options& o, std::ostream& out) {
  const Triangle T = make_base(o);
  if (o.path.empty()) throw UsageError("--out PATH is required");
  if (o.grid < 16) throw UsageError("--grid must be at least 16");
  ExportFormat format;
  try {
    format = parse_format(o.format);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const Tolerances tol = make_tolerances(o);
  const Decomposition dec = export_decomposition(T, o.grid, format, o.path, tol);
  if (o.json) {
    Json j;
    j["command"] = "figure";
    j["base"] = base_json(T);
    j["grid"] = o.grid;
    j["format"] = o.format;
    j["path"] = o.path;
    Json colors = Json::object();
    for (const auto& [c, n] : dec.color_histogram) colors[color_name(c)] = n;
    j["colors"] = colors;
    Json regions = Json::object();
    for (const auto& [k, n] : dec.region_histogram) regions[k] = n;
    j["regions"] = regions;
    j["blue_patches"] = dec.blue_patches;
    j["max_surface_residual"] = dec.max_surface_residual;
    out << j.dump(2) << "\n";
  } else {
    print_base(T, out);
    out << "wrote " << o.path << " (" << dec.samples.size() << " samples)\n";
    for (const auto& [c, n] : dec.color_histogram) out << "  " << color_name(c) << ": " << n << "\n";
    for (const auto& [k, n] : dec.region_histogram) out << "  " << k << ": " << n << "\n";
    out << "blue patches: " << dec.blue_patches << "\n";
  }
  return kOk;
}

// CLI11 reads "-7/10" as a short flag; prefixing a zero keeps the value.
std::vector<std::string> protect_negatives(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const std::string& s : args) {
    const bool numeric_like = s.size() > 1 && s[0] == '-' &&
                              (std::isdigit(static_cast<unsigned char>(s[1])) || s[1] == '.' || s[1] == '(' ||
                               s.compare(1, 3, "\xE2\x88\x9A") == 0 || s.compare(1, 4, "sqrt") == 0 ||
                               s.compare(1, 2, "pi") == 0);
    out.push_back(numeric_like ? "0" + s : s);
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Planar three-point resection: solve, classify and verify on the pillowcase"};
  app.name("pothenot");
  app.require_subcommand(1);
  Options o;

  auto add_base = [&](CLI::App* sub) {
    sub->add_option("--sides", o.sides, "side lengths d1=|BC| d2=|AC| d3=|AB|")->expected(3);
    sub->add_option("--angles", o.angles, "angles at A and B (radians unless --deg)")->expected(2);
    sub->add_flag("--deg", o.deg, "angles are in degrees");
    sub->add_flag("--json", o.json, "structured output");
    sub->add_option("--tol", o.tol, "override the Grunert acceptance tolerance (relative)");
  };
  auto add_target = [&](CLI::App* sub) {
    sub->add_option("--cos", o.cos, "target cosines a1 a2 a3")->expected(3)->required();
  };

  CLI::App* solve = app.add_subcommand("solve", "solve the resection problem for a cosine triple");
  CLI::App* classify_cmd = app.add_subcommand("classify", "region label and predicted count");
  CLI::App* lambda = app.add_subcommand("lambda", "quartic coefficients and roots");
  CLI::App* verify = app.add_subcommand("verify", "region sweep against solver and oracle");
  CLI::App* figure = app.add_subcommand("figure", "export the coloured decomposition");
  for (CLI::App* sub : {solve, classify_cmd, lambda, verify, figure}) add_base(sub);
  for (CLI::App* sub : {solve, classify_cmd, lambda}) add_target(sub);
  verify->add_option("--samples", o.samples, "samples per octant region");
  verify->add_option("--seed", o.seed, "random seed");
  verify->add_flag("--no-oracle", o.no_oracle, "skip the brute-force oracle");
  figure->add_option("--grid", o.grid, "samples per chart axis");
  figure->add_option("--format", o.format, "csv, ply or json");
  figure->add_option("--out", o.path, "output path");

  std::vector<std::string> argv = protect_negatives(args);
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(o, out);
    if (classify_cmd->parsed()) return cmd_classify(o, out);
    if (lambda->parsed()) return cmd_lambda(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (figure->parsed()) return cmd_figure(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << e.what() << "\n";
    if (e.code() == ErrorCode::AmbiguousBand || e.code() == ErrorCode::BoundaryHit) return kInconclusive;
    return kUsage;
  }
  return kUsage;
}

}  // namespace pothenot::cli
