#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "btz/error.hpp"
#include "btz/generators.hpp"
#include "btz/operators.hpp"
#include "btz/pipeline.hpp"
#include "btz/zeta.hpp"

using namespace btz;
namespace fs = std::filesystem;

namespace {

enum Exit { kPass = 0, kCheckFailure = 1, kInputError = 2, kResourceLimit = 3 };

void emit(const Json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw InputError("cannot write " + out_path);
  f << text;
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path sidecar_path(const std::string& complex_path) {
  return fs::path(complex_path).replace_extension(".geom");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::int64_t parse_int(const std::string& s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InputError("not an integer: '" + s + "'");
  return v;
}

IntVector parse_int_vector(const std::string& s) {
  IntVector v;
  for (const auto& part : split(s, ',')) v.push_back(parse_int(part));
  return v;
}

// Splits "a+bi" style text into real and imaginary parts; either may be empty.
std::pair<std::string, std::string> complex_parts(std::string s) {
  if (s.empty()) throw InputError("empty number");
  if (s.back() != 'i') return {s, ""};
  s.pop_back();
  std::size_t k = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      k = i;
      break;
    }
  }
  std::string re = k == std::string::npos ? "" : s.substr(0, k);
  std::string im = k == std::string::npos ? s : s.substr(k);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  if (im[0] == '+') im.erase(0, 1);
  return {re, im};
}

std::complex<double> parse_complex(const std::string& s) {
  const auto [re, im] = complex_parts(s);
  auto num = [](const std::string& t) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw InputError("not a number: '" + t + "'");
    }
    if (used != t.size()) throw InputError("not a number: '" + t + "'");
    return v;
  };
  return {re.empty() ? 0.0 : num(re), im.empty() ? 0.0 : num(im)};
}

Json class_list(const std::vector<GeodesicClass>& classes) {
  Json out = Json::array();
  for (const auto& g : classes) {
    out.push_back(Json{{"len", g.length}, {"prim_len", g.primitive_length}, {"power", g.power}});
  }
  return out;
}

Json int_list(const std::vector<std::int64_t>& v) {
  Json out = Json::array();
  for (auto x : v) out.push_back(x);
  return out;
}

int exit_for_kind(const std::string& kind) {
  if (kind == "input" || kind == "domain") return kInputError;
  if (kind == "resource") return kResourceLimit;
  return kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"btz: geometric zeta functions of finite typed 2-complexes"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 pass, 1 check failure, 2 input error, 3 resource limit.\n"
      "Options marked (env: BTZ_...) read that variable when the flag is absent;\n"
      "flags take precedence over the environment, which takes precedence over defaults.");

  int code = kPass;

  // validate
  std::string file;
  auto* validate = app.add_subcommand("validate", "Check a complex file against the complex invariants");
  validate->add_option("file", file, "Complex file (JSON)")->required();
  validate->callback([&] {
    const TypedComplex c = load_complex_file(file);
    const auto rep = validate_complex(c);
    Json v = Json::array();
    for (const auto& x : rep.violations) v.push_back(Json{{"kind", x.kind}, {"message", x.message}});
    emit(Json{{"ok", rep.ok}, {"violations", v}}, "");
    std::cerr << (rep.ok ? "valid" : "invalid: " + std::to_string(rep.violations.size()) + " violation(s)")
              << "\n";
    code = rep.ok ? kPass : kCheckFailure;
  });

  // info
  auto* info = app.add_subcommand("info", "Simplex counts and Euler characteristic");
  info->add_option("file", file, "Complex file (JSON)")->required();
  info->callback([&] {
    const TypedComplex c = load_complex_file(file);
    Json j{{"counts", to_json(simplex_counts(c))}, {"chi", euler_characteristic(c)}};
    j["q"] = c.q ? Json(*c.q) : Json(nullptr);
    j["boundary_vertices"] = c.boundary.size();
    emit(j, "");
  });

  // gen
  std::string out_path;
  auto* gen = app.add_subcommand("gen", "Generate a complex");
  gen->require_subcommand(1);
  std::vector<std::int64_t> basis;
  auto* torus = gen->add_subcommand("torus", "Quotient of the apartment by a translation lattice");
  torus->add_option("--basis", basis, "2x2 matrix a b c d, row-major; its columns (a,c), (b,d) span the lattice")
      ->expected(4)
      ->required();
  torus->add_option("-o,--output", out_path, "Output file; geometry goes to the .geom sidecar");
  torus->callback([&] {
    const auto t = gen_apartment_torus(ApartmentSpec::from_columns({basis[0], basis[2]}, {basis[1], basis[3]}));
    if (out_path.empty()) {
      std::cout << save_complex(t.complex);
      return;
    }
    save_complex_file(t.complex, out_path);
    write_text(save_geometry(t.geometry), sidecar_path(out_path).string());
    const auto sc = simplex_counts(t.complex);
    std::cerr << "torus: " << sc.n0 << " vertices, " << sc.n1 << " edges, " << sc.n2 << " chambers\n";
  });
  BallSpec ball_spec;
  auto* ball = gen->add_subcommand("ball", "Ball around a vertex of the building over F_q((t))");
  ball->add_option("--q", ball_spec.q, "Residue field size (prime power)")->required();
  ball->add_option("--radius", ball_spec.radius, "Radius in edges")->default_val(1);
  ball->add_option("--center-type", ball_spec.center_type, "Type of the center vertex")->default_val(0);
  ball->add_option("-o,--output", out_path, "Output file; geometry goes to the .geom sidecar");
  ball->callback([&] {
    const auto b = gen_building_ball(ball_spec);
    if (out_path.empty()) {
      std::cout << save_complex(b.complex);
      return;
    }
    save_complex_file(b.complex, out_path);
    write_text(save_geometry(b.geometry), sidecar_path(out_path).string());
    const auto sc = simplex_counts(b.complex);
    std::cerr << "ball: " << sc.n0 << " vertices, " << sc.n1 << " edges, " << sc.n2 << " chambers\n";
  });
  std::int64_t cycle_n = 3;
  auto* cycle = gen->add_subcommand("cycle", "Typed cycle without chambers");
  cycle->add_option("--n", cycle_n, "Length, a positive multiple of 3")->required();
  cycle->add_option("-o,--output", out_path, "Output file");
  cycle->callback([&] {
    const auto c = gen_cycle_complex(cycle_n);
    if (out_path.empty()) {
      std::cout << save_complex(c);
    } else {
      save_complex_file(c, out_path);
    }
  });

  // op
  auto* op = app.add_subcommand("op", "Build a transfer operator as a sparse matrix");
  op->require_subcommand(1);
  for (const std::string which : {"edges", "chambers"}) {
    auto* sub = op->add_subcommand(which, which == "edges" ? "Straight-continuation operator on directed edges"
                                                           : "Gallery operator on pointed chambers");
    sub->add_option("file", file, "Complex file (JSON)")->required();
    sub->add_option("-o,--output", out_path, "Matrix file");
    sub->callback([&, which] {
      const TypedComplex c = load_complex_file(file);
      const SparseIntMatrix m = which == "edges" ? build_edge_operator(c) : build_chamber_operator(c);
      const std::string text = save_matrix(m);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        write_text(text, out_path);
      }
      std::cerr << which << ": dim " << m.dim << ", " << m.entries.size() << " nonzeros\n";
    });
  }

  // zeta
  int order = kDefaultMaxOrder;
  std::string which_zeta = "edge", sign = "minus";
  auto* zeta = app.add_subcommand("zeta", "Zeta polynomials, their ratio and a log-derivative series");
  zeta->add_option("file", file, "Complex file (JSON)")->required();
  zeta->add_option("--order", order, "Series order M")->envname("BTZ_ORDER")->default_val(kDefaultMaxOrder);
  zeta->add_option("--which", which_zeta, "Series for log_deriv: edge (Z1), chamber (Z2) or ratio")
      ->check(CLI::IsMember({"edge", "chamber", "ratio"}))
      ->default_val("edge");
  zeta->add_option("--sign", sign, "Ratio convention: minus gives Z2(-u)/Z1(u^2), plus gives Z2(u)/Z1(u^2)")
      ->check(CLI::IsMember({"minus", "plus"}))
      ->envname("BTZ_SIGN")
      ->default_val("minus");
  zeta->callback([&] {
    if (order < 1) throw InputError("order must be at least 1");
    const TypedComplex c = load_complex_file(file);
    const IntPolynomial z1 = zeta_edge(c), z2 = zeta_chamber(c);
    const RationalFn r = zeta_ratio(z1, z2, sign == "minus" ? SignConvention::minus_u : SignConvention::plus_u);
    const auto m = static_cast<std::size_t>(order);
    PowerSeriesPrefix ld = which_zeta == "edge"      ? log_derivative_series(z1, m)
                           : which_zeta == "chamber" ? log_derivative_series(z2, m)
                                                     : log_derivative_series(r, m);
    emit(Json{{"Z1", to_json(z1)}, {"Z2", to_json(z2)}, {"ratio", to_json(r)}, {"log_deriv", to_json(ld)}}, "");
    std::cerr << "Z1 degree " << z1.degree() << ", Z2 degree " << z2.degree() << "\n";
  });

  // count
  int max_order = kDefaultMaxOrder;
  std::string kind_name = "edge";
  bool allow_large = false;
  auto* count = app.add_subcommand("count", "Brute-force closed path counts and primitive classes");
  count->add_option("file", file, "Complex file (JSON)")->required();
  count->add_option("--max", max_order, "Maximum length M")->envname("BTZ_MAX_ORDER")->default_val(kDefaultMaxOrder);
  count->add_option("--kind", kind_name, "edge or gallery")->check(CLI::IsMember({"edge", "gallery"}))->default_val("edge");
  count->add_flag("--allow-large", allow_large, "Lift the cap on M")->envname("BTZ_ALLOW_LARGE");
  count->callback([&] {
    const TypedComplex c = load_complex_file(file);
    const PathKind kind = parse_path_kind(kind_name);
    const auto table = count_table(c, max_order, kind, allow_large);
    const auto classes = with_powers(enumerate_primitive_classes(c, max_order, kind, allow_large), max_order);
    emit(Json{{"N", int_list(table.N)}, {"P", int_list(table.P)}, {"classes", class_list(classes)}}, "");
  });

  // cone
  std::vector<std::string> functionals, lattice;
  std::string character, eval;
  std::int64_t oracle_bound_arg = 0;
  auto* cone = app.add_subcommand("cone", "Simplicial cone decomposition and closed-form series");
  cone->add_option("--functionals", functionals, "One comma-separated covector per functional, e.g. 1,0 -1,2")
      ->required();
  cone->add_option("--lattice", lattice, "Lattice basis vectors, comma-separated (default Z^r)");
  cone->add_option("--char", character, "Character multipliers m1,...,mr (rationals, i allowed: 1/2, -i, 1+2i)");
  cone->add_option("--eval", eval, "Evaluation point u1,...,ur (decimals, i allowed)");
  cone->add_option("--oracle-bound", oracle_bound_arg, "Partial-sum bound B (default: from the tail estimate)");
  cone->callback([&] {
    ConeArgs args;
    for (const auto& f : functionals) args.functionals.push_back(parse_int_vector(f));
    if (!lattice.empty()) {
      std::vector<IntVector> b;
      for (const auto& x : lattice) b.push_back(parse_int_vector(x));
      args.lattice = b;
    }
    if (!character.empty()) {
      std::vector<GaussRational> m;
      for (const auto& x : split(character, ',')) m.push_back(parse_gauss_rational(x));
      args.character = m;
    }
    if (!eval.empty()) {
      std::vector<std::complex<double>> u;
      for (const auto& x : split(eval, ',')) u.push_back(parse_complex(x));
      args.eval = u;
    }
    if (oracle_bound_arg > 0) args.oracle_bound = oracle_bound_arg;
    const Json j = run_cone(args);
    emit(j, "");
    const std::string status = j["oracle"]["status"];
    std::cerr << "index " << j["index"] << ", oracle " << status << "\n";
    code = status == "fail" ? kCheckFailure : kPass;
  });

  // rh
  std::optional<std::int64_t> q_arg, chi_arg;
  double tol = 1e-9;
  auto* rh = app.add_subcommand("rh", "Ramanujan classification of a zeta ratio");
  rh->add_option("file", file, "Complex file or ratio JSON {\"num\": [...], \"den\": [...]}")->required();
  rh->add_option("--q", q_arg, "Residue field size (default: from the complex)");
  rh->add_option("--chi", chi_arg, "Euler characteristic (default: from the complex)");
  rh->add_option("--tol", tol, "Relative modulus tolerance")->envname("BTZ_TOL")->default_val(1e-9);
  rh->callback([&] {
    const std::string text = read_text(file);
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::exception& e) {
      throw InputError(std::string("not JSON: ") + e.what());
    }
    RHReport rep;
    if (j.is_object() && (j.contains("num") || j.contains("ratio"))) {
      const RationalFn f = rational_from_json(j.contains("ratio") ? j["ratio"] : j);
      rep = classify_ramanujan(f, q_arg, chi_arg, tol);
    } else {
      const TypedComplex c = load_complex_text(text);
      const auto q = q_arg ? q_arg : c.q;
      const auto chi = chi_arg ? chi_arg : std::optional<std::int64_t>(euler_characteristic(c));
      rep = classify_ramanujan(ratio(c), q, chi, tol, simplex_counts(c));
    }
    emit(to_json(rep), "");
    std::cerr << "verdict: " << to_string(rep.verdict) << "\n";
  });

  // verify
  bool no_timings = false;
  auto* verify = app.add_subcommand("verify", "Full pipeline: operators, zeta, counts, identities, RH");
  verify->add_option("file", file, "Complex file (JSON); a .geom sidecar enables the line oracle")->required();
  verify->add_option("--max-order", max_order, "Maximum order M")->envname("BTZ_MAX_ORDER")->default_val(kDefaultMaxOrder);
  verify->add_option("--tol", tol, "RH tolerance")->envname("BTZ_TOL")->default_val(1e-9);
  verify->add_flag("--allow-large", allow_large, "Lift the cap on M")->envname("BTZ_ALLOW_LARGE");
  verify->add_flag("--no-timings", no_timings, "Omit timings for byte-identical reports")->envname("BTZ_NO_TIMINGS");
  verify->add_option("-o,--output", out_path, "Report file (default stdout)");
  verify->callback([&] {
    const TypedComplex c = load_complex_file(file);
    VerifyOptions opts;
    opts.max_order = max_order;
    opts.allow_large = allow_large;
    opts.timings = !no_timings;
    opts.tol = tol;
    const fs::path side = sidecar_path(file);
    if (fs::exists(side)) opts.torus = load_torus_geometry(read_text(side.string()));
    const auto rep = run_verify(c, opts);
    emit(rep.doc, out_path);
    for (const auto& ch : rep.doc["checks"]) {
      std::cerr << ch["status"].get<std::string>() << "  " << ch["name"].get<std::string>() << "\n";
    }
    if (rep.failed_stage) std::cerr << "error in stage " << *rep.failed_stage << ": " << *rep.error << "\n";
    std::cerr << (rep.passed ? "PASSED" : "FAILED") << "\n";
    code = rep.passed ? kPass : rep.error_kind ? exit_for_kind(*rep.error_kind) : kCheckFailure;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResourceLimit;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailure;
  }
  return code;
}
