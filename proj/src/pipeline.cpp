#include "btz/pipeline.hpp"

#include <chrono>
#include <functional>

#include "btz/error.hpp"
#include "btz/operators.hpp"
#include "btz/zeta.hpp"

namespace btz {

namespace {

Json complex_json(std::complex<double> z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json root_json(const RootReport& r) {
  Json j{{"re", static_cast<double>(r.root.real())},
         {"im", static_cast<double>(r.root.imag())},
         {"modulus", static_cast<double>(r.modulus)}};
  if (r.deviation >= 0) {
    j["deviation"] = static_cast<double>(r.deviation);
    j["tempered"] = r.tempered;
    j["boundary"] = r.boundary;
  }
  return j;
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json int_list(const std::vector<std::int64_t>& v) {
  Json j = Json::array();
  for (auto x : v) j.push_back(x);
  return j;
}

Json vectors_json(const std::vector<IntVector>& vs) {
  Json j = Json::array();
  for (const auto& v : vs) j.push_back(int_list(v));
  return j;
}

BigInt bigint_from_json(const Json& j) {
  if (j.is_string()) return parse_bigint(j.get<std::string>());
  if (j.is_number_integer()) return BigInt(std::to_string(j.get<std::int64_t>()));
  throw InputError("expected an integer or a decimal string");
}

// Coefficients of u^1..u^max_order of an exact series, compared with counts.
Json compare_orders(const PowerSeriesPrefix& series, const std::vector<std::int64_t>& counts,
                    bool& all_pass) {
  Json per = Json::array();
  all_pass = true;
  for (std::size_t m = 1; m < counts.size(); ++m) {
    const bool ok = series.coeffs[m] == BigRational(static_cast<long>(counts[m]));
    all_pass = all_pass && ok;
    per.push_back(Json{{"m", m}, {"series", to_string(series.coeffs[m])}, {"count", counts[m]},
                       {"pass", ok}});
  }
  return per;
}

std::optional<std::size_t> first_mismatch(const PowerSeriesPrefix& a, const PowerSeriesPrefix& b) {
  for (std::size_t m = 0; m < a.coeffs.size() && m < b.coeffs.size(); ++m) {
    if (a.coeffs[m] != b.coeffs[m]) return m;
  }
  return std::nullopt;
}

PowerSeriesPrefix real_part(const WeightedSeries& s) {
  PowerSeriesPrefix out(s.order());
  for (std::size_t m = 0; m < s.coeffs.size(); ++m) out.coeffs[m] = s.coeffs[m].re;
  return out;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

Json to_json(const IntPolynomial& p) {
  Json j = Json::array();
  for (const auto& c : p.coeffs()) j.push_back(to_string(c));
  return j;
}

Json to_json(const RationalFn& f) {
  return Json{{"num", to_json(f.numerator())}, {"den", to_json(f.denominator())}};
}

Json to_json(const PowerSeriesPrefix& s) {
  Json j = Json::array();
  for (const auto& c : s.coeffs) j.push_back(to_string(c));
  return j;
}

Json to_json(const WeightedSeries& s) {
  Json j = Json::array();
  for (const auto& c : s.coeffs) j.push_back(to_string(c));
  return j;
}

Json to_json(const SimplexCounts& c) { return Json{{"n0", c.n0}, {"n1", c.n1}, {"n2", c.n2}}; }

Json to_json(const RHReport& r) {
  Json j;
  j["q"] = optional_json(r.q);
  j["chi"] = optional_json(r.chi);
  j["euler_factor_exponent"] = r.euler_factor_exponent;
  j["euler_exponent_matches"] = optional_json(r.euler_exponent_matches);
  j["pole_factor_found"] = r.pole_factor_found;
  j["pole_factor_multiplicity"] = r.pole_factor_multiplicity;
  j["P1"] = to_json(r.P1);
  j["P2"] = to_json(r.P2);
  j["P1_roots"] = Json::array();
  for (const auto& x : r.P1_roots) j["P1_roots"].push_back(root_json(x));
  j["P2_roots"] = Json::array();
  for (const auto& x : r.P2_roots) j["P2_roots"].push_back(root_json(x));
  j["expected_p1_degree"] = optional_json(r.expected_p1_degree);
  j["p1_degree_matches"] = optional_json(r.p1_degree_matches);
  j["verdict"] = to_string(r.verdict);
  j["tolerance"] = r.tolerance;
  j["notes"] = r.notes;
  return j;
}

Json to_json(const ConeSeries& s) {
  Json terms = Json::array();
  for (const auto& t : s.terms) {
    terms.push_back(Json{{"coeff", to_string(t.coeff)}, {"exponents", int_list(t.exponents)}});
  }
  Json poles = Json::array();
  for (std::size_t j = 0; j < s.poles.size(); ++j) {
    poles.push_back(Json{{"var", j}, {"coeff", to_string(s.poles[j].coeff)},
                         {"exponent", s.poles[j].exponent}});
  }
  return Json{{"terms", terms}, {"poles", poles}};
}

IntPolynomial polynomial_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("polynomial must be a list of coefficients");
  std::vector<BigInt> c;
  for (const auto& x : j) c.push_back(bigint_from_json(x));
  return IntPolynomial(std::move(c));
}

RationalFn rational_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den")) {
    throw InputError("ratio must be an object with \"num\" and \"den\"");
  }
  const IntPolynomial den = polynomial_from_json(j.at("den"));
  if (den.is_zero()) throw InputError("ratio denominator is zero");
  return RationalFn(polynomial_from_json(j.at("num")), den);
}

PipelineReport run_verify(const TypedComplex& c, const VerifyOptions& opts) {
  PipelineReport rep;
  Json& doc = rep.doc;
  doc["schema"] = kVerifySchema;
  doc["max_order"] = opts.max_order;
  Json timings = Json::object();
  Json checks = Json::array();
  bool mandatory_ok = true;

  auto add_check = [&](const std::string& name, bool mandatory, const std::string& status,
                       Json detail) {
    if (mandatory && status == "fail") mandatory_ok = false;
    Json j{{"name", name}, {"mandatory", mandatory}, {"status", status}};
    if (!detail.is_null()) j["detail"] = std::move(detail);
    checks.push_back(std::move(j));
  };
  auto stage = [&](const std::string& name, const std::function<void()>& body) {
    Stopwatch sw;
    try {
      body();
    } catch (const std::exception& e) {
      rep.failed_stage = name;
      rep.error = e.what();
      if (dynamic_cast<const InputError*>(&e)) {
        rep.error_kind = "input";
      } else if (dynamic_cast<const DomainError*>(&e)) {
        rep.error_kind = "domain";
      } else if (dynamic_cast<const ResourceLimit*>(&e)) {
        rep.error_kind = "resource";
      } else {
        rep.error_kind = "internal";
      }
    }
    timings[name] = sw.ms();
    return !rep.failed_stage;
  };
  auto finish = [&]() -> PipelineReport& {
    doc["checks"] = checks;
    if (rep.failed_stage) {
      doc["error"] = Json{{"stage", *rep.failed_stage}, {"kind", *rep.error_kind}, {"message", *rep.error}};
    }
    rep.passed = mandatory_ok && !rep.failed_stage;
    doc["passed"] = rep.passed;
    if (opts.timings) doc["timings_ms"] = timings;
    return rep;
  };

  const auto M = static_cast<std::size_t>(opts.max_order);
  if (!stage("validate", [&] {
        const auto v = validate_complex(c);
        if (!v.ok) {
          std::string msg = v.violations.front().kind + ": " + v.violations.front().message;
          throw InputError(msg);
        }
        if (c.has_boundary()) throw DomainError("complex has a marked boundary");
        if (opts.max_order < 1) throw InputError("max order must be at least 1");
        if (opts.max_order > kMaxOrderCap && !opts.allow_large) {
          throw ResourceLimit("max order exceeds the cap of " + std::to_string(kMaxOrderCap));
        }
        const SimplexCounts sc = simplex_counts(c);
        doc["complex"] = Json{{"counts", to_json(sc)},
                              {"chi", euler_characteristic(c)},
                              {"q", optional_json(c.q)}};
      })) {
    return finish();
  }

  SparseIntMatrix le, lb;
  IntPolynomial z1, z2;
  if (!stage("operators", [&] {
        le = build_edge_operator(c);
        lb = build_chamber_operator(c);
        doc["operators"] = Json{{"edge_dim", le.dim},
                                {"edge_nonzeros", le.entries.size()},
                                {"chamber_dim", lb.dim},
                                {"chamber_nonzeros", lb.entries.size()}};
      })) {
    return finish();
  }
  if (!stage("zeta", [&] {
        z1 = char_poly_reverse(le);
        z2 = char_poly_reverse(lb);
        doc["zeta"] = Json{{"Z1", to_json(z1)},
                           {"Z2", to_json(z2)},
                           {"ratio_minus_u", to_json(zeta_ratio(z1, z2, SignConvention::minus_u))},
                           {"ratio_plus_u", to_json(zeta_ratio(z1, z2, SignConvention::plus_u))}};
      })) {
    return finish();
  }

  PowerSeriesPrefix ld_edge, ld_gallery;
  stage("log_derivative", [&] {
    ld_edge = log_derivative_series(z1, M);
    ld_gallery = log_derivative_series(z2, M);
    doc["log_deriv"] = Json{{"edge", to_json(ld_edge)}, {"gallery", to_json(ld_gallery)}};
  });
  if (rep.failed_stage) return finish();

  std::vector<GeodesicClass> classes[2];
  std::vector<std::int64_t> N[2];
  const PathKind kinds[2] = {PathKind::edge, PathKind::gallery};
  if (!stage("counts", [&] {
        Json counts;
        for (int k = 0; k < 2; ++k) {
          N[k] = count_closed_paths(c, opts.max_order, kinds[k], opts.allow_large);
          classes[k] = enumerate_primitive_classes(c, opts.max_order, kinds[k], opts.allow_large);
          std::vector<std::int64_t> P(M + 1, 0);
          for (const auto& g : classes[k]) ++P[static_cast<std::size_t>(g.length)];
          counts[to_string(kinds[k])] = Json{{"N", int_list(N[k])}, {"P", int_list(P)}};
        }
        doc["counts"] = counts;
      })) {
    return finish();
  }

  stage("compare", [&] {
    const PowerSeriesPrefix* series[2] = {&ld_edge, &ld_gallery};
    for (int k = 0; k < 2; ++k) {
      const std::string kind = to_string(kinds[k]);
      bool ok = false;
      Json per = compare_orders(*series[k], N[k], ok);
      add_check("duality_" + kind, true, ok ? "pass" : "fail", Json{{"per_order", per}});

      // N[m] = sum_{d | m} d P[d]
      std::vector<std::int64_t> P(M + 1, 0);
      for (const auto& g : classes[k]) ++P[static_cast<std::size_t>(g.length)];
      bool structure = true;
      for (std::size_t m = 1; m <= M; ++m) {
        std::int64_t s = 0;
        for (std::size_t d = 1; d <= m; ++d) {
          if (m % d == 0) s += static_cast<std::int64_t>(d) * P[d];
        }
        structure = structure && s == N[k][m];
      }
      add_check("primitive_structure_" + kind, true, structure ? "pass" : "fail", nullptr);

      const PowerSeriesPrefix product = primitive_product(classes[k], opts.max_order);
      const WeightedSeries S = assemble_S_series(classes[k], opts.max_order);
      const PowerSeriesPrefix e = real_part(exp_neg_integral(S));
      const bool exp_ok = e == product;
      add_check("exp_identity_" + kind, true, exp_ok ? "pass" : "fail",
                Json{{"primitive_product", to_json(product)}, {"exp_neg_integral", to_json(e)}});
    }

    if (opts.torus) {
      for (int k = 0; k < 2; ++k) {
        const auto geo = torus_line_counts(*opts.torus, opts.max_order, kinds[k]);
        const bool ok = geo == N[k];
        add_check("line_oracle_" + to_string(kinds[k]), true, ok ? "pass" : "fail",
                  Json{{"geometric", int_list(geo)}});
      }
    } else {
      add_check("line_oracle", false, "skipped", Json{{"reason", "no torus geometry sidecar"}});
    }
  });
  if (rep.failed_stage) return finish();

  stage("identity", [&] {
    // Recorded outcome only: the primitive edge product against the zeta
    // quotients in both sign conventions and both orientations.
    const PowerSeriesPrefix product = primitive_product(classes[0], opts.max_order);
    Json comps = Json::array();
    const IntPolynomial z1sq = z1.substitute_power(2);
    const std::pair<std::string, RationalFn> forms[] = {
        {"Z1(u^2)/Z2(-u)", RationalFn(z1sq, z2.substitute_neg())},
        {"Z1(u^2)/Z2(u)", RationalFn(z1sq, z2)},
        {"Z2(-u)/Z1(u^2)", zeta_ratio(z1, z2, SignConvention::minus_u)},
        {"Z2(u)/Z1(u^2)", zeta_ratio(z1, z2, SignConvention::plus_u)},
    };
    for (const auto& [name, f] : forms) {
      const PowerSeriesPrefix e = expand(f, M);
      const auto mis = first_mismatch(product, e);
      comps.push_back(Json{{"form", name},
                           {"match", !mis.has_value()},
                           {"first_mismatch", optional_json(mis)},
                           {"expansion", to_json(e)}});
    }
    doc["identity"] = Json{{"primitive_product", to_json(product)}, {"comparisons", comps}};
  });
  if (rep.failed_stage) return finish();

  stage("rh", [&] {
    const RHReport rh = classify_ramanujan(zeta_ratio(z1, z2), c.q, euler_characteristic(c),
                                           opts.tol, simplex_counts(c));
    doc["rh"] = to_json(rh);
  });
  return finish();
}

Json run_cone(const ConeArgs& args) {
  const auto r = args.functionals.size();
  if (r == 0) throw InputError("at least one functional is required");
  LatticeCone cone = LatticeCone::standard(args.functionals);
  if (args.lattice) {
    if (args.lattice->size() != r) throw InputError("lattice needs " + std::to_string(r) + " basis vectors");
    cone.lattice_basis = *args.lattice;
  }
  require_valid(cone);
  const CharacterData chi = args.character ? CharacterData{*args.character}
                                           : CharacterData::trivial(static_cast<int>(r));
  if (chi.multipliers.size() != r) throw InputError("character needs " + std::to_string(r) + " multipliers");
  if (args.eval && args.eval->size() != r) {
    throw InputError("evaluation point needs " + std::to_string(r) + " coordinates");
  }

  const ConeDecomposition d = decompose_cone(cone);
  const ConeSeries series = cone_series_closed_form(cone, d, chi);
  Json doc;
  doc["schema"] = kConeSchema;
  doc["rank"] = r;
  doc["functionals"] = vectors_json(cone.functionals);
  doc["lattice"] = vectors_json(cone.lattice_basis);
  doc["generators"] = vectors_json(d.generators);
  doc["fundamental_set"] = vectors_json(d.fundamental_set);
  doc["index"] = d.fundamental_set.size();
  doc["closed_form"] = to_json(series);

  Json oracle;
  if (!args.eval) {
    oracle = Json{{"status", "skipped"}, {"reason", "no evaluation point"}};
  } else if (!series.converges_at(*args.eval)) {
    oracle = Json{{"status", "skipped"},
                  {"reason", "outside the convergence region"},
                  {"closed_form", complex_json(series.evaluate(*args.eval))}};
  } else {
    const auto closed = series.evaluate(*args.eval);
    // The tail target is relative to the closed form, matching the
    // relative error criterion below.
    const double scale = std::abs(closed) > 0 ? std::min(1.0, std::abs(closed)) : 1.0;
    const std::int64_t bound =
        args.oracle_bound.value_or(oracle_bound(series, *args.eval, 1e-12 * scale));
    const auto partial = evaluate_partial_sum(cone, chi, *args.eval, bound);
    const double rel = std::abs(closed - partial) / std::abs(closed);
    oracle = Json{{"status", rel < 1e-9 ? "pass" : "fail"},
                  {"bound", bound},
                  {"closed_form", complex_json(closed)},
                  {"partial_sum", complex_json(partial)},
                  {"relative_error", rel}};
  }
  doc["oracle"] = oracle;
  return doc;
}

}  // namespace btz
