#include <doctest.h>

#include "btz/error.hpp"
#include "btz/generators.hpp"
#include "btz/pipeline.hpp"
#include "oracles.hpp"

using namespace btz;

namespace {

const Json* find_check(const Json& doc, const std::string& name) {
  for (const auto& c : doc.at("checks")) {
    if (c.at("name") == name) return &c;
  }
  return nullptr;
}

std::string status(const Json& doc, const std::string& name) {
  const Json* c = find_check(doc, name);
  return c ? c->at("status").get<std::string>() : "missing";
}

}  // namespace

TEST_CASE("verify: 3-cycle") {
  const auto rep = run_verify(gen_cycle_complex(3));
  CHECK(rep.passed);
  CHECK_FALSE(rep.failed_stage.has_value());
  const auto& doc = rep.doc;
  CHECK(doc.at("schema") == kVerifySchema);
  CHECK(status(doc, "duality_edge") == "pass");
  CHECK(status(doc, "duality_gallery") == "pass");
  CHECK(status(doc, "line_oracle") == "skipped");
  CHECK(rational_from_json(doc.at("zeta").at("ratio_minus_u")) ==
        RationalFn(IntPolynomial{1}, IntPolynomial::one_minus(1, 6)));
  CHECK(doc.at("rh").at("verdict") == "inconclusive");
  CHECK(doc.contains("timings_ms"));
}

TEST_CASE("verify: tori with the line oracle") {
  for (const auto& spec : {ApartmentSpec::from_columns({3, 0}, {0, 3}),
                           ApartmentSpec::from_columns({3, 0}, {1, 4})}) {
    const auto t = gen_apartment_torus(spec);
    VerifyOptions opts;
    opts.torus = t.geometry;
    const auto rep = run_verify(t.complex, opts);
    CHECK(rep.passed);
    for (const char* name : {"duality_edge", "duality_gallery", "primitive_structure_edge",
                             "primitive_structure_gallery", "exp_identity_edge",
                             "exp_identity_gallery", "line_oracle_edge", "line_oracle_gallery"}) {
      CAPTURE(name);
      CHECK(status(rep.doc, name) == "pass");
    }
    const auto& comps = rep.doc.at("identity").at("comparisons");
    CHECK(comps.size() == 4);
    for (const auto& c : comps) CHECK(c.contains("match"));
  }
}

TEST_CASE("verify: stage errors are recorded") {
  TypedComplex bad = gen_cycle_complex(3);
  bad.vertices[1].type = 0;
  const auto rep = run_verify(bad);
  CHECK_FALSE(rep.passed);
  CHECK(rep.failed_stage == "validate");
  CHECK(rep.doc.at("error").at("stage") == "validate");

  const auto ball = run_verify(gen_building_ball({2, 1, 0, 3}).complex);
  CHECK_FALSE(ball.passed);
  CHECK(ball.failed_stage == "validate");

  VerifyOptions big;
  big.max_order = 25;
  CHECK(run_verify(gen_cycle_complex(3), big).failed_stage == "validate");
}

TEST_CASE("verify: reports are deterministic without timings") {
  VerifyOptions opts;
  opts.timings = false;
  const auto c = gen_apartment_torus(ApartmentSpec::from_columns({3, 0}, {1, 4})).complex;
  const auto a = run_verify(c, opts).doc.dump();
  const auto b = run_verify(c, opts).doc.dump();
  CHECK(a == b);
  CHECK(a.find("timings_ms") == std::string::npos);
}

TEST_CASE("cone reports") {
  ConeArgs coord;
  coord.functionals = {{1, 0}, {0, 1}};
  coord.eval = std::vector<std::complex<double>>{0.5, 0.5};
  const Json j = run_cone(coord);
  CHECK(j.at("schema") == kConeSchema);
  CHECK(j.at("fundamental_set") == Json::parse("[[1,1]]"));
  CHECK(j.at("generators") == Json::parse("[[1,0],[0,1]]"));
  CHECK(j.at("oracle").at("status") == "pass");

  ConeArgs line;
  line.functionals = {{1}};
  const Json l = run_cone(line);
  CHECK(l.at("closed_form").at("terms").size() == 1);
  CHECK(l.at("oracle").at("status") == "skipped");

  ConeArgs bad;
  bad.functionals = {{1, 0}, {0, 1}};
  bad.lattice = std::vector<IntVector>{{1, 0}};
  CHECK_THROWS_AS(run_cone(bad), InputError);
  ConeArgs bad_eval = coord;
  bad_eval.eval = std::vector<std::complex<double>>{0.5};
  CHECK_THROWS_AS(run_cone(bad_eval), InputError);
}

TEST_CASE("json encodings round-trip") {
  const IntPolynomial p{1, 0, -3};
  CHECK(polynomial_from_json(to_json(p)) == p);
  const RationalFn f(IntPolynomial{1, 2}, IntPolynomial::one_minus(8, 3));
  CHECK(rational_from_json(to_json(f)) == f);
  CHECK_THROWS_AS(polynomial_from_json(Json::parse("[\"x\"]")), InputError);
  CHECK(to_json(pow(IntPolynomial{1, 1000000}, 4))[4] == "1000000000000000000000000");
}
