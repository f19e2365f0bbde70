#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "btz/error.hpp"
#include "btz/rh_analysis.hpp"
#include "oracles.hpp"

using namespace btz;

namespace {

bool has_root_near(const std::vector<Root>& roots, Root z, long double eps) {
  return std::any_of(roots.begin(), roots.end(), [&](const Root& r) { return std::abs(r - z) < eps; });
}

// 1 - k u + m u^2: inverse roots of modulus sqrt(m) when k^2 < 4m.
IntPolynomial quad(long k, long m) { return IntPolynomial{1, -k, m}; }

}  // namespace

TEST_CASE("roots of small polynomials") {
  const auto cube = polynomial_roots(IntPolynomial::one_minus(1, 3));
  REQUIRE(cube.size() == 3);
  for (const auto& z : cube) CHECK(std::abs(std::abs(z) - 1.0L) < 1e-12L);
  CHECK(has_root_near(cube, Root(1, 0), 1e-12L));
  CHECK(has_root_near(cube, Root(-0.5L, std::sqrt(3.0L) / 2), 1e-12L));

  const auto half = polynomial_roots(IntPolynomial{1, -2});
  REQUIRE(half.size() == 1);
  CHECK(std::abs(half[0] - Root(0.5L, 0)) < 1e-15L);

  const auto planted = polynomial_roots(quad(2, 2));
  REQUIRE(planted.size() == 2);
  for (const auto& z : planted) CHECK(std::abs(std::abs(z) - 1 / std::sqrt(2.0L)) < 1e-9L);
  CHECK(has_root_near(planted, Root(0.5L, 0.5L), 1e-12L));

  CHECK(polynomial_roots(IntPolynomial{7}).empty());
  CHECK_THROWS_AS(polynomial_roots(IntPolynomial{}), DomainError);
}

TEST_CASE("repeated roots come back with multiplicity") {
  const auto p = pow(IntPolynomial{1, -3}, 4) * pow(quad(1, 1), 2) * IntPolynomial{0, 0, 1};
  const auto roots = polynomial_roots(p);
  REQUIRE(roots.size() == static_cast<std::size_t>(p.degree()));
  CHECK(std::count_if(roots.begin(), roots.end(),
                      [](const Root& z) { return std::abs(z - Root(1.0L / 3, 0)) < 1e-12L; }) == 4);
  CHECK(std::count_if(roots.begin(), roots.end(), [](const Root& z) { return std::abs(z) < 1e-15L; }) == 2);
}

TEST_CASE("roots are residual-bounded, conjugation closed and deterministic") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> d(-9, 9);
  for (int t = 0; t < 20; ++t) {
    std::vector<BigInt> c;
    for (int i = 0; i <= 4 + t * 2; ++i) c.emplace_back(d(rng));
    c[0] = 1;
    if (c.back() == 0) c.back() = 3;
    const IntPolynomial p(c);
    const auto roots = polynomial_roots(p);
    CHECK(roots.size() == static_cast<std::size_t>(p.degree()));
    for (const auto& z : roots) {
      long double scale = 0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        scale += std::abs(c[i].get_d()) * std::pow(std::abs(z), static_cast<long double>(i));
      }
      CHECK(std::abs(p.evaluate(z)) <= 1e-9L * scale);
      CHECK(has_root_near(roots, std::conj(z), 1e-7L));
    }
    CHECK(polynomial_roots(p) == roots);
  }
}

TEST_CASE("classifier: tempered synthetic ratio") {
  const auto cube = IntPolynomial::one_minus(1, 3);
  const auto p1 = quad(2, 2);
  const RationalFn f(pow(cube, 2) * p1, IntPolynomial::one_minus(8, 3) * cube);
  // After cancellation the net exponent of 1 - u^3 is 1, so chi = 3 does not
  // match; chi = 2 does.
  const auto r = classify_ramanujan(f, 2, 3);
  CHECK(r.euler_factor_exponent == 1);
  CHECK(r.euler_exponent_matches == false);
  CHECK(r.pole_factor_found);
  CHECK(r.P1 == p1);
  CHECK(r.P2 == IntPolynomial{1});
  CHECK(r.verdict == Verdict::ramanujan);
  const auto r2 = classify_ramanujan(f, 2, 2);
  CHECK(r2.euler_exponent_matches == true);

  // Exponent chi - 1 = 2 in the numerator after cancellation.
  const RationalFn g(pow(cube, 2) * p1, IntPolynomial::one_minus(8, 3));
  const SimplexCounts counts{4, 14, 0};  // N1 - 3 N0 + 6 = 8
  const auto rg = classify_ramanujan(g, 2, 3, 1e-9, counts);
  CHECK(rg.euler_factor_exponent == 2);
  CHECK(rg.euler_exponent_matches == true);
  CHECK(rg.verdict == Verdict::ramanujan);
  CHECK(rg.expected_p1_degree == 8);
  CHECK(rg.p1_degree_matches == false);
  const auto rc = classify_ramanujan(g, 2, 3, 1e-9, SimplexCounts{4, 8, 0});
  CHECK(rc.p1_degree_matches == true);
  for (const auto& root : rg.P1_roots) {
    CHECK(root.tempered);
    CHECK(std::abs(root.modulus - 1 / std::sqrt(2.0L)) < 1e-9L);
  }
}

TEST_CASE("classifier: non-tempered controls") {
  const auto cube = IntPolynomial::one_minus(1, 3);
  // 1 - 2u divides 1 - 8u^3, so this ratio reduces to
  // (1 - u^3) / (1 + 2u + 4u^2): the pole factor is gone and the witnesses
  // sit in P2 with modulus 1/2.
  const RationalFn f(pow(cube, 2) * IntPolynomial{1, -2}, IntPolynomial::one_minus(8, 3) * cube);
  const auto r = classify_ramanujan(f, 2, 3);
  CHECK(r.verdict == Verdict::non_tempered_witness);
  CHECK_FALSE(r.pole_factor_found);
  CHECK(r.P1_roots.empty());
  REQUIRE(r.P2_roots.size() == 2);
  for (const auto& x : r.P2_roots) {
    CHECK_FALSE(x.tempered);
    CHECK(std::abs(x.modulus - 0.5L) < 1e-12L);
  }

  // 1 + 2u survives the reduction: inverse root modulus 2 in P1.
  const RationalFn g(pow(cube, 2) * IntPolynomial{1, 2}, IntPolynomial::one_minus(8, 3) * cube);
  const auto w = classify_ramanujan(g, 2, 2);
  CHECK(w.verdict == Verdict::non_tempered_witness);
  CHECK(w.pole_factor_found);
  CHECK(w.euler_exponent_matches == true);
  REQUIRE(w.P1_roots.size() == 1);
  CHECK_FALSE(w.P1_roots[0].tempered);
  CHECK(std::abs(w.P1_roots[0].root - Root(-0.5L, 0)) < 1e-12L);
}

TEST_CASE("classifier: policy cases") {
  const RationalFn f(IntPolynomial{1}, IntPolynomial::one_minus(1, 6));
  const auto r = classify_ramanujan(f, std::nullopt, std::nullopt);
  CHECK(r.verdict == Verdict::inconclusive);
  CHECK_FALSE(r.euler_exponent_matches.has_value());
  CHECK(classify_ramanujan(f, 1, 0).verdict == Verdict::inconclusive);

  // Missing pole factor is reported, not fatal.
  const auto np = classify_ramanujan(RationalFn(quad(2, 2), IntPolynomial{1}), 2, 1);
  CHECK_FALSE(np.pole_factor_found);
  CHECK(np.verdict == Verdict::ramanujan);
}

TEST_CASE("classifier: boundary cases are not silently classified") {
  // |root| = (q-1)^{-1/2}: relative deviation about 1/(2q) = 5e-9, which is
  // outside tol = 1e-9 but within 10 tol.
  const long q = 100000000;
  const IntPolynomial near{1, 0, q - 1};
  const auto r = classify_ramanujan(RationalFn(near, IntPolynomial{1}), q, 1);
  REQUIRE(r.P1_roots.size() == 2);
  CHECK(r.P1_roots[0].boundary);
  CHECK(r.verdict == Verdict::inconclusive);
  const IntPolynomial exact{1, 0, q};
  CHECK(classify_ramanujan(RationalFn(exact, IntPolynomial{1}), q, 1).verdict == Verdict::ramanujan);
  const IntPolynomial far{1, 0, q - 100};
  CHECK(classify_ramanujan(RationalFn(far, IntPolynomial{1}), q, 1).verdict ==
        Verdict::non_tempered_witness);
}

TEST_CASE("planted moduli are recovered for q in {2,3,4,5}") {
  for (long q : {2L, 3L, 4L, 5L}) {
    // Tempered factors 1 - k u + q u^2, |k| < 2 sqrt(q).
    IntPolynomial p{1};
    std::vector<long> ks;
    for (long k = 0; k * k < 4 * q; ++k) ks.push_back(k);
    for (long k : ks) p = p * quad(k, q);
    const auto r = classify_ramanujan(RationalFn(p, IntPolynomial{1}), q, 1);
    CHECK(r.verdict == Verdict::ramanujan);
    const auto w = classify_ramanujan(RationalFn(p * IntPolynomial{1, q}, IntPolynomial{1}), q, 1);
    CHECK(w.verdict == Verdict::non_tempered_witness);
    const auto count_bad = std::count_if(w.P1_roots.begin(), w.P1_roots.end(),
                                         [](const RootReport& x) { return !x.tempered; });
    CHECK(count_bad == 1);
  }
}
