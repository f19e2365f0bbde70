#include <doctest.h>

#include <algorithm>
#include <random>

#include "btz/error.hpp"
#include "btz/cone_zeta.hpp"
#include "btz/generators.hpp"
#include "oracles.hpp"

using namespace btz;

namespace {

LatticeCone second_cone() { return LatticeCone::standard({{1, 0}, {-1, 2}}); }

std::int64_t det(const std::vector<IntVector>& m) {
  if (m.size() == 1) return m[0][0];
  if (m.size() == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

LatticeCone random_cone(std::mt19937& rng, int r) {
  std::uniform_int_distribution<int> entry(-5, 5), small(-1, 1), diag(1, 3);
  while (true) {
    LatticeCone c;
    c.rank = r;
    c.functionals.assign(static_cast<std::size_t>(r), IntVector(static_cast<std::size_t>(r)));
    for (auto& f : c.functionals) {
      for (auto& x : f) x = entry(rng);
    }
    if (det(c.functionals) == 0) continue;
    // Upper triangular basis: determinant is the diagonal product.
    c.lattice_basis.assign(static_cast<std::size_t>(r), IntVector(static_cast<std::size_t>(r), 0));
    for (int k = 0; k < r; ++k) {
      for (int i = 0; i < k; ++i) c.lattice_basis[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = small(rng);
      c.lattice_basis[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] = diag(rng);
    }
    return c;
  }
}

IntVector compose(const ConePoint& p, const std::vector<IntVector>& gens) {
  IntVector v = p.v0;
  for (std::size_t j = 0; j < gens.size(); ++j) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += p.k[j] * gens[j][i];
  }
  return v;
}

}  // namespace

TEST_CASE("generators of the basic cones") {
  CHECK(cone_generators(LatticeCone::standard({{1, 0}, {0, 1}})) ==
        std::vector<IntVector>{{1, 0}, {0, 1}});
  CHECK(cone_generators(second_cone()) == std::vector<IntVector>{{2, 1}, {0, 1}});
  CHECK(cone_generators(LatticeCone::standard({{1}})) == std::vector<IntVector>{{1}});
  CHECK_THROWS_WITH_AS(cone_generators(LatticeCone::standard({{1, 2}, {2, 4}})),
                       doctest::Contains("degenerate"), InputError);
}

TEST_CASE("fundamental sets of the basic cones") {
  const auto coord = decompose_cone(LatticeCone::standard({{1, 0}, {0, 1}}));
  CHECK(coord.fundamental_set == std::vector<IntVector>{{1, 1}});
  const auto second = decompose_cone(second_cone());
  CHECK(second.fundamental_set == std::vector<IntVector>{{1, 1}, {2, 2}});
  CHECK(decompose_cone(LatticeCone::standard({{1}})).fundamental_set == std::vector<IntVector>{{1}});
}

TEST_CASE("decompose on the basic cones") {
  const auto coord = LatticeCone::standard({{1, 0}, {0, 1}});
  const auto dc = decompose_cone(coord);
  CHECK(decompose(coord, dc, {3, 4}) == ConePoint{{1, 1}, {2, 3}});
  CHECK_FALSE(decompose(coord, dc, {0, 5}).has_value());
  const auto s = second_cone();
  CHECK(decompose(s, decompose_cone(s), {4, 3}) == ConePoint{{2, 2}, {1, 0}});

  LatticeCone even = coord;
  even.lattice_basis = {{2, 0}, {0, 1}};
  CHECK_THROWS_AS(decompose(even, decompose_cone(even), {1, 1}), InputError);
  CHECK_THROWS_AS(decompose(coord, dc, {1, 1, 1}), InputError);
}

TEST_CASE("closed forms of the basic cones") {
  const auto coord = LatticeCone::standard({{1, 0}, {0, 1}});
  const auto s = cone_series_closed_form(coord, decompose_cone(coord), CharacterData::trivial(2));
  REQUIRE(s.terms.size() == 1);
  CHECK(s.terms[0].exponents == IntVector{1, 1});
  CHECK(s.poles[0].exponent == 1);
  CHECK(s.poles[1].exponent == 1);
  const GaussRational half(BigRational(1, 2));
  CHECK(s.evaluate(std::vector<GaussRational>{half, half}) == GaussRational(1));
  CHECK(std::abs(evaluate_partial_sum(coord, CharacterData::trivial(2), {0.5, 0.5}, 80) - 1.0) < 1e-12);
  CHECK(evaluate_partial_sum(coord, CharacterData::trivial(2), {0.5, 0.5}, 0) == std::complex<double>(0));

  const auto line = LatticeCone::standard({{1}});
  const auto l = cone_series_closed_form(line, decompose_cone(line), CharacterData::trivial(1));
  const GaussRational third(BigRational(1, 3));
  // u / (1 - u) at 1/3
  CHECK(l.evaluate(std::vector<GaussRational>{third}) == GaussRational(BigRational(1, 2)));

  const auto sc = second_cone();
  const auto ss = cone_series_closed_form(sc, decompose_cone(sc), CharacterData::trivial(2));
  const std::vector<std::complex<double>> u{0.3, 0.3};
  const auto closed = ss.evaluate(u);
  CHECK(std::abs(closed - evaluate_partial_sum(sc, CharacterData::trivial(2), u, 60)) / std::abs(closed) < 1e-9);
}

TEST_CASE("characters enter through the multipliers") {
  const auto coord = LatticeCone::standard({{1, 0}, {0, 1}});
  const CharacterData chi{{GaussRational(-1), GaussRational(0, 1)}};
  const auto s = cone_series_closed_form(coord, decompose_cone(coord), chi);
  const std::vector<std::complex<double>> u{0.4, std::complex<double>(0.1, 0.3)};
  // sum (-u1)^a (i u2)^b over a, b >= 1, as a product of two geometric series
  const std::complex<double> x = -u[0], y = std::complex<double>(0, 1) * u[1];
  const auto expect = x / (1.0 - x) * y / (1.0 - y);
  CHECK(std::abs(s.evaluate(u) - expect) < 1e-14);
  CHECK(std::abs(evaluate_partial_sum(coord, chi, u, oracle_bound(u)) - expect) < 1e-11);
  CHECK(chi.value({2, 3}) == GaussRational(0, -1));
}

TEST_CASE("non-unitary characters: the oracle bound follows the decay") {
  // Skewed cone, multipliers of modulus != 1; the second evaluation point has
  // |u_2| > 1 but the character pulls it back inside the convergence region.
  const auto cone = LatticeCone::standard({{2, 1}, {-1, 3}});
  const auto d = decompose_cone(cone);
  for (const auto& [m, u] :
       {std::pair{std::vector<GaussRational>{GaussRational(BigRational(1, 2), 3), GaussRational(0, -1)},
                  std::vector<std::complex<double>>{0.25, {0, 0.2}}},
        std::pair{std::vector<GaussRational>{GaussRational(BigRational(1, 3)), GaussRational(BigRational(1, 4))},
                  std::vector<std::complex<double>>{0.5, 1.2}}}) {
    const CharacterData chi{m};
    const auto s = cone_series_closed_form(cone, d, chi);
    REQUIRE(s.converges_at(u));
    const auto closed = s.evaluate(u);
    const double eps = 1e-12 * std::min(1.0, std::abs(closed));
    const auto partial = evaluate_partial_sum(cone, chi, u, oracle_bound(s, u, eps));
    CHECK(std::abs(closed - partial) / std::abs(closed) < 1e-9);
  }
}

TEST_CASE("random cones: generators, fundamental set, bijection") {
  std::mt19937 rng(2024);
  for (int t = 0; t < 30; ++t) {
    const int r = 1 + t % 3;
    const auto cone = random_cone(rng, r);
    CAPTURE(t);
    const auto d = decompose_cone(cone);
    const auto& gens = d.generators;
    // a_j lies on the line, in the lattice, with alpha_j(a_j) minimal: the
    // only lattice points on the line are integer multiples of a_j.
    for (int j = 0; j < r; ++j) {
      const auto& a = gens[static_cast<std::size_t>(j)];
      CHECK(cone.alpha(j, a) > 0);
      for (int i = 0; i < r; ++i) {
        if (i != j) CHECK(cone.alpha(i, a) == 0);
      }
      CHECK(oracle::lattice_member(cone, a));
      std::int64_t g = 0;
      for (auto x : a) g = std::gcd(g, x);
      for (std::int64_t k = 2; k <= g; ++k) {
        if (g % k != 0) continue;
        IntVector b = a;
        for (auto& x : b) x /= k;
        CHECK_FALSE(oracle::lattice_member(cone, b));
      }
    }
    // Each coset has exactly one point with t in (0,1]^r, so distinct members
    // satisfying the corner conditions, |F| of them, pin F down. The box scan
    // is an independent cross-check when the box is small.
    const std::set<IntVector> distinct(d.fundamental_set.begin(), d.fundamental_set.end());
    CHECK(distinct.size() == d.fundamental_set.size());
    if (oracle::box_volume(gens) <= 200000) {
      CHECK(distinct == oracle::brute_fundamental_set(cone, gens));
    }
    std::int64_t lattice_det = std::abs(det(cone.lattice_basis));
    CHECK(static_cast<std::int64_t>(d.fundamental_set.size()) * lattice_det == std::abs(det(gens)));
    std::size_t corner_failures = 0;
    for (const auto& v0 : d.fundamental_set) {
      bool ok = cone.contains(v0) && oracle::lattice_member(cone, v0);
      for (const auto& a : gens) {
        IntVector w = v0;
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= a[i];
        ok = ok && !cone.contains(w);
      }
      corner_failures += ok ? 0 : 1;
    }
    CHECK(corner_failures == 0);
    const std::int64_t box = r == 3 ? 12 : 30;
    IntVector v(static_cast<std::size_t>(r), -box);
    std::int64_t bad = 0;
    while (true) {
      if (oracle::lattice_member(cone, v)) {
        const auto p = decompose(cone, d, v);
        bool ok = p.has_value() == cone.contains(v);
        if (p) {
          ok = ok && compose(*p, gens) == v &&
               std::binary_search(d.fundamental_set.begin(), d.fundamental_set.end(), p->v0) &&
               std::all_of(p->k.begin(), p->k.end(), [](std::int64_t k) { return k >= 0; });
        }
        bad += ok ? 0 : 1;
      } else {
        try {
          decompose(cone, d, v);
          ++bad;
        } catch (const InputError&) {
        }
      }
      std::size_t i = 0;
      while (i < v.size() && ++v[i] > box) v[i++] = -box;
      if (i == v.size()) break;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("random cones: injectivity of composition") {
  std::mt19937 rng(77);
  for (int t = 0; t < 10; ++t) {
    const int r = 2 + t % 2;
    const auto cone = random_cone(rng, r);
    const auto d = decompose_cone(cone);
    std::set<IntVector> seen;
    std::size_t total = 0, mismatches = 0;
    const std::int64_t kmax = r == 2 ? 10 : 4;
    for (const auto& v0 : d.fundamental_set) {
      IntVector k(static_cast<std::size_t>(r), 0);
      while (true) {
        const auto v = compose({v0, k}, d.generators);
        seen.insert(v);
        ++total;
        mismatches += decompose(cone, d, v) == ConePoint{v0, k} ? 0 : 1;
        std::size_t i = 0;
        while (i < k.size() && ++k[i] > kmax) k[i++] = 0;
        if (i == k.size()) break;
      }
    }
    CHECK(seen.size() == total);
    CHECK(mismatches == 0);
  }
}

TEST_CASE("random cones: closed form against partial sums") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> mod(0.1, 0.5), arg(0.0, 6.283185307179586);
  for (int t = 0; t < 12; ++t) {
    const int r = 1 + t % 3;
    const auto cone = random_cone(rng, r);
    const auto d = decompose_cone(cone);
    const auto s = cone_series_closed_form(cone, d, CharacterData::trivial(r));
    std::vector<std::complex<double>> u;
    for (int j = 0; j < r; ++j) u.push_back(std::polar(mod(rng), arg(rng)));
    const auto closed = s.evaluate(u);
    // Tail below 1e-12 relative to the value being compared.
    const double eps = 1e-12 * std::min(1.0, std::abs(closed));
    const auto partial = evaluate_partial_sum(cone, CharacterData::trivial(r), u, oracle_bound(u, eps));
    CHECK(std::abs(closed - partial) / std::abs(closed) < 1e-9);
  }
}

TEST_CASE("cone validation") {
  LatticeCone bad = LatticeCone::standard({{1, 0}, {0, 1}});
  bad.lattice_basis = {{1, 1}, {2, 2}};
  CHECK_THROWS_WITH_AS(require_valid(bad), doctest::Contains("singular"), InputError);
  CHECK_THROWS_AS(require_valid(LatticeCone::standard({{1, 0}, {0}})), InputError);
  CHECK_THROWS_AS(oracle_bound({1.0}), DomainError);
}

TEST_CASE("multivariable S assembly") {
  CHECK(assemble_multivariable_S({{{3}, GaussRational(3)}}, 10) == MultiSeries{{{3}, GaussRational(3)}});
  CHECK(assemble_multivariable_S({}, 10).empty());
  CHECK_THROWS_AS(assemble_multivariable_S({{{-1, 2}, GaussRational(1)}}, 10), InputError);
  const auto two = assemble_multivariable_S(
      {{{1, 2}, GaussRational(2)}, {{1, 2}, GaussRational(-2)}, {{0, 1}, GaussRational(0, 1)}, {{5, 5}, 1}}, 6);
  CHECK(two == MultiSeries{{{0, 1}, GaussRational(0, 1)}});

  // Rank one export from the 3-cycle matches the geodesic series.
  const auto classes = enumerate_primitive_classes(gen_cycle_complex(3), 12, PathKind::edge);
  const auto ms = assemble_multivariable_S(ledger_from_classes(with_powers(classes, 12)), 12);
  const auto s = assemble_S_series(classes, 12);
  for (std::size_t m = 1; m <= 12; ++m) {
    const auto it = ms.find({static_cast<std::int64_t>(m)});
    const GaussRational c = it == ms.end() ? GaussRational(0) : it->second;
    CHECK(c == s.coeffs[m]);
  }
  CHECK(ms.at({3}) == GaussRational(3));
  CHECK(ms.at({6}) == GaussRational(3));
}
