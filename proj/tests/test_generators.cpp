#include <doctest.h>

#include <map>
#include <set>

#include "btz/error.hpp"
#include "btz/generators.hpp"
#include "btz/operators.hpp"
#include "oracles.hpp"

using namespace btz;

namespace {

std::map<VertexId, std::vector<VertexId>> adjacency(const TypedComplex& c) {
  std::map<VertexId, std::vector<VertexId>> adj;
  for (const auto& e : c.edges) {
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  return adj;
}

// Link of v: neighbors, and the link edges (pairs of neighbors spanning a chamber with v).
struct Link {
  std::map<int, int> per_type;
  std::map<VertexId, int> link_degree;
};

Link link_of(const TypedComplex& c, VertexId v) {
  Link l;
  std::map<VertexId, int> type;
  for (const auto& x : c.vertices) type[x.id] = x.type;
  for (const auto& e : c.edges) {
    if (e[0] == v) ++l.per_type[type[e[1]]];
    if (e[1] == v) ++l.per_type[type[e[0]]];
  }
  for (const auto& ch : c.chambers) {
    if (std::find(ch.begin(), ch.end(), v) == ch.end()) continue;
    for (auto w : ch) {
      if (w != v) ++l.link_degree[w];
    }
  }
  return l;
}

}  // namespace

TEST_CASE("apartment torus 3*id") {
  const auto t = gen_apartment_torus(ApartmentSpec::from_columns({3, 0}, {0, 3}));
  CHECK(validate_complex(t.complex).ok);
  CHECK(simplex_counts(t.complex) == SimplexCounts{9, 27, 18});
  CHECK(euler_characteristic(t.complex) == 0);
  CHECK(t.geometry.coords.size() == 9);
}

TEST_CASE("apartment torus local structure") {
  for (const auto& spec : {ApartmentSpec::from_columns({3, 0}, {0, 3}),
                           ApartmentSpec::from_columns({3, 0}, {1, 4}),
                           ApartmentSpec::from_columns({6, 0}, {0, 3})}) {
    const auto t = gen_apartment_torus(spec);
    const auto& c = t.complex;
    const auto counts = simplex_counts(c);
    CHECK(counts.n1 == 3 * counts.n0);
    CHECK(counts.n2 == 2 * counts.n0);
    CHECK(counts.n0 == std::abs(spec.determinant()));
    for (const auto& [v, nbrs] : adjacency(c)) CHECK(nbrs.size() == 6);
    std::map<Edge, int> per_edge;
    std::map<VertexId, int> per_vertex;
    for (const auto& ch : c.chambers) {
      per_edge[{ch[0], ch[1]}]++;
      per_edge[{ch[0], ch[2]}]++;
      per_edge[{ch[1], ch[2]}]++;
      for (auto v : ch) per_vertex[v]++;
    }
    for (const auto& [e, k] : per_edge) CHECK(k == 2);
    for (const auto& [v, k] : per_vertex) CHECK(k == 6);
    CHECK(per_edge.size() == c.edges.size());
  }
}

TEST_CASE("torus generator rejects bad bases") {
  CHECK_THROWS_WITH_AS(gen_apartment_torus(ApartmentSpec::from_columns({3, 0}, {6, 0})),
                       doctest::Contains("degenerate"), InputError);
  CHECK_THROWS_WITH_AS(gen_apartment_torus(ApartmentSpec::from_columns({1, 0}, {0, 1})),
                       doctest::Contains("quotient too small"), InputError);
  CHECK_THROWS_WITH_AS(gen_apartment_torus(ApartmentSpec::from_columns({4, 0}, {0, 4})),
                       doctest::Contains("types"), InputError);
  // Lattice vector (1,1) has combinatorial length 2.
  CHECK_THROWS_WITH_AS(gen_apartment_torus(ApartmentSpec::from_columns({1, 1}, {0, 3})),
                       doctest::Contains("quotient too small"), InputError);
}

TEST_CASE("generators are deterministic") {
  const auto a = gen_apartment_torus(ApartmentSpec::from_columns({3, 0}, {1, 4}));
  const auto b = gen_apartment_torus(ApartmentSpec::from_columns({3, 0}, {1, 4}));
  CHECK(save_complex(a.complex) == save_complex(b.complex));
  CHECK(save_geometry(a.geometry) == save_geometry(b.geometry));
  const auto x = gen_building_ball({3, 1, 1, 3});
  const auto y = gen_building_ball({3, 1, 1, 3});
  CHECK(save_complex(x.complex) == save_complex(y.complex));
}

TEST_CASE("torus geometry sidecar round-trips") {
  const auto t = gen_apartment_torus(ApartmentSpec::from_columns({3, 0}, {1, 4}));
  const auto g = load_torus_geometry(save_geometry(t.geometry));
  REQUIRE(g.has_value());
  CHECK(g->coords == t.geometry.coords);
  const auto ball = gen_building_ball({2, 1, 0, 3});
  CHECK_FALSE(load_torus_geometry(save_geometry(ball.geometry)).has_value());
}

TEST_CASE("building ball counts match the projective plane") {
  for (int q : {2, 3}) {
    const auto plane = oracle::projective_plane(q);
    const std::int64_t points = static_cast<std::int64_t>(plane.points.size());
    std::int64_t flags = 0;
    for (std::size_t p = 0; p < plane.points.size(); ++p) {
      for (std::size_t l = 0; l < plane.lines.size(); ++l) flags += plane.incident(p, l) ? 1 : 0;
    }
    CAPTURE(q);
    CHECK(points == q * q + q + 1);

    const auto ball = gen_building_ball({q, 1, 0, 3});
    const auto& c = ball.complex;
    CHECK(validate_complex(c).ok);
    CHECK(simplex_counts(c) == SimplexCounts{1 + 2 * points, 2 * points + flags, flags});
    CHECK(euler_characteristic(c) == 1);
    // Center is the unique non-boundary vertex.
    CHECK(c.boundary.size() == static_cast<std::size_t>(2 * points));
    VertexId center = -1;
    for (const auto& v : c.vertices) {
      if (std::find(c.boundary.begin(), c.boundary.end(), v.id) == c.boundary.end()) center = v.id;
    }
    REQUIRE(center >= 0);
    Link l = link_of(c, center);
    CHECK(l.per_type[1] == points);
    CHECK(l.per_type[2] == points);
    for (const auto& [w, k] : l.link_degree) CHECK(k == q + 1);
  }
  const auto q2 = gen_building_ball({2, 1, 0, 3});
  CHECK(simplex_counts(q2.complex) == SimplexCounts{15, 35, 21});
}

TEST_CASE("radius-2 ball: interior links are incidence graphs of PG(2,q)") {
  const int q = 2;
  const auto ball = gen_building_ball({q, 2, 0, 3});
  const auto& c = ball.complex;
  CHECK(validate_complex(c).ok);
  int interior = 0;
  for (std::size_t i = 0; i < c.vertices.size(); ++i) {
    if (ball.geometry.distance[i] >= 2) continue;
    ++interior;
    Link l = link_of(c, c.vertices[i].id);
    const int t = c.vertices[i].type;
    CHECK(l.per_type[(t + 1) % 3] == q * q + q + 1);
    CHECK(l.per_type[(t + 2) % 3] == q * q + q + 1);
    for (const auto& [w, k] : l.link_degree) CHECK(k == q + 1);
  }
  CHECK(interior == 15);
}

TEST_CASE("ball edge cases") {
  const auto r0 = gen_building_ball({2, 0, 0, 3});
  CHECK(simplex_counts(r0.complex) == SimplexCounts{1, 0, 0});
  CHECK_THROWS_AS(gen_building_ball({6, 1, 0, 3}), InputError);
  CHECK_THROWS_AS(gen_building_ball({2, 4, 0, 3}), ResourceLimit);
  const auto typed = gen_building_ball({2, 1, 2, 3});
  CHECK(typed.complex.vertices[0].type == 2);
  CHECK(typed.complex.q == 2);
}

TEST_CASE("prime powers") {
  std::int64_t p = 0;
  int k = 0;
  CHECK(prime_power(8, &p, &k));
  CHECK(p == 2);
  CHECK(k == 3);
  CHECK(prime_power(9));
  CHECK_FALSE(prime_power(12));
  CHECK_FALSE(prime_power(1));
  const auto b4 = gen_building_ball({4, 1, 0, 3});
  CHECK(simplex_counts(b4.complex).n0 == 1 + 2 * 21);
}

TEST_CASE("cycle complexes") {
  const auto c3 = gen_cycle_complex(3);
  CHECK(simplex_counts(c3) == SimplexCounts{3, 3, 0});
  CHECK(euler_characteristic(c3) == 0);
  const auto c6 = gen_cycle_complex(6);
  for (std::size_t i = 0; i < c6.vertices.size(); ++i) CHECK(c6.vertices[i].type == static_cast<int>(i % 3));
  CHECK(validate_complex(c6).ok);
  CHECK_THROWS_AS(gen_cycle_complex(4), InputError);
  CHECK_THROWS_AS(gen_cycle_complex(0), InputError);
}
