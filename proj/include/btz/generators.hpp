#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "btz/complex.hpp"

namespace btz {

// Plane coordinates of the A2 tiling: a vertex is an integer pair (i, j) in
// the basis e1 = (1, 0), e2 = (1/2, sqrt(3)/2). Neighbors differ by
// +-(1,0), +-(0,1), +-(-1,1) and the type of (i, j) is (i - j) mod 3.
using PlanePoint = std::array<std::int64_t, 2>;

int plane_type(const PlanePoint& p);
// Combinatorial distance in the 1-skeleton of the tiling.
std::int64_t hex_norm(const PlanePoint& p);

// Columns of `basis` span the translation lattice that is divided out.
// Columns must preserve types, i.e. satisfy i = j (mod 3).
struct ApartmentSpec {
  std::array<std::array<std::int64_t, 2>, 2> basis{};  // basis[row][col]

  static ApartmentSpec from_columns(PlanePoint c0, PlanePoint c1) {
    return {{{{c0[0], c1[0]}, {c0[1], c1[1]}}}};
  }
  PlanePoint column(int k) const { return {basis[0][k], basis[1][k]}; }
  std::int64_t determinant() const {
    return basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0];
  }
};

// Quotient of the plane by the translation lattice; coordinates are the
// canonical coset representatives, indexed by vertex id.
struct TorusGeometry {
  ApartmentSpec spec;
  std::vector<PlanePoint> coords;

  // Canonical representative of p modulo the lattice.
  PlanePoint reduce(const PlanePoint& p) const;
  bool in_lattice(const PlanePoint& p) const;
  VertexId vertex_at(const PlanePoint& p) const;

  // Hermite form of the lattice: columns (h00, h10) and (0, h11).
  std::int64_t h00 = 1, h10 = 0, h11 = 1;
};

struct TorusComplex {
  TypedComplex complex;
  TorusGeometry geometry;
};

// Throws InputError for a singular basis, for a lattice with a nonzero vector
// of combinatorial length <= 2 ("quotient too small"), and for a basis that
// does not preserve types.
TorusComplex gen_apartment_torus(const ApartmentSpec& spec);

struct BallSpec {
  std::int64_t q = 2;
  int radius = 1;
  int center_type = 0;
  int max_radius = 3;
};

// Vertex labels of a building ball: the lattice class in Hermite form and the
// distance to the center.
struct BallGeometry {
  std::int64_t q = 0;
  int radius = 0;
  std::vector<std::string> labels;
  std::vector<int> distance;
};

struct BallComplex {
  TypedComplex complex;
  BallGeometry geometry;
};

// Radius-r ball around a vertex of the building of PGL3 over F_q((t)),
// as the full subcomplex on lattice classes within distance r. Vertices at
// distance exactly r are marked as boundary.
BallComplex gen_building_ball(const BallSpec& spec);

// n-cycle with types 0,1,2,0,1,2,... and no chambers; n a positive multiple of 3.
TypedComplex gen_cycle_complex(std::int64_t n);

// Sidecar geometry files (".geom", JSON).
std::string save_geometry(const TorusGeometry& g);
std::string save_geometry(const BallGeometry& g);
// Returns the torus geometry stored in a sidecar; nullopt if the file holds
// another kind of geometry.
std::optional<TorusGeometry> load_torus_geometry(const std::string& text);

// If (q, prime, exponent) with q = p^k, returns true.
bool prime_power(std::int64_t q, std::int64_t* prime = nullptr, int* exponent = nullptr);

}  // namespace btz
