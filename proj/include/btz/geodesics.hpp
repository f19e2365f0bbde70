#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "btz/complex.hpp"
#include "btz/generators.hpp"
#include "btz/numeric.hpp"
#include "btz/polynomial.hpp"

namespace btz {

// edge: closed positive paths of directed edges (length = number of edges).
// gallery: closed galleries of pointed chambers (length = number of chambers).
enum class PathKind { edge, gallery };

std::string to_string(PathKind kind);
PathKind parse_path_kind(const std::string& text);

inline constexpr int kDefaultMaxOrder = 12;
inline constexpr int kMaxOrderCap = 20;

// Scalar weights of a class in the S-series. An unset lambda means l(gamma_0).
struct GeodesicWeight {
  std::optional<BigRational> lambda;
  BigInt chi_r_abs{1};
  GaussRational trace_omega{1};
  GaussRational trace_sigma{1};
};

// A rotation class of closed sequences. States are indices into
// directed_edges(c) (edge kind) or pointed_chambers(c) (gallery kind); the
// representative is the lexicographically least rotation.
struct GeodesicClass {
  PathKind kind = PathKind::edge;
  int length = 0;
  int primitive_length = 0;
  int power = 1;
  std::vector<std::int64_t> representative;
  GeodesicWeight weight;
};

// N[m] = based closed sequences of length m, P[m] = primitive classes of
// length m; index 0 unused.
struct CountTable {
  std::vector<std::int64_t> N;
  std::vector<std::int64_t> P;
};

// Depth-first enumeration over the local transition rule; no matrix code.
// Throws ResourceLimit when max_order exceeds kMaxOrderCap and allow_large is
// false, DomainError on complexes with boundary.
std::vector<std::int64_t> count_closed_paths(const TypedComplex& c, int max_order, PathKind kind,
                                             bool allow_large = false);

// One class per primitive rotation class of length <= max_order, sorted by
// (length, representative).
std::vector<GeodesicClass> enumerate_primitive_classes(const TypedComplex& c, int max_order,
                                                       PathKind kind, bool allow_large = false);

// All powers gamma_0^mu with mu * l(gamma_0) <= max_order of the given
// primitive classes; weights are copied from the primitive class.
std::vector<GeodesicClass> with_powers(const std::vector<GeodesicClass>& primitives,
                                       int max_order);

CountTable count_table(const TypedComplex& c, int max_order, PathKind kind,
                       bool allow_large = false);

// prod over classes with power 1 of (1 - u^l), truncated at max_order.
PowerSeriesPrefix primitive_product(const std::vector<GeodesicClass>& classes, int max_order);

// sum lambda * |chi_r| * tr(omega) * tr(sigma) * u^l(gamma). With
// expand_powers every class of power 1 also contributes its powers (same
// weights); otherwise the list is summed as given.
WeightedSeries assemble_S_series(const std::vector<GeodesicClass>& classes, int max_order,
                                 bool expand_powers = true);

// Geometric oracle on an apartment torus: closed edge lines and closed
// galleries along straight lines through chamber interiors, counted by
// marching in the plane and reducing modulo the lattice.
std::vector<std::int64_t> torus_line_counts(const TorusGeometry& g, int max_order, PathKind kind);

}  // namespace btz
