#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "btz/complex.hpp"

namespace btz {

// Edge oriented in the positive sense: type(head) = type(tail) + 1 (mod 3).
// Every undirected edge has exactly one positive orientation.
struct DirectedEdge {
  VertexId tail = 0;
  VertexId head = 0;

  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
  friend auto operator<=>(const DirectedEdge&, const DirectedEdge&) = default;
};

// A chamber together with one of its three positive edges. With pointer
// a -> b and third vertex c (types t, t+1, t+2) the pointed chamber is the
// state "entered through {a,b}, leaving through the face {b,c} opposite a".
struct PointedChamber {
  Chamber chamber{};  // sorted vertex ids
  DirectedEdge pointer;

  VertexId apex() const;  // the chamber vertex not on the pointer
  friend bool operator==(const PointedChamber&, const PointedChamber&) = default;
  friend auto operator<=>(const PointedChamber&, const PointedChamber&) = default;
};

// Positive orientation of the edge {a, b} of a complex.
DirectedEdge orient_positive(const Incidence& inc, VertexId a, VertexId b);

// Canonical index sets, sorted ascending.
std::vector<DirectedEdge> directed_edges(const TypedComplex& c);
std::vector<PointedChamber> pointed_chambers(const TypedComplex& c);

// Local straightness of the edge path e e2: composable, non-returning, and
// {tail(e), head(e), head(e2)} is not a chamber. Throws InputError when
// head(e) != tail(e2) or either edge is not a positive edge of the complex.
bool positive_step(const Incidence& inc, const DirectedEdge& e, const DirectedEdge& e2);
bool positive_step(const TypedComplex& c, const DirectedEdge& e, const DirectedEdge& e2);

// Gallery rule: (C1, a->b) -> (C2, b->c) where c is the apex of C1, the
// chambers share the face {b, c}, and C2 != C1. The type sequence a, b, c, d
// of the zigzag increases by one at every step.
bool gallery_step(const Incidence& inc, const PointedChamber& p1, const PointedChamber& p2);

// Successors under the local rules; usable on complexes with boundary, where
// they describe the local picture around interior simplices.
std::vector<DirectedEdge> edge_successors(const Incidence& inc, const DirectedEdge& e);
std::vector<PointedChamber> gallery_successors(const Incidence& inc, const PointedChamber& p);

// Sparse integer matrix stored as sorted (row, col, value) triplets.
struct SparseIntMatrix {
  struct Entry {
    std::int64_t row = 0;
    std::int64_t col = 0;
    std::int64_t value = 0;
    friend bool operator==(const Entry&, const Entry&) = default;
    friend auto operator<=>(const Entry&, const Entry&) = default;
  };

  std::int64_t dim = 0;
  std::vector<Entry> entries;

  // Sorts entries and merges duplicates; drops zeros.
  void canonicalize();
  friend bool operator==(const SparseIntMatrix&, const SparseIntMatrix&) = default;
};

// T[e2, e] = 1 iff positive_step(e, e2); index order = directed_edges(c).
// Throws DomainError for complexes with a marked boundary.
SparseIntMatrix build_edge_operator(const TypedComplex& c);

// L[p2, p1] = 1 iff gallery_step(p1, p2); index order = pointed_chambers(c).
SparseIntMatrix build_chamber_operator(const TypedComplex& c);

// Matrix file format: {"dim":n,"triplets":[[row,col,val],...]}, triplets sorted.
std::string save_matrix(const SparseIntMatrix& m);
SparseIntMatrix load_matrix(const std::string& text);

}  // namespace btz
