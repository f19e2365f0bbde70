#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace btz {

using VertexId = std::int64_t;

struct Vertex {
  VertexId id = 0;
  int type = 0;

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

using Edge = std::array<VertexId, 2>;
using Chamber = std::array<VertexId, 3>;

// A finite 2-dimensional simplicial complex with Z/3 vertex types.
//
// The struct holds raw data so that malformed inputs can be carried to
// validate_complex() and reported; every operator that needs the simplicial
// structure validates first. Edges and chambers are unordered simplices,
// stored with sorted vertex ids after canonicalize().
struct TypedComplex {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<Chamber> chambers;
  std::optional<std::int64_t> q;
  std::vector<VertexId> boundary;

  // Sorts every simplex internally and every list ascending.
  void canonicalize();
  bool has_boundary() const { return !boundary.empty(); }

  friend bool operator==(const TypedComplex&, const TypedComplex&) = default;
};

struct SimplexCounts {
  std::int64_t n0 = 0;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;

  friend bool operator==(const SimplexCounts&, const SimplexCounts&) = default;
};

struct Violation {
  std::string kind;     // stable machine-readable tag, e.g. "edge joins equal types"
  std::string message;  // names the offending simplex
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
};

ValidationReport validate_complex(const TypedComplex& c);

// Throws InputError listing the violations if c is not valid.
void require_valid(const TypedComplex& c);

SimplexCounts simplex_counts(const TypedComplex& c);
std::int64_t euler_characteristic(const TypedComplex& c);

// Lookup structure over a valid complex: vertex types, adjacency and
// chamber membership in O(1) expected time.
class Incidence {
 public:
  explicit Incidence(const TypedComplex& c);

  int type(VertexId v) const;
  bool has_vertex(VertexId v) const { return index_.contains(v); }
  bool has_edge(VertexId a, VertexId b) const;
  bool has_chamber(VertexId a, VertexId b, VertexId c) const;
  bool is_boundary(VertexId v) const { return boundary_.contains(v); }

  // Sorted neighbor ids.
  std::span<const VertexId> neighbors(VertexId v) const;
  // Vertices completing {a,b} to a chamber, sorted.
  std::span<const VertexId> chamber_apexes(VertexId a, VertexId b) const;

 private:
  std::size_t slot(VertexId v) const;

  std::unordered_map<VertexId, std::size_t> index_;
  std::vector<int> types_;
  std::vector<std::vector<VertexId>> adjacency_;
  std::unordered_set<std::uint64_t> edge_keys_;
  std::unordered_map<std::uint64_t, std::vector<VertexId>> apexes_;
  std::unordered_set<VertexId> boundary_;
};

// Complex file format, version 1 (JSON). save_complex output is canonical:
// equal complexes serialize to identical bytes.
TypedComplex load_complex(std::istream& in);
TypedComplex load_complex_text(const std::string& text);
TypedComplex load_complex_file(const std::string& path);
std::string save_complex(const TypedComplex& c);
void save_complex_file(const TypedComplex& c, const std::string& path);

inline constexpr int kComplexFormatVersion = 1;

}  // namespace btz
