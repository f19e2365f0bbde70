#include "btz/operators.hpp"

#include <algorithm>

#include <json.hpp>

#include "btz/error.hpp"

namespace btz {

namespace {

std::string fmt(const DirectedEdge& e) {
  return std::to_string(e.tail) + "->" + std::to_string(e.head);
}

bool is_positive_edge(const Incidence& inc, const DirectedEdge& e) {
  return inc.has_vertex(e.tail) && inc.has_vertex(e.head) && inc.has_edge(e.tail, e.head) &&
         inc.type(e.head) == (inc.type(e.tail) + 1) % 3;
}

void require_positive_edge(const Incidence& inc, const DirectedEdge& e) {
  if (!is_positive_edge(inc, e)) throw InputError("not a positive directed edge: " + fmt(e));
}

void require_pointed(const Incidence& inc, const PointedChamber& p) {
  const auto& ch = p.chamber;
  const bool tail_in = std::find(ch.begin(), ch.end(), p.pointer.tail) != ch.end();
  const bool head_in = std::find(ch.begin(), ch.end(), p.pointer.head) != ch.end();
  if (!tail_in || !head_in || !inc.has_chamber(ch[0], ch[1], ch[2])) {
    throw InputError("not a pointed chamber of the complex");
  }
  require_positive_edge(inc, p.pointer);
}

Chamber sorted_chamber(VertexId a, VertexId b, VertexId c) {
  Chamber ch{a, b, c};
  std::sort(ch.begin(), ch.end());
  return ch;
}

template <class T>
std::int64_t index_of(const std::vector<T>& sorted, const T& value) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), value);
  if (it == sorted.end() || !(*it == value)) throw DomainError("index lookup failed");
  return static_cast<std::int64_t>(it - sorted.begin());
}

void require_closed(const TypedComplex& c) {
  require_valid(c);
  if (c.has_boundary()) {
    throw DomainError("operator undefined on a complex with marked boundary (" +
                      std::to_string(c.boundary.size()) + " boundary vertices)");
  }
}

}  // namespace

VertexId PointedChamber::apex() const {
  for (VertexId v : chamber) {
    if (v != pointer.tail && v != pointer.head) return v;
  }
  throw InputError("pointed chamber has no apex");
}

DirectedEdge orient_positive(const Incidence& inc, VertexId a, VertexId b) {
  if (inc.type(b) == (inc.type(a) + 1) % 3) return {a, b};
  return {b, a};
}

std::vector<DirectedEdge> directed_edges(const TypedComplex& c) {
  const Incidence inc(c);
  std::vector<DirectedEdge> out;
  out.reserve(c.edges.size());
  for (const auto& e : c.edges) out.push_back(orient_positive(inc, e[0], e[1]));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PointedChamber> pointed_chambers(const TypedComplex& c) {
  const Incidence inc(c);
  std::vector<PointedChamber> out;
  out.reserve(3 * c.chambers.size());
  for (const auto& raw : c.chambers) {
    const Chamber ch = sorted_chamber(raw[0], raw[1], raw[2]);
    out.push_back({ch, orient_positive(inc, ch[0], ch[1])});
    out.push_back({ch, orient_positive(inc, ch[0], ch[2])});
    out.push_back({ch, orient_positive(inc, ch[1], ch[2])});
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool positive_step(const Incidence& inc, const DirectedEdge& e, const DirectedEdge& e2) {
  require_positive_edge(inc, e);
  require_positive_edge(inc, e2);
  if (e.head != e2.tail) throw InputError("edges not composable: " + fmt(e) + " then " + fmt(e2));
  return e2.head != e.tail && !inc.has_chamber(e.tail, e.head, e2.head);
}

bool positive_step(const TypedComplex& c, const DirectedEdge& e, const DirectedEdge& e2) {
  require_valid(c);
  return positive_step(Incidence(c), e, e2);
}

bool gallery_step(const Incidence& inc, const PointedChamber& p1, const PointedChamber& p2) {
  require_pointed(inc, p1);
  require_pointed(inc, p2);
  const VertexId b = p1.pointer.head;
  const VertexId c = p1.apex();
  return p2.pointer == DirectedEdge{b, c} && p2.chamber != p1.chamber;
}

std::vector<DirectedEdge> edge_successors(const Incidence& inc, const DirectedEdge& e) {
  const int next_type = (inc.type(e.head) + 1) % 3;
  std::vector<DirectedEdge> out;
  for (VertexId x : inc.neighbors(e.head)) {
    if (inc.type(x) != next_type || x == e.tail) continue;
    if (inc.has_chamber(e.tail, e.head, x)) continue;
    out.push_back({e.head, x});
  }
  return out;
}

std::vector<PointedChamber> gallery_successors(const Incidence& inc, const PointedChamber& p) {
  const VertexId a = p.pointer.tail;
  const VertexId b = p.pointer.head;
  const VertexId c = p.apex();
  std::vector<PointedChamber> out;
  for (VertexId d : inc.chamber_apexes(b, c)) {
    if (d == a) continue;
    out.push_back({sorted_chamber(b, c, d), {b, c}});
  }
  std::sort(out.begin(), out.end());
  return out;
}

void SparseIntMatrix::canonicalize() {
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    return std::tie(x.row, x.col) < std::tie(y.row, y.col);
  });
  std::vector<Entry> merged;
  for (const auto& e : entries) {
    if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col) {
      merged.back().value += e.value;
    } else {
      merged.push_back(e);
    }
  }
  std::erase_if(merged, [](const Entry& e) { return e.value == 0; });
  entries = std::move(merged);
}

SparseIntMatrix build_edge_operator(const TypedComplex& c) {
  require_closed(c);
  const Incidence inc(c);
  const auto index = directed_edges(c);
  SparseIntMatrix m;
  m.dim = static_cast<std::int64_t>(index.size());
  for (std::size_t col = 0; col < index.size(); ++col) {
    for (const auto& next : edge_successors(inc, index[col])) {
      m.entries.push_back({index_of(index, next), static_cast<std::int64_t>(col), 1});
    }
  }
  m.canonicalize();
  return m;
}

SparseIntMatrix build_chamber_operator(const TypedComplex& c) {
  require_closed(c);
  const Incidence inc(c);
  const auto index = pointed_chambers(c);
  SparseIntMatrix m;
  m.dim = static_cast<std::int64_t>(index.size());
  for (std::size_t col = 0; col < index.size(); ++col) {
    for (const auto& next : gallery_successors(inc, index[col])) {
      m.entries.push_back({index_of(index, next), static_cast<std::int64_t>(col), 1});
    }
  }
  m.canonicalize();
  return m;
}

std::string save_matrix(const SparseIntMatrix& input) {
  SparseIntMatrix m = input;
  m.canonicalize();
  nlohmann::ordered_json doc;
  doc["dim"] = m.dim;
  doc["triplets"] = nlohmann::ordered_json::array();
  for (const auto& e : m.entries) doc["triplets"].push_back({e.row, e.col, e.value});
  return doc.dump() + "\n";
}

SparseIntMatrix load_matrix(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("matrix file: ") + e.what());
  }
  SparseIntMatrix m;
  try {
    m.dim = doc.at("dim").get<std::int64_t>();
    for (const auto& t : doc.at("triplets")) {
      if (!t.is_array() || t.size() != 3) throw InputError("matrix file: triplet must have 3 entries");
      SparseIntMatrix::Entry e{t[0].get<std::int64_t>(), t[1].get<std::int64_t>(), t[2].get<std::int64_t>()};
      if (e.row < 0 || e.col < 0 || e.row >= m.dim || e.col >= m.dim) {
        throw InputError("matrix file: index out of range");
      }
      m.entries.push_back(e);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("matrix file: ") + e.what());
  }
  m.canonicalize();
  return m;
}

}  // namespace btz
