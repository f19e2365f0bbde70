#include "btz/complex.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "btz/error.hpp"

namespace btz {

namespace {

std::string fmt_edge(const Edge& e) {
  return "{" + std::to_string(e[0]) + "," + std::to_string(e[1]) + "}";
}

std::string fmt_chamber(const Chamber& c) {
  return "{" + std::to_string(c[0]) + "," + std::to_string(c[1]) + "," + std::to_string(c[2]) + "}";
}

Edge sorted(Edge e) {
  if (e[0] > e[1]) std::swap(e[0], e[1]);
  return e;
}

Chamber sorted(Chamber c) {
  std::sort(c.begin(), c.end());
  return c;
}

}  // namespace

void TypedComplex::canonicalize() {
  std::sort(vertices.begin(), vertices.end());
  for (auto& e : edges) e = sorted(e);
  for (auto& c : chambers) c = sorted(c);
  std::sort(edges.begin(), edges.end());
  std::sort(chambers.begin(), chambers.end());
  std::sort(boundary.begin(), boundary.end());
  boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
}

ValidationReport validate_complex(const TypedComplex& c) {
  ValidationReport report;
  auto add = [&](std::string kind, std::string message) {
    report.ok = false;
    report.violations.push_back({std::move(kind), std::move(message)});
  };

  std::map<VertexId, int> types;
  for (const auto& v : c.vertices) {
    if (!types.emplace(v.id, v.type).second) {
      add("duplicate vertex id", "vertex " + std::to_string(v.id) + " listed more than once");
    }
    if (v.type < 0 || v.type > 2) {
      add("invalid vertex type",
          "vertex " + std::to_string(v.id) + " has type " + std::to_string(v.type));
    }
  }
  if (c.q && *c.q <= 0) add("invalid q", "q = " + std::to_string(*c.q) + " is not positive");

  std::set<Edge> edge_set;
  for (const auto& raw : c.edges) {
    const Edge e = sorted(raw);
    bool dangling = false;
    for (VertexId v : e) {
      if (!types.contains(v)) {
        add("dangling vertex id",
            "edge " + fmt_edge(raw) + " references unknown vertex " + std::to_string(v));
        dangling = true;
      }
    }
    if (e[0] == e[1]) {
      add("self-loop", "edge " + fmt_edge(raw) + " is a self-loop");
      continue;
    }
    if (!edge_set.insert(e).second) {
      add("parallel edge", "edge " + fmt_edge(e) + " listed more than once");
    }
    if (!dangling && types[e[0]] == types[e[1]]) {
      add("edge joins equal types", "edge " + fmt_edge(e) + " joins two vertices of type " +
                                        std::to_string(types[e[0]]));
    }
  }

  std::set<Chamber> chamber_set;
  for (const auto& raw : c.chambers) {
    const Chamber ch = sorted(raw);
    bool dangling = false;
    for (VertexId v : ch) {
      if (!types.contains(v)) {
        add("dangling vertex id",
            "chamber " + fmt_chamber(raw) + " references unknown vertex " + std::to_string(v));
        dangling = true;
      }
    }
    if (ch[0] == ch[1] || ch[1] == ch[2]) {
      add("degenerate chamber", "chamber " + fmt_chamber(raw) + " repeats a vertex");
      continue;
    }
    if (!chamber_set.insert(ch).second) {
      add("duplicate chamber", "chamber " + fmt_chamber(ch) + " listed more than once");
    }
    if (!dangling) {
      std::array<int, 3> t{types[ch[0]], types[ch[1]], types[ch[2]]};
      std::sort(t.begin(), t.end());
      if (t != std::array<int, 3>{0, 1, 2}) {
        add("chamber types not distinct",
            "chamber " + fmt_chamber(ch) + " does not carry types {0,1,2}");
      }
    }
    for (const Edge& side : {Edge{ch[0], ch[1]}, Edge{ch[0], ch[2]}, Edge{ch[1], ch[2]}}) {
      if (!edge_set.contains(side)) {
        add("chamber missing edge",
            "chamber " + fmt_chamber(ch) + " lacks edge " + fmt_edge(side));
      }
    }
  }

  for (VertexId v : c.boundary) {
    if (!types.contains(v)) {
      add("dangling vertex id", "boundary references unknown vertex " + std::to_string(v));
    }
  }
  return report;
}

void require_valid(const TypedComplex& c) {
  const auto report = validate_complex(c);
  if (report.ok) return;
  std::string msg = "invalid complex:";
  for (const auto& v : report.violations) msg += "\n  " + v.kind + ": " + v.message;
  throw InputError(msg);
}

SimplexCounts simplex_counts(const TypedComplex& c) {
  return {static_cast<std::int64_t>(c.vertices.size()), static_cast<std::int64_t>(c.edges.size()),
          static_cast<std::int64_t>(c.chambers.size())};
}

std::int64_t euler_characteristic(const TypedComplex& c) {
  const auto n = simplex_counts(c);
  return n.n0 - n.n1 + n.n2;
}

// ---------------------------------------------------------------------------
// Incidence

Incidence::Incidence(const TypedComplex& c) {
  index_.reserve(c.vertices.size());
  for (const auto& v : c.vertices) {
    index_.emplace(v.id, types_.size());
    types_.push_back(v.type);
  }
  adjacency_.resize(types_.size());
  const auto n = static_cast<std::uint64_t>(types_.size());
  for (const auto& e : c.edges) {
    const auto a = slot(e[0]);
    const auto b = slot(e[1]);
    adjacency_[a].push_back(e[1]);
    adjacency_[b].push_back(e[0]);
    edge_keys_.insert(std::min(a, b) * n + std::max(a, b));
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
  for (const auto& ch : c.chambers) {
    const std::array<std::size_t, 3> s{slot(ch[0]), slot(ch[1]), slot(ch[2])};
    for (int k = 0; k < 3; ++k) {
      const auto a = s[k];
      const auto b = s[(k + 1) % 3];
      apexes_[std::min(a, b) * n + std::max(a, b)].push_back(ch[(k + 2) % 3]);
    }
  }
  for (auto& [key, list] : apexes_) std::sort(list.begin(), list.end());
  boundary_.insert(c.boundary.begin(), c.boundary.end());
}

std::size_t Incidence::slot(VertexId v) const {
  const auto it = index_.find(v);
  if (it == index_.end()) throw InputError("unknown vertex id " + std::to_string(v));
  return it->second;
}

int Incidence::type(VertexId v) const { return types_[slot(v)]; }

bool Incidence::has_edge(VertexId a, VertexId b) const {
  const auto sa = slot(a);
  const auto sb = slot(b);
  const auto n = static_cast<std::uint64_t>(types_.size());
  return edge_keys_.contains(std::min(sa, sb) * n + std::max(sa, sb));
}

bool Incidence::has_chamber(VertexId a, VertexId b, VertexId c) const {
  const auto apex = chamber_apexes(a, b);
  return std::binary_search(apex.begin(), apex.end(), c);
}

std::span<const VertexId> Incidence::neighbors(VertexId v) const { return adjacency_[slot(v)]; }

std::span<const VertexId> Incidence::chamber_apexes(VertexId a, VertexId b) const {
  const auto sa = slot(a);
  const auto sb = slot(b);
  const auto n = static_cast<std::uint64_t>(types_.size());
  const auto it = apexes_.find(std::min(sa, sb) * n + std::max(sa, sb));
  if (it == apexes_.end()) return {};
  return it->second;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::int64_t get_int(const json& node, const std::string& where) {
  if (!node.is_number_integer()) throw InputError(where + ": expected integer");
  return node.get<std::int64_t>();
}

const json& get_array(const json& parent, const char* key, bool required) {
  static const json empty = json::array();
  if (!parent.contains(key)) {
    if (required) throw InputError(std::string("missing field '") + key + "'");
    return empty;
  }
  const json& node = parent.at(key);
  if (!node.is_array()) throw InputError(std::string(key) + ": expected array");
  return node;
}

template <std::size_t N>
std::array<VertexId, N> get_tuple(const json& node, const std::string& where) {
  if (!node.is_array() || node.size() != N) {
    throw InputError(where + ": expected array of " + std::to_string(N) + " vertex ids");
  }
  std::array<VertexId, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = get_int(node[i], where + "[" + std::to_string(i) + "]");
  return out;
}

}  // namespace

TypedComplex load_complex_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw InputError("parse error at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + e.what());
  }
  if (!doc.is_object()) throw InputError("top level: expected JSON object");
  if (!doc.contains("version")) throw VersionError("missing field 'version'");
  const auto version = get_int(doc["version"], "version");
  if (version != kComplexFormatVersion) {
    throw VersionError("unsupported complex file version " + std::to_string(version) +
                       " (expected " + std::to_string(kComplexFormatVersion) + ")");
  }

  TypedComplex c;
  if (doc.contains("q") && !doc["q"].is_null()) c.q = get_int(doc["q"], "q");
  const auto& vertices = get_array(doc, "vertices", true);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string where = "vertices[" + std::to_string(i) + "]";
    const auto& v = vertices[i];
    if (!v.is_object() || !v.contains("id") || !v.contains("type")) {
      throw InputError(where + ": expected object with 'id' and 'type'");
    }
    c.vertices.push_back({get_int(v["id"], where + ".id"),
                          static_cast<int>(get_int(v["type"], where + ".type"))});
  }
  const auto& edges = get_array(doc, "edges", false);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    c.edges.push_back(get_tuple<2>(edges[i], "edges[" + std::to_string(i) + "]"));
  }
  const auto& chambers = get_array(doc, "chambers", false);
  for (std::size_t i = 0; i < chambers.size(); ++i) {
    c.chambers.push_back(get_tuple<3>(chambers[i], "chambers[" + std::to_string(i) + "]"));
  }
  const auto& boundary = get_array(doc, "boundary", false);
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    c.boundary.push_back(get_int(boundary[i], "boundary[" + std::to_string(i) + "]"));
  }
  c.canonicalize();
  return c;
}

TypedComplex load_complex(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_complex_text(buf.str());
}

TypedComplex load_complex_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open complex file '" + path + "'");
  return load_complex(in);
}

std::string save_complex(const TypedComplex& input) {
  TypedComplex c = input;
  c.canonicalize();
  ordered_json doc;
  doc["version"] = kComplexFormatVersion;
  if (c.q) doc["q"] = *c.q;
  doc["vertices"] = ordered_json::array();
  for (const auto& v : c.vertices) doc["vertices"].push_back({{"id", v.id}, {"type", v.type}});
  doc["edges"] = c.edges;
  doc["chambers"] = c.chambers;
  doc["boundary"] = c.boundary;
  return doc.dump() + "\n";
}

void save_complex_file(const TypedComplex& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << save_complex(c);
}

}  // namespace btz
