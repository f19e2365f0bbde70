#include "btz/geodesics.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>

#include "btz/error.hpp"
#include "btz/operators.hpp"

namespace btz {

namespace {

using Successors = std::vector<std::vector<std::int64_t>>;

template <class State, class Next>
Successors successor_lists(const std::vector<State>& states, Next next) {
  Successors out(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (const auto& s : next(states[i])) {
      const auto it = std::lower_bound(states.begin(), states.end(), s);
      if (it == states.end() || !(*it == s)) {
        throw DomainError("transition leaves the state set");
      }
      out[i].push_back(static_cast<std::int64_t>(it - states.begin()));
    }
  }
  return out;
}

Successors transition_relation(const TypedComplex& c, PathKind kind) {
  require_valid(c);
  if (c.has_boundary()) {
    throw DomainError("closed paths are undefined on a complex with marked boundary");
  }
  const Incidence inc(c);
  if (kind == PathKind::edge) {
    return successor_lists(directed_edges(c),
                           [&](const DirectedEdge& e) { return edge_successors(inc, e); });
  }
  return successor_lists(pointed_chambers(c),
                         [&](const PointedChamber& p) { return gallery_successors(inc, p); });
}

void check_order(int max_order, bool allow_large) {
  if (max_order < 1) throw InputError("max order must be at least 1");
  if (max_order > kMaxOrderCap && !allow_large) {
    throw ResourceLimit("max order " + std::to_string(max_order) + " exceeds the cap of " +
                        std::to_string(kMaxOrderCap) + " (override required)");
  }
}

// Runs body(start, local_state) for every start index on a small thread pool;
// each worker owns one Local, returned in worker order.
template <class Local, class Body>
std::vector<Local> for_each_start(std::size_t count, Body body) {
  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(hw, count));
  std::vector<Local> locals(workers);
  std::atomic<std::size_t> next{0};
  auto run = [&](std::size_t w) {
    for (std::size_t s = next++; s < count; s = next++) body(s, locals[w]);
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();
  return locals;
}

int minimal_period(const std::vector<std::int64_t>& seq) {
  const int n = static_cast<int>(seq.size());
  for (int p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (int i = 0; i + p < n && periodic; ++i) periodic = seq[i] == seq[i + p];
    if (periodic) return p;
  }
  return n;
}

bool is_least_rotation(const std::vector<std::int64_t>& seq) {
  const std::size_t n = seq.size();
  for (std::size_t r = 1; r < n; ++r) {
    if (seq[r] != seq[0]) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = seq[(r + i) % n];
      if (a != seq[i]) {
        if (a < seq[i]) return false;
        break;
      }
    }
  }
  return true;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t floor_div(std::int64_t a, std::int64_t m) { return (a - floor_mod(a, m)) / m; }

}  // namespace

std::string to_string(PathKind kind) { return kind == PathKind::edge ? "edge" : "gallery"; }

PathKind parse_path_kind(const std::string& text) {
  if (text == "edge") return PathKind::edge;
  if (text == "gallery") return PathKind::gallery;
  throw InputError("unknown path kind '" + text + "' (expected edge or gallery)");
}

std::vector<std::int64_t> count_closed_paths(const TypedComplex& c, int max_order, PathKind kind,
                                             bool allow_large) {
  check_order(max_order, allow_large);
  const Successors succ = transition_relation(c, kind);
  using Counts = std::vector<std::int64_t>;
  auto locals = for_each_start<Counts>(succ.size(), [&](std::size_t start, Counts& n) {
    if (n.empty()) n.assign(static_cast<std::size_t>(max_order) + 1, 0);
    const auto s = static_cast<std::int64_t>(start);
    std::function<void(std::int64_t, int)> walk = [&](std::int64_t at, int depth) {
      for (std::int64_t nx : succ[static_cast<std::size_t>(at)]) {
        if (nx == s) ++n[static_cast<std::size_t>(depth + 1)];
        if (depth + 1 < max_order) walk(nx, depth + 1);
      }
    };
    walk(s, 0);
  });
  Counts total(static_cast<std::size_t>(max_order) + 1, 0);
  for (const auto& l : locals) {
    for (std::size_t m = 0; m < l.size(); ++m) total[m] += l[m];
  }
  return total;
}

std::vector<GeodesicClass> enumerate_primitive_classes(const TypedComplex& c, int max_order,
                                                       PathKind kind, bool allow_large) {
  check_order(max_order, allow_large);
  const Successors succ = transition_relation(c, kind);
  using Found = std::vector<std::vector<std::int64_t>>;
  auto locals = for_each_start<Found>(succ.size(), [&](std::size_t start, Found& found) {
    const auto s = static_cast<std::int64_t>(start);
    std::vector<std::int64_t> path{s};
    // The least rotation starts at the least state, so paths through
    // smaller states are pruned.
    std::function<void(std::int64_t)> walk = [&](std::int64_t at) {
      for (std::int64_t nx : succ[static_cast<std::size_t>(at)]) {
        if (nx < s) continue;
        if (nx == s && minimal_period(path) == static_cast<int>(path.size()) &&
            is_least_rotation(path)) {
          found.push_back(path);
        }
        if (static_cast<int>(path.size()) < max_order) {
          path.push_back(nx);
          walk(nx);
          path.pop_back();
        }
      }
    };
    walk(s);
  });
  std::vector<std::vector<std::int64_t>> reps;
  for (auto& l : locals) {
    for (auto& r : l) reps.push_back(std::move(r));
  }
  std::sort(reps.begin(), reps.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::vector<GeodesicClass> out;
  out.reserve(reps.size());
  for (auto& r : reps) {
    GeodesicClass g;
    g.kind = kind;
    g.length = g.primitive_length = static_cast<int>(r.size());
    g.power = 1;
    g.representative = std::move(r);
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<GeodesicClass> with_powers(const std::vector<GeodesicClass>& primitives,
                                       int max_order) {
  std::vector<GeodesicClass> out;
  for (const auto& p : primitives) {
    if (p.power != 1) throw InputError("with_powers expects primitive classes");
    for (int mu = 1; mu * p.primitive_length <= max_order; ++mu) {
      GeodesicClass g = p;
      g.power = mu;
      g.length = mu * p.primitive_length;
      g.representative.clear();
      for (int k = 0; k < mu; ++k) {
        g.representative.insert(g.representative.end(), p.representative.begin(),
                                p.representative.end());
      }
      out.push_back(std::move(g));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.length < b.length; });
  return out;
}

CountTable count_table(const TypedComplex& c, int max_order, PathKind kind, bool allow_large) {
  CountTable t;
  t.N = count_closed_paths(c, max_order, kind, allow_large);
  t.P.assign(static_cast<std::size_t>(max_order) + 1, 0);
  for (const auto& g : enumerate_primitive_classes(c, max_order, kind, allow_large)) {
    ++t.P[static_cast<std::size_t>(g.length)];
  }
  return t;
}

PowerSeriesPrefix primitive_product(const std::vector<GeodesicClass>& classes, int max_order) {
  PowerSeriesPrefix out(static_cast<std::size_t>(max_order));
  out.coeffs[0] = 1;
  for (const auto& g : classes) {
    if (g.power != 1) continue;
    const auto l = static_cast<std::size_t>(g.primitive_length);
    // Multiply in place by (1 - u^l), high degrees first.
    for (std::size_t d = out.coeffs.size(); d-- > l;) out.coeffs[d] -= out.coeffs[d - l];
  }
  return out;
}

WeightedSeries assemble_S_series(const std::vector<GeodesicClass>& classes, int max_order,
                                 bool expand_powers) {
  WeightedSeries out(static_cast<std::size_t>(max_order));
  auto add = [&](const GeodesicClass& g, int length) {
    if (length > max_order) return;
    const BigRational lambda = g.weight.lambda.value_or(BigRational(g.primitive_length));
    GaussRational w = GaussRational(lambda * BigRational(g.weight.chi_r_abs));
    w = w * g.weight.trace_omega * g.weight.trace_sigma;
    out.coeffs[static_cast<std::size_t>(length)] += w;
  };
  for (const auto& g : classes) {
    if (expand_powers && g.power == 1) {
      for (int mu = 1; mu * g.primitive_length <= max_order; ++mu) add(g, mu * g.primitive_length);
    } else {
      add(g, g.length);
    }
  }
  return out;
}

std::vector<std::int64_t> torus_line_counts(const TorusGeometry& g, int max_order, PathKind kind) {
  if (max_order < 1) throw InputError("max order must be at least 1");
  const auto M = static_cast<std::size_t>(max_order);
  std::vector<std::int64_t> n(M + 1, 0);

  if (kind == PathKind::edge) {
    // Positive unit steps raise (i - j) mod 3 by one; straight lines keep the step.
    const PlanePoint steps[3] = {{1, 0}, {-1, 1}, {0, -1}};
    for (const auto& v : g.coords) {
      for (const auto& d : steps) {
        for (std::size_t m = 1; m <= M; ++m) {
          const auto k = static_cast<std::int64_t>(m);
          if (g.vertex_at({v[0] + k * d[0], v[1] + k * d[1]}) == g.vertex_at(v)) ++n[m];
        }
      }
    }
    return n;
  }

  // Galleries: a line parallel to an edge through a chamber centroid stays in
  // one strip and crosses its chambers in order. Points are kept in units of
  // 1/36 of a lattice step; each sample advances 1/12 of the direction.
  constexpr std::int64_t S = 36;
  const PlanePoint dirs[3] = {{1, 0}, {0, 1}, {-1, 1}};
  auto chamber_at = [&](std::int64_t x, std::int64_t y) -> std::optional<Chamber> {
    const std::int64_t fx = floor_mod(x, S), fy = floor_mod(y, S);
    if (fx == 0 || fy == 0 || fx + fy == S) return std::nullopt;  // on an edge line
    const std::int64_t i = floor_div(x, S), j = floor_div(y, S);
    Chamber ch = fx + fy < S ? Chamber{g.vertex_at({i, j}), g.vertex_at({i + 1, j}),
                                       g.vertex_at({i, j + 1})}
                             : Chamber{g.vertex_at({i + 1, j}), g.vertex_at({i, j + 1}),
                                       g.vertex_at({i + 1, j + 1})};
    std::sort(ch.begin(), ch.end());
    return ch;
  };
  for (const auto& v : g.coords) {
    for (const std::int64_t third : {S / 3, 2 * S / 3}) {  // up, then down triangle
      for (const auto& d : dirs) {
        std::int64_t x = v[0] * S + third, y = v[1] * S + third;
        std::vector<Chamber> seq{*chamber_at(x, y)};
        while (seq.size() <= M) {
          x += 3 * d[0];
          y += 3 * d[1];
          const auto ch = chamber_at(x, y);
          if (ch && *ch != seq.back()) seq.push_back(*ch);
        }
        for (std::size_t m = 1; m <= M; ++m) {
          if (seq[m] == seq[0]) ++n[m];
        }
      }
    }
  }
  return n;
}

}  // namespace btz
