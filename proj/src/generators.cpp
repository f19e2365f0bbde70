#include "btz/generators.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "btz/error.hpp"

namespace btz {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t mod_pos(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

int plane_type(const PlanePoint& p) { return static_cast<int>(mod_pos(p[0] - p[1], 3)); }

std::int64_t hex_norm(const PlanePoint& p) {
  const auto a = p[0];
  const auto b = p[1];
  if ((a >= 0) == (b >= 0)) return std::abs(a) + std::abs(b);
  return std::max(std::abs(a), std::abs(b));
}

bool prime_power(std::int64_t q, std::int64_t* prime, int* exponent) {
  if (q < 2) return false;
  std::int64_t p = 0;
  for (std::int64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) p = q;
  int k = 0;
  std::int64_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++k;
  }
  if (rest != 1) return false;
  if (prime) *prime = p;
  if (exponent) *exponent = k;
  return true;
}

// ---------------------------------------------------------------------------
// Apartment torus

PlanePoint TorusGeometry::reduce(const PlanePoint& p) const {
  const std::int64_t k = floor_div(p[0], h00);
  return {p[0] - k * h00, mod_pos(p[1] - k * h10, h11)};
}

bool TorusGeometry::in_lattice(const PlanePoint& p) const {
  return reduce(p) == PlanePoint{0, 0};
}

VertexId TorusGeometry::vertex_at(const PlanePoint& p) const {
  const auto r = reduce(p);
  return r[0] * h11 + r[1];
}

TorusComplex gen_apartment_torus(const ApartmentSpec& spec) {
  const std::int64_t det = spec.determinant();
  if (det == 0) throw InputError("degenerate basis: determinant is zero");

  TorusGeometry g;
  g.spec = spec;
  {
    const std::int64_t a = spec.basis[0][0], b = spec.basis[0][1];
    const std::int64_t c = spec.basis[1][0], d = spec.basis[1][1];
    // Extended gcd on the first row gives the lower-triangular Hermite form.
    std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
      const std::int64_t quo = old_r / r;
      std::tie(old_r, r) = std::make_pair(r, old_r - quo * r);
      std::tie(old_s, s) = std::make_pair(s, old_s - quo * s);
      std::tie(old_t, t) = std::make_pair(t, old_t - quo * t);
    }
    if (old_r < 0) {
      old_r = -old_r;
      old_s = -old_s;
      old_t = -old_t;
    }
    g.h00 = old_r;
    g.h11 = std::abs(det) / old_r;
    g.h10 = mod_pos(old_s * c + old_t * d, g.h11);
  }

  for (std::int64_t i = -2; i <= 2; ++i) {
    for (std::int64_t j = -2; j <= 2; ++j) {
      const PlanePoint v{i, j};
      if (v == PlanePoint{0, 0} || hex_norm(v) > 2) continue;
      if (g.in_lattice(v)) {
        throw InputError("quotient too small: lattice vector (" + std::to_string(i) + "," +
                         std::to_string(j) + ") has combinatorial length " +
                         std::to_string(hex_norm(v)) + " <= 2, simplices would be identified");
      }
    }
  }
  for (int k = 0; k < 2; ++k) {
    if (plane_type(spec.column(k)) != 0) {
      throw InputError("basis column " + std::to_string(k) + " does not preserve vertex types");
    }
  }

  const std::int64_t n = std::abs(det);
  g.coords.resize(static_cast<std::size_t>(n));
  TypedComplex c;
  c.vertices.reserve(static_cast<std::size_t>(n));
  for (std::int64_t x = 0; x < g.h00; ++x) {
    for (std::int64_t y = 0; y < g.h11; ++y) {
      const VertexId id = x * g.h11 + y;
      g.coords[static_cast<std::size_t>(id)] = {x, y};
      c.vertices.push_back({id, plane_type({x, y})});
    }
  }
  for (const auto& p : g.coords) {
    const VertexId v = g.vertex_at(p);
    const VertexId right = g.vertex_at({p[0] + 1, p[1]});
    const VertexId up = g.vertex_at({p[0], p[1] + 1});
    const VertexId left_up = g.vertex_at({p[0] - 1, p[1] + 1});
    const VertexId diag = g.vertex_at({p[0] + 1, p[1] + 1});
    c.edges.push_back({v, right});
    c.edges.push_back({v, up});
    c.edges.push_back({v, left_up});
    c.chambers.push_back({v, right, up});
    c.chambers.push_back({right, up, diag});
  }
  c.canonicalize();
  return {std::move(c), std::move(g)};
}

// ---------------------------------------------------------------------------
// Building ball

namespace {

// GF(p^k) with elements encoded as base-p digit strings of polynomials.
class FiniteField {
 public:
  explicit FiniteField(std::int64_t q) : q_(static_cast<int>(q)) {
    std::int64_t p = 0;
    int k = 0;
    if (!prime_power(q, &p, &k)) {
      throw InputError("unsupported q = " + std::to_string(q) + ": not a prime power");
    }
    p_ = static_cast<int>(p);
    k_ = k;
    const std::vector<int> modulus = irreducible();
    add_.assign(static_cast<std::size_t>(q_ * q_), 0);
    mul_.assign(static_cast<std::size_t>(q_ * q_), 0);
    for (int a = 0; a < q_; ++a) {
      const auto pa = digits(a);
      for (int b = 0; b < q_; ++b) {
        const auto pb = digits(b);
        std::vector<int> sum(static_cast<std::size_t>(k_));
        for (int i = 0; i < k_; ++i) sum[i] = (pa[i] + pb[i]) % p_;
        add_[idx(a, b)] = encode(sum);
        std::vector<int> prod(static_cast<std::size_t>(2 * k_), 0);
        for (int i = 0; i < k_; ++i)
          for (int j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + pa[i] * pb[j]) % p_;
        mul_[idx(a, b)] = encode(reduce(prod, modulus));
      }
    }
    neg_.assign(static_cast<std::size_t>(q_), 0);
    inv_.assign(static_cast<std::size_t>(q_), 0);
    for (int a = 0; a < q_; ++a) {
      for (int b = 0; b < q_; ++b) {
        if (add(a, b) == 0) neg_[a] = b;
        if (mul(a, b) == 1) inv_[a] = b;
      }
    }
  }

  int size() const { return q_; }
  int add(int a, int b) const { return add_[idx(a, b)]; }
  int sub(int a, int b) const { return add_[idx(a, neg_[b])]; }
  int mul(int a, int b) const { return mul_[idx(a, b)]; }
  int neg(int a) const { return neg_[a]; }
  int inv(int a) const {
    if (a == 0) throw DomainError("inverse of zero in finite field");
    return inv_[a];
  }

 private:
  std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a * q_ + b); }

  std::vector<int> digits(int a) const {
    std::vector<int> d(static_cast<std::size_t>(k_));
    for (int i = 0; i < k_; ++i) {
      d[i] = a % p_;
      a /= p_;
    }
    return d;
  }

  int encode(const std::vector<int>& d) const {
    int out = 0;
    for (int i = k_ - 1; i >= 0; --i) out = out * p_ + d[i];
    return out;
  }

  // Remainder of poly modulo a monic polynomial, truncated to k_ digits.
  std::vector<int> reduce(std::vector<int> poly, const std::vector<int>& monic) const {
    const int deg = static_cast<int>(monic.size()) - 1;
    for (int i = static_cast<int>(poly.size()) - 1; i >= deg; --i) {
      const int c = poly[i];
      if (c == 0) continue;
      for (int j = 0; j <= deg; ++j) {
        poly[i - deg + j] = ((poly[i - deg + j] - c * monic[j]) % p_ + p_) % p_;
      }
    }
    poly.resize(static_cast<std::size_t>(k_), 0);
    return poly;
  }

  bool divides(const std::vector<int>& d, std::vector<int> f) const {
    const int dd = static_cast<int>(d.size()) - 1;
    for (int i = static_cast<int>(f.size()) - 1; i >= dd; --i) {
      const int c = f[i];
      if (c == 0) continue;
      for (int j = 0; j <= dd; ++j) f[i - dd + j] = ((f[i - dd + j] - c * d[j]) % p_ + p_) % p_;
    }
    for (int i = 0; i < dd; ++i)
      if (f[i] != 0) return false;
    return true;
  }

  // Smallest monic irreducible of degree k_ over F_p (x for k_ = 1).
  std::vector<int> irreducible() const {
    if (k_ == 1) return {0, 1};
    auto monic = [&](int deg, int code) {
      std::vector<int> poly(static_cast<std::size_t>(deg + 1));
      for (int i = 0; i < deg; ++i) {
        poly[i] = code % p_;
        code /= p_;
      }
      poly[deg] = 1;
      return poly;
    };
    int count = 1;
    for (int i = 0; i < k_; ++i) count *= p_;
    for (int code = 0; code < count; ++code) {
      const auto f = monic(k_, code);
      bool reducible = false;
      for (int deg = 1; deg <= k_ / 2 && !reducible; ++deg) {
        int dcount = 1;
        for (int i = 0; i < deg; ++i) dcount *= p_;
        for (int dc = 0; dc < dcount && !reducible; ++dc) reducible = divides(monic(deg, dc), f);
      }
      if (!reducible) return f;
    }
    throw DomainError("no irreducible polynomial found");
  }

  int q_;
  int p_ = 0;
  int k_ = 0;
  std::vector<int> add_, mul_, neg_, inv_;
};

// Elements of F_q[t]/(t^N), coefficient i = coefficient of t^i.
using Series = std::vector<int>;
using Column = std::array<Series, 3>;

struct LatticeForm {
  std::array<Column, 3> pivots;  // pivots[i] is zero below row i, t^e[i] at row i
  std::array<int, 3> exps{};
  std::string key;
};

class LatticeArithmetic {
 public:
  LatticeArithmetic(const FiniteField& field, int precision) : f_(field), n_(precision) {}

  int precision() const { return n_; }

  Series zero() const { return Series(static_cast<std::size_t>(n_), 0); }

  Series constant(int c) const {
    Series s = zero();
    s[0] = c;
    return s;
  }

  int valuation(const Series& s) const {
    for (int i = 0; i < n_; ++i)
      if (s[i] != 0) return i;
    return n_;
  }

  Series mul(const Series& a, const Series& b) const {
    Series out = zero();
    for (int i = 0; i < n_; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; i + j < n_; ++j) {
        if (b[j] != 0) out[i + j] = f_.add(out[i + j], f_.mul(a[i], b[j]));
      }
    }
    return out;
  }

  // a - w*b, columnwise
  void axpy_neg(Column& a, const Series& w, const Column& b) const {
    for (int r = 0; r < 3; ++r) {
      const Series prod = mul(w, b[r]);
      for (int i = 0; i < n_; ++i) a[r][i] = f_.sub(a[r][i], prod[i]);
    }
  }

  Series shift_down(const Series& s, int e) const {
    Series out = zero();
    for (int i = e; i < n_; ++i) out[i - e] = s[i];
    return out;
  }

  Series shift_up(const Series& s, int e) const {
    Series out = zero();
    for (int i = 0; i + e < n_; ++i) out[i + e] = s[i];
    return out;
  }

  // Inverse of a unit (s[0] != 0) in F_q[t]/(t^N).
  Series inverse(const Series& s) const {
    Series out = zero();
    const int c0 = f_.inv(s[0]);
    out[0] = c0;
    for (int n = 1; n < n_; ++n) {
      int acc = 0;
      for (int i = 1; i <= n; ++i) acc = f_.add(acc, f_.mul(s[i], out[n - i]));
      out[n] = f_.neg(f_.mul(c0, acc));
    }
    return out;
  }

  // Canonical Hermite form of the module spanned by `gens` in (F_q[t]/t^N)^3.
  LatticeForm hermite(std::vector<Column> gens) const {
    LatticeForm form;
    std::vector<bool> used(gens.size(), false);
    for (int row = 2; row >= 0; --row) {
      int best = -1;
      int best_val = n_;
      for (std::size_t k = 0; k < gens.size(); ++k) {
        if (used[k]) continue;
        const int v = valuation(gens[k][row]);
        if (v < best_val) {
          best_val = v;
          best = static_cast<int>(k);
        }
      }
      form.exps[row] = best_val;
      if (best < 0) {
        form.pivots[row] = {zero(), zero(), zero()};
        continue;
      }
      used[best] = true;
      Column pivot = gens[best];
      const Series unit_inv = inverse(shift_down(pivot[row], best_val));
      for (int r = 0; r < 3; ++r) pivot[r] = mul(pivot[r], unit_inv);
      for (std::size_t k = 0; k < gens.size(); ++k) {
        if (used[k]) continue;
        const Series w = shift_down(gens[k][row], best_val);
        axpy_neg(gens[k], w, pivot);
      }
      form.pivots[row] = std::move(pivot);
    }
    // Reduce entries above the diagonal modulo the pivot powers.
    for (int i = 1; i < 3; ++i) {
      for (int k = i - 1; k >= 0; --k) {
        const int e = form.exps[k];
        if (e >= n_) continue;
        const Series w = shift_down(form.pivots[i][k], e);
        axpy_neg(form.pivots[i], w, form.pivots[k]);
      }
    }
    std::ostringstream key;
    for (int i = 0; i < 3; ++i) {
      key << (i ? "|" : "") << form.exps[i] << ":";
      for (int r = 0; r < i; ++r) {
        key << (r ? "," : "");
        const int e = form.exps[r];
        for (int d = 0; d < std::min(e, n_); ++d) key << (d ? "." : "") << form.pivots[i][r][d];
      }
    }
    form.key = key.str();
    return form;
  }

  // Hermite form of the homothety-normalized representative (not inside tL0).
  LatticeForm normalized(std::vector<Column> gens) const {
    LatticeForm form = hermite(std::move(gens));
    for (;;) {
      bool divisible = true;
      for (const auto& col : form.pivots)
        for (const auto& entry : col)
          if (entry[0] != 0) divisible = false;
      if (!divisible) return form;
      std::vector<Column> next;
      for (const auto& col : form.pivots) {
        next.push_back({shift_down(col[0], 1), shift_down(col[1], 1), shift_down(col[2], 1)});
      }
      for (int r = 0; r < 3; ++r) {
        Column top{zero(), zero(), zero()};
        top[r][n_ - 1] = 1;
        next.push_back(top);
      }
      form = hermite(std::move(next));
    }
  }

  const FiniteField& field() const { return f_; }

 private:
  const FiniteField& f_;
  int n_;
};

// Nonzero subspaces of F_q^3 of dimension 1 and 2, each as a list of basis vectors.
std::vector<std::vector<std::array<int, 3>>> proper_subspaces(const FiniteField& f) {
  const int q = f.size();
  std::vector<std::array<int, 3>> normalized;
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      for (int c = 0; c < q; ++c) {
        const std::array<int, 3> v{a, b, c};
        const auto first = std::find_if(v.begin(), v.end(), [](int x) { return x != 0; });
        if (first != v.end() && *first == 1) normalized.push_back(v);
      }
  std::vector<std::vector<std::array<int, 3>>> out;
  for (const auto& v : normalized) out.push_back({v});
  for (const auto& fn : normalized) {
    int pivot = 0;
    while (fn[pivot] == 0) ++pivot;
    std::vector<std::array<int, 3>> basis;
    for (int j = 0; j < 3; ++j) {
      if (j == pivot) continue;
      std::array<int, 3> w{0, 0, 0};
      w[j] = 1;
      w[pivot] = f.neg(f.mul(fn[j], f.inv(fn[pivot])));
      basis.push_back(w);
    }
    out.push_back(std::move(basis));
  }
  return out;
}

std::string describe(const LatticeForm& form) { return form.key; }

}  // namespace

BallComplex gen_building_ball(const BallSpec& spec) {
  if (spec.radius < 0) throw InputError("radius must be nonnegative");
  if (spec.radius > spec.max_radius) {
    throw ResourceLimit("radius " + std::to_string(spec.radius) + " exceeds bound " +
                        std::to_string(spec.max_radius));
  }
  if (spec.center_type < 0 || spec.center_type > 2) throw InputError("center_type must be 0, 1 or 2");
  if (spec.q > 256) throw ResourceLimit("q = " + std::to_string(spec.q) + " exceeds bound 256");
  const FiniteField field(spec.q);
  const LatticeArithmetic ring(field, spec.radius + 2);
  const auto subspaces = proper_subspaces(field);

  auto neighbors_of = [&](const LatticeForm& form) {
    std::vector<LatticeForm> out;
    out.reserve(subspaces.size());
    for (const auto& basis : subspaces) {
      std::vector<Column> gens;
      for (const auto& w : basis) {
        Column col{ring.zero(), ring.zero(), ring.zero()};
        for (int k = 0; k < 3; ++k) {
          if (w[k] == 0) continue;
          ring.axpy_neg(col, ring.constant(field.neg(w[k])), form.pivots[k]);
        }
        gens.push_back(std::move(col));
      }
      for (int k = 0; k < 3; ++k) {
        const auto& p = form.pivots[k];
        gens.push_back({ring.shift_up(p[0], 1), ring.shift_up(p[1], 1), ring.shift_up(p[2], 1)});
      }
      out.push_back(ring.normalized(std::move(gens)));
    }
    return out;
  };

  std::vector<Column> identity;
  for (int r = 0; r < 3; ++r) {
    Column col{ring.zero(), ring.zero(), ring.zero()};
    col[r] = ring.constant(1);
    identity.push_back(col);
  }

  std::map<std::string, std::size_t> index;
  std::vector<LatticeForm> forms;
  std::vector<int> dist;
  std::vector<std::vector<std::size_t>> adjacency;

  forms.push_back(ring.normalized(identity));
  dist.push_back(0);
  index.emplace(forms[0].key, 0);
  std::deque<std::size_t> queue{0};
  std::vector<std::vector<std::string>> neighbor_keys;
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    if (dist[cur] >= spec.radius) continue;
    for (auto& nb : neighbors_of(forms[cur])) {
      if (index.contains(nb.key)) continue;
      index.emplace(nb.key, forms.size());
      dist.push_back(dist[cur] + 1);
      queue.push_back(forms.size());
      forms.push_back(std::move(nb));
    }
  }

  // Canonical vertex order: by distance, then by Hermite label.
  std::vector<std::size_t> order(forms.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(dist[a], forms[a].key) < std::tie(dist[b], forms[b].key);
  });
  std::vector<VertexId> id_of(forms.size());
  for (std::size_t i = 0; i < order.size(); ++i) id_of[order[i]] = static_cast<VertexId>(i);

  BallComplex out;
  out.geometry.q = spec.q;
  out.geometry.radius = spec.radius;
  out.geometry.labels.resize(forms.size());
  out.geometry.distance.resize(forms.size());
  TypedComplex& c = out.complex;
  c.q = spec.q;
  std::vector<std::set<VertexId>> adj(forms.size());
  for (std::size_t k = 0; k < forms.size(); ++k) {
    const VertexId id = id_of[k];
    const int index_sum = forms[k].exps[0] + forms[k].exps[1] + forms[k].exps[2];
    c.vertices.push_back({id, (index_sum + spec.center_type) % 3});
    out.geometry.labels[static_cast<std::size_t>(id)] = describe(forms[k]);
    out.geometry.distance[static_cast<std::size_t>(id)] = dist[k];
    if (dist[k] == spec.radius) c.boundary.push_back(id);
    for (const auto& nb : neighbors_of(forms[k])) {
      const auto it = index.find(nb.key);
      if (it == index.end()) continue;
      const VertexId other = id_of[it->second];
      adj[static_cast<std::size_t>(id)].insert(other);
      if (id < other) c.edges.push_back({id, other});
    }
  }
  for (VertexId a = 0; a < static_cast<VertexId>(adj.size()); ++a) {
    const auto& na = adj[static_cast<std::size_t>(a)];
    for (auto ib = na.upper_bound(a); ib != na.end(); ++ib) {
      for (auto ic = std::next(ib); ic != na.end(); ++ic) {
        if (adj[static_cast<std::size_t>(*ib)].contains(*ic)) c.chambers.push_back({a, *ib, *ic});
      }
    }
  }
  c.canonicalize();
  return out;
}

// ---------------------------------------------------------------------------
// Cycle

TypedComplex gen_cycle_complex(std::int64_t n) {
  if (n < 3 || n % 3 != 0) {
    throw InputError("cycle length must be a positive multiple of 3, got " + std::to_string(n));
  }
  TypedComplex c;
  for (std::int64_t i = 0; i < n; ++i) {
    c.vertices.push_back({i, static_cast<int>(i % 3)});
    c.edges.push_back({i, (i + 1) % n});
  }
  c.canonicalize();
  return c;
}

// ---------------------------------------------------------------------------
// Sidecar geometry

std::string save_geometry(const TorusGeometry& g) {
  nlohmann::ordered_json doc;
  doc["kind"] = "torus";
  doc["basis"] = {g.spec.basis[0][0], g.spec.basis[0][1], g.spec.basis[1][0], g.spec.basis[1][1]};
  doc["coords"] = g.coords;
  return doc.dump() + "\n";
}

std::string save_geometry(const BallGeometry& g) {
  nlohmann::ordered_json doc;
  doc["kind"] = "ball";
  doc["q"] = g.q;
  doc["radius"] = g.radius;
  doc["labels"] = g.labels;
  doc["distance"] = g.distance;
  return doc.dump() + "\n";
}

std::optional<TorusGeometry> load_torus_geometry(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("geometry sidecar: ") + e.what());
  }
  if (!doc.is_object() || doc.value("kind", "") != "torus") return std::nullopt;
  try {
    const auto b = doc.at("basis").get<std::vector<std::int64_t>>();
    if (b.size() != 4) throw InputError("geometry sidecar: basis must have 4 entries");
    ApartmentSpec spec;
    spec.basis = {{{b[0], b[1]}, {b[2], b[3]}}};
    // Regenerating validates the basis and reproduces the coset representatives.
    auto torus = gen_apartment_torus(spec);
    const auto coords = doc.at("coords").get<std::vector<PlanePoint>>();
    if (coords != torus.geometry.coords) throw InputError("geometry sidecar: coordinates do not match basis");
    return torus.geometry;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("geometry sidecar: ") + e.what());
  }
}

}  // namespace btz
