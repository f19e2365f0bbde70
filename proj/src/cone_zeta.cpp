#include "btz/cone_zeta.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "btz/error.hpp"

namespace btz {

namespace {

using RatMatrix = std::vector<std::vector<BigRational>>;

// Inverse of a square integer matrix (row-major) over Q; nullopt if singular.
std::optional<RatMatrix> rational_inverse(const std::vector<IntVector>& m) {
  const std::size_t n = m.size();
  RatMatrix a(n, std::vector<BigRational>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = static_cast<long>(m[i][j]);
    a[i][n + i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    const BigRational inv = 1 / a[col][col];
    for (auto& x : a[col]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const BigRational f = a[r][col];
      for (std::size_t k = 0; k < 2 * n; ++k) a[r][k] -= f * a[col][k];
    }
  }
  RatMatrix out(n, std::vector<BigRational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i][j] = a[i][n + j];
  }
  return out;
}

// Integer adjugate-style pair (adj, det) with m^{-1} = adj / det, det > 0.
struct IntInverse {
  std::vector<IntVector> adj;
  std::int64_t det = 1;

  // m^{-1} v when integral.
  std::optional<IntVector> apply(const IntVector& v) const {
    IntVector out(v.size(), 0);
    for (std::size_t i = 0; i < adj.size(); ++i) {
      std::int64_t s = 0;
      for (std::size_t j = 0; j < v.size(); ++j) s += adj[i][j] * v[j];
      if (s % det != 0) return std::nullopt;
      out[i] = s / det;
    }
    return out;
  }
};

IntInverse integer_inverse(const std::vector<IntVector>& m) {
  const auto inv = rational_inverse(m);
  if (!inv) throw InputError("singular matrix");
  BigInt den = 1;
  for (const auto& row : *inv) {
    for (const auto& x : row) den = lcm(den, BigInt(x.get_den()));
  }
  IntInverse out;
  out.det = den.get_si();
  for (const auto& row : *inv) {
    IntVector r;
    for (const auto& x : row) {
      const BigRational y = x * BigRational(den);
      r.push_back(y.get_num().get_si());
    }
    out.adj.push_back(std::move(r));
  }
  return out;
}

std::vector<IntVector> basis_matrix(const LatticeCone& cone) {
  // Row-major matrix whose columns are the basis vectors.
  const auto r = static_cast<std::size_t>(cone.rank);
  std::vector<IntVector> m(r, IntVector(r, 0));
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < r; ++i) m[i][k] = cone.lattice_basis[k][i];
  }
  return m;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {  // b > 0
  return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

GaussRational inverse(const GaussRational& z) {
  const BigRational n = z.re * z.re + z.im * z.im;
  if (n == 0) throw DomainError("division by zero");
  return {z.re / n, -z.im / n};
}

GaussRational power(const GaussRational& z, std::int64_t e) {
  GaussRational base = e < 0 ? inverse(z) : z;
  std::uint64_t k = e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
  GaussRational r(1);
  while (k) {
    if (k & 1) r = r * base;
    base = base * base;
    k >>= 1;
  }
  return r;
}

std::complex<double> approx(const GaussRational& z) { return {z.re.get_d(), z.im.get_d()}; }

}  // namespace

LatticeCone LatticeCone::standard(std::vector<IntVector> functionals) {
  LatticeCone c;
  c.rank = static_cast<int>(functionals.size());
  c.functionals = std::move(functionals);
  for (int k = 0; k < c.rank; ++k) {
    IntVector e(static_cast<std::size_t>(c.rank), 0);
    e[static_cast<std::size_t>(k)] = 1;
    c.lattice_basis.push_back(std::move(e));
  }
  return c;
}

std::int64_t LatticeCone::alpha(int j, const IntVector& v) const {
  const auto& a = functionals[static_cast<std::size_t>(j)];
  std::int64_t s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += a[i] * v[i];
  return s;
}

bool LatticeCone::contains(const IntVector& v) const {
  for (int j = 0; j < rank; ++j) {
    if (alpha(j, v) <= 0) return false;
  }
  return true;
}

bool LatticeCone::in_lattice(const IntVector& v) const {
  return integer_inverse(basis_matrix(*this)).apply(v).has_value();
}

void require_valid(const LatticeCone& cone) {
  const auto r = static_cast<std::size_t>(cone.rank);
  if (cone.rank < 1) throw InputError("cone rank must be positive");
  if (cone.functionals.size() != r || cone.lattice_basis.size() != r) {
    throw InputError("cone needs exactly " + std::to_string(r) + " functionals and basis vectors");
  }
  for (const auto& f : cone.functionals) {
    if (f.size() != r) throw InputError("functional has wrong dimension");
  }
  for (const auto& b : cone.lattice_basis) {
    if (b.size() != r) throw InputError("lattice basis vector has wrong dimension");
  }
  if (!rational_inverse(cone.functionals)) throw InputError("degenerate functionals: not independent");
  if (!rational_inverse(basis_matrix(cone))) throw InputError("lattice basis is singular");
}

std::vector<IntVector> cone_generators(const LatticeCone& cone) {
  require_valid(cone);
  const auto r = static_cast<std::size_t>(cone.rank);
  const RatMatrix alpha_inv = *rational_inverse(cone.functionals);
  const RatMatrix basis_inv = *rational_inverse(basis_matrix(cone));
  std::vector<IntVector> out;
  for (std::size_t j = 0; j < r; ++j) {
    // Column j of alpha^{-1}: alpha_i = delta_ij on it. Its lattice multiples
    // t*w need t*B^{-1}w integral; the least such t > 0 is L/g where
    // B^{-1}w = c/L with c integral of content g.
    std::vector<BigRational> w(r), ws(r, 0);
    for (std::size_t i = 0; i < r; ++i) w[i] = alpha_inv[i][j];
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t k = 0; k < r; ++k) ws[i] += basis_inv[i][k] * w[k];
    }
    BigInt L = 1;
    for (const auto& x : ws) L = lcm(L, BigInt(x.get_den()));
    BigInt g = 0;
    for (const auto& x : ws) {
      const BigRational scaled = x * BigRational(L);
      g = gcd(g, BigInt(scaled.get_num()));
    }
    const BigRational t(L, g);
    IntVector a(r);
    for (std::size_t i = 0; i < r; ++i) {
      const BigRational v = w[i] * t;
      a[i] = v.get_num().get_si();
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<IntVector> fundamental_domain(const LatticeCone& cone,
                                          const std::vector<IntVector>& generators) {
  require_valid(cone);
  const auto r = static_cast<std::size_t>(cone.rank);
  const auto B = basis_matrix(cone);
  const IntInverse b_inv = integer_inverse(B);

  // Generators in lattice coordinates, as columns.
  std::vector<std::vector<BigInt>> h(r, std::vector<BigInt>(r));
  std::vector<IntVector> a_sigma(r, IntVector(r));
  for (std::size_t j = 0; j < r; ++j) {
    const auto c = b_inv.apply(generators[j]);
    if (!c) throw InputError("generator is not a lattice vector");
    for (std::size_t i = 0; i < r; ++i) {
      h[i][j] = static_cast<long>((*c)[i]);
      a_sigma[i][j] = (*c)[i];
    }
  }
  if (!rational_inverse(a_sigma)) throw InputError("generators are linearly dependent");
  const IntInverse a_inv = integer_inverse(a_sigma);

  // Lower-triangular column echelon form; its diagonal sizes the coset reps.
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t c = i + 1; c < r; ++c) {
      while (h[i][c] != 0) {
        const BigInt q = h[i][i] / h[i][c];
        for (std::size_t k = 0; k < r; ++k) h[k][i] -= q * h[k][c];
        for (std::size_t k = 0; k < r; ++k) std::swap(h[k][i], h[k][c]);
      }
    }
    if (h[i][i] < 0) {
      for (std::size_t k = 0; k < r; ++k) h[k][i] = -h[k][i];
    }
  }
  IntVector diag(r);
  for (std::size_t i = 0; i < r; ++i) diag[i] = h[i][i].get_si();

  std::vector<IntVector> out;
  IntVector y(r, 0);
  while (true) {
    // Shift y (lattice coordinates) into the half-open parallelepiped.
    IntVector v(r, 0);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t k = 0; k < r; ++k) v[i] += B[i][k] * y[k];
    }
    for (std::size_t j = 0; j < r; ++j) {
      std::int64_t t = 0;
      for (std::size_t k = 0; k < r; ++k) t += a_inv.adj[j][k] * y[k];
      const std::int64_t s = ceil_div(t, a_inv.det) - 1;
      for (std::size_t i = 0; i < r; ++i) v[i] -= s * generators[j][i];
    }
    out.push_back(std::move(v));
    std::size_t i = 0;
    while (i < r && ++y[i] == diag[i]) y[i++] = 0;
    if (i == r) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

ConeDecomposition decompose_cone(const LatticeCone& cone) {
  ConeDecomposition d;
  d.generators = cone_generators(cone);
  d.fundamental_set = fundamental_domain(cone, d.generators);
  IntInverse inv = integer_inverse(basis_matrix(cone));
  d.lattice_adj = std::move(inv.adj);
  d.lattice_det = inv.det;
  return d;
}

std::optional<ConePoint> decompose(const LatticeCone& cone, const ConeDecomposition& d,
                                   const IntVector& v) {
  if (v.size() != static_cast<std::size_t>(cone.rank)) throw InputError("vector has wrong dimension");
  const bool member = d.lattice_adj.empty()
                          ? cone.in_lattice(v)
                          : IntInverse{d.lattice_adj, d.lattice_det}.apply(v).has_value();
  if (!member) throw InputError("vector is not in the lattice");
  if (!cone.contains(v)) return std::nullopt;
  ConePoint p;
  p.v0 = v;
  for (int j = 0; j < cone.rank; ++j) {
    const auto& a = d.generators[static_cast<std::size_t>(j)];
    const std::int64_t k = ceil_div(cone.alpha(j, v), cone.alpha(j, a)) - 1;
    p.k.push_back(k);
    for (std::size_t i = 0; i < v.size(); ++i) p.v0[i] -= k * a[i];
  }
  return p;
}

CharacterData CharacterData::trivial(int rank) {
  return {std::vector<GaussRational>(static_cast<std::size_t>(rank), GaussRational(1))};
}

GaussRational CharacterData::value(const IntVector& v) const {
  static const GaussRational one(1);
  GaussRational r(1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0 && !(multipliers[i] == one)) r = r * power(multipliers[i], v[i]);
  }
  return r;
}

std::complex<double> CharacterData::value_approx(const IntVector& v) const {
  std::complex<double> r = 1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) r *= std::pow(approx(multipliers[i]), static_cast<int>(v[i]));
  }
  return r;
}

std::complex<double> ConeSeries::evaluate(const std::vector<std::complex<double>>& u) const {
  std::complex<double> sum = 0.0;
  for (const auto& t : terms) {
    std::complex<double> x = approx(t.coeff);
    for (std::size_t j = 0; j < u.size(); ++j) x *= std::pow(u[j], static_cast<int>(t.exponents[j]));
    sum += x;
  }
  for (std::size_t j = 0; j < poles.size(); ++j) {
    sum /= 1.0 - approx(poles[j].coeff) * std::pow(u[j], static_cast<int>(poles[j].exponent));
  }
  return sum;
}

GaussRational ConeSeries::evaluate(const std::vector<GaussRational>& u) const {
  GaussRational sum(0);
  for (const auto& t : terms) {
    GaussRational x = t.coeff;
    for (std::size_t j = 0; j < u.size(); ++j) x = x * power(u[j], t.exponents[j]);
    sum += x;
  }
  for (std::size_t j = 0; j < poles.size(); ++j) {
    sum = sum * inverse(GaussRational(1) - poles[j].coeff * power(u[j], poles[j].exponent));
  }
  return sum;
}

bool ConeSeries::converges_at(const std::vector<std::complex<double>>& u) const {
  for (std::size_t j = 0; j < poles.size(); ++j) {
    const double m = std::abs(approx(poles[j].coeff)) *
                     std::pow(std::abs(u[j]), static_cast<double>(poles[j].exponent));
    if (!(m < 1.0)) return false;
  }
  return true;
}

ConeSeries cone_series_closed_form(const LatticeCone& cone, const ConeDecomposition& d,
                                   const CharacterData& chi) {
  if (chi.multipliers.size() != static_cast<std::size_t>(cone.rank)) {
    throw InputError("character needs one multiplier per coordinate");
  }
  ConeSeries s;
  for (const auto& v : d.fundamental_set) {
    ConeSeries::Term t{chi.value(v), {}};
    for (int j = 0; j < cone.rank; ++j) t.exponents.push_back(cone.alpha(j, v));
    s.terms.push_back(std::move(t));
  }
  for (int j = 0; j < cone.rank; ++j) {
    const auto& a = d.generators[static_cast<std::size_t>(j)];
    s.poles.push_back({chi.value(a), cone.alpha(j, a)});
  }
  return s;
}

std::complex<double> evaluate_partial_sum(const LatticeCone& cone, const CharacterData& chi,
                                          const std::vector<std::complex<double>>& u,
                                          std::int64_t bound) {
  require_valid(cone);
  const auto r = static_cast<std::size_t>(cone.rank);
  if (u.size() != r) throw InputError("evaluation point has wrong dimension");
  if (bound < 1) return 0.0;
  const IntInverse alpha_inv = integer_inverse(cone.functionals);
  const IntInverse basis_inv = integer_inverse(basis_matrix(cone));

  // Powers u_j^k for k = 0..bound.
  std::vector<std::vector<std::complex<double>>> upow(r);
  for (std::size_t j = 0; j < r; ++j) {
    upow[j].assign(static_cast<std::size_t>(bound) + 1, 1.0);
    for (std::int64_t k = 1; k <= bound; ++k) {
      upow[j][static_cast<std::size_t>(k)] = upow[j][static_cast<std::size_t>(k - 1)] * u[j];
    }
  }
  std::complex<double> sum = 0.0;
  IntVector y(r, 1);
  while (true) {
    // v = alpha^{-1} y must be an integer point of the lattice.
    if (const auto v = alpha_inv.apply(y); v && basis_inv.apply(*v)) {
      std::complex<double> term = chi.value_approx(*v);
      for (std::size_t j = 0; j < r; ++j) term *= upow[j][static_cast<std::size_t>(y[j])];
      sum += term;
    }
    std::size_t i = 0;
    while (i < r && ++y[i] > bound) y[i++] = 1;
    if (i == r) break;
  }
  return sum;
}

std::int64_t oracle_bound(const std::vector<std::complex<double>>& u, double eps) {
  double scale = 1.0;
  for (const auto& x : u) {
    if (!(std::abs(x) < 1.0)) throw DomainError("partial sums need |u_j| < 1");
    scale /= 1.0 - std::abs(x);
  }
  for (std::int64_t b = 1; b < 100000; ++b) {
    double tail = 0;
    for (const auto& x : u) tail += std::pow(std::abs(x), static_cast<double>(b + 1));
    if (tail * scale < eps) return b;
  }
  throw ResourceLimit("partial-sum bound too large");
}

std::int64_t oracle_bound(const ConeSeries& s, const std::vector<std::complex<double>>& u,
                          double eps) {
  if (u.size() != s.poles.size()) throw InputError("evaluation point has wrong dimension");
  std::vector<std::complex<double>> rho(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double k = static_cast<double>(s.poles[j].exponent);
    rho[j] = std::pow(std::abs(approx(s.poles[j].coeff)), 1.0 / k) * std::abs(u[j]);
  }
  return oracle_bound(rho, eps);
}

MultiSeries assemble_multivariable_S(const std::vector<LedgerEntry>& ledger, int truncation) {
  MultiSeries out;
  for (const auto& e : ledger) {
    std::int64_t total = 0;
    for (auto x : e.exponents) {
      if (x < 0) throw InputError("ledger exponents must be nonnegative");
      total += x;
    }
    if (total > truncation) continue;
    out[e.exponents] += e.weight;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

std::vector<LedgerEntry> ledger_from_classes(const std::vector<GeodesicClass>& classes) {
  std::vector<LedgerEntry> out;
  for (const auto& g : classes) {
    const BigRational lambda = g.weight.lambda.value_or(BigRational(g.primitive_length));
    GaussRational w = GaussRational(lambda * BigRational(g.weight.chi_r_abs));
    out.push_back({{g.length}, w * g.weight.trace_omega * g.weight.trace_sigma});
  }
  return out;
}

}  // namespace btz
