#include "oracles.hpp"

#include <functional>
#include <stdexcept>

namespace oracle {

DenseMatrix dense(const btz::SparseIntMatrix& m) {
  const auto n = static_cast<std::size_t>(m.dim);
  DenseMatrix a(n, std::vector<BigInt>(n, 0));
  for (const auto& e : m.entries) {
    a[static_cast<std::size_t>(e.row)][static_cast<std::size_t>(e.col)] += static_cast<long>(e.value);
  }
  return a;
}

std::vector<BigInt> berkowitz_reverse(const DenseMatrix& a) {
  const std::size_t n = a.size();
  if (n == 0) return {1};
  // p holds det(xI - S) for the trailing block S, highest degree first.
  std::vector<BigInt> p{1, -a[n - 1][n - 1]};
  for (std::size_t i = n - 1; i-- > 0;) {
    const std::size_t m = n - 1 - i;  // size of the trailing block
    std::vector<BigInt> q(m + 2, 0);
    q[0] = 1;
    q[1] = -a[i][i];
    std::vector<BigInt> col(m);
    for (std::size_t r = 0; r < m; ++r) col[r] = a[i + 1 + r][i];
    for (std::size_t j = 0; j < m; ++j) {
      BigInt s = 0;
      for (std::size_t c = 0; c < m; ++c) s += a[i][i + 1 + c] * col[c];
      q[j + 2] = -s;
      std::vector<BigInt> next(m, 0);
      for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) next[r] += a[i + 1 + r][i + 1 + c] * col[c];
      }
      col = std::move(next);
    }
    std::vector<BigInt> np(m + 2, 0);
    for (std::size_t r = 0; r < m + 2; ++r) {
      for (std::size_t c = 0; c <= std::min(r, m); ++c) np[r] += q[r - c] * p[c];
    }
    p = std::move(np);
  }
  // det(I - uA) = sum_k p_k u^k when det(xI - A) = sum_k p_k x^(n-k).
  return p;
}

std::vector<BigInt> dense_traces(const DenseMatrix& a, std::size_t order) {
  const std::size_t n = a.size();
  std::vector<BigInt> out(order + 1, 0);
  DenseMatrix power(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < n; ++i) power[i][i] = 1;
  for (std::size_t k = 0; k <= order; ++k) {
    for (std::size_t i = 0; i < n; ++i) out[k] += power[i][i];
    DenseMatrix next(n, std::vector<BigInt>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) {
        if (power[i][l] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) next[i][j] += power[i][l] * a[l][j];
      }
    }
    power = std::move(next);
  }
  return out;
}

btz::SparseIntMatrix cycle_permutation(const std::vector<int>& lengths) {
  btz::SparseIntMatrix m;
  std::int64_t base = 0;
  for (int l : lengths) {
    for (int k = 0; k < l; ++k) m.entries.push_back({base + (k + 1) % l, base + k, 1});
    base += l;
  }
  m.dim = base;
  m.canonicalize();
  return m;
}

btz::TypedComplex single_chamber() {
  btz::TypedComplex c;
  c.vertices = {{0, 0}, {1, 1}, {2, 2}};
  c.edges = {{0, 1}, {0, 2}, {1, 2}};
  c.chambers = {{0, 1, 2}};
  return c;
}

namespace {

std::vector<int> normalize(std::vector<int> v, int p) {
  for (int x : v) {
    if (x % p != 0) {
      int inv = 1;
      while ((inv * x) % p != 1) ++inv;
      for (int& y : v) y = (y * inv) % p;
      return v;
    }
  }
  return v;
}

}  // namespace

ProjectivePlane projective_plane(int p) {
  ProjectivePlane plane;
  plane.p = p;
  std::set<std::vector<int>> seen;
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      for (int c = 0; c < p; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        seen.insert(normalize({a, b, c}, p));
      }
    }
  }
  plane.points.assign(seen.begin(), seen.end());
  plane.lines = plane.points;  // lines as kernels of nonzero functionals
  return plane;
}

bool ProjectivePlane::incident(std::size_t point, std::size_t line) const {
  int s = 0;
  for (int k = 0; k < 3; ++k) s += points[point][k] * lines[line][k];
  return s % p == 0;
}

namespace {

// Cofactor expansion; the oracle only sees small ranks and entries.
std::int64_t det(const std::vector<btz::IntVector>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  std::int64_t s = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<btz::IntVector> minor;
    for (std::size_t r = 1; r < n; ++r) {
      btz::IntVector row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(m[r][k]);
      }
      minor.push_back(std::move(row));
    }
    const std::int64_t term = m[0][c] * det(minor);
    s += (c % 2 == 0) ? term : -term;
  }
  return s;
}

}  // namespace

bool lattice_member(const btz::LatticeCone& cone, const btz::IntVector& v) {
  // Cramer's rule: B y = v with y integral. Rank <= 3 uses closed forms.
  const std::size_t r = v.size();
  std::vector<btz::IntVector> b(r, btz::IntVector(r));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t k = 0; k < r; ++k) b[i][k] = cone.lattice_basis[k][i];
  }
  auto small_det = [&](std::size_t col) {
    auto at = [&](std::size_t i, std::size_t k) { return k == col ? v[i] : b[i][k]; };
    if (r == 1) return at(0, 0);
    if (r == 2) return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
    return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
           at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
           at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
  };
  if (r > 3) {
    const std::int64_t d = det(b);
    for (std::size_t k = 0; k < r; ++k) {
      auto bk = b;
      for (std::size_t i = 0; i < r; ++i) bk[i][k] = v[i];
      if (det(bk) % d != 0) return false;
    }
    return true;
  }
  const std::int64_t d = small_det(r);  // no column replaced
  for (std::size_t k = 0; k < r; ++k) {
    if (small_det(k) % d != 0) return false;
  }
  return true;
}

std::int64_t box_volume(const std::vector<btz::IntVector>& gens) {
  std::int64_t vol = 1;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::int64_t lo = 0, hi = 0;
    for (const auto& a : gens) {
      lo += std::min<std::int64_t>(0, a[i]);
      hi += std::max<std::int64_t>(0, a[i]);
    }
    vol *= hi - lo + 1;
  }
  return vol;
}

std::set<btz::IntVector> brute_fundamental_set(const btz::LatticeCone& cone,
                                               const std::vector<btz::IntVector>& gens) {
  const std::size_t r = gens.size();
  btz::IntVector lo(r, 0), hi(r, 0);
  for (const auto& a : gens) {
    for (std::size_t i = 0; i < r; ++i) {
      lo[i] += std::min<std::int64_t>(0, a[i]);
      hi[i] += std::max<std::int64_t>(0, a[i]);
    }
  }
  auto inside = [&](const btz::IntVector& v) {
    for (const auto& f : cone.functionals) {
      std::int64_t s = 0;
      for (std::size_t i = 0; i < r; ++i) s += f[i] * v[i];
      if (s <= 0) return false;
    }
    return true;
  };
  std::set<btz::IntVector> out;
  btz::IntVector v = lo;
  while (true) {
    if (inside(v) && lattice_member(cone, v)) {
      bool corner = true;
      for (const auto& a : gens) {
        btz::IntVector w = v;
        for (std::size_t i = 0; i < r; ++i) w[i] -= a[i];
        if (inside(w)) corner = false;
      }
      if (corner) out.insert(v);
    }
    std::size_t i = 0;
    while (i < r && ++v[i] > hi[i]) v[i] = lo[i], ++i;
    if (i == r) break;
  }
  return out;
}

btz::IntPolynomial product(const std::vector<btz::IntPolynomial>& factors) {
  btz::IntPolynomial p{1};
  for (const auto& f : factors) p = p * f;
  return p;
}

}  // namespace oracle
