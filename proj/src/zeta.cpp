#include "btz/zeta.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>

#include "btz/error.hpp"

namespace btz {

namespace {

using u64 = std::uint64_t;

u64 pow_mod(u64 b, u64 e, u64 p) {
  u64 r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

u64 inv_mod(u64 a, u64 p) { return pow_mod(a, p - 2, p); }

// Largest primes below 2^31, descending.
std::vector<u64> word_primes(std::size_t count) {
  std::vector<u64> out;
  BigInt candidate = (1UL << 31) - 1;
  while (out.size() < count) {
    if (mpz_probab_prime_p(candidate.get_mpz_t(), 30) > 0) out.push_back(candidate.get_ui());
    candidate -= 2;
  }
  return out;
}

// Monic characteristic polynomial det(xI - A) mod p, via reduction to upper
// Hessenberg form and the standard column recurrence. A is dense, row-major,
// entries already reduced mod p. Returns coefficients by increasing degree.
std::vector<u64> charpoly_mod(std::vector<u64> a, std::size_t n, u64 p) {
  auto at = [&](std::size_t i, std::size_t j) -> u64& { return a[i * n + j]; };
  for (std::size_t m = 1; m + 1 < n; ++m) {
    std::size_t piv = m;
    while (piv < n && at(piv, m - 1) == 0) ++piv;
    if (piv == n) continue;
    if (piv != m) {
      for (std::size_t j = 0; j < n; ++j) std::swap(at(piv, j), at(m, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(at(i, piv), at(i, m));
    }
    const u64 inv = inv_mod(at(m, m - 1), p);
    for (std::size_t i = m + 1; i < n; ++i) {
      const u64 f = at(i, m - 1) * inv % p;
      if (f == 0) continue;
      // row_i -= f * row_m, then col_m += f * col_i (similarity).
      for (std::size_t j = 0; j < n; ++j) {
        at(i, j) = (at(i, j) + (p - f) * at(m, j)) % p;
      }
      for (std::size_t r = 0; r < n; ++r) {
        at(r, m) = (at(r, m) + f * at(r, i)) % p;
      }
    }
  }

  // polys[k] = characteristic polynomial of the leading k x k block.
  std::vector<std::vector<u64>> polys(n + 1);
  polys[0] = {1};
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t c = k - 1;  // 0-based column of the new block
    std::vector<u64> next(k + 1, 0);
    const auto& prev = polys[k - 1];
    const u64 diag = at(c, c);
    for (std::size_t d = 0; d < prev.size(); ++d) {
      next[d + 1] = (next[d + 1] + prev[d]) % p;
      next[d] = (next[d] + (p - diag) * prev[d]) % p;
    }
    u64 t = 1;
    for (std::size_t i = c; i-- > 0;) {
      t = t * at(i + 1, i) % p;
      if (t == 0) break;
      const u64 f = at(i, c) * t % p;
      if (f == 0) continue;
      const auto& lower = polys[i];
      for (std::size_t d = 0; d < lower.size(); ++d) {
        next[d] = (next[d] + (p - f) * lower[d]) % p;
      }
    }
    polys[k] = std::move(next);
  }
  return polys[n];
}

// log2 of prod_j (1 + |col_j|_2), an upper bound for every coefficient of
// det(I - uM): the coefficient of u^k is a signed sum of principal k-minors,
// each bounded by the product of its column norms.
double coefficient_bound_bits(const SparseIntMatrix& m) {
  std::vector<long double> col_sq(static_cast<std::size_t>(m.dim), 0.0L);
  for (const auto& e : m.entries) {
    col_sq[static_cast<std::size_t>(e.col)] += static_cast<long double>(e.value) * e.value;
  }
  long double bits = 0;
  for (long double s : col_sq) bits += std::log2(1.0L + std::sqrt(s));
  return static_cast<double>(bits);
}

}  // namespace

IntPolynomial char_poly_reverse(const SparseIntMatrix& m) {
  const auto n = static_cast<std::size_t>(m.dim);
  if (n == 0 || m.entries.empty()) return IntPolynomial{1};
  if (n > 20000) throw ResourceLimit("matrix dimension " + std::to_string(n) + " exceeds 20000");

  const double bits = coefficient_bound_bits(m) + 2.0;  // sign and slack
  const auto prime_count = static_cast<std::size_t>(std::ceil(bits / 30.0)) + 1;
  const auto primes = word_primes(prime_count);

  std::vector<std::vector<u64>> residues(primes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < primes.size(); k = next++) {
      const u64 p = primes[k];
      std::vector<u64> dense(n * n, 0);
      for (const auto& e : m.entries) {
        const std::int64_t r = e.value % static_cast<std::int64_t>(p);
        dense[static_cast<std::size_t>(e.row) * n + static_cast<std::size_t>(e.col)] =
            static_cast<u64>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
      }
      residues[k] = charpoly_mod(std::move(dense), n, p);
    }
  };
  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  const auto threads = std::min<std::size_t>(hw, primes.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Incremental CRT, then symmetric residues.
  std::vector<BigInt> value(n + 1, 0);
  BigInt modulus = 1;
  for (std::size_t k = 0; k < primes.size(); ++k) {
    const BigInt p = static_cast<unsigned long>(primes[k]);
    BigInt inv;
    const BigInt mod_p = modulus % p;
    mpz_invert(inv.get_mpz_t(), mod_p.get_mpz_t(), p.get_mpz_t());
    for (std::size_t d = 0; d <= n; ++d) {
      BigInt delta = BigInt(static_cast<unsigned long>(residues[k][d])) - value[d] % p;
      delta = delta * inv % p;
      if (delta < 0) delta += p;
      value[d] += modulus * delta;
    }
    modulus *= p;
  }
  const BigInt half = modulus / 2;
  // det(xI - M) = sum a_d x^d  =>  det(I - uM) = sum a_d u^(n-d).
  std::vector<BigInt> rev(n + 1);
  for (std::size_t d = 0; d <= n; ++d) {
    BigInt v = value[d];
    if (v > half) v -= modulus;
    rev[n - d] = v;
  }
  return IntPolynomial(std::move(rev));
}

std::vector<BigInt> trace_powers(const SparseIntMatrix& m, std::size_t order) {
  const auto n = static_cast<std::size_t>(m.dim);
  std::vector<BigInt> out(order + 1, 0);
  out[0] = static_cast<long>(n);
  if (order == 0) return out;
  // Column-wise: follow e_j through M^k and read back coordinate j.
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<BigInt> v(n, 0);
    v[j] = 1;
    for (std::size_t k = 1; k <= order; ++k) {
      std::vector<BigInt> w(n, 0);
      for (const auto& e : m.entries) {
        const auto& x = v[static_cast<std::size_t>(e.col)];
        if (x != 0) w[static_cast<std::size_t>(e.row)] += x * static_cast<long>(e.value);
      }
      v = std::move(w);
      out[k] += v[j];
    }
  }
  return out;
}

IntPolynomial zeta_edge(const TypedComplex& c) { return char_poly_reverse(build_edge_operator(c)); }

IntPolynomial zeta_chamber(const TypedComplex& c) {
  return char_poly_reverse(build_chamber_operator(c));
}

RationalFn zeta_ratio(const IntPolynomial& z1, const IntPolynomial& z2, SignConvention sign) {
  IntPolynomial num = sign == SignConvention::minus_u ? z2.substitute_neg() : z2;
  return RationalFn(std::move(num), z1.substitute_power(2));
}

RationalFn ratio(const TypedComplex& c, SignConvention sign) {
  return zeta_ratio(zeta_edge(c), zeta_chamber(c), sign);
}

}  // namespace btz
