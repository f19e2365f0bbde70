#include "btz/rh_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "btz/error.hpp"

namespace btz {

namespace {

using LD = long double;

// Coefficients as long doubles after a common power-of-two scaling, so that
// very large integers stay in range. Roots do not depend on the scaling.
std::vector<LD> scaled_coeffs(const IntPolynomial& p) {
  long max_exp = 0;
  for (const auto& c : p.coeffs()) {
    if (c != 0) max_exp = std::max<long>(max_exp, static_cast<long>(mpz_sizeinbase(c.get_mpz_t(), 2)));
  }
  const long shift = std::max<long>(0, max_exp - 1000);
  std::vector<LD> out;
  out.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) {
    long e = 0;
    const double m = mpz_get_d_2exp(&e, c.get_mpz_t());
    out.push_back(std::ldexp(static_cast<LD>(m), static_cast<int>(e - shift)));
  }
  return out;
}

struct Eval {
  Root value;
  Root derivative;
  LD scale;  // sum |c_i| |z|^i
};

Eval horner(const std::vector<LD>& c, Root z) {
  Root v = 0, d = 0;
  LD s = 0;
  const LD az = std::abs(z);
  for (std::size_t i = c.size(); i-- > 0;) {
    d = d * z + v;
    v = v * z + c[i];
    s = s * az + std::fabs(c[i]);
  }
  return {v, d, s};
}

// Aberth-Ehrlich simultaneous iteration for a square-free polynomial.
std::vector<Root> aberth(const std::vector<LD>& c) {
  const std::size_t n = c.size() - 1;
  if (n == 0) return {};
  if (n == 1) return {Root(-c[0] / c[1], 0)};

  const LD radius = std::pow(std::fabs(c[0] / c[n]), 1.0L / static_cast<LD>(n));
  std::vector<Root> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const LD angle = 2 * std::numbers::pi_v<LD> * static_cast<LD>(k) / static_cast<LD>(n) + 0.4L;
    z[k] = std::polar(radius, angle);
  }
  std::vector<bool> done(n, false);
  for (int iter = 0; iter < 2000; ++iter) {
    bool all_done = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      const Eval e = horner(c, z[k]);
      if (e.value == Root(0)) {
        done[k] = true;
        continue;
      }
      const Root ratio = e.value / e.derivative;
      Root sum = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) sum += 1.0L / (z[k] - z[j]);
      }
      const Root w = ratio / (1.0L - ratio * sum);
      z[k] -= w;
      if (std::abs(w) <= 1e-19L * std::max<LD>(1, std::abs(z[k]))) {
        done[k] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) break;
  }
  for (auto& r : z) {
    for (int k = 0; k < 3; ++k) {
      const Eval e = horner(c, r);
      if (e.derivative == Root(0)) break;
      r -= e.value / e.derivative;
    }
  }
  return z;
}

bool root_less(const Root& a, const Root& b) {
  const LD ma = std::abs(a), mb = std::abs(b);
  if (std::fabs(ma - mb) > 1e-12L * std::max<LD>(1, ma)) return ma < mb;
  return std::arg(a) < std::arg(b);
}

}  // namespace

std::vector<Root> polynomial_roots(const IntPolynomial& p, double tol) {
  if (p.is_zero()) throw DomainError("roots of the zero polynomial");
  if (!(tol > 0)) throw InputError("tolerance must be positive");
  std::vector<Root> out;
  if (p.degree() < 1) return out;
  for (const auto& [raw, mult] : squarefree_decomposition(p)) {
    // u = 0 is an exact root; Aberth needs a nonzero constant term.
    std::vector<BigInt> rc = raw.coeffs();
    std::size_t zeros = 0;
    while (zeros < rc.size() && rc[zeros] == 0) ++zeros;
    for (std::size_t k = 0; k < zeros * mult; ++k) out.emplace_back(0);
    const IntPolynomial part(std::vector<BigInt>(rc.begin() + static_cast<long>(zeros), rc.end()));
    if (part.degree() < 1) continue;
    const auto c = scaled_coeffs(part);
    for (const Root& r : aberth(c)) {
      const Eval e = horner(c, r);
      if (!(std::abs(e.value) <= static_cast<LD>(tol) * e.scale)) {
        throw DomainError("root finder did not converge for " + part.to_string());
      }
      for (unsigned k = 0; k < mult; ++k) out.push_back(r);
    }
  }
  std::sort(out.begin(), out.end(), root_less);
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ramanujan: return "ramanujan";
    case Verdict::non_tempered_witness: return "non_tempered_witness";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

RHReport classify_ramanujan(const RationalFn& f, std::optional<std::int64_t> q,
                            std::optional<std::int64_t> chi, double tol,
                            std::optional<SimplexCounts> counts) {
  RHReport rep;
  rep.q = q;
  rep.chi = chi;
  rep.tolerance = tol;

  const IntPolynomial cube = IntPolynomial::one_minus(1, 3);
  const FactorStrip sn = strip_factor(f.numerator(), cube);
  const FactorStrip sd = strip_factor(f.denominator(), cube);
  rep.euler_factor_exponent = static_cast<int>(sn.multiplicity) - static_cast<int>(sd.multiplicity);
  if (chi) rep.euler_exponent_matches = rep.euler_factor_exponent == *chi - 1;
  rep.P1 = sn.rest;
  rep.P2 = sd.rest;

  const bool building_q = q && *q >= 2;
  if (building_q) {
    const BigInt q3 = BigInt(static_cast<long>(*q)) * *q * *q;
    const FactorStrip sp = strip_factor(rep.P2, IntPolynomial::one_minus(q3, 3));
    rep.pole_factor_multiplicity = static_cast<int>(sp.multiplicity);
    rep.pole_factor_found = sp.multiplicity > 0;
    rep.P2 = sp.rest;
    if (!rep.pole_factor_found) rep.notes.push_back("denominator has no factor 1 - q^3 u^3");
  } else {
    rep.notes.push_back(q ? "q < 2: not a building quotient" : "q not given");
  }
  if (chi && !*rep.euler_exponent_matches) {
    rep.notes.push_back("exponent of 1 - u^3 is " + std::to_string(rep.euler_factor_exponent) +
                        ", expected chi - 1 = " + std::to_string(*chi - 1));
  }
  if (counts) {
    rep.expected_p1_degree = counts->n1 - 3 * counts->n0 + 6;
    rep.p1_degree_matches = rep.P1.degree() == *rep.expected_p1_degree;
  }

  const LD target = building_q ? 1.0L / std::sqrt(static_cast<LD>(*q)) : 0;
  bool witness = false, boundary = false;
  auto examine = [&](const IntPolynomial& p, std::vector<RootReport>& out) {
    for (const Root& r : polynomial_roots(p, tol)) {
      RootReport rr;
      rr.root = r;
      rr.modulus = std::abs(r);
      if (building_q) {
        rr.deviation = std::fabs(rr.modulus - target) / target;
        rr.tempered = rr.deviation <= tol;
        rr.boundary = !rr.tempered && rr.deviation <= 10 * tol;
        witness = witness || (!rr.tempered && !rr.boundary);
        boundary = boundary || rr.boundary;
      }
      out.push_back(rr);
    }
  };
  examine(rep.P1, rep.P1_roots);
  examine(rep.P2, rep.P2_roots);

  if (!building_q) {
    rep.verdict = Verdict::inconclusive;
  } else if (witness) {
    rep.verdict = Verdict::non_tempered_witness;
  } else if (boundary) {
    rep.verdict = Verdict::inconclusive;
    rep.notes.push_back("root moduli within 10 tol of q^{-1/2}");
  } else {
    rep.verdict = Verdict::ramanujan;
  }
  return rep;
}

}  // namespace btz
