#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "btz/complex.hpp"
#include "btz/polynomial.hpp"

namespace btz {

using Root = std::complex<long double>;

// All deg(p) complex roots with multiplicity. Multiplicities come from an exact
// square-free decomposition; each square-free part is solved by Aberth
// iteration and polished by Newton steps. Constants give an empty list.
// Throws DomainError for the zero polynomial and when a root fails the
// residual test |p(z)| <= tol * sum |c_i| |z|^i.
std::vector<Root> polynomial_roots(const IntPolynomial& p, double tol = 1e-9);

enum class Verdict { ramanujan, non_tempered_witness, inconclusive };
std::string to_string(Verdict v);

struct RootReport {
  Root root;
  long double modulus = 0;
  // |modulus - q^{-1/2}| / q^{-1/2}; negative when q is unknown.
  long double deviation = -1;
  bool tempered = false;
  bool boundary = false;  // tol < deviation <= 10 tol
};

struct RHReport {
  std::optional<std::int64_t> q;
  std::optional<std::int64_t> chi;
  // (multiplicity of 1 - u^3 in the numerator) - (multiplicity in the denominator)
  int euler_factor_exponent = 0;
  std::optional<bool> euler_exponent_matches;  // against chi - 1
  bool pole_factor_found = false;                // 1 - q^3 u^3 divides the denominator
  int pole_factor_multiplicity = 0;
  IntPolynomial P1;
  IntPolynomial P2;
  std::vector<RootReport> P1_roots;
  std::vector<RootReport> P2_roots;
  std::optional<std::int64_t> expected_p1_degree;  // N1 - 3 N0 + 6
  std::optional<bool> p1_degree_matches;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> notes;
  double tolerance = 1e-9;
};

// Strips (1 - u^3) from both sides and (1 - q^3 u^3) from the denominator by
// exact division, then root-tests the residual P1 (numerator) and P2
// (denominator) against modulus q^{-1/2}. Missing q or q < 2 is inconclusive.
RHReport classify_ramanujan(const RationalFn& f, std::optional<std::int64_t> q,
                            std::optional<std::int64_t> chi, double tol = 1e-9,
                            std::optional<SimplexCounts> counts = std::nullopt);

}  // namespace btz
