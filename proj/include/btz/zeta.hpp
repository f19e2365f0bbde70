#pragma once

#include <cstddef>
#include <vector>

#include "btz/complex.hpp"
#include "btz/operators.hpp"
#include "btz/polynomial.hpp"

namespace btz {

// det(I - u*M) computed exactly. Characteristic polynomials are taken modulo
// enough word-size primes to cover a Hadamard-type coefficient bound and
// recombined by CRT; independent primes run on separate threads.
IntPolynomial char_poly_reverse(const SparseIntMatrix& m);

// trace(M^k) for k = 0..order, exact.
std::vector<BigInt> trace_powers(const SparseIntMatrix& m, std::size_t order);

// Z1 = det(I - u L_E), Z2 = det(I - u L_B) of a closed valid complex.
IntPolynomial zeta_edge(const TypedComplex& c);
IntPolynomial zeta_chamber(const TypedComplex& c);

enum class SignConvention { minus_u, plus_u };

// Z2(-u) / Z1(u^2) (default) or Z2(u) / Z1(u^2), normalized.
RationalFn zeta_ratio(const IntPolynomial& z1, const IntPolynomial& z2,
                      SignConvention sign = SignConvention::minus_u);
RationalFn ratio(const TypedComplex& c, SignConvention sign = SignConvention::minus_u);

}  // namespace btz
