#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "btz/numeric.hpp"

namespace btz {

// Dense univariate polynomial with arbitrary-precision integer coefficients.
// Index = degree; trailing zeros are always stripped, so the zero polynomial
// has an empty coefficient list and degree -1.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> coeffs);
  IntPolynomial(std::initializer_list<long> coeffs);

  static IntPolynomial constant(BigInt c);
  static IntPolynomial monomial(BigInt c, std::size_t degree);
  // 1 - c*u^k
  static IntPolynomial one_minus(BigInt c, std::size_t k);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  BigInt coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : BigInt(0); }
  const BigInt& leading() const { return coeffs_.back(); }

  BigInt content() const;                 // nonnegative gcd of coefficients
  IntPolynomial primitive_part() const;   // sign kept
  IntPolynomial substitute_neg() const;   // p(-u)
  IntPolynomial substitute_power(unsigned k) const;  // p(u^k)
  IntPolynomial derivative() const;

  BigRational evaluate(const BigRational& u) const;
  std::complex<long double> evaluate(std::complex<long double> u) const;

  IntPolynomial& operator+=(const IntPolynomial& o);
  IntPolynomial& operator-=(const IntPolynomial& o);
  friend IntPolynomial operator+(IntPolynomial a, const IntPolynomial& b) { return a += b; }
  friend IntPolynomial operator-(IntPolynomial a, const IntPolynomial& b) { return a -= b; }
  friend IntPolynomial operator-(const IntPolynomial& a);
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const BigInt& s, const IntPolynomial& p);
  friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

  // "1 - 3*u^2 + u^5" style rendering.
  std::string to_string() const;

 private:
  void strip();
  std::vector<BigInt> coeffs_;
};

IntPolynomial pow(const IntPolynomial& p, unsigned e);

// Quotient a / b when b divides a in Z[u]; nullopt otherwise. b must be nonzero.
std::optional<IntPolynomial> divide_exact(const IntPolynomial& a, const IntPolynomial& b);

// Greatest common divisor in Z[u], positive leading coefficient.
IntPolynomial gcd(const IntPolynomial& a, const IntPolynomial& b);

// Multiplicity of f as a factor of p, and p with all copies removed.
struct FactorStrip {
  unsigned multiplicity = 0;
  IntPolynomial rest;
};
FactorStrip strip_factor(const IntPolynomial& p, const IntPolynomial& f);

// Square-free decomposition: p = c * prod_i parts[i].first^parts[i].second.
std::vector<std::pair<IntPolynomial, unsigned>> squarefree_decomposition(const IntPolynomial& p);

// Quotient of integer polynomials in normalized form: common factors removed,
// combined content 1, and the lowest-degree nonzero coefficient of the
// denominator positive (for zeta quotients that is the constant term 1).
class RationalFn {
 public:
  RationalFn() : num_(), den_(IntPolynomial{1}) {}
  RationalFn(IntPolynomial num, IntPolynomial den);

  const IntPolynomial& numerator() const { return num_; }
  const IntPolynomial& denominator() const { return den_; }

  BigRational evaluate(const BigRational& u) const;

  friend bool operator==(const RationalFn&, const RationalFn&) = default;

 private:
  IntPolynomial num_;
  IntPolynomial den_;
};

// Truncated formal power series c_0 + c_1 u + ... + c_M u^M.
template <class T>
struct Series {
  std::vector<T> coeffs;

  Series() = default;
  explicit Series(std::size_t order) : coeffs(order + 1, T(0)) {}

  std::size_t order() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  friend bool operator==(const Series&, const Series&) = default;
};

using PowerSeriesPrefix = Series<BigRational>;
using WeightedSeries = Series<GaussRational>;

// Coefficients of -u * f'(u)/f(u) up to u^order (index 0 is always 0).
// For f = det(I - uT) the coefficient of u^m is trace(T^m).
// Throws DomainError when f(0) == 0.
PowerSeriesPrefix log_derivative_series(const RationalFn& f, std::size_t order);
PowerSeriesPrefix log_derivative_series(const IntPolynomial& f, std::size_t order);

// Taylor expansion of f at 0 up to u^order; requires denominator(0) != 0.
PowerSeriesPrefix expand(const RationalFn& f, std::size_t order);
PowerSeriesPrefix expand(const IntPolynomial& f, std::size_t order);

// exp(-sum_{m>=1} s_m u^m / m): the formal inverse of log_derivative_series.
template <class T>
Series<T> exp_neg_integral(const Series<T>& s);

bool is_integral(const PowerSeriesPrefix& s);

}  // namespace btz
