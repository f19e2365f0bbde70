#pragma once

#include <gmpxx.h>

#include <string>

namespace btz {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// Exact element of Q(i). Used for trace weights, which are often +-1 or +-i.
struct GaussRational {
  BigRational re{0};
  BigRational im{0};

  GaussRational() = default;
  GaussRational(BigRational r) : re(std::move(r)) {}  // NOLINT: implicit by intent
  GaussRational(BigRational r, BigRational i) : re(std::move(r)), im(std::move(i)) {}
  GaussRational(long v) : re(v) {}  // NOLINT

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  friend GaussRational operator+(const GaussRational& a, const GaussRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussRational operator-(const GaussRational& a, const GaussRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re, -a.im}; }
  friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussRational& operator+=(const GaussRational& b) {
    re += b.re;
    im += b.im;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& b) {
    re -= b.re;
    im -= b.im;
    return *this;
  }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

// "p/q" or "p" for integral values; decimal digits, arbitrary precision.
inline std::string to_string(const BigInt& v) { return v.get_str(); }
inline std::string to_string(const BigRational& v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_str();
}
std::string to_string(const GaussRational& v);

BigInt parse_bigint(const std::string& text);
BigRational parse_bigrational(const std::string& text);
// Inverse of to_string(GaussRational): "a", "bi", "a+bi", "a-bi", "i", "-i".
GaussRational parse_gauss_rational(const std::string& text);

}  // namespace btz
