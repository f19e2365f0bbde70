#include "btz/polynomial.hpp"

#include <algorithm>
#include <utility>

#include "btz/error.hpp"

namespace btz {

std::string to_string(const GaussRational& v) {
  if (v.im == 0) return to_string(v.re);
  std::string out = v.re == 0 ? "" : to_string(v.re);
  const bool neg = v.im < 0;
  if (!out.empty()) out += neg ? "-" : "+";
  else if (neg) out += "-";
  out += to_string(BigRational(abs(v.im))) + "i";
  return out;
}

BigInt parse_bigint(const std::string& text) {
  BigInt out;
  if (text.empty() || out.set_str(text, 10) != 0) throw InputError("not an integer: '" + text + "'");
  return out;
}

BigRational parse_bigrational(const std::string& text) {
  BigRational out;
  if (text.empty() || out.set_str(text, 10) != 0 || out.get_den() == 0) {
    throw InputError("not a rational number: '" + text + "'");
  }
  out.canonicalize();
  return out;
}

GaussRational parse_gauss_rational(const std::string& text) {
  std::string s;
  for (char ch : text) {
    if (ch != ' ') s += ch;
  }
  if (s.empty()) throw InputError("not a number: '" + text + "'");
  if (s.back() != 'i') return {parse_bigrational(s), 0};
  s.pop_back();
  // The imaginary part starts at the last sign that is not the leading one.
  std::size_t k = 0;
  for (std::size_t i = s.size(); i-- > 1;) {
    if (s[i] == '+' || s[i] == '-') {
      k = i;
      break;
    }
  }
  const std::string re = s.substr(0, k);
  std::string im = s.substr(k);
  if (!im.empty() && im[0] == '+') im.erase(0, 1);
  if (im.empty()) im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? BigRational(0) : parse_bigrational(re), parse_bigrational(im)};
}

// ---------------------------------------------------------------------------
// IntPolynomial

IntPolynomial::IntPolynomial(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) { strip(); }

IntPolynomial::IntPolynomial(std::initializer_list<long> coeffs) {
  coeffs_.reserve(coeffs.size());
  for (long c : coeffs) coeffs_.emplace_back(c);
  strip();
}

IntPolynomial IntPolynomial::constant(BigInt c) { return IntPolynomial(std::vector<BigInt>{std::move(c)}); }

IntPolynomial IntPolynomial::monomial(BigInt c, std::size_t degree) {
  std::vector<BigInt> v(degree + 1);
  v[degree] = std::move(c);
  return IntPolynomial(std::move(v));
}

IntPolynomial IntPolynomial::one_minus(BigInt c, std::size_t k) {
  return IntPolynomial{1} - monomial(std::move(c), k);
}

void IntPolynomial::strip() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

BigInt IntPolynomial::content() const {
  BigInt g = 0;
  for (const auto& c : coeffs_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

IntPolynomial IntPolynomial::primitive_part() const {
  if (is_zero()) return {};
  const BigInt g = content();
  std::vector<BigInt> out(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) mpz_divexact(out[i].get_mpz_t(), coeffs_[i].get_mpz_t(), g.get_mpz_t());
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::substitute_neg() const {
  auto out = coeffs_;
  for (std::size_t i = 1; i < out.size(); i += 2) out[i] = -out[i];
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::substitute_power(unsigned k) const {
  if (k == 0) throw DomainError("substitute_power: exponent must be positive");
  if (is_zero()) return {};
  std::vector<BigInt> out((coeffs_.size() - 1) * k + 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i * k] = coeffs_[i];
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<BigInt> out(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) out[i - 1] = coeffs_[i] * static_cast<unsigned long>(i);
  return IntPolynomial(std::move(out));
}

BigRational IntPolynomial::evaluate(const BigRational& u) const {
  BigRational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * u + BigRational(*it);
  return acc;
}

std::complex<long double> IntPolynomial::evaluate(std::complex<long double> u) const {
  std::complex<long double> acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * u + static_cast<long double>(it->get_d());
  }
  return acc;
}

IntPolynomial& IntPolynomial::operator+=(const IntPolynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  strip();
  return *this;
}

IntPolynomial& IntPolynomial::operator-=(const IntPolynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  strip();
  return *this;
}

IntPolynomial operator-(const IntPolynomial& a) {
  auto out = a.coeffs_;
  for (auto& c : out) c = -c;
  return IntPolynomial(std::move(out));
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<BigInt> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      mpz_addmul(out[i + j].get_mpz_t(), a.coeffs_[i].get_mpz_t(), b.coeffs_[j].get_mpz_t());
    }
  }
  return IntPolynomial(std::move(out));
}

IntPolynomial operator*(const BigInt& s, const IntPolynomial& p) {
  auto out = p.coeffs_;
  for (auto& c : out) c *= s;
  return IntPolynomial(std::move(out));
}

std::string IntPolynomial::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const BigInt& c = coeffs_[i];
    if (c == 0) continue;
    const bool neg = c < 0;
    const BigInt mag = abs(c);
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (i == 0 || mag != 1) {
      out += mag.get_str();
      if (i > 0) out += "*";
    }
    if (i == 1) out += "u";
    if (i > 1) out += "u^" + std::to_string(i);
  }
  return out;
}

IntPolynomial pow(const IntPolynomial& p, unsigned e) {
  IntPolynomial result{1};
  IntPolynomial base = p;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return result;
}

std::optional<IntPolynomial> divide_exact(const IntPolynomial& a, const IntPolynomial& b) {
  if (b.is_zero()) throw DomainError("division by the zero polynomial");
  if (a.is_zero()) return IntPolynomial{};
  if (a.degree() < b.degree()) return std::nullopt;
  std::vector<BigInt> rem = a.coeffs();
  const auto db = static_cast<std::size_t>(b.degree());
  const auto& bc = b.coeffs();
  std::vector<BigInt> quot(rem.size() - db);
  BigInt q;
  for (std::size_t k = quot.size(); k-- > 0;) {
    BigInt& top = rem[k + db];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), b.leading().get_mpz_t())) return std::nullopt;
    mpz_divexact(q.get_mpz_t(), top.get_mpz_t(), b.leading().get_mpz_t());
    for (std::size_t j = 0; j <= db; ++j) {
      mpz_submul(rem[k + j].get_mpz_t(), q.get_mpz_t(), bc[j].get_mpz_t());
    }
    quot[k] = q;
  }
  for (std::size_t i = 0; i < db; ++i) {
    if (rem[i] != 0) return std::nullopt;
  }
  return IntPolynomial(std::move(quot));
}

namespace {

// lc(b)^(deg a - deg b + 1) * a mod b
IntPolynomial pseudo_remainder(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<BigInt> r = a.coeffs();
  const int db = b.degree();
  const auto& bc = b.coeffs();
  const BigInt& lb = b.leading();
  int dr = static_cast<int>(r.size()) - 1;
  while (dr >= db) {
    const BigInt lr = r[static_cast<std::size_t>(dr)];
    for (auto& c : r) c *= lb;
    const int shift = dr - db;
    for (int j = 0; j <= db; ++j) {
      mpz_submul(r[static_cast<std::size_t>(j + shift)].get_mpz_t(), lr.get_mpz_t(),
                 bc[static_cast<std::size_t>(j)].get_mpz_t());
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    dr = static_cast<int>(r.size()) - 1;
  }
  return IntPolynomial(std::move(r));
}

}  // namespace

IntPolynomial gcd(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() && b.is_zero()) return {};
  if (a.is_zero()) return b.leading() < 0 ? -b : b;
  if (b.is_zero()) return a.leading() < 0 ? -a : a;
  BigInt cg;
  const BigInt ca = a.content();
  const BigInt cb = b.content();
  mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  IntPolynomial x = a.primitive_part();
  IntPolynomial y = b.primitive_part();
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    IntPolynomial r = pseudo_remainder(x, y);
    x = std::move(y);
    y = r.primitive_part();
  }
  IntPolynomial g = cg * x;
  return g.leading() < 0 ? -g : g;
}

FactorStrip strip_factor(const IntPolynomial& p, const IntPolynomial& f) {
  if (f.degree() < 1) throw DomainError("strip_factor: factor must be non-constant");
  FactorStrip out{0, p};
  if (p.is_zero()) return out;
  while (auto q = divide_exact(out.rest, f)) {
    out.rest = std::move(*q);
    ++out.multiplicity;
  }
  return out;
}

std::vector<std::pair<IntPolynomial, unsigned>> squarefree_decomposition(const IntPolynomial& p) {
  std::vector<std::pair<IntPolynomial, unsigned>> parts;
  if (p.degree() < 1) return parts;
  const IntPolynomial f = p.primitive_part();
  IntPolynomial a = gcd(f, f.derivative()).primitive_part();
  IntPolynomial b = *divide_exact(f, a);
  unsigned i = 1;
  while (b.degree() > 0) {
    IntPolynomial c = gcd(a, b).primitive_part();
    IntPolynomial part = *divide_exact(b, c);
    if (part.degree() > 0) parts.emplace_back(part.leading() < 0 ? -part : part, i);
    a = *divide_exact(a, c);
    b = std::move(c);
    ++i;
  }
  return parts;
}

// ---------------------------------------------------------------------------
// RationalFn

RationalFn::RationalFn(IntPolynomial num, IntPolynomial den) {
  if (den.is_zero()) throw DomainError("rational function with zero denominator");
  if (num.is_zero()) {
    num_ = {};
    den_ = IntPolynomial{1};
    return;
  }
  const IntPolynomial g = gcd(num, den);
  if (g.degree() > 0) {
    num = *divide_exact(num, g);
    den = *divide_exact(den, g);
  }
  BigInt c;
  const BigInt cn = num.content();
  const BigInt cd = den.content();
  mpz_gcd(c.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
  std::vector<BigInt> nc = num.coeffs();
  std::vector<BigInt> dc = den.coeffs();
  for (auto& x : nc) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
  for (auto& x : dc) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
  const auto low = std::find_if(dc.begin(), dc.end(), [](const BigInt& x) { return x != 0; });
  if (*low < 0) {
    for (auto& x : nc) x = -x;
    for (auto& x : dc) x = -x;
  }
  num_ = IntPolynomial(std::move(nc));
  den_ = IntPolynomial(std::move(dc));
}

BigRational RationalFn::evaluate(const BigRational& u) const {
  const BigRational d = den_.evaluate(u);
  if (d == 0) throw DomainError("rational function evaluated at a pole");
  return num_.evaluate(u) / d;
}

// ---------------------------------------------------------------------------
// Series

PowerSeriesPrefix log_derivative_series(const IntPolynomial& f, std::size_t order) {
  if (f.coeff(0) == 0) throw DomainError("log derivative requires f(0) != 0");
  const BigRational p0(f.coeff(0));
  PowerSeriesPrefix s(order);
  for (std::size_t m = 1; m <= order; ++m) {
    BigRational acc = -BigRational(f.coeff(m)) * static_cast<unsigned long>(m);
    for (std::size_t i = 1; i < m && i <= static_cast<std::size_t>(f.degree()); ++i) {
      acc -= BigRational(f.coeff(i)) * s.coeffs[m - i];
    }
    s.coeffs[m] = acc / p0;
  }
  return s;
}

PowerSeriesPrefix log_derivative_series(const RationalFn& f, std::size_t order) {
  PowerSeriesPrefix a = log_derivative_series(f.numerator(), order);
  const PowerSeriesPrefix b = log_derivative_series(f.denominator(), order);
  for (std::size_t m = 0; m <= order; ++m) a.coeffs[m] -= b.coeffs[m];
  return a;
}

PowerSeriesPrefix expand(const RationalFn& f, std::size_t order) {
  const IntPolynomial& num = f.numerator();
  const IntPolynomial& den = f.denominator();
  if (den.coeff(0) == 0) throw DomainError("series expansion requires denominator(0) != 0");
  const BigRational d0(den.coeff(0));
  PowerSeriesPrefix s(order);
  for (std::size_t n = 0; n <= order; ++n) {
    BigRational acc(num.coeff(n));
    for (std::size_t i = 1; i <= n && i <= static_cast<std::size_t>(std::max(den.degree(), 0)); ++i) {
      acc -= BigRational(den.coeff(i)) * s.coeffs[n - i];
    }
    s.coeffs[n] = acc / d0;
  }
  return s;
}

PowerSeriesPrefix expand(const IntPolynomial& f, std::size_t order) {
  PowerSeriesPrefix s(order);
  for (std::size_t n = 0; n <= order; ++n) s.coeffs[n] = f.coeff(n);
  return s;
}

template <class T>
Series<T> exp_neg_integral(const Series<T>& s) {
  const std::size_t order = s.order();
  Series<T> e(order);
  if (s.coeffs.empty()) return e;
  e.coeffs[0] = T(1);
  for (std::size_t n = 1; n <= order; ++n) {
    T acc(0);
    for (std::size_t k = 1; k <= n; ++k) acc += s.coeffs[k] * e.coeffs[n - k];
    e.coeffs[n] = T(BigRational(BigInt(-1), BigInt(static_cast<unsigned long>(n)))) * acc;
  }
  return e;
}

template Series<BigRational> exp_neg_integral(const Series<BigRational>&);
template Series<GaussRational> exp_neg_integral(const Series<GaussRational>&);

bool is_integral(const PowerSeriesPrefix& s) {
  return std::all_of(s.coeffs.begin(), s.coeffs.end(),
                     [](const BigRational& c) { return c.get_den() == 1; });
}

}  // namespace btz
