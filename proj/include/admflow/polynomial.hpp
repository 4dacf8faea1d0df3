#pragma once

#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "admflow/errors.hpp"
#include "admflow/rational.hpp"

namespace admflow {

// Dense univariate polynomial with exact rational coefficients, ascending
// degree order. The zero polynomial has an empty coefficient vector and
// degree -1.
class Polynomial {
 public:
  Polynomial() = default;

  explicit Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    normalize();
  }

  Polynomial(std::initializer_list<Rational> coeffs)
      : c_(coeffs) {
    normalize();
  }

  static Polynomial zero() { return Polynomial(); }
  static Polynomial constant(const Rational& a) { return Polynomial({a}); }

  // a + b*t
  static Polynomial linear(const Rational& a, const Rational& b) {
    return Polynomial({a, b});
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  const std::vector<Rational>& coefficients() const { return c_; }

  Rational coefficient(std::size_t i) const {
    return i < c_.size() ? c_[i] : Rational(0);
  }

  Rational leading_coefficient() const {
    return c_.empty() ? Rational(0) : c_.back();
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> out(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] += b.c_[i];
    return Polynomial(std::move(out));
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> out(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] -= b.c_[i];
    return Polynomial(std::move(out));
  }

  Polynomial operator-() const {
    std::vector<Rational> out(c_);
    for (auto& x : out) x = -x;
    return Polynomial(std::move(out));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<Rational> out(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        out[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(out));
  }

  friend Polynomial operator*(const Rational& s, const Polynomial& p) {
    if (s == 0) return Polynomial();
    std::vector<Rational> out(p.c_);
    for (auto& x : out) x *= s;
    return Polynomial(std::move(out));
  }

  friend Polynomial operator*(const Polynomial& p, const Rational& s) {
    return s * p;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.c_ == b.c_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) {
    return !(a == b);
  }

  Polynomial pow(unsigned n) const {
    Polynomial r = constant(Rational(1));
    for (unsigned i = 0; i < n; ++i) r = r * *this;
    return r;
  }

  // Exact Horner evaluation.
  Rational operator()(const Rational& t) const {
    Rational r(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * t + *it;
    return r;
  }

  // Float Horner evaluation; coefficients rounded once.
  double operator()(double t) const {
    double r = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
      r = r * t + it->get_d();
    return r;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<Rational> out(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
      out[i - 1] = c_[i] * Rational(static_cast<long>(i));
    return Polynomial(std::move(out));
  }

  // Antiderivative with zero constant term.
  Polynomial antiderivative() const {
    if (is_zero()) return Polynomial();
    std::vector<Rational> out(c_.size() + 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
      out[i + 1] = c_[i] / Rational(static_cast<long>(i + 1));
    return Polynomial(std::move(out));
  }

  Rational definite_integral(const Rational& a, const Rational& b) const {
    Polynomial anti = antiderivative();
    return anti(b) - anti(a);
  }

  // Exact Euclidean division: *this = q*d + r with deg r < deg d.
  std::pair<Polynomial, Polynomial> divrem(const Polynomial& d) const {
    if (d.is_zero())
      throw Error(ErrorKind::InvalidInput, "polynomial division by zero");
    std::vector<Rational> rem(c_);
    std::vector<Rational> quot;
    int dd = d.degree();
    const Rational& lead = d.c_.back();
    while (static_cast<int>(rem.size()) - 1 >= dd) {
      std::size_t k = rem.size() - 1 - dd;
      Rational f = rem.back() / lead;
      if (quot.size() < k + 1) quot.resize(k + 1, Rational(0));
      quot[k] = f;
      for (int i = 0; i <= dd; ++i)
        rem[k + i] -= f * d.c_[i];
      while (!rem.empty() && rem.back() == 0) rem.pop_back();
      if (rem.empty()) break;
    }
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
  }

  // Division known to be remainder-free; throws InvariantViolation otherwise.
  Polynomial exact_quotient(const Polynomial& d) const {
    auto [q, r] = divrem(d);
    if (!r.is_zero())
      throw Error(ErrorKind::InvariantViolation,
                  "exact polynomial division left a remainder");
    return q;
  }

  std::string to_string(const std::string& var = "t") const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      Rational a = c_[i];
      if (!first) os << (a < 0 ? " - " : " + ");
      else if (a < 0) os << "-";
      Rational mag = abs(a);
      if (i == 0 || mag != 1) os << format_rational(mag);
      if (i > 0) {
        if (mag != 1) os << "*";
        os << var;
        if (i > 1) os << "^" << i;
      }
      first = false;
    }
    return os.str();
  }

 private:
  void normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<Rational> c_;
};

// Double-precision snapshot of a Polynomial for evaluation-heavy loops;
// coefficients are rounded once at construction.
struct DPoly {
  std::vector<double> c;

  static DPoly from(const Polynomial& p) {
    DPoly d;
    d.c.reserve(p.coefficients().size());
    for (const auto& q : p.coefficients()) d.c.push_back(q.get_d());
    return d;
  }

  double operator()(double t) const {
    double r = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * t + *it;
    return r;
  }
};

// gcd over Q, normalized monic. gcd(0,0) = 0.
inline Polynomial poly_gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = a.divrem(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.is_zero()) {
    Rational inv = Rational(1) / a.leading_coefficient();
    a = inv * a;
  }
  return a;
}

}  // namespace admflow
