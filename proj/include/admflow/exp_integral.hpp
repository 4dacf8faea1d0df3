#pragma once

#include <cmath>
#include <vector>

#include "admflow/polynomial.hpp"
#include "admflow/rational.hpp"

namespace admflow {

// The closed form cancels catastrophically for small |k| (it loses roughly
// deg! / |k|^{deg+1} in relative terms), while the exact-moment series needs
// about |k| max(|a|,|b|) + 40 terms. The series therefore handles everything
// up to this bound on |k| max(|a|,|b|); beyond it the closed form is clean.
inline constexpr double kExpSeriesKMax = 10.0;

namespace detail {

inline std::vector<Polynomial> derivative_list(const Polynomial& p) {
  std::vector<Polynomial> d;
  d.push_back(p);
  while (!d.back().is_zero()) d.push_back(d.back().derivative());
  d.pop_back();
  return d;
}

// S(t) = sum_i (-1)^i p^(i)(t) / k^(i+1), the primitive of p(t)e^{kt} being
// e^{kt} S(t). `derivs` is derivative_list(p).
inline double exp_primitive(const std::vector<Polynomial>& derivs, double k,
                            double t) {
  double total = 0.0;
  double kp = k;
  double sign = 1.0;
  for (const auto& d : derivs) {
    total += sign * d(t) / kp;
    kp *= k;
    sign = -sign;
  }
  return total;
}

// Truncated exponential series against exact polynomial moments:
//   int_a^b p e^{kt} dt = sum_j k^j/j! int_a^b p(t) t^j dt.
// Tail after J terms is bounded by (b-a) max|p| (|k|M)^{J+1}/(J+1)! e^{|k|M},
// M = max(|a|,|b|); terms are added until that is below roundoff.
inline double exp_integral_series(const Polynomial& p, double k,
                                  const Rational& a, const Rational& b) {
  double da = to_double(a), db = to_double(b);
  double big = std::max(std::abs(da), std::abs(db));
  double p_sup = 0.0;
  double mpow = 1.0;
  for (const auto& c : p.coefficients()) {
    p_sup += std::abs(c.get_d()) * mpow;
    mpow *= std::max(big, 1.0);
  }
  double total = 0.0;
  double coeff = 1.0;  // k^j / j!
  Polynomial q = p;
  const Polynomial t_mono = Polynomial::linear(Rational(0), Rational(1));
  for (int j = 0; j <= 80; ++j) {
    total += coeff * to_double(q.definite_integral(a, b));
    if (k == 0.0) break;
    double next = coeff * k * big / (j + 1);
    double tail = std::abs(next) * (db - da) * p_sup * std::exp(std::abs(k) * big);
    if (tail < 1e-17 * (std::abs(total) + 1e-300)) break;
    coeff *= k / (j + 1);
    q = q * t_mono;
  }
  return total;
}

}  // namespace detail

// int_a^b p(t) e^{kt} dt. Closed form via the e^{kt}-primitive, with a series
// fallback when k(b-a) is small enough to wipe out the difference.
inline double exp_weighted_integral(const Polynomial& p, double k,
                                    const Rational& a, const Rational& b) {
  if (p.is_zero() || a == b) return 0.0;
  double da = to_double(a), db = to_double(b);
  double big = std::max(std::abs(da), std::abs(db));
  if (std::abs(k) * big <= kExpSeriesKMax)
    return detail::exp_integral_series(p, k, a, b);
  auto derivs = detail::derivative_list(p);
  return std::exp(k * db) * detail::exp_primitive(derivs, k, db) -
         std::exp(k * da) * detail::exp_primitive(derivs, k, da);
}

inline double exp_weighted_integral(const Polynomial& p, double k, double a,
                                    double b) {
  return exp_weighted_integral(p, k, rational_from_double(a),
                               rational_from_double(b));
}

}  // namespace admflow
