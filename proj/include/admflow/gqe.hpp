#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "admflow/admissible.hpp"
#include "admflow/errors.hpp"
#include "admflow/exp_integral.hpp"
#include "admflow/polynomial.hpp"
#include "admflow/rational.hpp"

namespace admflow {

// MT(k) = int_{-1}^1 P(t) e^{kt} dt, the obstruction to a GQE profile with
// Ricci-potential slope k.
inline double mt(const InvariantBundle& inv, double k) {
  return exp_weighted_integral(inv.P, k, Rational(-1), Rational(1));
}

inline double mt_derivative(const InvariantBundle& inv, double k) {
  Polynomial tP = Polynomial::linear(Rational(0), Rational(1)) * inv.P;
  return exp_weighted_integral(tP, k, Rational(-1), Rational(1));
}

// Unique zero of MT. P > 0 near -1 and P < 0 near +1 push MT to +inf as
// k -> -inf and to -inf as k -> +inf, so a sign-change bracket always exists;
// geometric expansion finds it, bisection plus a Newton polish refine it.
inline double solve_k0(const InvariantBundle& inv) {
  auto root = single_root_check(inv);
  if (!root.single)
    throw Error(ErrorKind::HypothesisNotMet,
                "P has " + std::to_string(root.count) +
                    " roots in (-1,1); the GQE construction needs exactly one");

  double mt0 = mt(inv, 0.0);
  if (mt0 == 0.0) return 0.0;

  double K = 1.0;
  while (!(mt(inv, -K) > 0.0 && mt(inv, K) < 0.0)) {
    K *= 2.0;
    if (K > 500.0)
      throw Error(ErrorKind::NumericFailure,
                  "MT sign-change bracket expansion exceeded K = 500");
  }

  double lo = -K, hi = K;  // MT(lo) > 0 > MT(hi)
  for (int i = 0; i < 200; ++i) {
    if (hi - lo <= 1e-14 * std::max(1.0, std::abs(lo) + std::abs(hi))) break;
    double mid = 0.5 * (lo + hi);
    double v = mt(inv, mid);
    if (v > 0.0)
      lo = mid;
    else if (v < 0.0)
      hi = mid;
    else
      return mid;
  }

  double k = 0.5 * (lo + hi);
  double best_k = k;
  double best = std::abs(mt(inv, k));
  for (int i = 0; i < 24; ++i) {
    double f = mt(inv, k);
    double fp = mt_derivative(inv, k);
    if (fp == 0.0) break;
    double next = k - f / fp;
    double fn = std::abs(mt(inv, next));
    if (!(fn < best)) break;
    best = fn;
    best_k = next;
    k = next;
  }

  if (!(best <= 1e-12 * std::max(1.0, std::abs(mt0))))
    throw Error(ErrorKind::NumericFailure,
                "MT(k0) residual above tolerance after refinement");
  return best_k;
}

namespace detail {

inline double binomial_double(unsigned n, unsigned k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b.get_d();
}

}  // namespace detail

// Self-similar target profile of the flow: F solving F' + k0 F = P with
// F(-1) = 0, and Theta_inf = F/p_c. Near the interval ends the ratio is a
// 0/0 form once d0 or dinf is positive; there the evaluation switches to a
// Taylor expansion of the integral int P e^{k0 t} dt divided by the exact
// deflated factors of p_c.
class GQEProfile {
 public:
  GQEProfile(InvariantBundle inv, double k0)
      : inv_(std::move(inv)), k0_(k0) {
    const Polynomial one_plus = Polynomial::linear(Rational(1), Rational(1));
    const Polynomial one_minus = Polynomial::linear(Rational(1), Rational(-1));

    p_ = DPoly::from(inv_.P);
    pder_ = DPoly::from(inv_.P.derivative());
    pc_ = DPoly::from(inv_.p_c);
    pcder_ = DPoly::from(inv_.p_c.derivative());

    pcsec_ = DPoly::from(inv_.p_c.derivative().derivative());

    Polynomial reduced_m1 = inv_.p_c.exact_quotient(one_plus.pow(inv_.d0()));
    Polynomial reduced_p1 = inv_.p_c.exact_quotient(one_minus.pow(inv_.dinf()));
    dm_ = DPoly::from(reduced_m1);
    dmder_ = DPoly::from(reduced_m1.derivative());
    dmsec_ = DPoly::from(reduced_m1.derivative().derivative());
    dp_ = DPoly::from(reduced_p1);
    dpder_ = DPoly::from(reduced_p1.derivative());
    dpsec_ = DPoly::from(reduced_p1.derivative().derivative());

    small_k_ = std::abs(k0_) <= kExpSeriesKMax;
    if (small_k_) {
      // F from the exponential series against exact moments:
      // F(z) = e^{-k0 z} sum_j k0^j/j! int_{-1}^z P(t) t^j dt
      Polynomial q = inv_.P;
      const Polynomial t_mono = Polynomial::linear(Rational(0), Rational(1));
      int terms = 24 + static_cast<int>(4.0 * std::abs(k0_));
      for (int j = 0; j < terms; ++j) {
        Polynomial anti = q.antiderivative();
        moments_.push_back(
            DPoly::from(anti - Polynomial::constant(anti(Rational(-1)))));
        q = q * t_mono;
      }
    } else {
      sderivs_ = detail::derivative_list(inv_.P);
      s_at_m1_ = detail::exp_primitive(sderivs_, k0_, -1.0);
    }

    window_ = std::min(1e-2, 2.5 / (1.0 + std::abs(k0_)));

    // Derivatives of P at the ends, exact then rounded.
    std::vector<double> pj_m1, pj_p1;
    {
      Polynomial d = inv_.P;
      while (!d.is_zero()) {
        pj_m1.push_back(to_double(d(Rational(-1))));
        pj_p1.push_back(to_double(d(Rational(1))));
        d = d.derivative();
      }
    }
    // Taylor data: coefficient of (1+z)^n in int_{-1}^z P e^{k0 t} dt times
    // e^{k0}, for n = d0+1 .. d0+kTaylorTerms; mirrored version at +1.
    auto taylor = [&](const std::vector<double>& pj, int dside) {
      std::vector<double> out;
      for (int i = 1; i <= kTaylorTerms; ++i) {
        int n = dside + i;
        double sum = 0.0;
        for (int j = 0; j <= n - 1 && j < static_cast<int>(pj.size()); ++j)
          sum += detail::binomial_double(n - 1, j) * pj[j] *
                 std::pow(k0_, n - 1 - j);
        double nfact = 1.0;
        for (int q = 2; q <= n; ++q) nfact *= q;
        out.push_back(sum / nfact);
      }
      return out;
    };
    taylor_m1_ = taylor(pj_m1, inv_.d0());
    taylor_p1_ = taylor(pj_p1, inv_.dinf());
  }

  const InvariantBundle& invariants() const { return inv_; }
  const AdmissibleData& data() const { return inv_.data; }
  double k0() const { return k0_; }
  double endpoint_window() const { return window_; }

  // F(z) = e^{-k0 z} int_{-1}^z P(t) e^{k0 t} dt
  double F(double z) const {
    double u = z + 1.0;
    if (u < window_)
      return std::exp(-k0_ * u) * series_m1(u) * std::pow(u, inv_.d0());
    if (small_k_) {
      double total = 0.0, coeff = 1.0;
      for (std::size_t j = 0; j < moments_.size(); ++j) {
        total += coeff * moments_[j](z);
        coeff *= k0_ / static_cast<double>(j + 1);
      }
      return std::exp(-k0_ * z) * total;
    }
    return detail::exp_primitive(sderivs_, k0_, z) -
           std::exp(-k0_ * u) * s_at_m1_;
  }

  double F_prime(double z) const { return p_(z) - k0_ * F(z); }
  double F_second(double z) const { return pder_(z) - k0_ * F_prime(z); }

  double theta(double z) const {
    double u = z + 1.0, v = z - 1.0;
    if (std::abs(u) < 1e-14 || std::abs(v) < 1e-14) return 0.0;
    if (u < window_) return std::exp(-k0_ * u) * series_m1(u) / dm_(z);
    if (-v < window_) {
      double sign = (inv_.dinf() % 2 == 0) ? 1.0 : -1.0;
      return std::exp(-k0_ * v) * sign * series_p1(v) / dp_(z);
    }
    return F(z) / pc_(z);
  }

  double theta_prime(double z) const {
    double u = z + 1.0, v = z - 1.0;
    if (std::abs(u) < 1e-14) return 2.0;
    if (std::abs(v) < 1e-14) return -2.0;
    if (u < window_) {
      double numer = series_m1(u), dnumer = series_m1_prime(u);
      double den = dm_(z);
      return std::exp(-k0_ * u) *
             ((dnumer - k0_ * numer) / den - numer * dmder_(z) / (den * den));
    }
    if (-v < window_) {
      double sign = (inv_.dinf() % 2 == 0) ? 1.0 : -1.0;
      double numer = series_p1(v), dnumer = series_p1_prime(v);
      double den = dp_(z);
      return std::exp(-k0_ * v) * sign *
             ((dnumer - k0_ * numer) / den - numer * dpder_(z) / (den * den));
    }
    double th = F(z) / pc_(z);
    return (F_prime(z) - th * pcder_(z)) / pc_(z);
  }

  double theta_second(double z) const {
    double u = z + 1.0, v = z - 1.0;
    if (u < window_ || std::abs(u) < 1e-14)
      return window_second(series_m1(u), series_m1_prime(u), series_m1_second(u),
                           std::exp(-k0_ * u), dm_(z), dmder_(z), dmsec_(z));
    if (-v < window_ || std::abs(v) < 1e-14) {
      double sign = (inv_.dinf() % 2 == 0) ? 1.0 : -1.0;
      return sign * window_second(series_p1(v), series_p1_prime(v),
                                  series_p1_second(v), std::exp(-k0_ * v),
                                  dp_(z), dpder_(z), dpsec_(z));
    }
    double th = F(z) / pc_(z);
    double thp = (F_prime(z) - th * pcder_(z)) / pc_(z);
    return (F_second(z) - 2.0 * thp * pcder_(z) - th * pcsec_(z)) / pc_(z);
  }

 private:
  // Second derivative of e^{-k0 w} N(w) / D(z), w the signed endpoint offset.
  double window_second(double n0, double n1, double n2, double es, double d0,
                       double d1, double d2) const {
    double g0 = n0, g1 = n1 - k0_ * n0, g2 = n2 - 2.0 * k0_ * n1 + k0_ * k0_ * n0;
    return es * (g2 / d0 - 2.0 * g1 * d1 / (d0 * d0) +
                 g0 * (2.0 * d1 * d1 / (d0 * d0 * d0) - d2 / (d0 * d0)));
  }
  static constexpr int kTaylorTerms = 40;

  // sum_i taylor_m1_[i-1] * u^i  (this is G(z) e^{k0} / (1+z)^{d0})
  double series_m1(double u) const {
    double r = 0.0;
    for (auto it = taylor_m1_.rbegin(); it != taylor_m1_.rend(); ++it)
      r = (r + *it) * u;
    return r;
  }
  double series_m1_prime(double u) const {
    double r = 0.0;
    int i = static_cast<int>(taylor_m1_.size());
    for (auto it = taylor_m1_.rbegin(); it != taylor_m1_.rend(); ++it, --i)
      r = r * u + *it * i;
    return r;
  }
  // N(w) = sum_{i>=1} c_i w^i; N''(w) = sum_{i>=2} c_i i(i-1) w^{i-2}.
  double series_m1_second(double u) const {
    double r = 0.0;
    int i = static_cast<int>(taylor_m1_.size());
    for (auto it = taylor_m1_.rbegin(); it != taylor_m1_.rend(); ++it, --i) {
      if (i < 2) break;
      r = r * u + *it * i * (i - 1);
    }
    return r;
  }
  double series_p1(double v) const {
    double r = 0.0;
    for (auto it = taylor_p1_.rbegin(); it != taylor_p1_.rend(); ++it)
      r = (r + *it) * v;
    return r;
  }
  double series_p1_prime(double v) const {
    double r = 0.0;
    int i = static_cast<int>(taylor_p1_.size());
    for (auto it = taylor_p1_.rbegin(); it != taylor_p1_.rend(); ++it, --i)
      r = r * v + *it * i;
    return r;
  }
  double series_p1_second(double v) const {
    double r = 0.0;
    int i = static_cast<int>(taylor_p1_.size());
    for (auto it = taylor_p1_.rbegin(); it != taylor_p1_.rend(); ++it, --i) {
      if (i < 2) break;
      r = r * v + *it * i * (i - 1);
    }
    return r;
  }

  InvariantBundle inv_;
  double k0_ = 0.0;
  bool small_k_ = false;
  double window_ = 1e-2;
  DPoly p_, pder_, pc_, pcder_, pcsec_;
  DPoly dm_, dmder_, dmsec_, dp_, dpder_, dpsec_;
  std::vector<DPoly> moments_;          // small-k branch
  std::vector<Polynomial> sderivs_;     // closed-form branch
  double s_at_m1_ = 0.0;
  std::vector<double> taylor_m1_, taylor_p1_;
};

// Requires k0 from solve_k0 (or equally good). Positivity of F is checked on
// the bulk of the interval; the endpoint neighbourhoods carry the k0 residual
// and are judged by verify_profile instead.
inline GQEProfile build_profile(const InvariantBundle& inv, double k0) {
  GQEProfile prof(inv, k0);
  const int n = 10000;
  for (int i = 1; i < n; ++i) {
    double z = -1.0 + 2.0 * i / n;
    if (std::abs(z) > 1.0 - 0.1) continue;
    if (!(prof.F(z) > 0.0))
      throw Error(ErrorKind::HypothesisNotMet,
                  "no GQE profile: F <= 0 at z = " + std::to_string(z));
  }
  return prof;
}

inline GQEProfile build_profile(const InvariantBundle& inv) {
  return build_profile(inv, solve_k0(inv));
}

struct ProfileCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
};

struct ProfileReport {
  std::vector<ProfileCheck> checks;
  bool all_pass = true;
};

// Numerical audit of the GQE profile conditions; failures are reported, not
// thrown.
inline ProfileReport verify_profile(const GQEProfile& prof) {
  ProfileReport rep;
  auto add = [&](const std::string& name, double value, double tol) {
    bool ok = std::abs(value) <= tol;
    rep.checks.push_back({name, ok, value, tol});
    rep.all_pass = rep.all_pass && ok;
  };
  const InvariantBundle& inv = prof.invariants();
  double pc_m1 = to_double(inv.p_c(Rational(-1)));
  double pc_p1 = to_double(inv.p_c(Rational(1)));
  double tol_m1 = 1e-8 * std::max(1.0, pc_m1);
  double tol_p1 = 1e-8 * std::max(1.0, pc_p1);

  add("F(-1) = 0", prof.F(-1.0), tol_m1);
  add("F(1) = 0", prof.F(1.0), tol_p1);
  add("F'(-1) = 2 p_c(-1)", prof.F_prime(-1.0) - 2.0 * pc_m1, tol_m1);
  add("F'(1) = -2 p_c(1)", prof.F_prime(1.0) + 2.0 * pc_p1, tol_p1);
  add("Theta(-1) = 0", prof.theta(-1.0), 1e-8);
  add("Theta(1) = 0", prof.theta(1.0), 1e-8);
  add("Theta'(-1) = 2", prof.theta_prime(-1.0) - 2.0, 1e-8);
  add("Theta'(1) = -2", prof.theta_prime(1.0) + 2.0, 1e-8);

  const int n = 10000;
  double min_f = std::numeric_limits<double>::infinity();
  double max_resid = 0.0, max_p = 1.0;
  for (int i = 1; i < n; ++i) {
    double z = -1.0 + 2.0 * i / n;
    double f = prof.F(z);
    min_f = std::min(min_f, f);
    max_p = std::max(max_p, std::abs(prof.invariants().P(z)));
    double resid = prof.F_prime(z) + prof.k0() * f - inv.P(z);
    max_resid = std::max(max_resid, std::abs(resid));
  }
  rep.checks.push_back({"F > 0 on interior grid", min_f > 0.0, min_f, 0.0});
  rep.all_pass = rep.all_pass && min_f > 0.0;
  add("sup |F' + k0 F - P|", max_resid, 1e-10 * max_p);
  return rep;
}

// Twice-differentiable scalar function of the moment coordinate.
struct ScalarFunction {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  std::function<double(double)> second;
};

// Laplacian of S(z): -[S' F]'/(2 p_c) = -(S'' Theta + S' (P/p_c - k0 Theta))/2
// after dividing through by p_c. Theta and the deflated ratio are regular up
// to the ends, so the endpoint limits -(1+d0) S'(-1) and (1+dinf) S'(1) for
// the coordinate come out of the same expression.
inline std::function<double(double)> laplacian_of(const GQEProfile& prof,
                                                  ScalarFunction S) {
  const InvariantBundle& inv = prof.invariants();
  DPoly rn = DPoly::from(inv.P_deflated);
  DPoly rd = DPoly::from(inv.base_denominator);
  double k0 = prof.k0();
  return [prof, S, rn, rd, k0](double z) {
    double ratio = rn(z) / rd(z);  // P/p_c
    double th = prof.theta(z);     // F/p_c
    return -(S.second(z) * th + S.deriv(z) * (ratio - k0 * th)) / 2.0;
  };
}

struct ScalarCurvature {
  std::function<double(double)> value;
  double average = 0.0;  // beta0 / alpha0
};

namespace detail {

inline std::function<double(double)> curvature_sum_fn(
    const AdmissibleData& data) {
  auto factors = hatted_factors(data);
  std::vector<std::pair<double, double>> terms;  // (2 d s x, x)
  for (const auto& f : factors)
    terms.emplace_back(2.0 * f.d * to_double(f.s) * to_double(f.x),
                       to_double(f.x));
  return [terms](double z) {
    double sum = 0.0;
    for (const auto& [num, x] : terms) sum += num / (1.0 + x * z);
    return sum;
  };
}

}  // namespace detail

// Scalar curvature of the GQE profile: half of (sum 2 d s x/(1+xz) - F''/p_c).
// At the ends the two singular parts cancel; there the identity
// Scal - mean = -Delta(k0 z) supplies the value.
inline ScalarCurvature scalar_curvature(const GQEProfile& prof) {
  const InvariantBundle& inv = prof.invariants();
  ScalarCurvature out;
  out.average = to_double(inv.beta0 / inv.alpha0);
  auto sum_fn = detail::curvature_sum_fn(inv.data);
  DPoly pc = DPoly::from(inv.p_c);
  DPoly pd = DPoly::from(inv.P.derivative());
  DPoly p = DPoly::from(inv.P);
  double k0 = prof.k0();
  double mean = out.average;
  int d0 = inv.d0(), dinf = inv.dinf();
  out.value = [prof, sum_fn, pc, pd, p, k0, mean, d0, dinf](double z) {
    if (z <= -1.0 + 1e-14) return mean + k0 * (1.0 + d0);
    if (z >= 1.0 - 1e-14) return mean - k0 * (1.0 + dinf);
    double fp = p(z) - k0 * prof.F(z);
    double fpp = pd(z) - k0 * fp;
    return 0.5 * (sum_fn(z) - fpp / pc(z));
  };
  return out;
}

// Scalar curvature of an arbitrary admissible profile given by callables;
// defined where p_c does not vanish.
inline ScalarCurvature scalar_curvature(const InvariantBundle& inv,
                                        const ScalarFunction& theta) {
  ScalarCurvature out;
  out.average = to_double(inv.beta0 / inv.alpha0);
  auto sum_fn = detail::curvature_sum_fn(inv.data);
  DPoly pc = DPoly::from(inv.p_c);
  DPoly pc1 = DPoly::from(inv.p_c.derivative());
  DPoly pc2 = DPoly::from(inv.p_c.derivative().derivative());
  out.value = [sum_fn, theta, pc, pc1, pc2](double z) {
    double den = pc(z);
    double fpp =
        theta.second(z) * den + 2.0 * theta.deriv(z) * pc1(z) + theta.value(z) * pc2(z);
    return 0.5 * (sum_fn(z) - fpp / den);
  };
  return out;
}

// Reduced Tian-Zhu invariant, defined for (scaled) anti-canonical classes:
// -2 pi lambda^m exp(-kC/(2 lambda)) vol_S MT(k).
inline double tz_value(const InvariantBundle& inv, const FanoParameters& fp,
                       double k, double vol_s) {
  if (!(vol_s > 0.0))
    throw Error(ErrorKind::InvalidInput, "vol_S must be positive");
  if (!fano_residual(inv, fp).is_zero())
    throw Error(ErrorKind::NotApplicable,
                "class is not proportional to the anti-canonical class");
  Rational lam_pow(1);
  for (int i = 0; i < fp.m; ++i) lam_pow *= fp.lambda;
  double expo = std::exp(-k * to_double(fp.C) / (2.0 * to_double(fp.lambda)));
  constexpr double kPi = 3.14159265358979323846;
  return -2.0 * kPi * to_double(lam_pow) * expo * vol_s * mt(inv, k);
}

}  // namespace admflow
