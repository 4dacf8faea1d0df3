#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "admflow/admissible.hpp"
#include "admflow/errors.hpp"
#include "admflow/gqe.hpp"
#include "admflow/polynomial.hpp"
#include "admflow/roots.hpp"

namespace admflow {

// Diagnostics for the decay condition Q < 0 on [-1,1], where
// Q = Theta_inf (P/p_c)' - (P/p_c) Theta_inf'.
struct StabilityReport {
  double q_min = 0.0;       // minimum of Q over the sampled closed interval
  double q_max = 0.0;       // maximum (the value that decides the condition)
  double q_boundary_m1 = 0.0;
  double q_boundary_p1 = 0.0;
  bool condition_holds = false;
  double xi_eta_min = 0.0;  // min of xi^2 - eta xi' over the interior grid
  bool log_concavity_holds = false;
};

struct QFunction {
  std::function<double(double)> value;        // smooth-ratio route
  std::function<double(double)> value_xi_eta; // xi/eta route
  StabilityReport report;
};

// (log|P|)'' < 0 away from the zero set, decided by the exact sign of
// P''P - (P')^2 at rational sample points.
inline bool log_concavity_check(const InvariantBundle& inv) {
  Polynomial w =
      inv.P.derivative().derivative() * inv.P - inv.P.derivative() * inv.P.derivative();
  const int n = 2000;
  for (int j = 1; j < n; ++j) {
    Rational t = Rational(-1) + Rational(2 * j, n);
    if (!(w(t) < 0)) return false;
  }
  return true;
}

namespace detail {

// Neville extrapolation to x=0 from samples at h, h/2, h/4.
inline double extrapolate_to_zero(double h, double f1, double f2, double f3) {
  double x1 = h, x2 = h / 2, x3 = h / 4;
  double p12 = (x1 * f2 - x2 * f1) / (x1 - x2);
  double p23 = (x2 * f3 - x3 * f2) / (x2 - x3);
  return (x1 * p23 - x3 * p12) / (x1 - x3);
}

}  // namespace detail

// Evaluates Q two independent ways and cross-checks them:
//   (a) Theta R' - R Theta' with R = P_deflated/base_denominator,
//   (b) -(xi^2 - eta xi') e^{-2 k0 z}/p_c^2 with xi = P e^{k0 t}, eta its
//       primitive, which collapses to [F(P'+k0 P) - P^2]/p_c^2.
// Endpoint values come from Richardson-extrapolated limits.
inline QFunction q_function(const GQEProfile& prof) {
  const InvariantBundle& inv = prof.invariants();
  QFunction out;

  Polynomial rn = inv.P_deflated;
  Polynomial rd = inv.base_denominator;
  Polynomial rpn = rn.derivative() * rd - rn * rd.derivative();  // R' numerator
  DPoly RN = DPoly::from(rn), RD = DPoly::from(rd), RPN = DPoly::from(rpn);
  out.value = [prof, RN, RD, RPN](double z) {
    double d = RD(z);
    double r = RN(z) / d;
    double rp = RPN(z) / (d * d);
    return prof.theta(z) * rp - r * prof.theta_prime(z);
  };

  DPoly P = DPoly::from(inv.P), PD = DPoly::from(inv.P.derivative()),
        PC = DPoly::from(inv.p_c);
  double k0 = prof.k0();
  out.value_xi_eta = [prof, P, PD, PC, RN, RD, k0](double z) {
    double r = RN(z) / RD(z);  // P/p_c, deflated
    double pk = PD(z) + k0 * P(z);
    return prof.theta(z) * pk / PC(z) - r * r;
  };

  StabilityReport& rep = out.report;
  const int n = 4000;
  double qmin = std::numeric_limits<double>::infinity();
  double qmax = -qmin;
  double ximin = std::numeric_limits<double>::infinity();
  double worst_rel = 0.0, scale = 0.0;
  for (int i = 1; i < n; ++i) {
    double z = -1.0 + 2.0 * i / n;
    double qa = out.value(z);
    double qb = out.value_xi_eta(z);
    worst_rel = std::max(worst_rel, std::abs(qa - qb));
    scale = std::max(scale, std::abs(qa));
    qmin = std::min(qmin, qa);
    qmax = std::max(qmax, qa);
    double xi_eta = -qa * std::exp(2.0 * k0 * z) * PC(z) * PC(z);
    ximin = std::min(ximin, xi_eta);
  }
  if (worst_rel > 1e-6 * std::max(scale, 1e-30))
    throw Error(ErrorKind::NumericFailure,
                "Q cross-check: smooth-ratio and xi/eta routes disagree");

  const double h = 1e-3;
  rep.q_boundary_m1 = detail::extrapolate_to_zero(
      h, out.value(-1.0 + h), out.value(-1.0 + h / 2), out.value(-1.0 + h / 4));
  rep.q_boundary_p1 = detail::extrapolate_to_zero(
      h, out.value(1.0 - h), out.value(1.0 - h / 2), out.value(1.0 - h / 4));
  qmin = std::min({qmin, rep.q_boundary_m1, rep.q_boundary_p1});
  qmax = std::max({qmax, rep.q_boundary_m1, rep.q_boundary_p1});

  rep.q_min = qmin;
  rep.q_max = qmax;
  rep.condition_holds = qmax < 0.0;
  rep.xi_eta_min = ximin;
  rep.log_concavity_holds =
      single_root_check(inv).single && log_concavity_check(inv);
  return out;
}

// The x_a -> 0 limit of P, base terms dropped and p_c reduced to the fiber
// factors; it always factors as -(2+d0+dinf)(t-t0)(1+t)^{d0}(1-t)^{dinf}.
struct LimitP {
  Polynomial p;
  Rational t0;
  RootBracket bracket;

  double t0_value() const { return to_double(t0); }
};

inline LimitP limit_P(const AdmissibleData& data) {
  ensure_valid(data);
  AdmissibleData fiber_only{{}, data.d0, data.dinf};
  InvariantBundle inv = build_invariants(fiber_only);

  LimitP out;
  out.p = inv.P;
  Polynomial lin = inv.P_deflated;
  Rational lead = Rational(-(2 + data.d0 + data.dinf));
  if (lin.degree() != 1 || lin.coefficient(1) != lead)
    throw Error(ErrorKind::InvariantViolation,
                "limit polynomial does not factor as "
                "-(2+d0+dinf)(t-t0)(1+t)^d0 (1-t)^dinf");
  out.t0 = -lin.coefficient(0) / lin.coefficient(1);
  if (!(Rational(-1) < out.t0 && out.t0 < Rational(1)))
    throw Error(ErrorKind::InvariantViolation, "t0 escaped (-1,1)");

  auto brackets = isolate_real_roots(out.p, Rational(-1), Rational(1));
  if (brackets.size() != 1 || !(brackets[0].lo <= out.t0) ||
      !(out.t0 <= brackets[0].hi))
    throw Error(ErrorKind::InvariantViolation,
                "root isolation disagrees with the exact factorization");
  out.bracket = brackets[0];
  return out;
}

// One row per scale: the exact values of P''P-(P')^2 at the interval ends for
// the rescaled data x_a -> eps x_a, and the coefficient distance to lim P.
struct SmallXRow {
  Rational scale;
  Rational w_at_m1;
  Rational w_at_p1;
  Rational coeff_distance;
};

struct SmallXTable {
  std::vector<SmallXRow> rows;
  LimitP limit;
  Rational case1_constant_m1;  // -(1+dinf)(4+dinf) 2^{2 dinf}, valid for d0=0
};

inline SmallXTable small_x_diagnostic(const AdmissibleData& data,
                                      const std::vector<Rational>& scales) {
  ensure_valid(data);
  SmallXTable table;
  table.limit = limit_P(data);
  {
    long dinf = data.dinf;
    Rational pow2(1);
    for (long i = 0; i < 2 * dinf; ++i) pow2 *= 2;
    table.case1_constant_m1 = Rational(-(1 + dinf) * (4 + dinf)) * pow2;
  }
  for (const auto& eps : scales) {
    AdmissibleData scaled = data;
    for (auto& f : scaled.factors) f.x *= eps;
    InvariantBundle inv = build_invariants(scaled);
    Polynomial w = inv.P.derivative().derivative() * inv.P -
                   inv.P.derivative() * inv.P.derivative();
    Rational dist(0);
    int dmax = std::max(inv.P.degree(), table.limit.p.degree());
    for (int i = 0; i <= dmax; ++i) {
      Rational d = abs(inv.P.coefficient(i) - table.limit.p.coefficient(i));
      if (d > dist) dist = d;
    }
    table.rows.push_back({eps, w(Rational(-1)), w(Rational(1)), dist});
  }
  return table;
}

}  // namespace admflow
