#pragma once

#include <optional>
#include <string>
#include <vector>

#include "admflow/errors.hpp"
#include "admflow/polynomial.hpp"
#include "admflow/rational.hpp"
#include "admflow/roots.hpp"

namespace admflow {

// One factor of the base: complex dimension d, scalar-curvature constant s
// (Scal(+-g) = +-d*s), class parameter x with 0 < |x| < 1.
struct BaseFactor {
  int d = 0;
  Rational s;
  Rational x;
};

// Combinatorial description of the bundle and its admissible class.
// The fiber-end data is implied, not stored: x = +-1 and s = d0+1 resp.
// -(dinf+1), fixed by the fiberwise Fubini-Study normalization.
struct AdmissibleData {
  std::vector<BaseFactor> factors;
  int d0 = 0;
  int dinf = 0;

  int m() const {
    int sum = 1 + d0 + dinf;
    for (const auto& f : factors) sum += f.d;
    return sum;
  }
};

// Full factor list over the hatted index set (base factors plus fiber ends
// with positive dimension).
inline std::vector<BaseFactor> hatted_factors(const AdmissibleData& data) {
  std::vector<BaseFactor> all = data.factors;
  if (data.d0 > 0)
    all.push_back({data.d0, Rational(data.d0 + 1), Rational(1)});
  if (data.dinf > 0)
    all.push_back({data.dinf, Rational(-(data.dinf + 1)), Rational(-1)});
  return all;
}

// Non-throwing validation; empty result means the data is admissible.
// An empty base list is allowed (fiber over a point).
inline std::vector<std::string> validate(const AdmissibleData& data) {
  std::vector<std::string> issues;
  if (data.d0 < 0) issues.push_back("d0 must be nonnegative");
  if (data.dinf < 0) issues.push_back("dinf must be nonnegative");
  for (std::size_t i = 0; i < data.factors.size(); ++i) {
    const auto& f = data.factors[i];
    std::string where = "factors[" + std::to_string(i) + "]";
    if (f.d <= 0) issues.push_back(where + ".d must be a positive integer");
    if (f.x == 0)
      issues.push_back(where + ".x = 0: class is not Kaehler");
    else if (abs(f.x) >= 1)
      issues.push_back(where + ".x = " + format_rational(f.x) +
                       ": |x| >= 1, class is not Kaehler");
  }
  return issues;
}

inline void ensure_valid(const AdmissibleData& data) {
  auto issues = validate(data);
  if (issues.empty()) return;
  std::string msg = "invalid admissible data:";
  for (const auto& s : issues) msg += "\n  " + s;
  throw Error(ErrorKind::InvalidInput, msg);
}

// p_c(z) = prod_{a in hat A} (1+x_a z)^{d_a}, fiber factors included.
inline Polynomial build_pc(const AdmissibleData& data) {
  ensure_valid(data);
  Polynomial pc = Polynomial::constant(Rational(1));
  for (const auto& f : hatted_factors(data))
    pc = pc * Polynomial::linear(Rational(1), f.x).pow(f.d);
  return pc;
}

// Exact class invariants. P carries the forced boundary vanishing of order
// d0 at -1 and dinf at +1, so the fiber factors divide it exactly and
// P/p_c = P_deflated/base_denominator is finite on [-1,1].
struct InvariantBundle {
  AdmissibleData data;
  Polynomial p_c;
  Polynomial P;
  Rational alpha0;
  Rational beta0;
  Polynomial P_deflated;
  Polynomial base_denominator;  // prod over the base only

  int d0() const { return data.d0; }
  int dinf() const { return data.dinf; }
};

inline InvariantBundle build_invariants(const AdmissibleData& data) {
  ensure_valid(data);
  InvariantBundle inv;
  inv.data = data;
  inv.p_c = build_pc(data);

  inv.base_denominator = Polynomial::constant(Rational(1));
  for (const auto& f : data.factors)
    inv.base_denominator =
        inv.base_denominator * Polynomial::linear(Rational(1), f.x).pow(f.d);

  // sum_a d_a s_a x_a / (1+x_a s) * p_c(s) is a polynomial because p_c
  // contains (1+x_a s)^{d_a}.
  Polynomial curvature_sum;
  for (const auto& f : hatted_factors(data)) {
    Polynomial q = inv.p_c.exact_quotient(Polynomial::linear(Rational(1), f.x));
    curvature_sum = curvature_sum + (Rational(f.d) * f.s * f.x) * q;
  }

  inv.alpha0 = inv.p_c.definite_integral(Rational(-1), Rational(1));
  inv.beta0 = inv.p_c(Rational(1)) + inv.p_c(Rational(-1)) +
              curvature_sum.definite_integral(Rational(-1), Rational(1));

  Polynomial integrand = curvature_sum - (inv.beta0 / inv.alpha0) * inv.p_c;
  Polynomial anti = integrand.antiderivative();
  inv.P = Rational(2) * (anti - Polynomial::constant(anti(Rational(-1)))) +
          Polynomial::constant(2 * inv.p_c(Rational(-1)));

  if (inv.P(Rational(-1)) != 2 * inv.p_c(Rational(-1)))
    throw Error(ErrorKind::InvariantViolation,
                "P(-1) != 2 p_c(-1) after exact construction");

  Polynomial fiber = Polynomial::linear(Rational(1), Rational(1)).pow(data.d0) *
                     Polynomial::linear(Rational(1), Rational(-1)).pow(data.dinf);
  inv.P_deflated = inv.P.exact_quotient(fiber);  // throws if not remainder-free
  return inv;
}

// Structural facts about P at the interval ends (signs and exact vanishing
// orders). Failure of any clause indicates an arithmetic bug, never bad input.
struct BoundaryClause {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct BoundaryReport {
  std::vector<BoundaryClause> clauses;
  bool all_pass = true;
};

inline BoundaryReport boundary_structure_check(const InvariantBundle& inv) {
  BoundaryReport report;
  auto add = [&](const std::string& name, bool pass, const std::string& det) {
    report.clauses.push_back({name, pass, det});
    report.all_pass = report.all_pass && pass;
  };

  std::vector<Polynomial> derivs{inv.P};
  int dmax = std::max(inv.d0(), inv.dinf());
  for (int j = 0; j < dmax; ++j) derivs.push_back(derivs.back().derivative());

  if (inv.d0() == 0) {
    Rational v = inv.P(Rational(-1));
    add("P(-1) > 0", v > 0, "P(-1) = " + format_rational(v));
  } else {
    bool vanish = true;
    for (int j = 0; j < inv.d0(); ++j)
      vanish = vanish && derivs[j](Rational(-1)) == 0;
    add("P^(j)(-1) = 0 for j < d0", vanish, "");
    Rational v = derivs[inv.d0()](Rational(-1));
    add("P^(d0)(-1) > 0", v > 0,
        "P^(" + std::to_string(inv.d0()) + ")(-1) = " + format_rational(v));
  }

  if (inv.dinf() == 0) {
    Rational v = inv.P(Rational(1));
    add("P(1) < 0", v < 0, "P(1) = " + format_rational(v));
  } else {
    bool vanish = true;
    for (int j = 0; j < inv.dinf(); ++j)
      vanish = vanish && derivs[j](Rational(1)) == 0;
    add("P^(j)(1) = 0 for j < dinf", vanish, "");
    Rational v = derivs[inv.dinf()](Rational(1));
    int want = (inv.dinf() % 2 == 0) ? -1 : 1;  // sign (-1)^{dinf+1}
    add("sign P^(dinf)(1) = (-1)^{dinf+1}", sgn(v) == want,
        "P^(" + std::to_string(inv.dinf()) + ")(1) = " + format_rational(v));
  }

  if (!report.all_pass) {
    std::string msg = "boundary structure check failed:";
    for (const auto& c : report.clauses)
      if (!c.pass) msg += "\n  " + c.name + " (" + c.detail + ")";
    throw Error(ErrorKind::InvariantViolation, msg);
  }
  return report;
}

struct SingleRootResult {
  bool single = false;
  int count = 0;
  std::optional<RootBracket> bracket;
};

inline SingleRootResult single_root_check(const InvariantBundle& inv) {
  SingleRootResult res;
  auto brackets = isolate_real_roots(inv.P, Rational(-1), Rational(1));
  res.count = static_cast<int>(brackets.size());
  res.single = res.count == 1;
  if (res.single) res.bracket = brackets.front();
  return res;
}

// Normalization constants of a (rescaled) anti-canonical class.
struct FanoParameters {
  Rational lambda;
  Rational C;
  int m = 0;

  Rational root() const { return C / (2 * lambda); }  // the single root of P
};

inline FanoParameters fano_parameters(const AdmissibleData& data) {
  FanoParameters fp;
  fp.lambda = rational_from_long(data.d0 + data.dinf + 2, 2);
  fp.C = Rational(data.d0 - data.dinf);
  fp.m = data.m();
  return fp;
}

// 2*lambda*z*p_c - C*p_c + P; identically zero exactly when the class is the
// scaled anti-canonical one. A nonzero residual is a valid answer.
inline Polynomial fano_residual(const InvariantBundle& inv,
                                const FanoParameters& fp) {
  Polynomial z = Polynomial::linear(Rational(0), Rational(1));
  return (2 * fp.lambda) * (z * inv.p_c) - fp.C * inv.p_c + inv.P;
}

inline bool is_anticanonical(const InvariantBundle& inv) {
  return fano_residual(inv, fano_parameters(inv.data)).is_zero();
}

}  // namespace admflow
