// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Expected to finish in a few minutes on a laptop.
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "admflow/admflow.hpp"

using namespace admflow;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] %2d. %s%s%s\n", pass ? "PASS" : "FAIL", number,
              name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

AdmissibleData koiso(int l, const Rational& x) {
  return {{{l, Rational(1) / x, x}}, 0, 0};
}

Rational koiso_mt0_closed_form(int l, const Rational& x) {
  Rational total(0);
  for (int i = 1; 2 * i - 1 <= l; ++i) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), l, 2 * i - 1);
    Rational xpow(1);
    for (int p = 0; p < 2 * i - 1; ++p) xpow *= x;
    total += Rational(b) * xpow / Rational(2 * i + 1);
  }
  return Rational(-4) * total;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

// ---------------------------------------------------------------------------

void criterion_1_koiso_obstruction() {
  bool pass = true;
  double worst = 0.0;
  for (int l : {1, 2, 3}) {
    for (Rational x : {Rational(1, 10), Rational(-1, 10), Rational(1, 2),
                       Rational(-1, 2)}) {
      auto inv = build_invariants(koiso(l, x));
      double got = mt(inv, 0.0);
      double want = to_double(koiso_mt0_closed_form(l, x));
      double rel = std::abs(got - want) / std::abs(want);
      worst = std::max(worst, rel);
      pass = pass && rel <= 1e-12;
    }
  }
  double at_half = mt(build_invariants(koiso(1, Rational(1, 2))), 0.0);
  pass = pass && std::abs(at_half - (-2.0 / 3.0)) <= 1e-12;
  report(1, "Koiso obstruction MT(0) matches the closed form", pass,
         "worst rel err " + fmt(worst) + ", MT(0)|_{l=1,x=1/2} = " +
             fmt(at_half));
}

void criterion_2_fano_identity() {
  bool pass = true;
  std::string detail;
  for (Rational x : {Rational(1, 10), Rational(1, 2)}) {
    auto data = koiso(1, x);
    auto inv = build_invariants(data);
    auto fp = fano_parameters(data);
    bool zero = fano_residual(inv, fp).is_zero();
    bool consts = fp.lambda == Rational(1) && fp.C == Rational(0);
    auto root = single_root_check(inv);
    bool root_ok = root.single && root.bracket->lo <= fp.root() &&
                   fp.root() <= root.bracket->hi;
    pass = pass && zero && consts && root_ok;
    detail += " x=" + format_rational(x) + (zero ? ": residual=0" : ": residual!=0");
  }
  report(2, "Fano identity 2 lambda z p_c - C p_c + P = 0, root at C/(2 lambda)",
         pass, detail);
}

void criterion_3_profile_conditions() {
  bool pass = true;
  double worst_f1 = 0, worst_slope = 0, worst_ode = 0;
  for (auto data : {AdmissibleData{{}, 0, 0}, koiso(1, Rational(1, 10)),
                    koiso(1, Rational(1, 2))}) {
    auto inv = build_invariants(data);
    double k0 = solve_k0(inv);
    auto prof = build_profile(inv, k0);
    double pc_m1 = to_double(inv.p_c(Rational(-1)));
    double pc_p1 = to_double(inv.p_c(Rational(1)));

    double f1 = std::abs(prof.F(1.0));
    double sl = std::max(std::abs(prof.F_prime(-1.0) - 2 * pc_m1),
                         std::abs(prof.F_prime(1.0) + 2 * pc_p1));
    worst_f1 = std::max(worst_f1, f1);
    worst_slope = std::max(worst_slope, sl);
    pass = pass && f1 <= 1e-10 && sl <= 1e-8;

    double min_f = 1e300, max_p = 0, resid = 0;
    for (int i = 1; i < 10000; ++i) {
      double z = -1.0 + 2.0 * i / 10000;
      double f = prof.F(z);
      min_f = std::min(min_f, f);
      max_p = std::max(max_p, std::abs(inv.P(z)));
      resid = std::max(resid,
                       std::abs(prof.F_prime(z) + k0 * f - inv.P(z)));
    }
    worst_ode = std::max(worst_ode, resid);
    pass = pass && min_f > 0.0 && resid <= 1e-10 * max_p;
  }
  report(3, "GQE profile conditions (F(1), slopes, positivity, ODE)", pass,
         "|F(1)| " + fmt(worst_f1) + ", slope err " + fmt(worst_slope) +
             ", ODE resid " + fmt(worst_ode));
}

void criterion_4_stability_boundary() {
  bool pass = true;
  double worst = 0.0;
  for (auto [d0, dinf] : {std::pair{0, 0}, {0, 1}, {1, 2}}) {
    auto inv = build_invariants({{}, d0, dinf});
    auto prof = build_profile(inv, solve_k0(inv));
    auto qf = q_function(prof);
    double e1 = std::abs(qf.report.q_boundary_m1 - (-4.0 * (d0 + 1)));
    double e2 = std::abs(qf.report.q_boundary_p1 - (-4.0 * (dinf + 1)));
    worst = std::max({worst, e1, e2});
    pass = pass && e1 <= 1e-4 && e2 <= 1e-4;
  }
  auto rinv = build_invariants({{}, 0, 0});
  auto rqf = q_function(build_profile(rinv, solve_k0(rinv)));
  double closed = 0.0;
  for (int i = 1; i < 4000; ++i) {
    double z = -1.0 + 2.0 * i / 4000;
    closed = std::max(closed, std::abs(rqf.value(z) - (-2 - 2 * z * z)));
  }
  pass = pass && closed <= 1e-10;
  report(4, "Q boundary limits -4(d0+1), -4(dinf+1); round closed form", pass,
         "worst boundary err " + fmt(worst) + ", round sup err " + fmt(closed));
}

void criterion_5_small_x_case1() {
  bool pass = true;
  std::string detail;
  std::vector<Rational> scales{Rational(1, 10), Rational(1, 100),
                               Rational(1, 1000)};
  for (int dinf : {0, 2}) {
    AdmissibleData data{{{1, Rational(2), Rational(1, 2)}}, 0, dinf};
    auto table = small_x_diagnostic(data, scales);
    double limit = to_double(table.case1_constant_m1);
    double prev = 1e300;
    bool mono = true, close = false;
    for (const auto& row : table.rows) {
      double gap = std::abs(to_double(row.w_at_m1) - limit);
      mono = mono && gap < prev;
      prev = gap;
      close = gap <= 0.01 * std::abs(limit);
    }
    pass = pass && mono && close;
    detail += " dinf=" + std::to_string(dinf) + ": limit " + fmt(limit) +
              " gap " + fmt(prev);
  }
  report(5, "small-x Case-1 constant -(1+dinf)(4+dinf)2^{2dinf}", pass, detail);
}

void criterion_6_limit_polynomial() {
  auto lim = limit_P({{}, 0, 1});
  bool poly_ok =
      lim.p == Polynomial({Rational(-1), Rational(-2), Rational(3)});
  bool t0_ok = lim.t0 == Rational(-1, 3);
  bool relation_ok = Rational(2 + 1) * (Rational(1) + lim.t0) == Rational(2);
  report(6, "limit polynomial 3t^2-2t-1 with t0 = -1/3, (2+dinf)(1+t0) = 2",
         poly_ok && t0_ok && relation_ok,
         std::string("P_lim = ") + lim.p.to_string());
}

void criterion_7_flow_stationarity_and_decay() {
  bool pass = true;
  std::string detail;
  for (auto data : {AdmissibleData{{}, 0, 0}, koiso(1, Rational(1, 10))}) {
    auto inv = build_invariants(data);
    auto prof = build_profile(inv, solve_k0(inv));
    FlowConfig fc;
    fc.n = 200;
    fc.cfl = 0.5;
    fc.t_end = 50.0;
    fc.tol_conv = 1e-8;
    ReducedFlow solver(prof, fc);

    // (i) the zero perturbation is stationary
    FlowState fixed = solver.initial_state({InitialSpec::Type::Perturbed, 0.0, 1});
    for (int i = 0; i < 200; ++i) solver.step(fixed);
    bool stationary = fixed.diagnostics.sup_phi <= 1e-12;

    // (ii)-(iv) the perturbed run decays
    FlowState st = solver.initial_state({InitialSpec::Type::Perturbed, 0.1, 1});
    Trajectory traj = solver.run(st);
    bool converged = traj.converged && traj.final_state.time <= 50.0 &&
                     traj.final_state.diagnostics.sup_phi < 1e-8;
    DecayFit fit = decay_fit(traj);
    bool decay_ok = fit.defined && fit.rate < 0.0 && fit.r_squared > 0.99;
    double worst_bnd = 0.0, min_theta = 1e300;
    for (const auto& p : traj.points) {
      worst_bnd = std::max({worst_bnd, p.bnd_err_m1, p.bnd_err_p1});
      min_theta = std::min(min_theta, p.min_theta);
    }
    bool guard_ok = worst_bnd <= 1e-6 && min_theta > 0.0;
    pass = pass && stationary && converged && decay_ok && guard_ok;
    detail += (data.factors.empty() ? std::string(" round:") : " koiso:");
    detail += " t_conv " + fmt(traj.final_state.time) + " rate " +
              fmt(fit.rate) + " r2 " + fmt(fit.r_squared) + " bnd " +
              fmt(worst_bnd);
  }
  report(7, "flow stationarity, convergence, decay fit, guards", pass, detail);
}

void criterion_8_scheme_order() {
  auto inv = build_invariants({{}, 0, 0});
  auto prof = build_profile(inv, solve_k0(inv));
  auto run_to = [&](int n) {
    FlowConfig fc;
    fc.n = n;
    fc.cfl = 0.5;
    fc.t_end = 1.0;
    fc.tol_conv = 1e-30;
    ReducedFlow solver(prof, fc);
    FlowState st = solver.initial_state({InitialSpec::Type::Perturbed, 0.1, 1});
    return solver.run(st).final_state.theta;
  };
  auto ref = run_to(1600);
  std::vector<double> errs;
  for (int n : {100, 200, 400}) {
    auto theta = run_to(n);
    int stride = 1600 / n;
    double e = 0.0;
    for (int i = 1; i < n; ++i)
      e = std::max(e, std::abs(theta[i] - ref[i * stride]));
    errs.push_back(e);
  }
  double r1 = errs[0] / errs[1], r2 = errs[1] / errs[2];
  bool pass = r1 >= 3.0 && r1 <= 5.0 && r2 >= 3.0 && r2 <= 5.0;
  report(8, "scheme order: error ratio per doubling within [3,5]", pass,
         "ratios " + fmt(r1) + ", " + fmt(r2));
}

void criterion_9_form_equivalence() {
  auto inv = build_invariants(koiso(1, Rational(1, 10)));
  auto prof = build_profile(inv, solve_k0(inv));
  FlowConfig fc;
  fc.n = 400;
  ReducedFlow solver(prof, fc);
  FlowState st = solver.initial_state({InitialSpec::Type::Perturbed, 0.1, 1});
  auto lhs = solver.phi_form_rhs(st);
  auto rate = solver.theta_rate(st);
  double worst = 0.0, scale = 0.0;
  for (int i = 1; i < fc.n; ++i) {
    worst = std::max(worst, std::abs(lhs[i] - 2.0 * rate[i]));
    scale = std::max(scale, std::abs(lhs[i]));
  }
  report(9, "phi-form RHS and 2(Theta V' - Theta' V) agree", worst <= 1e-6 * scale,
         "sup diff " + fmt(worst) + " vs tol " + fmt(1e-6 * scale));
}

void criterion_10_tz_relation() {
  auto data = koiso(1, Rational(1, 2));
  auto inv = build_invariants(data);
  auto fp = fano_parameters(data);
  double pi = std::acos(-1.0);
  double at0 = tz_value(inv, fp, 0.0, 1.0);
  double expect = 4.0 * pi / 3.0;
  double at_k0 = tz_value(inv, fp, solve_k0(inv), 1.0);
  bool pass = std::abs(at0 - expect) <= 1e-12 * expect && std::abs(at_k0) <= 1e-12;
  report(10, "Tian-Zhu values: tz(0) = 4 pi/3, tz(k0) = 0", pass,
         "tz(0) err " + fmt(std::abs(at0 - expect)) + ", |tz(k0)| " +
             fmt(std::abs(at_k0)));
}

}  // namespace

int main() {
  criterion_1_koiso_obstruction();
  criterion_2_fano_identity();
  criterion_3_profile_conditions();
  criterion_4_stability_boundary();
  criterion_5_small_x_case1();
  criterion_6_limit_polynomial();
  criterion_7_flow_stationarity_and_decay();
  criterion_8_scheme_order();
  criterion_9_form_equivalence();
  criterion_10_tz_relation();
  std::printf("%d/10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
