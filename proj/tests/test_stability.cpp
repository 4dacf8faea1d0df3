#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "admflow/stability.hpp"

using namespace admflow;

namespace {

GQEProfile profile_for(const AdmissibleData& data) {
  auto inv = build_invariants(data);
  return build_profile(inv, solve_k0(inv));
}

}  // namespace

TEST_CASE("round case Q in closed form") {
  auto prof = profile_for({{}, 0, 0});
  auto qf = q_function(prof);
  for (int i = 1; i < 400; ++i) {
    double z = -1.0 + 2.0 * i / 400;
    CHECK_THAT(qf.value(z), Catch::Matchers::WithinAbs(-2 - 2 * z * z, 1e-10));
    // xi/eta route: xi = -2t, eta = 1-t^2, xi^2 - eta xi' = 2 + 2t^2, so the
    // same closed form must come out of the second branch
    CHECK_THAT(qf.value_xi_eta(z),
               Catch::Matchers::WithinAbs(-2 - 2 * z * z, 1e-10));
  }
  CHECK_THAT(qf.report.q_boundary_m1, Catch::Matchers::WithinAbs(-4.0, 1e-4));
  CHECK_THAT(qf.report.q_boundary_p1, Catch::Matchers::WithinAbs(-4.0, 1e-4));
  CHECK(qf.report.condition_holds);
  CHECK_THAT(qf.report.q_min, Catch::Matchers::WithinAbs(-4.0, 1e-6));
  CHECK_THAT(qf.report.q_max, Catch::Matchers::WithinAbs(-2.0, 1e-6));
  CHECK_THAT(qf.report.xi_eta_min, Catch::Matchers::WithinAbs(2.0, 1e-6));
  CHECK(qf.report.log_concavity_holds);
}

TEST_CASE("Q boundary limits match -4(d+1)") {
  for (auto [d0, dinf] : {std::pair{0, 0}, {0, 1}, {1, 2}}) {
    auto prof = profile_for({{}, d0, dinf});
    auto qf = q_function(prof);
    INFO("(d0,dinf)=(" << d0 << "," << dinf << ")");
    CHECK_THAT(qf.report.q_boundary_m1,
               Catch::Matchers::WithinAbs(-4.0 * (d0 + 1), 1e-4));
    CHECK_THAT(qf.report.q_boundary_p1,
               Catch::Matchers::WithinAbs(-4.0 * (dinf + 1), 1e-4));
  }
}

TEST_CASE("branch agreement") {
  for (auto data :
       {AdmissibleData{{{1, Rational(2), Rational(1, 2)}}, 0, 0},
        AdmissibleData{{{1, Rational(10), Rational(1, 10)}}, 0, 0},
        AdmissibleData{{}, 0, 1}, AdmissibleData{{}, 1, 2}}) {
    auto prof = profile_for(data);
    auto qf = q_function(prof);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      double z = -1.0 + 1e-3 + (2.0 - 2e-3) * i / 2000;
      double qa = qf.value(z);
      worst = std::max(worst, std::abs(qa - qf.value_xi_eta(z)));
      scale = std::max(scale, std::abs(qa));
    }
    CHECK(worst <= 1e-8 * scale);
  }
}

TEST_CASE("log concavity") {
  CHECK(log_concavity_check(build_invariants({{}, 0, 0})));      // P = -2t
  // anti-canonical: P = (C-2 lambda t) p_c, a product of linear factors
  CHECK(log_concavity_check(
      build_invariants({{{1, Rational(2), Rational(1, 2)}}, 0, 0})));
  {
    auto inv = build_invariants({{}, 0, 1});  // P = 3t^2-2t-1
    // P''P - (P')^2 expands to -18t^2 + 12t - 10, negative everywhere
    Polynomial w = inv.P.derivative().derivative() * inv.P -
                   inv.P.derivative() * inv.P.derivative();
    CHECK(w == Polynomial({Rational(-10), Rational(12), Rational(-18)}));
    CHECK(log_concavity_check(inv));
  }
}

TEST_CASE("log concavity with single root implies the decay condition") {
  std::mt19937 rng(271);
  std::uniform_int_distribution<long> num(-4, 4), den(2, 6);
  std::uniform_int_distribution<int> dims(0, 2);
  int tested = 0;
  for (int iter = 0; iter < 60 && tested < 12; ++iter) {
    long n = num(rng);
    if (n == 0) continue;
    AdmissibleData data{{{1, rational_from_long(num(rng), den(rng)),
                          rational_from_long(n, 24)}},
                        dims(rng), dims(rng)};
    auto inv = build_invariants(data);
    if (!single_root_check(inv).single) continue;
    if (!log_concavity_check(inv)) continue;
    auto prof = build_profile(inv, solve_k0(inv));
    auto qf = q_function(prof);
    INFO("data x=" << format_rational(data.factors[0].x)
                   << " s=" << format_rational(data.factors[0].s)
                   << " d0=" << data.d0 << " dinf=" << data.dinf);
    CHECK(qf.report.condition_holds);
    CHECK(qf.report.log_concavity_holds);
    ++tested;
  }
  CHECK(tested >= 12);
}

TEST_CASE("xi^2 - eta xi' is positive at the root of P") {
  for (auto data : {AdmissibleData{{{1, Rational(2), Rational(1, 2)}}, 0, 0},
                    AdmissibleData{{}, 0, 1}}) {
    auto inv = build_invariants(data);
    auto root = single_root_check(inv);
    REQUIRE(root.single);
    // exact sign pattern at the bracket: P changes + -> - and P' < 0, so
    // xi(t0) = 0, eta(t0) > 0, xi'(t0) < 0 give positivity
    CHECK(inv.P(root.bracket->lo) > 0);
    CHECK(inv.P(root.bracket->hi) < 0);
    CHECK(inv.P.derivative()(root.bracket->lo) < 0);
    CHECK(inv.P.derivative()(root.bracket->hi) < 0);
    auto prof = build_profile(inv, solve_k0(inv));
    double t0 = root.bracket->midpoint();
    CHECK(prof.F(t0) > 0);  // eta = F e^{k0 t} > 0
    auto qf = q_function(prof);
    CHECK(qf.report.xi_eta_min > 0);
  }
}

TEST_CASE("limit polynomial") {
  {
    auto lim = limit_P({{}, 0, 0});
    CHECK(lim.p == Polynomial({Rational(0), Rational(-2)}));
    CHECK(lim.t0 == Rational(0));
  }
  {
    // the same limit is produced regardless of the base factors
    auto lim = limit_P({{{3, Rational(7), Rational(1, 5)}}, 0, 1});
    CHECK(lim.p == Polynomial({Rational(-1), Rational(-2), Rational(3)}));
    CHECK(lim.t0 == Rational(-1, 3));
    CHECK(Rational(2 + 1) * (Rational(1) + lim.t0) == Rational(2));  // Case 1
    CHECK(lim.bracket.lo <= lim.t0);
    CHECK(lim.bracket.hi >= lim.t0);
  }
}

TEST_CASE("small-x diagnostic") {
  std::vector<Rational> scales{Rational(1, 10), Rational(1, 100),
                               Rational(1, 1000)};
  {
    auto table = small_x_diagnostic(
        {{{1, Rational(2), Rational(1, 2)}}, 0, 2}, scales);
    CHECK(table.case1_constant_m1 == Rational(-288));
    double limit = -288.0;
    double prev = std::abs(to_double(table.rows[0].w_at_m1) - limit);
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
      double cur = std::abs(to_double(table.rows[i].w_at_m1) - limit);
      CHECK(cur < prev);
      prev = cur;
    }
    CHECK(prev <= 0.01 * std::abs(limit));
    // coefficient distance to lim P decreases monotonically
    CHECK(table.rows[0].coeff_distance > table.rows[1].coeff_distance);
    CHECK(table.rows[1].coeff_distance > table.rows[2].coeff_distance);
  }
  {
    auto table = small_x_diagnostic(
        {{{1, Rational(2), Rational(1, 2)}}, 0, 0}, scales);
    CHECK(table.case1_constant_m1 == Rational(-4));
    CHECK_THAT(to_double(table.rows[2].w_at_m1),
               Catch::Matchers::WithinAbs(-4.0, 0.04));
  }
}
