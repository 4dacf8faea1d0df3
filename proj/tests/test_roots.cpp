#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "admflow/roots.hpp"

using namespace admflow;

namespace {

// fine-grid sign-change count, the independent oracle
int grid_sign_changes(const Polynomial& p, double a, double b, int samples) {
  int count = 0;
  double last = 0.0;
  for (int i = 0; i <= samples; ++i) {
    double v = p(a + (b - a) * i / samples);
    if (v == 0.0) continue;
    if (last != 0.0 && (v > 0) != (last > 0)) ++count;
    last = v;
  }
  return count;
}

}  // namespace

TEST_CASE("basic root isolation") {
  Polynomial p({Rational(0), Rational(-2), Rational(-1)});  // -t(t+2)
  auto br = isolate_real_roots(p, Rational(-1), Rational(1));
  REQUIRE(br.size() == 1);
  CHECK(br[0].lo <= 0);
  CHECK(br[0].hi >= 0);
  CHECK(!br[0].maybe_multiple);

  Polynomial q({Rational(1), Rational(0), Rational(-1)});  // 1 - t^2
  CHECK(isolate_real_roots(q, Rational(-1), Rational(1)).empty());

  // 3t^2 - 2t - 1 has the single root -1/3 in (-1,1); quadratic formula:
  // (2 - sqrt(4+12))/6 = -1/3
  Polynomial r({Rational(-1), Rational(-2), Rational(3)});
  auto brs = isolate_real_roots(r, Rational(-1), Rational(1));
  REQUIRE(brs.size() == 1);
  CHECK(brs[0].lo <= Rational(-1, 3));
  CHECK(brs[0].hi >= Rational(-1, 3));
  CHECK(brs[0].width() <= Rational(1, 1000000000000L));

  CHECK_THROWS_AS(isolate_real_roots(Polynomial::zero(), Rational(-1), Rational(1)),
                  Error);
}

TEST_CASE("multiplicity hint") {
  Polynomial simple = Polynomial::linear(Rational(1, 2), Rational(1));
  Polynomial dbl = Polynomial::linear(Rational(-1, 3), Rational(1));
  Polynomial p = dbl * dbl * simple;
  auto br = isolate_real_roots(p, Rational(-1), Rational(1));
  REQUIRE(br.size() == 2);
  CHECK(br[0].maybe_multiple == false);  // root -1/2
  CHECK(br[1].maybe_multiple == true);   // double root 1/3
}

TEST_CASE("count matches fine-grid oracle on random polynomials") {
  std::mt19937 rng(314);
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(2, 11);
  std::uniform_int_distribution<int> nroots(0, 8);
  for (int iter = 0; iter < 40; ++iter) {
    // build from well-separated rational roots
    int k = nroots(rng);
    std::set<Rational> roots;
    while (static_cast<int>(roots.size()) < k) {
      Rational r = rational_from_long(num(rng), den(rng));
      bool separated = abs(r) < 1;
      for (const auto& other : roots)
        separated = separated && abs(r - other) > Rational(1, 50);
      if (separated) roots.insert(r);
    }
    Polynomial p = Polynomial::constant(Rational(2));
    for (const auto& r : roots)
      p = p * Polynomial::linear(-r, Rational(1));

    int exact = count_real_roots(p, Rational(-1), Rational(1));
    CHECK(exact == static_cast<int>(roots.size()));
    CHECK(exact == grid_sign_changes(p, -1.0, 1.0, 10000));

    auto brackets = isolate_real_roots(p, Rational(-1), Rational(1));
    REQUIRE(brackets.size() == roots.size());
    auto it = roots.begin();
    for (const auto& b : brackets) {
      CHECK(b.lo <= *it);
      CHECK(b.hi >= *it);
      ++it;
    }
  }
}

TEST_CASE("open interval excludes endpoint roots") {
  Polynomial p = Polynomial::linear(Rational(1), Rational(1)) *
                 Polynomial::linear(Rational(-1), Rational(1)) *
                 Polynomial::linear(Rational(0), Rational(1));
  // roots at -1, 0, 1; only 0 lies in the open interval
  auto br = isolate_real_roots(p, Rational(-1), Rational(1));
  REQUIRE(br.size() == 1);
  CHECK(br[0].lo <= 0);
  CHECK(br[0].hi >= 0);
}
