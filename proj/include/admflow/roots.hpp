#pragma once

#include <utility>
#include <vector>

#include "admflow/errors.hpp"
#include "admflow/polynomial.hpp"
#include "admflow/rational.hpp"

namespace admflow {

// Isolating bracket for one real root. The root lies in [lo, hi] and no other
// root of the polynomial does.
struct RootBracket {
  Rational lo;
  Rational hi;
  bool maybe_multiple = false;

  double midpoint() const { return to_double((lo + hi) / 2); }
  Rational width() const { return hi - lo; }
};

namespace detail {

inline int sign_of(const Rational& q) { return sgn(q); }

// Sturm chain of a squarefree polynomial.
inline std::vector<Polynomial> sturm_sequence(const Polynomial& p) {
  std::vector<Polynomial> seq;
  seq.push_back(p);
  Polynomial d = p.derivative();
  if (d.is_zero()) return seq;
  seq.push_back(d);
  while (true) {
    const Polynomial& a = seq[seq.size() - 2];
    const Polynomial& b = seq.back();
    Polynomial r = a.divrem(b).second;
    if (r.is_zero()) break;
    seq.push_back(-r);
  }
  return seq;
}

inline int sign_variations(const std::vector<Polynomial>& seq,
                           const Rational& x) {
  int var = 0;
  int last = 0;
  for (const auto& p : seq) {
    int s = sign_of(p(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++var;
    last = s;
  }
  return var;
}

}  // namespace detail

// Exact count of distinct real roots in the open interval (a, b).
inline int count_real_roots(const Polynomial& p, const Rational& a,
                            const Rational& b) {
  if (p.is_zero())
    throw Error(ErrorKind::InvalidInput,
                "root counting requires a nonzero polynomial");
  if (p.degree() == 0 || !(a < b)) return 0;
  Polynomial sf = p.exact_quotient(poly_gcd(p, p.derivative()));
  auto seq = detail::sturm_sequence(sf);
  int n = detail::sign_variations(seq, a) - detail::sign_variations(seq, b);
  if (sf(b) == 0) --n;  // Sturm counts roots in (a, b]
  return n;
}

// Disjoint isolating brackets for all real roots of p in (a, b), each refined
// to width <= target_width. Multiplicity is classified exactly via gcd(p,p').
inline std::vector<RootBracket> isolate_real_roots(
    const Polynomial& p, const Rational& a, const Rational& b,
    const Rational& target_width = Rational(1, 1000000000000L)) {
  if (p.is_zero())
    throw Error(ErrorKind::InvalidInput,
                "root isolation requires a nonzero polynomial");
  std::vector<RootBracket> out;
  if (p.degree() == 0 || !(a < b)) return out;

  Polynomial g = poly_gcd(p, p.derivative());
  Polynomial sf = p.exact_quotient(g);
  auto seq = detail::sturm_sequence(sf);
  auto count = [&](const Rational& lo, const Rational& hi) {
    int n = detail::sign_variations(seq, lo) - detail::sign_variations(seq, hi);
    if (sf(hi) == 0) --n;
    return n;
  };
  auto classify = [&](RootBracket br) {
    br.maybe_multiple =
        g.degree() >= 1 &&
        (count_real_roots(g, br.lo, br.hi) > 0 || g(br.lo) == 0 ||
         g(br.hi) == 0);
    out.push_back(br);
  };

  struct Segment {
    Rational lo, hi;
    int n;
  };
  std::vector<Segment> work;
  int total = count(a, b);
  if (total > 0) work.push_back({a, b, total});

  while (!work.empty()) {
    Segment s = work.back();
    work.pop_back();
    if (s.n == 1 && s.hi - s.lo <= target_width && sf(s.lo) != 0 &&
        sf(s.hi) != 0) {
      classify({s.lo, s.hi});
      continue;
    }
    Rational mid = (s.lo + s.hi) / 2;
    if (sf(mid) == 0) {
      // Exact hit: shrink a bracket around the midpoint.
      Rational w = target_width / 2;
      Rational lo = mid - w, hi = mid + w;
      if (lo < s.lo) lo = (s.lo + mid) / 2;
      if (hi > s.hi) hi = (mid + s.hi) / 2;
      while (count(lo, hi) != 1) {
        lo = (lo + mid) / 2;
        hi = (mid + hi) / 2;
      }
      classify({lo, hi});
      int nl = count(s.lo, lo);
      int nr = count(hi, s.hi);
      if (nl > 0) work.push_back({s.lo, lo, nl});
      if (nr > 0) work.push_back({hi, s.hi, nr});
      continue;
    }
    int nl = count(s.lo, mid);
    int nr = s.n - nl;
    if (nl > 0) work.push_back({s.lo, mid, nl});
    if (nr > 0) work.push_back({mid, s.hi, nr});
  }

  std::sort(out.begin(), out.end(),
            [](const RootBracket& x, const RootBracket& y) {
              return x.lo < y.lo;
            });
  return out;
}

}  // namespace admflow
