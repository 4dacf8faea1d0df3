#pragma once

#include <gmpxx.h>

#include <string>

#include "admflow/errors.hpp"

namespace admflow {

// Exact rational scalar. GMP does the heavy lifting; this header only adds
// the parsing/formatting conventions used at the file-format boundary.
using Rational = mpq_class;

inline double to_double(const Rational& q) { return q.get_d(); }

inline Rational rational_from_long(long n, long d = 1) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

// Every finite double is an exact dyadic rational; mpq_class(double) keeps it.
inline Rational rational_from_double(double x) {
  Rational q(x);
  q.canonicalize();
  return q;
}

// Accepts "p", "p/q" and leading sign, base 10. Used by the config loader so
// class data survives the text boundary exactly.
inline Rational parse_rational(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0)
    throw Error(ErrorKind::InvalidInput, "not a rational: '" + text + "'");
  if (q.get_den() == 0)
    throw Error(ErrorKind::InvalidInput, "zero denominator: '" + text + "'");
  q.canonicalize();
  return q;
}

inline std::string format_rational(const Rational& q) {
  return q.get_str();  // "p" or "p/q", canonical form
}

}  // namespace admflow
