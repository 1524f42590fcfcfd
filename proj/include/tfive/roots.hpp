#pragma once

#include <vector>

#include "tfive/interval.hpp"
#include "tfive/poly.hpp"

namespace tfive {

/// Isolating interval for one real root of a square-free polynomial.
///
/// Either lo == hi and the root is that rational, or lo < hi, poly(lo) and
/// poly(hi) are nonzero with opposite signs, and poly has exactly one root in
/// the open interval (lo, hi).
struct RootInterval {
  RatPoly poly;
  Rational lo;
  Rational hi;

  bool is_exact() const { return lo == hi; }
  Interval enclosure() const { return Interval(lo, hi); }
  double approx() const { return midpoint(lo, hi).get_d(); }
};

/// Distinct real roots of p strictly inside (lo, hi), ascending. The stored
/// polynomial is the square-free part of p. Throws std::domain_error
/// ("indeterminate root set") when p is zero.
std::vector<RootInterval> sturm_isolate(const RatPoly& p, const Rational& lo,
                                        const Rational& hi);

/// Bisect until hi - lo <= width. Exact sign evaluation; a rational root hit
/// by a bisection point collapses the interval to that point.
RootInterval refine_root(RootInterval r, const Rational& width);

/// Exact sign of q at the root isolated by r.
int sign_at_root(const RatPoly& q, const RootInterval& r);

/// Number of distinct roots of a square-free p in the open interval (lo, hi).
int count_roots(const std::vector<RatPoly>& chain, const Rational& lo, const Rational& hi);

}  // namespace tfive
