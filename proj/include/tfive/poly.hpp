#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "tfive/interval.hpp"
#include "tfive/rational.hpp"

namespace tfive {

/// Univariate polynomial over Q, coefficients in ascending degree. The
/// leading coefficient is nonzero unless the polynomial is zero (degree -1).
class RatPoly {
 public:
  RatPoly() = default;
  explicit RatPoly(std::vector<Rational> coeffs);
  RatPoly(std::initializer_list<Rational> coeffs);
  explicit RatPoly(const Rational& constant);

  static RatPoly monomial(const Rational& c, int degree);
  /// The indeterminate itself.
  static RatPoly x() { return monomial(Rational(1), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int k) const;
  const Rational& leading() const { return c_.back(); }

  Rational operator()(const Rational& x) const;
  Interval operator()(const Interval& x) const;
  double eval(double x) const;

  RatPoly derivative() const;
  RatPoly monic() const;
  /// p(x) -> p(-x)
  RatPoly reflect() const;

  RatPoly& operator+=(const RatPoly& o);
  RatPoly& operator-=(const RatPoly& o);
  RatPoly& operator*=(const RatPoly& o);
  RatPoly& operator*=(const Rational& s);

  friend RatPoly operator+(RatPoly a, const RatPoly& b) { return a += b; }
  friend RatPoly operator-(RatPoly a, const RatPoly& b) { return a -= b; }
  friend RatPoly operator*(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator*(RatPoly a, const Rational& s) { return a *= s; }
  friend RatPoly operator*(const Rational& s, RatPoly a) { return a *= s; }
  friend RatPoly operator-(RatPoly a) { return a *= Rational(-1); }
  friend bool operator==(const RatPoly& a, const RatPoly& b) { return a.c_ == b.c_; }

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Euclidean division: a = q*b + r with deg r < deg b. Throws on b = 0.
std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b);
RatPoly operator%(const RatPoly& a, const RatPoly& b);

/// Monic greatest common divisor (zero only when both inputs are zero).
RatPoly gcd(RatPoly a, RatPoly b);
/// Extended Euclid: monic g = gcd(a, b) and s with s * a = g (mod b).
std::pair<RatPoly, RatPoly> gcd_cofactor(const RatPoly& a, const RatPoly& b);

/// p / gcd(p, p'), made monic. Same distinct roots as p, all simple.
RatPoly squarefree_part(const RatPoly& p);

/// Canonical Sturm chain p, p', -rem(...), ... (stops at a constant).
std::vector<RatPoly> sturm_sequence(const RatPoly& p);

/// Sign changes of the chain evaluated at x, zeros dropped.
int sign_variations(const std::vector<RatPoly>& chain, const Rational& x);

/// A bound B with every real root of p in (-B, B). p must be nonzero.
Rational root_bound(const RatPoly& p);

std::string to_text(const RatPoly& p);

}  // namespace tfive
