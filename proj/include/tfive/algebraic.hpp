#pragma once

#include "tfive/mat2.hpp"
#include "tfive/poly.hpp"
#include "tfive/roots.hpp"

namespace tfive {

/// An element num(mu)/den(mu) of Q(mu), to be evaluated at an isolated real
/// root mu. Arithmetic is purely formal; signs and enclosures need a
/// RootField.
struct AlgNum {
  RatPoly num;
  RatPoly den{Rational(1)};

  AlgNum() = default;
  AlgNum(const Rational& c) : num(c) {}  // NOLINT: implicit constant embedding
  AlgNum(RatPoly n, RatPoly d) : num(std::move(n)), den(std::move(d)) {}
  explicit AlgNum(RatPoly n) : num(std::move(n)) {}

  static AlgNum mu() { return AlgNum(RatPoly::x()); }

  AlgNum& operator+=(const AlgNum& o);
  AlgNum& operator-=(const AlgNum& o);
  AlgNum& operator*=(const AlgNum& o);
  AlgNum& operator/=(const AlgNum& o);

  friend AlgNum operator+(AlgNum a, const AlgNum& b) { return a += b; }
  friend AlgNum operator-(AlgNum a, const AlgNum& b) { return a -= b; }
  friend AlgNum operator*(AlgNum a, const AlgNum& b) { return a *= b; }
  friend AlgNum operator/(AlgNum a, const AlgNum& b) { return a /= b; }
  friend AlgNum operator-(AlgNum a) {
    a.num = -a.num;
    return a;
  }
  /// Formal equality of the representation, not of the value.
  friend bool operator==(const AlgNum& a, const AlgNum& b) {
    return a.num == b.num && a.den == b.den;
  }
};

using AMat = Mat2<AlgNum>;

AMat embed(const RMat& m);

/// Q(mu) specialised at one isolated root: exact signs and rational
/// enclosures of AlgNum values.
class RootField {
 public:
  explicit RootField(RootInterval root);

  const RootInterval& root() const { return root_; }

  /// Canonical form: a polynomial of degree below the root polynomial's,
  /// denominator 1. Throws std::domain_error on a zero denominator.
  AlgNum reduce(const AlgNum& x) const;
  AMat reduce(const AMat& m) const;

  /// Exact sign at the root. Throws std::domain_error on a zero denominator.
  int sign(const AlgNum& x) const;
  bool is_zero(const AlgNum& x) const { return sign(x) == 0; }
  bool is_zero(const AMat& m) const;
  /// Exact rank of an algebraic 2x2 matrix at the root.
  int rank(const AMat& m) const;

  /// Enclosure at the current isolating interval.
  Interval enclose(const AlgNum& x) const;
  IMat enclose(const AMat& m) const;
  /// Enclosure narrowed (by refining the root) until width <= target, or
  /// until the root interval is narrower than 2^-max_bits.
  Interval enclose(const AlgNum& x, const Rational& target, int max_bits = 4096) const;

  /// Field with the root refined to the given width.
  RootField refined(const Rational& width) const;

  double approx(const AlgNum& x) const;

 private:
  int sign_poly(const RatPoly& q) const;

  // The polynomial may shrink to a factor when a denominator shares one.
  mutable RootInterval root_;
  Interval tight_;
};

}  // namespace tfive
