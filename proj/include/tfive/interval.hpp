#pragma once

#include <string>

#include "tfive/rational.hpp"

namespace tfive {

/// Closed interval with exact rational endpoints. Every operation returns an
/// enclosure of the exact result over all points of the operands.
class Interval {
 public:
  Interval() = default;
  explicit Interval(const Rational& point) : lo_(point), hi_(point) {}
  Interval(const Rational& lo, const Rational& hi);

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational width() const { return hi_ - lo_; }
  Rational mid() const { return midpoint(lo_, hi_); }
  bool is_point() const { return lo_ == hi_; }
  bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
  bool contains_zero() const { return lo_ <= 0 && hi_ >= 0; }

  /// Certified sign of every point of the interval. A point interval at zero
  /// yields 0; an interval straddling zero throws SignUndecided.
  int sign() const;

  Interval operator-() const { return Interval(Rational(-hi_), Rational(-lo_)); }
  Interval& operator+=(const Interval& o);
  Interval& operator-=(const Interval& o);
  Interval& operator*=(const Interval& o);
  /// Throws SignUndecided when the divisor contains zero.
  Interval& operator/=(const Interval& o);

  friend Interval operator+(Interval a, const Interval& b) { return a += b; }
  friend Interval operator-(Interval a, const Interval& b) { return a -= b; }
  friend Interval operator*(Interval a, const Interval& b) { return a *= b; }
  friend Interval operator/(Interval a, const Interval& b) { return a /= b; }
  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

  double lo_double() const { return lo_.get_d(); }
  double hi_double() const { return hi_.get_d(); }
  double mid_double() const { return mid().get_d(); }

 private:
  Rational lo_{0};
  Rational hi_{0};
};

std::string to_text(const Interval& x);

}  // namespace tfive
