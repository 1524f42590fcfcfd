#include "tfive/interval.hpp"

#include <algorithm>
#include <array>

namespace tfive {

Interval::Interval(const Rational& lo, const Rational& hi) : lo_(lo), hi_(hi) {
  if (hi_ < lo_) throw std::invalid_argument("interval with hi < lo");
}

int Interval::sign() const {
  if (lo_ > 0) return 1;
  if (hi_ < 0) return -1;
  if (lo_ == 0 && hi_ == 0) return 0;
  throw SignUndecided("interval [" + to_text(lo_) + ", " + to_text(hi_) + "] contains zero");
}

Interval& Interval::operator+=(const Interval& o) {
  lo_ += o.lo_;
  hi_ += o.hi_;
  return *this;
}

Interval& Interval::operator-=(const Interval& o) {
  Rational lo = lo_ - o.hi_;
  Rational hi = hi_ - o.lo_;
  lo_ = std::move(lo);
  hi_ = std::move(hi);
  return *this;
}

Interval& Interval::operator*=(const Interval& o) {
  if (is_point() && o.is_point()) {
    lo_ *= o.lo_;
    hi_ = lo_;
    return *this;
  }
  std::array<Rational, 4> p{lo_ * o.lo_, lo_ * o.hi_, hi_ * o.lo_, hi_ * o.hi_};
  auto [mn, mx] = std::minmax_element(p.begin(), p.end());
  Rational lo = *mn;
  Rational hi = *mx;
  lo_ = std::move(lo);
  hi_ = std::move(hi);
  return *this;
}

Interval& Interval::operator/=(const Interval& o) {
  if (o.contains_zero()) {
    throw SignUndecided("division by an interval containing zero");
  }
  Rational inv_lo = 1 / o.hi_;
  Rational inv_hi = 1 / o.lo_;
  return *this *= Interval(inv_lo, inv_hi);
}

std::string to_text(const Interval& x) {
  return "[" + to_text(x.lo()) + ", " + to_text(x.hi()) + "]";
}

}  // namespace tfive
