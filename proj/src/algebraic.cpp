#include "tfive/algebraic.hpp"

#include <algorithm>
#include <stdexcept>

namespace tfive {

AlgNum& AlgNum::operator+=(const AlgNum& o) {
  if (den == o.den) {
    num += o.num;
    return *this;
  }
  num = num * o.den + o.num * den;
  den = den * o.den;
  return *this;
}

AlgNum& AlgNum::operator-=(const AlgNum& o) {
  if (den == o.den) {
    num -= o.num;
    return *this;
  }
  num = num * o.den - o.num * den;
  den = den * o.den;
  return *this;
}

AlgNum& AlgNum::operator*=(const AlgNum& o) {
  num = num * o.num;
  den = den * o.den;
  return *this;
}

AlgNum& AlgNum::operator/=(const AlgNum& o) {
  num = num * o.den;
  den = den * o.num;
  return *this;
}

AMat embed(const RMat& m) { return {AlgNum(m.e11), AlgNum(m.e12), AlgNum(m.e21), AlgNum(m.e22)}; }

RootField::RootField(RootInterval root) : root_(std::move(root)) {
  if (root_.poly.degree() < 1) throw std::invalid_argument("RootField needs a nonconstant polynomial");
  const Rational mag = std::max(abs(root_.lo), abs(root_.hi));
  tight_ = refine_root(root_, pow2(-64) * std::max(mag, Rational(1))).enclosure();
}

int RootField::sign_poly(const RatPoly& q) const {
  if (q.is_zero()) return 0;
  const Interval v = q(tight_);
  if (!v.contains_zero()) return v.sign();
  return sign_at_root(q, root_);
}

AlgNum RootField::reduce(const AlgNum& x) const {
  RatPoly num = x.num % root_.poly;
  if (num.is_zero()) return AlgNum(Rational(0));
  RatPoly den = x.den % root_.poly;
  if (den.is_zero()) throw std::domain_error("algebraic value with zero denominator at the root");
  if (den.degree() == 0) return AlgNum(num * (Rational(1) / den.leading()));
  while (true) {
    auto [g, s] = gcd_cofactor(den, root_.poly);
    if (g.degree() == 0) return AlgNum((num * s) % root_.poly);
    if (sign_at_root(g, root_) == 0)
      throw std::domain_error("algebraic value with zero denominator at the root");
    // The shared factor misses the root: drop it from the field polynomial.
    root_.poly = divmod(root_.poly, g).first.monic();
    num = num % root_.poly;
    den = den % root_.poly;
  }
}

AMat RootField::reduce(const AMat& m) const {
  return {reduce(m.e11), reduce(m.e12), reduce(m.e21), reduce(m.e22)};
}

int RootField::sign(const AlgNum& x) const {
  const int sd = sign_poly(x.den);
  if (sd == 0) throw std::domain_error("algebraic value with zero denominator at the root");
  return sign_poly(x.num) * sd;
}

bool RootField::is_zero(const AMat& m) const {
  return is_zero(m.e11) && is_zero(m.e12) && is_zero(m.e21) && is_zero(m.e22);
}

int RootField::rank(const AMat& m) const {
  if (is_zero(m)) return 0;
  return is_zero(m.det()) ? 1 : 2;
}

Interval RootField::enclose(const AlgNum& x) const {
  const Interval mu = root_.enclosure();
  return x.num(mu) / x.den(mu);
}

IMat RootField::enclose(const AMat& m) const {
  return {enclose(m.e11), enclose(m.e12), enclose(m.e21), enclose(m.e22)};
}

Interval RootField::enclose(const AlgNum& x, const Rational& target, int max_bits) const {
  RootInterval r = root_;
  const Rational floor_width = pow2(-max_bits);
  while (true) {
    const Interval mu = r.enclosure();
    try {
      Interval v = x.num(mu) / x.den(mu);
      if (v.width() <= target || r.is_exact() || r.hi - r.lo <= floor_width) return v;
    } catch (const SignUndecided&) {
      if (r.is_exact() || r.hi - r.lo <= floor_width) throw;
    }
    r = refine_root(r, Rational(r.hi - r.lo) / 16);
  }
}

RootField RootField::refined(const Rational& width) const {
  return RootField(refine_root(root_, width));
}

double RootField::approx(const AlgNum& x) const {
  const Rational w = pow2(-80);
  const RootField f = root_.hi - root_.lo > w ? refined(w) : *this;
  return f.enclose(x).mid_double();
}

}  // namespace tfive
