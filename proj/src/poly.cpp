#include "tfive/poly.hpp"

#include <stdexcept>

namespace tfive {

RatPoly::RatPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

RatPoly::RatPoly(std::initializer_list<Rational> coeffs) : c_(coeffs) { trim(); }

RatPoly::RatPoly(const Rational& constant) {
  if (constant != 0) c_.push_back(constant);
}

RatPoly RatPoly::monomial(const Rational& c, int degree) {
  if (c == 0) return {};
  std::vector<Rational> v(static_cast<std::size_t>(degree) + 1, Rational(0));
  v.back() = c;
  return RatPoly(std::move(v));
}

void RatPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational RatPoly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return Rational(0);
  return c_[static_cast<std::size_t>(k)];
}

Rational RatPoly::operator()(const Rational& x) const {
  Rational acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

Interval RatPoly::operator()(const Interval& x) const {
  if (x.is_point()) return Interval((*this)(x.lo()));
  Interval acc{Rational(0)};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= x;
    acc += Interval(*it);
  }
  return acc;
}

double RatPoly::eval(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

RatPoly RatPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<long>(k);
  return RatPoly(std::move(d));
}

RatPoly RatPoly::monic() const {
  if (is_zero()) return {};
  RatPoly r = *this;
  const Rational lead = leading();
  for (auto& c : r.c_) c /= lead;
  return r;
}

RatPoly RatPoly::reflect() const {
  RatPoly r = *this;
  for (std::size_t k = 1; k < r.c_.size(); k += 2) r.c_[k] = -r.c_[k];
  return r;
}

RatPoly& RatPoly::operator+=(const RatPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

RatPoly& RatPoly::operator-=(const RatPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

RatPoly operator*(const RatPoly& a, const RatPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return RatPoly(std::move(r));
}

RatPoly& RatPoly::operator*=(const RatPoly& o) { return *this = *this * o; }

RatPoly& RatPoly::operator*=(const Rational& s) {
  if (s == 0) {
    c_.clear();
    return *this;
  }
  for (auto& c : c_) c *= s;
  return *this;
}

std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {RatPoly{}, a};
  std::vector<Rational> rem = a.coeffs();
  std::vector<Rational> quo(static_cast<std::size_t>(a.degree() - b.degree()) + 1, Rational(0));
  const int db = b.degree();
  const Rational& lead = b.leading();
  for (int k = a.degree(); k >= db; --k) {
    const Rational& top = rem[static_cast<std::size_t>(k)];
    if (top == 0) continue;
    Rational f = top / lead;
    for (int j = 0; j <= db; ++j) {
      rem[static_cast<std::size_t>(k - db + j)] -= f * b.coeffs()[static_cast<std::size_t>(j)];
    }
    quo[static_cast<std::size_t>(k - db)] = f;
  }
  rem.resize(static_cast<std::size_t>(db));
  return {RatPoly(std::move(quo)), RatPoly(std::move(rem))};
}

RatPoly operator%(const RatPoly& a, const RatPoly& b) { return divmod(a, b).second; }

RatPoly gcd(RatPoly a, RatPoly b) {
  while (!b.is_zero()) {
    RatPoly r = (a % b).monic();
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::pair<RatPoly, RatPoly> gcd_cofactor(const RatPoly& a, const RatPoly& b) {
  RatPoly r0 = a, r1 = b, s0(Rational(1)), s1;
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    RatPoly s = s0 - q * s1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r0.is_zero()) return {r0, s0};
  const Rational inv = Rational(1) / r0.leading();
  return {r0 * inv, s0 * inv};
}

RatPoly squarefree_part(const RatPoly& p) {
  if (p.degree() <= 0) return p.monic();
  RatPoly g = gcd(p, p.derivative());
  return divmod(p, g).first.monic();
}

std::vector<RatPoly> sturm_sequence(const RatPoly& p) {
  std::vector<RatPoly> chain;
  if (p.is_zero()) return chain;
  chain.push_back(p);
  RatPoly d = p.derivative();
  if (d.is_zero()) return chain;
  chain.push_back(d);
  while (true) {
    const RatPoly& a = chain[chain.size() - 2];
    const RatPoly& b = chain.back();
    RatPoly r = -(a % b);
    if (r.is_zero()) break;
    // Positive rescaling keeps the sign pattern and tames coefficient growth.
    Rational lead = abs(r.leading());
    r *= Rational(1) / lead;
    chain.push_back(std::move(r));
  }
  return chain;
}

int sign_variations(const std::vector<RatPoly>& chain, const Rational& x) {
  int count = 0;
  int last = 0;
  for (const auto& q : chain) {
    const int s = sign(q(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

Rational root_bound(const RatPoly& p) {
  if (p.is_zero()) throw std::domain_error("root bound of the zero polynomial");
  // Cauchy: 1 + max |a_k / a_n|.
  Rational m(0);
  for (int k = 0; k < p.degree(); ++k) {
    Rational r = abs(Rational(p.coeff(k) / p.leading()));
    if (r > m) m = r;
  }
  return m + 1;
}

std::string to_text(const RatPoly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (int k = p.degree(); k >= 0; --k) {
    const Rational c = p.coeff(k);
    if (c == 0) continue;
    if (!s.empty()) s += " + ";
    s += "(" + c.get_str() + ")";
    if (k >= 1) s += "*x";
    if (k >= 2) s += "^" + std::to_string(k);
  }
  return s;
}

}  // namespace tfive
