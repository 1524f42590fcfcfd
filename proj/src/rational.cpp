#include "tfive/rational.hpp"

#include <cmath>

namespace tfive {

int sign(const Rational& q) { return sgn(q); }

Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

std::string to_text(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  if (!is_integer_literal(s)) {
    throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  }
  if (s[0] == '+') s.remove_prefix(1);
  return Integer(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  const auto slash = text.find('/');
  Integer num;
  Integer den = 1;
  if (slash == std::string_view::npos) {
    num = parse_integer(text);
  } else {
    num = parse_integer(text.substr(0, slash));
    den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("cannot promote a non-finite double");
  Rational q(x);  // mpq_set_d is exact
  return q;
}

Rational best_approximation(const Rational& x, const Integer& max_den) {
  if (max_den < 1) throw std::invalid_argument("max_den must be positive");
  if (x.get_den() <= max_den) return x;
  // Convergents h_k/k_k of the continued fraction of x.
  Integer h_prev = 1, h_prev2 = 0;
  Integer k_prev = 0, k_prev2 = 1;
  Integer num = x.get_num();
  Integer den = x.get_den();
  while (den != 0) {
    Integer a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    Integer k_next = a * k_prev + k_prev2;
    if (k_next > max_den) {
      // Largest admissible semiconvergent, compared against the last convergent.
      Integer t = (max_den - k_prev2) / k_prev;
      Rational semi(t * h_prev + h_prev2, t * k_prev + k_prev2);
      semi.canonicalize();
      Rational conv(h_prev, k_prev);
      conv.canonicalize();
      return abs(Rational(semi - x)) < abs(Rational(conv - x)) ? semi : conv;
    }
    Integer h_next = a * h_prev + h_prev2;
    h_prev2 = h_prev;
    h_prev = h_next;
    k_prev2 = k_prev;
    k_prev = k_next;
    Integer r = num - a * den;
    num = den;
    den = r;
  }
  Rational q(h_prev, k_prev);
  q.canonicalize();
  return q;
}

Rational midpoint(const Rational& a, const Rational& b) {
  Rational m = (a + b) / 2;
  return m;
}

Rational pow2(int e) {
  Integer p(1);
  p <<= static_cast<mp_bitcnt_t>(e < 0 ? -e : e);
  Rational q(p);
  if (e < 0) q = 1 / q;
  return q;
}

}  // namespace tfive
