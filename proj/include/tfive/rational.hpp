#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace tfive {

using Integer = mpz_class;
using Rational = mpq_class;

/// Raised whenever a certified computation cannot decide a sign. Never
/// replaced by a guess.
class SignUndecided : public std::runtime_error {
 public:
  explicit SignUndecided(const std::string& what)
      : std::runtime_error("sign undecided: " + what) {}
};

/// Canonicalised num/den (the two-argument mpq_class constructor is not).
inline Rational ratio(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

int sign(const Rational& q);
Rational abs(const Rational& q);

/// Canonical text form "numerator/denominator" in base 10. Integers are
/// written with an explicit "/1".
std::string to_text(const Rational& q);

/// Inverse of to_text. Also accepts a bare integer. Throws
/// std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Exact value of a finite double (a dyadic rational).
Rational from_double(double x);

/// Best rational approximation with denominator at most `max_den`
/// (continued-fraction convergents plus the final semiconvergent).
Rational best_approximation(const Rational& x, const Integer& max_den);

Rational midpoint(const Rational& a, const Rational& b);

/// 2^e for any integer e.
Rational pow2(int e);

}  // namespace tfive
