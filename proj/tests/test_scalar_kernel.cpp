#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "tfive/algebraic.hpp"
#include "tfive/mat2.hpp"
#include "tfive/poly.hpp"
#include "tfive/roots.hpp"

using namespace tfive;

namespace {

Rational random_rational(std::mt19937_64& rng, long span = 1000, long max_den = 97) {
  std::uniform_int_distribution<long> num(-span, span);
  std::uniform_int_distribution<long> den(1, max_den);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

}  // namespace

TEST_CASE("rational text form is canonical and round-trips") {
  CHECK(to_text(ratio(6, 4)) == "3/2");
  CHECK(to_text(Rational(-5)) == "-5/1");
  CHECK(parse_rational("10/-4") == ratio(-5, 2));
  CHECK(parse_rational(" 7 ") == Rational(7));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("/3"), std::invalid_argument);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Rational q = random_rational(rng, 1L << 40, 1L << 30);
    CHECK(parse_rational(to_text(q)) == q);
  }
}

TEST_CASE("canonical form is closed under arithmetic") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    const Rational a = random_rational(rng);
    const Rational b = random_rational(rng);
    Rational c = (a + b) - b;
    CHECK(c == a);
    Rational d = a * b;
    CHECK(d.get_den() > 0);
    Integer g;
    mpz_gcd(g.get_mpz_t(), d.get_num().get_mpz_t(), d.get_den().get_mpz_t());
    CHECK(g == 1);
  }
}

TEST_CASE("double promotion is exact") {
  CHECK(from_double(0.5) == ratio(1, 2));
  CHECK(to_text(from_double(0.1)) == "3602879701896397/36028797018963968");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    CHECK(from_double(x).get_d() == x);
  }
}

TEST_CASE("best rational approximation respects the denominator bound") {
  const Rational x = from_double(3.14159265358979);
  CHECK(best_approximation(x, Integer(7)) == ratio(22, 7));
  CHECK(best_approximation(x, Integer(120)) == ratio(355, 113));
  CHECK(best_approximation(ratio(1, 3), Integer(10)) == ratio(1, 3));
}

TEST_CASE("interval arithmetic encloses exact results") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 300; ++i) {
    const Rational a = random_rational(rng), b = random_rational(rng);
    const Rational da = abs(random_rational(rng, 10, 7)), db = abs(random_rational(rng, 10, 7));
    const Interval A(a - da, a + da), B(b - db, b + db);
    // pick random interior points
    const Rational ta = a + da * ratio(1, 3), tb = b - db * ratio(2, 5);
    CHECK((A + B).contains(ta + tb));
    CHECK((A - B).contains(ta - tb));
    CHECK((A * B).contains(ta * tb));
    if (!B.contains_zero()) CHECK((A / B).contains(ta / tb));
  }
  CHECK(Interval(Rational(1), Rational(2)).sign() == 1);
  CHECK(Interval(Rational(0)).sign() == 0);
  CHECK_THROWS_AS(Interval(Rational(-1), Rational(2)).sign(), SignUndecided);
  CHECK_THROWS_AS(Interval(Rational(1)) / Interval(Rational(-1), Rational(1)), SignUndecided);
}

TEST_CASE("polynomial gcd and square-free part") {
  const RatPoly x = RatPoly::x();
  const RatPoly a = (x - RatPoly(Rational(1))) * (x - RatPoly(Rational(2)));
  const RatPoly b = (x - RatPoly(Rational(1))) * (x + RatPoly(Rational(3)));
  CHECK(gcd(a, b) == x - RatPoly(Rational(1)));
  const RatPoly sq = squarefree_part(a * a * b);
  CHECK(sq.degree() == 3);
  auto [q, r] = divmod(a * b, b);
  CHECK(q == a);
  CHECK(r.is_zero());
}

TEST_CASE("sturm isolation: sqrt 2") {
  const RatPoly p{Rational(-2), Rational(0), Rational(1)};
  const auto roots = sturm_isolate(p, Rational(1), Rational(2));
  REQUIRE(roots.size() == 1);
  const RootInterval tight = refine_root(roots[0], ratio(1, 10000000000L));
  CHECK(tight.hi - tight.lo <= ratio(1, 10000000000L));
  CHECK(tight.lo.get_d() < 1.41421356237 + 1e-9);
  CHECK(tight.hi.get_d() > 1.41421356237 - 1e-9);
  CHECK(sign(p(tight.lo)) != sign(p(tight.hi)));
}

TEST_CASE("sturm isolation: root outside the window") {
  const RatPoly p{Rational(0), Rational(-9)};
  CHECK(sturm_isolate(p, Rational(1), Rational(100)).empty());
  CHECK_THROWS_AS(sturm_isolate(RatPoly{}, Rational(0), Rational(1)), std::domain_error);
}

TEST_CASE("refine_root contract") {
  const RatPoly p{Rational(-2), Rational(0), Rational(1)};
  const auto r = sturm_isolate(p, Rational(1), Rational(2)).at(0);
  const RootInterval t = refine_root(r, ratio(1, 1024));
  CHECK(t.hi - t.lo <= ratio(1, 1024));
  const RootInterval again = refine_root(t, ratio(1, 16));
  CHECK(again.lo == t.lo);
  CHECK(again.hi == t.hi);
}

TEST_CASE("sign at an algebraic root") {
  const RatPoly p{Rational(-2), Rational(0), Rational(1)};
  const auto r = sturm_isolate(p, Rational(1), Rational(2)).at(0);
  CHECK(sign_at_root(RatPoly{Rational(-1), Rational(1)}, r) == 1);
  CHECK(sign_at_root(p, r) == 0);
  // 3 - 2*sqrt2 > 0 but tiny; 1.4142 - x < 0.
  CHECK(sign_at_root(RatPoly{Rational(3), Rational(-2)}, r) == 1);
  CHECK(sign_at_root(RatPoly{ratio(14142, 10000), Rational(-1)}, r) == -1);
  // x^2 - 2 times something coprime vanishes at the root.
  CHECK(sign_at_root(p * RatPoly{Rational(5), Rational(1)}, r) == 0);
}

TEST_CASE("sturm isolation finds exactly the rational roots of random products") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    std::set<Rational> roots;
    std::uniform_int_distribution<int> deg(1, 6);
    const int d = deg(rng);
    while (static_cast<int>(roots.size()) < d) roots.insert(random_rational(rng, 40, 9));
    RatPoly p{Rational(random_rational(rng, 5, 3) == 0 ? 1 : 2)};
    for (const auto& z : roots) p *= RatPoly{Rational(-z), Rational(1)};
    const Rational lo(-3), hi(3);
    const auto iso = sturm_isolate(p * p, lo, hi);  // repeated factors too
    std::vector<Rational> expect;
    for (const auto& z : roots)
      if (z > lo && z < hi) expect.push_back(z);
    REQUIRE(iso.size() == expect.size());
    for (std::size_t k = 0; k < iso.size(); ++k) {
      CHECK(iso[k].lo <= expect[k]);
      CHECK(expect[k] <= iso[k].hi);
      if (k > 0) CHECK(iso[k - 1].hi <= iso[k].lo);
      // sign_at_root agrees with exact evaluation at a rational root
      const RatPoly q{random_rational(rng), random_rational(rng), random_rational(rng)};
      CHECK(sign_at_root(q, iso[k]) == sign(q(expect[k])));
    }
  }
}

TEST_CASE("2x2 determinant and rank") {
  const RMat a{Rational(1), Rational(-2), Rational(3), Rational(-6)};
  CHECK(det2(a) == 0);
  CHECK(rank2x2(a) == 1);
  const RMat id{Rational(1), Rational(0), Rational(0), Rational(1)};
  CHECK(det2(id) == 1);
  CHECK(rank2x2(id) == 2);
  CHECK(rank2x2(RMat{}) == 0);
  const IMat undecided{Interval(Rational(-1), Rational(1)), Interval(Rational(0)),
                       Interval(Rational(0)), Interval(Rational(1))};
  CHECK_THROWS_AS(rank2x2(undecided), SignUndecided);
  CHECK(rank2x2(to_interval(id)) == 2);
}

TEST_CASE("root field arithmetic at sqrt 2") {
  const RatPoly p{Rational(-2), Rational(0), Rational(1)};
  const RootField f(sturm_isolate(p, Rational(1), Rational(2)).at(0));
  const AlgNum mu = AlgNum::mu();
  CHECK(f.is_zero(mu * mu - AlgNum(Rational(2))));
  CHECK(f.sign(AlgNum(Rational(1)) / (mu - AlgNum(Rational(1)))) == 1);
  const Interval e = f.enclose(mu * mu * mu, pow2(-60));
  CHECK(e.width() <= pow2(-60));
  CHECK(e.mid_double() == doctest::Approx(2.0 * 1.4142135623730951));
  const AlgNum red = f.reduce(mu * mu * mu);
  CHECK(red.num.degree() <= 1);
  CHECK(f.is_zero(red - mu * mu * mu));
}
