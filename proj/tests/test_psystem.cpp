#include <cmath>
#include <random>

#include "doctest.h"
#include "tfive/convexify.hpp"
#include "tfive/criterion.hpp"
#include "tfive/fixture.hpp"
#include "tfive/psystem.hpp"

using namespace tfive;

namespace {

struct LinearPressure : PressureModel {
  double c0 = 0, c1 = 2;
  double p(double v) const override { return c0 + c1 * v; }
  double dp(double) const override { return c1; }
};

// p = -1/v on v > 0: increasing and concave.
struct InversePressure : PressureModel {
  double p(double v) const override { return -1 / v; }
  double dp(double v) const override { return 1 / (v * v); }
  std::pair<double, double> domain() const override { return {1e-6, 1e6}; }
};

RMat g_exact(const Rational& v, const Rational& u, const Rational& p) { return RMat{v, -u, u, -p}; }

const PressureLaw& fixture_law() {
  static const PressureLaw law = pressure_from_set(reference_large_t5());
  return law;
}

}  // namespace

TEST_CASE("constitutive map") {
  LinearPressure p;
  p.c0 = 3;
  const DMat g = constitutive({0, 0}, p);
  CHECK(g == DMat{0, 0, 0, -3});
  const DMat h = constitutive({1.5, -2}, p);
  CHECK(h.e12 == -h.e21);
  CHECK(state_of(h).v == 1.5);
  CHECK(state_of(h).u == -2);
  CHECK_THROWS_AS(constitutive({0, 0}, InversePressure{}), PsystemError);

  // node states of the reference set reproduce the matrices
  const auto& law = fixture_law();
  for (const auto& x : reference_large_t5()) {
    const DMat m = constitutive(state_of(to_double(x)), law);
    CHECK(m.e11 == x.e11.get_d());
    CHECK(m.e21 == x.e21.get_d());
    CHECK(m.e12 == x.e12.get_d());
    CHECK(std::abs(m.e22 - x.e22.get_d()) <= 1e-8 * law.scale());
  }
}

TEST_CASE("Rankine-Hugoniot residuals") {
  LinearPressure p;
  p.c1 = 1;
  auto r = rh_residual({{0, 0}, {1, 1}, 1}, p);
  CHECK(r.first == 0);
  CHECK(r.second == 0);
  r = rh_residual({{0.3, -1}, {0.3, -1}, 17}, p);
  CHECK(r.first == 0);
  CHECK(r.second == 0);
}

TEST_CASE("rank-one connection iff an RH speed exists") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> small(1, 40), sgn(0, 1), num(-50, 50);
  int connected = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    // p = -1/v; states v = a^2, w = b^2 have sigma^2 = 1/(a b)^2
    const Rational a = ratio(small(rng), small(rng)), b = ratio(small(rng), small(rng));
    const Rational v = a * a, w = b * b;
    const Rational ul = ratio(num(rng), small(rng));
    Rational ur;
    if (trial % 2 == 0) {
      const Rational sigma = Rational((sgn(rng) ? 1 : -1) / (a * b));
      ur = ul + sigma * (w - v);
    } else {
      ur = ratio(num(rng), small(rng));
    }
    const RMat left = g_exact(v, ul, Rational(-1 / v)), right = g_exact(w, ur, Rational(-1 / w));
    const bool r1 = is_rank_one_connected(left, right);
    const auto speed = rh_speed(left, right);
    CHECK(r1 == speed.has_value());
    if (trial % 2 == 0) CHECK(r1);
    if (speed) {
      ++connected;
      const Rational du = ur - ul, dp = Rational(-1 / w + 1 / v);
      CHECK(du == *speed * (w - v));
      CHECK(dp == *speed * du);
    }
  }
  CHECK(connected >= 500);
}

TEST_CASE("the reference set has no shocks among its values") {
  const auto& s = reference_large_t5();
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      CHECK_FALSE(is_rank_one_connected(s[i], s[j]));
      CHECK_FALSE(rh_speed(s[i], s[j]).has_value());
    }
}

TEST_CASE("Hugoniot branches") {
  LinearPressure lin;
  const auto flat = hugoniot_trace({1, 0}, 2, lin, 3, 50);
  for (const auto& smp : flat.samples) CHECK(smp.sigma == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  const auto& law = fixture_law();
  const double vl = law.nodes()[0].get_d();
  const State base{vl, reference_large_t5()[0].e21.get_d()};
  const auto near = hugoniot_trace(base, 1, law, vl - 1e-7 * (law.grid_hi() - law.grid_lo()), 1);
  CHECK(near.samples[1].sigma == doctest::Approx(-std::sqrt(law.dp(vl))).epsilon(1e-6));

  // family 1 on the admissible side: sigma strictly increasing in v
  const auto b = hugoniot_trace(base, 1, law, law.grid_lo(), 2000);
  CHECK_FALSE(b.truncated);
  for (std::size_t k = 1; k < b.samples.size(); ++k) CHECK(b.samples[k].sigma < b.samples[k - 1].sigma);
  CHECK(b.max_rh_residual <= 1e-8 * b.scale);
}

TEST_CASE("Lax and Liu conditions on the constructed pressure law") {
  const auto& law = fixture_law();
  for (std::size_t node = 0; node < 5; ++node) {
    const State base = state_of(to_double(reference_large_t5()[node]));
    for (int family = 1; family <= 2; ++family) {
      const double admissible_end = family == 1 ? law.grid_lo() : law.grid_hi();
      const double other_end = family == 1 ? law.grid_hi() : law.grid_lo();
      const auto good = hugoniot_trace(base, family, law, admissible_end, 1000);
      const auto bad = hugoniot_trace(base, family, law, other_end, 1000);
      CHECK(good.max_rh_residual <= 1e-8 * good.scale);
      CHECK(bad.max_rh_residual <= 1e-8 * bad.scale);
      CHECK(lax_check(good, 0));
      CHECK(liu_check(good, 0).ok);
      int lax_ok = 0, liu_ok = 0, bad_lax = 0;
      for (std::size_t m = 1; m < good.samples.size(); ++m) {
        lax_ok += lax_check(good, m);
        liu_ok += liu_check(good, m, &law).ok;
      }
      for (std::size_t m = 1; m < bad.samples.size(); ++m) bad_lax += lax_check(bad, m);
      CHECK(lax_ok == 1000);
      CHECK(liu_ok == 1000);
      CHECK(bad_lax == 0);
    }
  }
}

TEST_CASE("wedge slopes") {
  const RationalSlope s = wedge_slope(RMat{Rational(1), Rational(-2), Rational(3), Rational(-6)});
  REQUIRE(s.sigma);
  CHECK(*s.sigma == 2);
  CHECK(s.consistent);
  const RationalSlope v = wedge_slope(RMat{Rational(0), Rational(1), Rational(0), Rational(3)});
  CHECK(v.vertical);
  CHECK_FALSE(v.sigma);
  CHECK_FALSE(wedge_slope(RMat{Rational(1), Rational(-2), Rational(3), Rational(5)}).consistent);

  const auto& set = reference_large_t5();
  const CriterionResult r = solve_criterion(std::span<const RMat>(set.data(), set.size()));
  REQUIRE(r.witnesses.size() == 1);
  const WedgeSlopes w = wedge_slopes(r.witnesses[0]);
  CHECK(w.first.consistent);
  CHECK(w.last.consistent);
  REQUIRE(w.first.sigma);
  REQUIRE(w.last.sigma);
  // independent oracle: S stays continuous across x = sigma t iff
  // (P - X) (sigma, 1)^T = 0, checked exactly in Q(mu)
  const RootField f = r.witnesses[0].field();
  for (const auto& [x, sl] : {std::pair{set[0], w.first}, std::pair{set[4], w.last}}) {
    const AMat c = r.witnesses[0].P() - embed(x);
    CHECK(f.is_zero(c.e11 * *sl.sigma + c.e12));
    CHECK(f.is_zero(c.e21 * *sl.sigma + c.e22));
  }
  // With this convention the reference set gives sigma_1 > sigma_5, so the
  // wedge uses i = 5, j = 1.
  CHECK(w.first.approx == doctest::Approx(39.636).epsilon(1e-4));
  CHECK(w.last.approx == doctest::Approx(37.539).epsilon(1e-4));
  REQUIRE(w.first_below_last);
  CHECK_FALSE(*w.first_below_last);
}
