#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "doctest.h"
#include "synthetic.hpp"
#include "tfive/fixture.hpp"
#include "tfive/large_t5.hpp"

using namespace tfive;

namespace {

const LargeT5Certificate& fixture_cert() {
  static const LargeT5Certificate c = certify_large_t5(reference_large_t5());
  return c;
}

bool contains_text(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

// Brute-force oracle for one D_i: strict check of every pairwise inequality.
bool satisfies_all(const std::array<RMat, 5>& s, std::size_t i, const Rational& d) {
  if (d >= 0) return false;
  for (std::size_t j = 0; j < 5; ++j)
    if (j != i && !(s[j].e22 - s[i].e22 > d * (s[j].e11 - s[i].e11))) return false;
  return true;
}

}  // namespace

TEST_CASE("representative orderings cover every cyclic class once") {
  const auto reps = representative_orderings();
  REQUIRE(reps.size() == 24);
  std::set<Ordering> seen(reps.begin(), reps.end());
  CHECK(seen.size() == 24);
  Ordering o{0, 1, 2, 3, 4};
  do {
    int hits = 0;
    for (int r = 0; r < 5; ++r) {
      Ordering rot(o.begin() + r, o.end());
      rot.insert(rot.end(), o.begin(), o.begin() + r);
      hits += static_cast<int>(seen.count(rot));
    }
    CHECK(hits == 1);
  } while (std::next_permutation(o.begin(), o.end()));
}

TEST_CASE("d_feasibility on small hand cases") {
  const std::vector<Rational> x{Rational(0), Rational(1), Rational(-1)};
  const std::vector<Rational> h{Rational(0), Rational(1), Rational(1)};
  const DFeasibility d = d_feasibility(x, h);
  // D_1 in (-1, 0); node 2 needs D_2 > 1, which the D < 0 cut removes.
  REQUIRE(d.intervals.size() == 3);
  CHECK_FALSE(d.intervals[0].empty());
  CHECK(d.intervals[1].empty());
  CHECK(d.failure.find("D_2") != std::string::npos);
  REQUIRE(d.intervals[0].lo);
  CHECK(*d.intervals[0].lo == -1);
  CHECK(d.intervals[0].hi == 0);

  // x_2 < x_1 and h_2 < h_1: D_1 must exceed the positive slope 2.
  const std::vector<Rational> x2{Rational(0), Rational(-1)};
  const std::vector<Rational> h2{Rational(0), Rational(-2)};
  const DFeasibility e = d_feasibility(x2, h2);
  CHECK_FALSE(e.feasible());
  CHECK(e.failure.find("D_1") != std::string::npos);

  const std::vector<Rational> x3{Rational(0), Rational(0)};
  CHECK_FALSE(d_feasibility(x3, h2).feasible());
}

TEST_CASE("fixture D intervals are nonempty, negative and tight") {
  const auto& s = reference_large_t5();
  const DFeasibility d = d_feasibility(s);
  REQUIRE(d.feasible());
  for (std::size_t i = 0; i < 5; ++i) {
    const DInterval& iv = d.intervals[i];
    CHECK(iv.hi <= 0);
    const Rational rep = iv.representative();
    CHECK(iv.contains(rep));
    CHECK(satisfies_all(s, i, rep));
    // the endpoints are active: anything past them fails
    CHECK_FALSE(satisfies_all(s, i, iv.hi));
    if (iv.lo) CHECK_FALSE(satisfies_all(s, i, *iv.lo));
  }
  CHECK_FALSE(d.intervals[1].lo.has_value());
  CHECK(d.intervals[0].hi.get_d() == doctest::Approx(-1417.66).epsilon(1e-5));
}

TEST_CASE("same_root") {
  const RatPoly p{Rational(-2), Rational(0), Rational(1)};
  const auto r = sturm_isolate(p, Rational(-2), Rational(2));
  REQUIRE(r.size() == 2);
  CHECK(same_root(r[0], r[0]));
  CHECK_FALSE(same_root(r[0], r[1]));
  CHECK(same_root(r[1], refine_root(r[1], ratio(1, 1000))));
  // same number, different defining polynomial
  const RatPoly q = p * RatPoly{Rational(-7), Rational(1)};
  const auto s = sturm_isolate(q, Rational(1), Rational(2));
  REQUIRE(s.size() == 1);
  CHECK(same_root(r[1], s[0]));
}

TEST_CASE("scan rejects rank-one pairs and finds T5 orderings on the fixture") {
  auto bad = reference_large_t5();
  const RMat r = bad[1] - bad[0];
  bad[0] = bad[1] + RMat{r.e11, r.e12, r.e11 * 3, r.e12 * 3};
  CHECK_THROWS_AS(scan_orderings(bad), CriterionError);

  const auto& c = fixture_cert();
  std::set<Ordering> orderings;
  for (const auto& w : c.scanned) orderings.insert(w.ordering);
  CHECK(orderings.size() >= 3);
  CHECK(orderings.count(Ordering{0, 1, 2, 3, 4}) == 1);
}

TEST_CASE("independence: constructed dependence and independence") {
  const auto& c = fixture_cert();
  REQUIRE(c.witnesses.size() == 3);
  const TNWitness& w = c.witnesses[0];
  const auto same = check_independence({&w, &w, &w});
  for (const auto& r : same) {
    CHECK(r.status == Independence::dependent);
    CHECK(r.method == "exact");
  }

  // Fake witnesses in w's field whose arms are d, d + E1 and d + E2 (or a
  // combination of the first two).
  const std::array<RMat, 2> e{RMat{Rational(1), Rational(2), Rational(-1), Rational(3)},
                              RMat{Rational(0), Rational(5), Rational(1), Rational(-2)}};
  auto shifted = [&](const std::function<AMat(const AMat&)>& f) {
    TNWitness v = w;
    for (std::size_t k = 0; k < 5; ++k) v.P_points[k] = embed(v.tuple[k]) + f(w.P_points[k] - embed(w.tuple[k]));
    return v;
  };
  const TNWitness w2 = shifted([&](const AMat& d) { return d + embed(e[0]); });
  const TNWitness w3 = shifted([&](const AMat& d) { return d + embed(e[1]); });
  const TNWitness w4 = shifted([&](const AMat& d) { return d * AlgNum(Rational(3)) - embed(e[0]) * AlgNum(Rational(2)); });
  for (const auto& r : check_independence({&w, &w2, &w3})) CHECK(r.status == Independence::independent);
  for (const auto& r : check_independence({&w, &w2, &w4})) CHECK(r.status == Independence::dependent);
}

TEST_CASE("fixture certificate") {
  const auto& c = fixture_cert();
  for (const auto& f : c.failures) MESSAGE(f);
  REQUIRE(c.ok());
  REQUIRE(c.witnesses.size() == 3);
  std::set<Ordering> distinct;
  for (const auto& w : c.witnesses) {
    distinct.insert(w.ordering);
    CHECK(verify_witness(w).ok);
  }
  CHECK(distinct.size() == 3);
  for (const auto& r : c.independence) CHECK(r.status == Independence::independent);
  CHECK(c.literal_independence.size() == 5);
  for (const auto& p : c.pair_dets) CHECK(p.det != 0);
  CHECK(c.pair_dets.size() == 10);
  for (const auto& s : c.symmetry_residual) CHECK(s == 0);
  CHECK(verify_certificate(c).ok);

  LargeT5Certificate forged = c;
  forged.witnesses[1].kappa[0] = AlgNum(Rational(1));
  CHECK_FALSE(verify_certificate(forged).ok);
}

TEST_CASE("certificate failures name the constraint and indices") {
  auto bad = reference_large_t5();
  const RMat r = bad[1] - bad[0];
  bad[0] = bad[1] + RMat{r.e11, r.e12, r.e11 * 2, r.e12 * 2};
  const auto c = certify_large_t5(bad);
  CHECK_FALSE(c.ok());
  CHECK(contains_text(c.failures, "pair-rank: det(X_1 - X_2) = 0"));

  auto asym = reference_large_t5();
  asym[3].e12 += 1;
  CHECK(contains_text(certify_large_t5(asym).failures, "symmetry: (X_4)"));
}

TEST_CASE("scaling by 2 keeps symmetry, pair ranks and D intervals") {
  std::array<RMat, 5> s = reference_large_t5();
  for (auto& m : s) m *= Rational(2);
  const auto c = certify_large_t5(s);
  CHECK(c.ok());
  const auto& base = fixture_cert();
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(c.d.intervals[i].hi == base.d.intervals[i].hi);
    CHECK(c.d.intervals[i].lo == base.d.intervals[i].lo);
  }
}

TEST_CASE("relabeling permutes the witnesses and keeps the mu multiset") {
  const auto& base = fixture_cert();
  const std::array<int, 5> perm{3, 0, 4, 1, 2};  // new label k holds old element perm[k]
  std::array<RMat, 5> s;
  for (std::size_t k = 0; k < 5; ++k) s[k] = reference_large_t5()[static_cast<std::size_t>(perm[k])];
  const auto c = certify_large_t5(s);
  CHECK(c.ok());
  REQUIRE(c.scanned.size() == base.scanned.size());
  std::vector<bool> used(base.scanned.size(), false);
  for (const auto& w : c.scanned) {
    bool matched = false;
    for (std::size_t k = 0; k < base.scanned.size() && !matched; ++k) {
      if (!used[k] && same_root(w.mu, base.scanned[k].mu)) used[k] = matched = true;
    }
    CHECK(matched);
  }
}

TEST_CASE("random generic sets are rarely T5") {
  std::mt19937_64 rng(2024);
  int with_witness = 0;
  const int draws = 8;
  for (int t = 0; t < draws; ++t) {
    std::vector<RMat> set;
    for (int i = 0; i < 5; ++i) {
      const Rational a = testing::small_rational(rng, 50, 7), b = testing::small_rational(rng, 50, 7),
                     d = testing::small_rational(rng, 50, 7);
      set.push_back(RMat{a, -b, b, d});
    }
    try {
      if (!scan_orderings(set).empty()) ++with_witness;
    } catch (const CriterionError&) {
    }
  }
  CHECK(with_witness <= draws / 2);
}

TEST_CASE("perturbation stability") {
  const auto& c = fixture_cert();
  const auto zero = perturb_and_recertify(c, Rational(0), 2, 5);
  for (const auto& t : zero.trials) {
    CHECK(t.set == c.set);
    CHECK(t.ok());
  }
  const auto big = perturb_and_recertify(c, Rational(1000), 4, 5);
  CHECK(big.successes() < 4);
  // same seed, same draws
  const auto again = perturb_and_recertify(c, Rational(1000), 4, 5);
  for (std::size_t k = 0; k < 4; ++k) CHECK(again.trials[k].set == big.trials[k].set);
}
