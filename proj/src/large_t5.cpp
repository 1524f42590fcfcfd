#include "tfive/large_t5.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <random>

namespace tfive {

std::vector<Ordering> representative_orderings() {
  std::vector<Ordering> out;
  Ordering tail{1, 2, 3, 4};
  do {
    Ordering o{0};
    o.insert(o.end(), tail.begin(), tail.end());
    out.push_back(std::move(o));
  } while (std::next_permutation(tail.begin(), tail.end()));
  return out;
}

std::vector<TNWitness> scan_orderings(std::span<const RMat> set,
                                      const std::optional<std::vector<Ordering>>& orderings) {
  const std::vector<Ordering> todo = orderings ? *orderings : representative_orderings();
  const PairDetMatrix a = pair_det_matrix(set);
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j)
      if (a(i, j) == 0)
        throw CriterionError("rank-one connection: det(X_" + std::to_string(i + 1) + " - X_" +
                             std::to_string(j + 1) + ") = 0");

  std::vector<std::future<CriterionResult>> jobs;
  jobs.reserve(todo.size());
  for (const auto& o : todo) {
    if (o.size() != set.size()) throw CriterionError("ordering length does not match the set");
    jobs.push_back(std::async(std::launch::async, [&set, o] {
      std::vector<RMat> tuple;
      for (int i : o) tuple.push_back(set[static_cast<std::size_t>(i)]);
      return solve_criterion(tuple, o);
    }));
  }
  std::vector<TNWitness> out;
  for (auto& j : jobs) {
    CriterionResult r = j.get();
    for (auto& w : r.witnesses) out.push_back(std::move(w));
  }
  return out;
}

std::string to_text(Independence s) {
  switch (s) {
    case Independence::independent:
      return "independent";
    case Independence::dependent:
      return "dependent";
    case Independence::inconclusive:
      return "inconclusive";
  }
  return "?";
}

bool same_root(const RootInterval& a, const RootInterval& b) {
  const RatPoly g = gcd(a.poly, b.poly);
  if (g.degree() < 1) return false;
  if (sign_at_root(g, a) != 0 || sign_at_root(g, b) != 0) return false;
  // g vanishes at both roots; each interval holds one root of g at most.
  const Rational lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
  if (lo > hi) return false;
  if (lo == hi) return sign(g(lo)) == 0;
  if (sign(g(lo)) == 0 || sign(g(hi)) == 0) return true;
  return count_roots(sturm_sequence(g), lo, hi) > 0;
}

namespace {

constexpr std::array<std::array<int, 3>, 4> kMinorRows{{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};

template <class S>
S det3(const std::array<std::array<S, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

std::vector<AMat> directions(const TNWitness& w, Pairing p) {
  return p == Pairing::element ? element_directions(w) : literal_directions(w);
}

}  // namespace

std::vector<IndexIndependence> check_independence(const std::array<const TNWitness*, 3>& w,
                                                  Pairing pairing) {
  const std::size_t n = w[0]->tuple.size();
  std::array<std::vector<AMat>, 3> dirs;
  for (int a = 0; a < 3; ++a) dirs[a] = directions(*w[a], pairing);
  const bool shared = same_root(w[0]->mu, w[1]->mu) && same_root(w[0]->mu, w[2]->mu);

  std::vector<IndexIndependence> out(n);
  for (std::size_t e = 0; e < n; ++e) out[e].element = static_cast<int>(e);

  if (shared) {
    const RootField f = w[0]->field();
    for (std::size_t e = 0; e < n; ++e) {
      out[e].method = "exact";
      out[e].status = Independence::dependent;
      std::array<std::array<AlgNum, 4>, 3> v;
      for (int a = 0; a < 3; ++a) v[a] = f.reduce(dirs[a][e]).flat();
      for (const auto& rows : kMinorRows) {
        std::array<std::array<AlgNum, 3>, 3> m;
        for (int r = 0; r < 3; ++r)
          for (int a = 0; a < 3; ++a) m[r][a] = v[a][rows[r]];
        if (!f.is_zero(f.reduce(det3(m)))) {
          out[e].status = Independence::independent;
          out[e].rows = rows;
          break;
        }
      }
    }
    return out;
  }

  std::vector<std::size_t> open(n);
  std::iota(open.begin(), open.end(), 0);
  for (auto& r : out) r.method = "interval";
  for (int bits = 64; bits <= 1024 && !open.empty(); bits *= 2) {
    std::array<RootField, 3> fields{w[0]->field(), w[1]->field(), w[2]->field()};
    for (int a = 0; a < 3; ++a) {
      const RootInterval& r = w[a]->mu;
      const Rational mag = std::max({abs(r.lo), abs(r.hi), Rational(1)});
      fields[a] = fields[a].refined(pow2(-bits) * mag);
    }
    std::vector<std::size_t> still;
    for (std::size_t e : open) {
      std::array<std::array<Interval, 4>, 3> v;
      for (int a = 0; a < 3; ++a) v[a] = fields[a].enclose(dirs[a][e]).flat();
      int zero_minors = 0;
      bool done = false;
      for (const auto& rows : kMinorRows) {
        std::array<std::array<Interval, 3>, 3> m;
        for (int r = 0; r < 3; ++r)
          for (int a = 0; a < 3; ++a) m[r][a] = v[a][rows[r]];
        const Interval d = det3(m);
        if (!d.contains_zero()) {
          out[e].status = Independence::independent;
          out[e].rows = rows;
          done = true;
          break;
        }
        if (d.is_point()) ++zero_minors;
      }
      if (done) continue;
      if (zero_minors == 4) {
        out[e].status = Independence::dependent;
        continue;
      }
      still.push_back(e);
    }
    open = std::move(still);
  }
  return out;
}

Rational DInterval::representative() const {
  if (lo) return midpoint(*lo, hi);
  return hi - std::max(abs(hi), Rational(1));
}

DFeasibility d_feasibility(std::span<const Rational> x, std::span<const Rational> h) {
  if (x.size() != h.size()) throw std::invalid_argument("d_feasibility: size mismatch");
  DFeasibility out;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (x[i] == x[j]) {
        out.failure = "D-feasibility: x_" + std::to_string(i + 1) + " = x_" + std::to_string(j + 1) +
                      " makes the strict inequalities infeasible";
        return out;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    DInterval d;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Rational slope = (h[j] - h[i]) / (x[j] - x[i]);
      if (x[j] > x[i]) {
        d.hi = std::min(d.hi, slope);
      } else if (!d.lo || slope > *d.lo) {
        d.lo = slope;
      }
    }
    if (d.empty() && out.failure.empty())
      out.failure = "D-feasibility: interval for D_" + std::to_string(i + 1) + " is empty";
    out.intervals.push_back(d);
  }
  return out;
}

DFeasibility d_feasibility(std::span<const RMat> set) {
  std::vector<Rational> x, h;
  for (const auto& m : set) {
    x.push_back(m.e11);
    h.push_back(m.e22);
  }
  return d_feasibility(x, h);
}

namespace {

std::string element_list(const Ordering& o) { return "(" + to_text(o) + ")"; }

int count_independent(const std::vector<IndexIndependence>& v) {
  int k = 0;
  for (const auto& r : v) k += r.status == Independence::independent;
  return k;
}

}  // namespace

LargeT5Certificate certify_large_t5(const std::array<RMat, 5>& set) {
  LargeT5Certificate c;
  c.set = set;
  for (std::size_t i = 0; i < 5; ++i) {
    c.symmetry_residual[i] = set[i].e21 + set[i].e12;
    if (c.symmetry_residual[i] != 0)
      c.failures.push_back("symmetry: (X_" + std::to_string(i + 1) + ")_21 + (X_" + std::to_string(i + 1) +
                           ")_12 = " + to_text(c.symmetry_residual[i]));
  }
  bool pair_ok = true;
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) {
      const Rational d = det2(set[static_cast<std::size_t>(i)] - set[static_cast<std::size_t>(j)]);
      c.pair_dets.push_back({i, j, d});
      if (d == 0) {
        pair_ok = false;
        c.failures.push_back("pair-rank: det(X_" + std::to_string(i + 1) + " - X_" + std::to_string(j + 1) +
                             ") = 0, rank-one connected");
      }
    }
  }
  c.d = d_feasibility(set);
  if (!c.d.feasible()) c.failures.push_back(c.d.failure);
  if (!pair_ok) return c;

  c.scanned = scan_orderings(set);
  std::vector<std::size_t> firsts;  // first witness of each distinct ordering
  for (std::size_t k = 0; k < c.scanned.size(); ++k)
    if (k == 0 || c.scanned[k].ordering != c.scanned[k - 1].ordering) firsts.push_back(k);
  if (firsts.size() < 3) {
    c.failures.push_back("large-T5: only " + std::to_string(firsts.size()) +
                         " T5 ordering(s) found, need 3");
    return c;
  }

  // First triple of distinct orderings with every element independent.
  std::vector<IndexIndependence> best;
  std::array<std::size_t, 3> best_idx{};
  for (std::size_t a = 0; a < c.scanned.size(); ++a) {
    for (std::size_t b = a + 1; b < c.scanned.size(); ++b) {
      if (c.scanned[b].ordering == c.scanned[a].ordering) continue;
      for (std::size_t d = b + 1; d < c.scanned.size(); ++d) {
        if (c.scanned[d].ordering == c.scanned[a].ordering ||
            c.scanned[d].ordering == c.scanned[b].ordering)
          continue;
        auto ind = check_independence({&c.scanned[a], &c.scanned[b], &c.scanned[d]});
        if (best.empty() || count_independent(ind) > count_independent(best)) {
          best = std::move(ind);
          best_idx = {a, b, d};
        }
        if (count_independent(best) == 5) goto chosen;
      }
    }
  }
chosen:
  for (std::size_t k : best_idx) c.witnesses.push_back(c.scanned[k]);
  c.independence = best;
  c.literal_independence =
      check_independence({&c.witnesses[0], &c.witnesses[1], &c.witnesses[2]}, Pairing::literal);
  for (const auto& r : c.independence) {
    if (r.status != Independence::independent)
      c.failures.push_back("independence: directions of element " + std::to_string(r.element + 1) +
                           " are " + to_text(r.status) + " for orderings " +
                           element_list(c.witnesses[0].ordering) + " " +
                           element_list(c.witnesses[1].ordering) + " " +
                           element_list(c.witnesses[2].ordering));
  }
  for (const auto& w : c.witnesses) {
    const WitnessCheck chk = verify_witness(w);
    if (!chk.ok) c.failures.push_back("witness " + element_list(w.ordering) + ": " + chk.failure);
  }
  return c;
}

WitnessCheck verify_certificate(const LargeT5Certificate& cert) {
  for (const auto& w : cert.witnesses) {
    const WitnessCheck chk = verify_witness(w);
    if (!chk.ok) return {false, "stored witness " + to_text(w.ordering) + ": " + chk.failure};
    if (!std::equal(w.tuple.begin(), w.tuple.end(), w.ordering.begin(), [&](const RMat& x, int i) {
          return x == cert.set[static_cast<std::size_t>(i)];
        }))
      return {false, "stored witness tuple does not match the set"};
  }
  const LargeT5Certificate again = certify_large_t5(cert.set);
  if (again.failures != cert.failures) return {false, "re-run verdicts differ"};
  if (again.witnesses.size() != cert.witnesses.size()) return {false, "re-run witness count differs"};
  for (std::size_t k = 0; k < again.witnesses.size(); ++k)
    if (again.witnesses[k].ordering != cert.witnesses[k].ordering)
      return {false, "re-run certifying orderings differ"};
  return {};
}

int StabilityReport::successes() const {
  return static_cast<int>(std::count_if(trials.begin(), trials.end(),
                                        [](const PerturbationTrial& t) { return t.ok(); }));
}

namespace {

// Uniform rational in [-radius, radius] on a 2^30 grid, from raw engine bits.
Rational draw(std::mt19937_64& rng, const Rational& radius) {
  const long k = static_cast<long>(rng() >> 33) - (1L << 30);
  return radius * ratio(k, 1L << 30);
}

PerturbationTrial run_trial(const LargeT5Certificate& cert, const Rational& radius,
                            std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  PerturbationTrial t;
  t.set = cert.set;
  for (auto& m : t.set) {
    const Rational d11 = draw(rng, radius), d21 = draw(rng, radius), d22 = draw(rng, radius);
    m.e11 += d11;
    m.e21 += d21;
    m.e12 -= d21;
    m.e22 += d22;
  }
  t.pair_rank = true;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j)
      if (det2(t.set[i] - t.set[j]) == 0) t.pair_rank = false;
  t.d_feasible = d_feasibility(t.set).feasible();
  if (!t.pair_rank) {
    t.note = "rank-one pair after perturbation";
    return t;
  }
  std::vector<TNWitness> kept;
  for (const auto& w : cert.witnesses) {
    std::vector<RMat> tuple;
    for (int i : w.ordering) tuple.push_back(t.set[static_cast<std::size_t>(i)]);
    CriterionResult r = solve_criterion(tuple, w.ordering);
    if (r.witnesses.empty()) {
      t.note += "ordering (" + to_text(w.ordering) + ") lost; ";
      continue;
    }
    // Follow the root nearest the original one.
    const double mu0 = w.mu.approx();
    auto it = std::min_element(r.witnesses.begin(), r.witnesses.end(), [&](const auto& x, const auto& y) {
      return std::abs(x.mu.approx() - mu0) < std::abs(y.mu.approx() - mu0);
    });
    kept.push_back(std::move(*it));
  }
  t.witnesses_kept = static_cast<int>(kept.size());
  if (kept.size() == 3) {
    const auto ind = check_independence({&kept[0], &kept[1], &kept[2]});
    t.independent = count_independent(ind) == 5;
  }
  return t;
}

}  // namespace

StabilityReport perturb_and_recertify(const LargeT5Certificate& cert, const Rational& radius,
                                      int trials, std::uint64_t seed) {
  if (cert.witnesses.size() != 3) throw std::invalid_argument("certificate has no certifying triple");
  StabilityReport rep;
  rep.radius = radius;
  rep.seed = seed;
  std::vector<std::future<PerturbationTrial>> jobs;
  for (int k = 0; k < trials; ++k)
    jobs.push_back(std::async(std::launch::async, run_trial, std::cref(cert), std::cref(radius), seed, k));
  for (auto& j : jobs) rep.trials.push_back(j.get());
  return rep;
}

}  // namespace tfive
