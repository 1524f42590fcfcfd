// Acceptance run: one PASS/FAIL line per criterion, sub-check details
// indented below it. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>

#include "synthetic.hpp"
#include "tfive/convexify.hpp"
#include "tfive/criterion.hpp"
#include "tfive/fixture.hpp"
#include "tfive/large_t5.hpp"
#include "tfive/psystem.hpp"
#include "tfive/report.hpp"
#include "tfive/search.hpp"

using namespace tfive;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
  int id;
  std::string name;
  std::vector<std::pair<bool, std::string>> checks;

  void check(bool ok, const std::string& what) { checks.emplace_back(ok, what); }
  bool ok() const {
    for (const auto& c : checks)
      if (!c.first) return false;
    return !checks.empty();
  }
  void print() const {
    std::printf("criterion %d (%s): %s\n", id, name.c_str(), ok() ? "PASS" : "FAIL");
    for (const auto& [pass, what] : checks) std::printf("    [%s] %s\n", pass ? "ok" : "FAIL", what.c_str());
    std::fflush(stdout);
  }
};

std::string fmt(const char* f, double a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt2(const char* f, double a, double b) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Criterion fixture_certification() {
  Criterion c{1, "fixture certification", {}};
  const auto t0 = Clock::now();
  const auto& set = reference_large_t5();
  const LargeT5Certificate cert = certify_large_t5(set);

  bool sym = true;
  for (const auto& s : cert.symmetry_residual) sym = sym && s == 0;
  c.check(sym, "symmetry (X_i)_21 + (X_i)_12 = 0 exactly for all 5");

  int nonzero = 0;
  for (const auto& p : cert.pair_dets) nonzero += p.det != 0;
  c.check(cert.pair_dets.size() == 10 && nonzero == 10,
          std::to_string(nonzero) + "/10 pairwise determinants nonzero (exact)");

  int inside = 0;
  for (const auto& iv : cert.d.intervals) inside += !iv.empty() && iv.hi <= 0;
  c.check(cert.d.intervals.size() == 5 && inside == 5,
          std::to_string(inside) + "/5 D-feasibility intervals nonempty within (-inf, 0)");

  std::set<Ordering> distinct;
  bool witnesses_ok = true;
  for (const auto& w : cert.witnesses) {
    distinct.insert(w.ordering);
    const RootField f = w.field();
    witnesses_ok = witnesses_ok && f.sign(AlgNum::mu() - AlgNum(Rational(1))) > 0 && verify_witness(w).ok;
    for (const auto& l : w.lambda) witnesses_ok = witnesses_ok && f.sign(AlgNum(l)) > 0;
  }
  c.check(distinct.size() >= 3 && witnesses_ok,
          std::to_string(distinct.size()) + " distinct certifying orderings with mu > 1 and lambda > 0 (" +
              std::to_string(cert.scanned.size()) + " T5 orderings found in the scan)");

  int indep = 0;
  for (const auto& r : cert.independence) indep += r.status == Independence::independent;
  c.check(cert.independence.size() == 5 && indep == 5,
          std::to_string(indep) + "/5 elements with independent rank-one directions");
  c.check(cert.ok(), cert.ok() ? "certificate has no failures" : "certificate failures: " + cert.failures.front());

  const CriterionResult paper = solve_criterion(std::span<const RMat>(set.data(), set.size()));
  if (paper.witnesses.empty()) {
    c.check(false, "no witness for the ordering 1 2 3 4 5");
  } else {
    const WedgeSlopes w = wedge_slopes(paper.witnesses.front());
    const bool below = w.first_below_last && *w.first_below_last;
    c.check(below, fmt2("sigma_1 < sigma_5 for ordering 1 2 3 4 5 (sigma = -C_k2/C_k1): sigma_1 = %.6f, sigma_5 = %.6f",
                        w.first.approx, w.last.approx));
  }
  const double secs = seconds_since(t0);
  c.check(secs <= 300, fmt("runtime %.2f s <= 300 s", secs));
  return c;
}

Criterion criterion_round_trip() {
  Criterion c{2, "criterion round trip", {}};
  std::mt19937_64 rng(20240602);
  int recovered = 0, degenerate = 0, silent = 0, redrawn = 0;
  std::map<std::string, int> reasons;
  const int draws = 200;
  for (int trial = 0; trial < draws; ++trial) {
    const auto s = tfive::testing::random_tn_strict(rng, 5, trial % 2 == 0, &redrawn);
    try {
      const CriterionResult res = solve_criterion(s.tuple);
      bool hit = false;
      for (const auto& w : res.witnesses) {
        if (!verify_witness(w).ok) continue;
        const RootField f = w.field();
        bool same = f.is_zero(f.reduce(w.P() - embed(s.P)));
        for (std::size_t k = 0; k < 5 && same; ++k)
          same = f.is_zero(f.reduce(w.C[k] - embed(s.C[k]))) && f.is_zero(f.reduce(w.kappa[k] - AlgNum(s.kappa[k])));
        hit = hit || same;
      }
      if (hit) {
        ++recovered;
      } else if (res.has_degenerate()) {
        ++degenerate;
        for (const auto& r : res.rejected)
          if (r.degenerate) ++reasons[r.reason];
      } else {
        ++silent;
      }
    } catch (const CriterionError& e) {
      ++degenerate;
      ++reasons[e.what()];
    }
  }
  c.check(recovered * 100 >= 95 * draws, std::to_string(recovered) + "/" + std::to_string(draws) +
                                             " synthetic T5s reconstructed exactly (need >= 95%)");
  c.check(silent == 0, std::to_string(silent) + " silent failures, " + std::to_string(degenerate) +
                           " flagged degenerate");
  c.check(true, std::to_string(redrawn) +
                    " parameter draws had a rank-one connected pair (not a T5 by definition) and were redrawn");
  for (const auto& [r, n] : reasons) c.check(!r.empty(), "degenerate (" + std::to_string(n) + "): " + r);
  return c;
}

Criterion search_reproducibility() {
  Criterion c{3, "search reproducibility", {}};
  const auto t0 = Clock::now();
  RunConfig cfg;
  Candidate found;
  const StageResult r = run_search(cfg, &found);
  const bool feasible = r.exit_code == exit_ok;
  c.check(feasible, "seed " + std::to_string(cfg.seed) + ", " + std::to_string(cfg.search.restarts) +
                        " restarts max: certified candidate at restart " +
                        std::to_string(r.report["restart"].get<int>()) + " after " +
                        std::to_string(r.report["restarts_tried"].get<int>()) + " tried");
  if (feasible) {
    // independent re-certification of the promoted candidate
    const LargeT5Certificate cert = certify_large_t5(found.set);
    c.check(cert.ok(), cert.ok() ? "exact re-certification passes" : "re-certification: " + cert.failures.front());
  }
  const double secs = seconds_since(t0);
  c.check(secs <= 1800, fmt("runtime %.2f s <= 1800 s", secs));
  return c;
}

Criterion convexity_suite(std::optional<PressureLaw>& law_out) {
  Criterion c{4, "convexity suite", {}};
  const PressureLaw law = pressure_from_set(reference_large_t5());
  const double scale = law.scale();
  const NodeCheck nc = check_nodes(law);
  c.check(nc.max_value_error <= 1e-8 * scale,
          fmt2("node value error %.3e <= %.3e", nc.max_value_error, 1e-8 * scale));
  c.check(nc.max_slope_error <= 1e-6 * scale,
          fmt2("node gradient error %.3e <= %.3e", nc.max_slope_error, 1e-6 * scale));
  const PressureGridCheck g = check_grid(law);
  c.check(law.table().size() == 10000, std::to_string(law.table().size()) + " grid points on hull +- 20%");
  c.check(g.min_dp > 0 && g.min_dp_exact > 0, fmt2("p' > 0: min finite-difference %.4f, min closed-form %.4f", g.min_dp, g.min_dp_exact));
  c.check(g.max_d2p < 0 && g.max_d2p_exact < 0,
          fmt2("p'' < 0: max finite-difference %.4f, max closed-form %.4f", g.max_d2p, g.max_d2p_exact));
  const double lo = law.grid_lo(), hi = law.grid_hi();
  const double eps0 = law.interpolant().eps0();
  const auto sd = second_differences(law.interpolant(), std::span<const double>(&lo, 1),
                                     std::span<const double>(&hi, 1), 1e-4 * scale, 1e-2 * scale, 1000, eps0,
                                     kDefaultSeed);
  c.check(sd.samples == 1000 && sd.below == 0,
          fmt2("1000 second differences >= eps0 |v|^2 h^2: min quotient %.4f vs eps0 %.4f", sd.min_quotient, eps0));
  law_out.emplace(law);
  return c;
}

Criterion shock_suite(const PressureLaw& law) {
  Criterion c{5, "shock suite", {}};
  const auto& set = reference_large_t5();
  int connected = 0, speeds = 0;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      connected += is_rank_one_connected(set[i], set[j]);
      speeds += rh_speed(set[i], set[j]).has_value();
    }
  c.check(connected == 0 && speeds == 0, "10/10 pairs not rank-one connected and admit no RH speed (exact)");

  const int samples = 1000;
  double worst_rh = 0;
  bool rh_ok = true;
  for (int family = 1; family <= 2; ++family) {
    int lax_good = 0, liu_good = 0, lax_bad = 0, total = 0;
    double resolution = 0;
    for (std::size_t node = 0; node < 5; ++node) {
      const State base = state_of(to_double(set[node]));
      const double good_end = family == 1 ? law.grid_lo() : law.grid_hi();
      const double bad_end = family == 1 ? law.grid_hi() : law.grid_lo();
      const HugoniotBranch good = hugoniot_trace(base, family, law, good_end, samples);
      const HugoniotBranch bad = hugoniot_trace(base, family, law, bad_end, samples);
      for (const auto* b : {&good, &bad}) {
        worst_rh = std::max(worst_rh, b->max_rh_residual / b->scale);
        rh_ok = rh_ok && !b->truncated && b->max_rh_residual <= 1e-8 * b->scale;
      }
      for (std::size_t m = 1; m < good.samples.size(); ++m) {
        lax_good += lax_check(good, m);
        const LiuResult lr = liu_check(good, m, &law);
        liu_good += lr.ok;
        resolution = std::max(resolution, lr.resolution);
      }
      for (std::size_t m = 1; m < bad.samples.size(); ++m) lax_bad += lax_check(bad, m);
      total += samples;
    }
    const std::string fam = "family " + std::to_string(family);
    c.check(lax_good == total && liu_good == total,
            fam + " admissible side: Lax " + std::to_string(lax_good) + "/" + std::to_string(total) + ", Liu " +
                std::to_string(liu_good) + "/" + std::to_string(total) + " (5 base nodes x 1000 s_R" +
                fmt(", verified at resolution %.3e)", resolution));
    c.check(lax_bad == 0, fam + " opposite side: Lax holds at " + std::to_string(lax_bad) + "/" +
                              std::to_string(total) + " samples (need 0)");
  }
  c.check(rh_ok, fmt("RH residual / scale along all branches: max %.3e <= 1e-8", worst_rh));
  return c;
}

Criterion stability_suite() {
  Criterion c{6, "stability suite", {}};
  const LargeT5Certificate cert = certify_large_t5(reference_large_t5());
  if (!cert.ok()) {
    c.check(false, "reference certificate failed");
    return c;
  }
  const Rational radius = Rational(1) / Rational(1000000000);
  const StabilityReport s = perturb_and_recertify(cert, radius, 20, kDefaultSeed);
  c.check(s.successes() == 20, std::to_string(s.successes()) +
                                   "/20 symmetric perturbations at radius 1e-9 keep all three orderings certified");
  return c;
}

}  // namespace

int main() {
  std::vector<Criterion> all;
  auto run = [&](Criterion crit) {
    crit.print();
    all.push_back(std::move(crit));
  };
  run(fixture_certification());
  run(criterion_round_trip());
  run(search_reproducibility());
  std::optional<PressureLaw> law;
  run(convexity_suite(law));
  run(shock_suite(*law));
  run(stability_suite());
  int passed = 0;
  for (const auto& c : all) passed += c.ok();
  std::printf("acceptance: %d/%zu criteria pass\n", passed, all.size());
  return passed == static_cast<int>(all.size()) ? 0 : 1;
}
