#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tfive/criterion.hpp"

namespace tfive {

/// The 24 orderings of {0..4} with element 0 in front. Every cyclic class of
/// orderings has exactly one such representative.
std::vector<Ordering> representative_orderings();

/// solve_criterion on each ordering of `set` (default: the 24
/// representatives). Witnesses come back grouped by ordering, in input order.
/// Throws CriterionError if some pair of the set is rank-one connected.
std::vector<TNWitness> scan_orderings(std::span<const RMat> set,
                                      const std::optional<std::vector<Ordering>>& orderings = {});

enum class Independence { independent, dependent, inconclusive };
std::string to_text(Independence s);

struct IndexIndependence {
  int element = 0;  // 0-based set element
  Independence status = Independence::inconclusive;
  std::array<int, 3> rows{};  // the 3x3 minor certified nonzero (rows of the 4-vectors)
  std::string method;         // "exact" (shared root field) or "interval"
};

/// Rank-one direction pairing used for the per-element 4-vectors.
enum class Pairing { element, literal };

/// For each set element, certifies that the three rank-one directions
/// flattened to R^4 span a 3-dimensional space, via a nonzero 3x3 minor.
/// Interval enclosures are refined until a minor excludes zero; when all
/// three witnesses live at one common root the minors are decided exactly.
std::vector<IndexIndependence> check_independence(const std::array<const TNWitness*, 3>& w,
                                                  Pairing pairing = Pairing::element);

/// True when the two isolating intervals pin down the same real number.
bool same_root(const RootInterval& a, const RootInterval& b);

/// Open interval (lo, hi) for a scalar D_i; lo absent means -infinity.
struct DInterval {
  std::optional<Rational> lo;
  Rational hi{0};

  bool empty() const { return lo && *lo >= hi; }
  bool contains(const Rational& d) const { return (!lo || *lo < d) && d < hi; }
  /// A strictly interior point: the midpoint, or hi - max(|hi|, 1) when
  /// unbounded below.
  Rational representative() const;
};

struct DFeasibility {
  std::vector<DInterval> intervals;
  std::string failure;  // empty when every interval is nonempty

  bool feasible() const { return failure.empty(); }
};

/// Intersects the half-lines h_j - h_i > D_i (x_j - x_i), j != i, with
/// D_i < 0.
DFeasibility d_feasibility(std::span<const Rational> x, std::span<const Rational> h);
/// x_i = (X_i)_11, h_i = (X_i)_22.
DFeasibility d_feasibility(std::span<const RMat> set);

struct PairDet {
  int i = 0, j = 0;
  Rational det;
};

struct LargeT5Certificate {
  std::array<RMat, 5> set;
  std::vector<TNWitness> scanned;                // every witness found by the scan
  std::vector<TNWitness> witnesses;              // the certifying triple
  std::vector<IndexIndependence> independence;   // element pairing, certified
  std::vector<IndexIndependence> literal_independence;  // reported only
  DFeasibility d;
  std::vector<PairDet> pair_dets;                // all 10 pairs
  std::array<Rational, 5> symmetry_residual;     // (X_i)_21 + (X_i)_12
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

/// Runs every large-T5 check on `set`. Failures are collected, each naming
/// the constraint and the (1-based) elements involved.
LargeT5Certificate certify_large_t5(const std::array<RMat, 5>& set);

/// Re-runs the checks from cert.set alone and compares the verdicts and the
/// certifying orderings with the stored ones.
WitnessCheck verify_certificate(const LargeT5Certificate& cert);

struct PerturbationTrial {
  std::array<RMat, 5> set;
  int witnesses_kept = 0;  // of the certificate's three orderings
  bool independent = false;
  bool d_feasible = false;
  bool pair_rank = false;
  std::string note;

  bool ok() const { return witnesses_kept == 3 && independent && d_feasible && pair_rank; }
};

struct StabilityReport {
  Rational radius;
  std::uint64_t seed = 0;
  std::vector<PerturbationTrial> trials;

  int successes() const;
};

/// Symmetric rational perturbations with sup-norm <= radius, each re-checked
/// for the three certifying orderings, independence, D-feasibility and pair
/// ranks. Trial k draws from a generator seeded with (seed, k).
StabilityReport perturb_and_recertify(const LargeT5Certificate& cert, const Rational& radius,
                                      int trials, std::uint64_t seed);

}  // namespace tfive
