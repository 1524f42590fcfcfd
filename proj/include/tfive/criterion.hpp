#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfive/algebraic.hpp"
#include "tfive/mat2.hpp"
#include "tfive/poly.hpp"
#include "tfive/roots.hpp"

namespace tfive {

/// ordering[k] is the (0-based) set element placed at position k.
using Ordering = std::vector<int>;

Ordering identity_ordering(std::size_t n);
std::string to_text(const Ordering& o);  // 1-based, e.g. "1 3 2 4 5"

class CriterionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A_ij = det(X_i - X_j): symmetric with zero diagonal for 2x2 input.
struct PairDetMatrix {
  std::size_t n = 0;
  std::vector<Rational> entries;  // row-major

  const Rational& operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
};

PairDetMatrix pair_det_matrix(std::span<const RMat> tuple);

using PolyMatrix = std::vector<std::vector<RatPoly>>;

/// A^mu: A_ij above the diagonal, mu * A_ij below it.
PolyMatrix a_mu_matrix(const PairDetMatrix& a);
RatPoly poly_det(const PolyMatrix& m);
/// adj(M) with M * adj(M) = det(M) I; its columns are right null vectors of
/// M at a simple root of det(M).
PolyMatrix adjugate(const PolyMatrix& m);

/// det(A^mu) expanded in mu.
RatPoly mu_polynomial(const PairDetMatrix& a);

/// Certificate that an ordered tuple is a T_N configuration.
///
/// Positions are 0-based here. P_points[k] = P + C_0 + ... + C_{k-1} and
/// tuple[k] = P_points[k] + kappa[k] * C[k]. All derived values are elements
/// of Q(mu) at the isolated root `mu`.
struct TNWitness {
  Ordering ordering;
  std::vector<RMat> tuple;
  RootInterval mu;
  /// Null vector of A^mu, one polynomial per position, positive at mu.
  std::vector<RatPoly> lambda;
  std::vector<AMat> P_points;
  std::vector<AMat> C;
  std::vector<AlgNum> kappa;

  RootField field() const { return RootField(mu); }
  const AMat& P() const { return P_points.front(); }
  /// lambda_k / lambda_0, the stored normalisation.
  std::vector<AlgNum> lambda_normalized() const;
};

struct RejectedRoot {
  std::optional<RootInterval> mu;
  std::string reason;
  bool degenerate = false;
};

struct CriterionResult {
  std::vector<TNWitness> witnesses;
  std::vector<RejectedRoot> rejected;

  bool has_degenerate() const;
};

/// Decides the T_N property of `tuple` (already ordered) via det(A^mu) = 0,
/// mu > 1, lambda > 0 and recovers (P, C_i, kappa_i) for every certified root.
/// `ordering` is recorded in the witnesses. Throws CriterionError when two
/// entries are rank-one connected (or equal).
CriterionResult solve_criterion(std::span<const RMat> tuple, const Ordering& ordering);
CriterionResult solve_criterion(std::span<const RMat> tuple);

struct WitnessCheck {
  bool ok = true;
  std::string failure;
};

/// Re-derives every witness invariant from tuple, mu and lambda alone.
WitnessCheck verify_witness(const TNWitness& w);

/// rank(P_k - X_k) = 1 and kappa_k > 1 for every position, from stored fields.
bool check_hull_points(const TNWitness& w);

/// Rank-one arm attached to each set element i: P_k - X_i where
/// ordering[k] = i. Indexed by element.
std::vector<AMat> element_directions(const TNWitness& w);
/// The literal index pairing P_i - X_i (position i, element i).
std::vector<AMat> literal_directions(const TNWitness& w);

}  // namespace tfive
