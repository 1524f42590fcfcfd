#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tfive/mat2.hpp"

namespace tfive {

/// Fixed data of the candidate search: X_i = C_1 + ... + C_{i-1} + kappa_i C_i
/// (P = 0) with C_i = a_i n_i^T, plus one scalar slope D_i per node.
struct SearchProblem {
  std::array<double, 5> kappa{2, 2, 2, 2, 2};
};

struct SearchConfig {
  double box = 1.0;        // a_i, n_i start uniform in [-box, box]
  double d_box = 4.0;      // D_i start uniform in [-d_box, 0]
  double tol_eq = 1e-12;   // infinity norm of the equality residuals
  double tol_ineq = 1e-6;  // every strict inequality needs slack >= tol_ineq
  double det_margin = 1e-4;  // |det(X_i - X_j)| >= det_margin * scale^2
  int restarts = 200;
  int max_outer = 30;
  int max_inner = 200;
};

/// Unknown layout: for i = 0..4, z[4i..4i+3] = (a_i, n_i); z[20 + i] = D_i.
constexpr std::size_t kUnknowns = 25;

struct ResidualRecord {
  std::array<double, 4> sum_c{};     // entries of sum a_i n_i^T
  std::array<double, 5> symmetry{};  // (X_i)_21 + (X_i)_12
  std::array<double, 5> norm_a{};    // |a_i|^2 - 1
  std::vector<double> convexity;     // h_j - h_i - D_i (x_j - x_i), ordered pairs i != j
  std::array<double, 5> d_sign{};    // -D_i
  std::vector<double> det_margin;    // |det(X_i - X_j)| / scale^2, i < j
  double scale = 0;                  // max |entry| over the X_i

  double eq_norm() const;     // infinity norm of sum_c, symmetry and norm_a
  double min_slack() const;   // min over convexity and d_sign
  double min_det() const;
};

struct SearchResult {
  std::vector<double> z;
  ResidualRecord residuals;
  bool feasible = false;
  int restart = -1;     // index of the returned attempt
  int restarts_tried = 0;
  int iterations = 0;   // inner iterations of the returned attempt
  std::uint64_t seed = 0;
  std::string note;
};

std::array<DMat, 5> factors_c(std::span<const double> z);
std::array<DMat, 5> tuple_from_unknowns(const SearchProblem& p, std::span<const double> z);

ResidualRecord residuals(const SearchProblem& p, std::span<const double> z);

/// Residuals of an arbitrary float candidate. Without factors the sum and
/// normalisation fields are zero.
ResidualRecord residual_report(const std::array<DMat, 5>& x, std::span<const double> d,
                               const std::optional<std::array<DMat, 5>>& c = std::nullopt);

/// Multistart search. Attempts run in restart order; the first feasible one
/// that `accept` also approves is returned. Restart k draws its start from a
/// generator seeded with (seed, k). If nothing qualifies the best attempt
/// (smallest violation) comes back with feasible = false. With tol_eq = inf
/// the first start point is returned unsolved and flagged infeasible.
SearchResult solve(const SearchProblem& p, const SearchConfig& cfg, std::uint64_t seed,
                   const std::function<bool(const SearchResult&)>& accept = {});

enum class Promotion { dyadic, continued_fraction };

/// Exact candidate set from the float tuple. Dyadic mode is the exact binary
/// value of each double; continued-fraction mode takes the best approximation
/// with denominator <= 2^precision. (X_i)_12 is set to -(X_i)_21.
std::array<RMat, 5> rationalize(const SearchProblem& p, const SearchResult& r,
                                Promotion mode = Promotion::dyadic, int precision = 64);
std::array<RMat, 5> rationalize(const std::array<DMat, 5>& x, Promotion mode = Promotion::dyadic,
                                int precision = 64);

}  // namespace tfive
