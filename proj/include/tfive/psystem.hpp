#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tfive/algebraic.hpp"
#include "tfive/convexify.hpp"
#include "tfive/criterion.hpp"
#include "tfive/mat2.hpp"

namespace tfive {

class PsystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (v, u): specific volume and velocity.
struct State {
  double v = 0;
  double u = 0;
};

/// G(v, u) = [[v, -u], [u, -p(v)]]. Throws PsystemError outside p's domain.
DMat constitutive(const State& s, const PressureModel& p);
/// (v, u) = (e11, e21).
State state_of(const DMat& m);

struct ShockTriple {
  State left, right;
  double sigma = 0;
};

/// (u_R - u_L - sigma (v_R - v_L), p(v_R) - p(v_L) - sigma (u_R - u_L)).
std::pair<double, double> rh_residual(const ShockTriple& t, const PressureModel& p);

/// det(A - B) == 0, exactly.
bool is_rank_one_connected(const RMat& a, const RMat& b);

/// Exact RH solvability between the states read off two constitutive
/// matrices (v = e11, u = e21, p(v) = -e22). Returns a speed when one exists;
/// when the states coincide every speed works and 0 is returned.
std::optional<Rational> rh_speed(const RMat& left, const RMat& right);

/// lambda_1 = -sqrt(p'), lambda_2 = +sqrt(p').
double characteristic_speed(int family, double v, const PressureModel& p);

struct HugoniotSample {
  double s;       // v - v_L
  State state;
  double sigma;
  double lambda;  // lambda_k at the sample state
};

/// Shock curve S^k through `base`, sampled by v. Family 1 carries sigma < 0
/// and family 2 sigma > 0. Samples are ordered by |s|, the first one is the
/// base state (s = 0, sigma = lambda_k(v_L)).
struct HugoniotBranch {
  int family = 1;
  State base;
  std::vector<HugoniotSample> samples;
  bool truncated = false;  // the speed ratio went negative
  std::string note;
  double max_rh_residual = 0;
  double scale = 0;  // max |v|, |u|, |p| over the samples
};

/// Traces v from v_L towards `v_end` in `steps` equal steps.
HugoniotBranch hugoniot_trace(const State& base, int family, const PressureModel& p, double v_end, int steps);

/// Comparisons allow a slack of tol * max(|sigma|, 1) for round-off.
bool lax_check(const HugoniotBranch& b, std::size_t m, double tol = 1e-12);

struct LiuResult {
  bool ok = true;
  std::size_t compared = 0;   // samples between 0 and s_R
  std::size_t refined = 0;    // extra evaluations near near-equalities
  double resolution = 0;      // largest gap in s between compared samples
};
/// sigma(s_R) <= sigma(s) for the sampled s between 0 and s_R. Near
/// equalities are re-checked at 8 interior points of the adjacent gaps when
/// the pressure law is supplied.
LiuResult liu_check(const HugoniotBranch& b, std::size_t m, const PressureModel* p = nullptr,
                    double tol = 1e-12);

/// Slope of the interface {x = sigma t} carrying the rank-one jump C:
/// C = a (1, -sigma)^T, so sigma = -C_{k2} / C_{k1} for either row.
struct RationalSlope {
  bool vertical = false;  // first column zero
  bool consistent = true; // both rows give the same sigma
  std::optional<Rational> sigma;
};
RationalSlope wedge_slope(const RMat& c);

struct AlgebraicSlope {
  bool vertical = false;
  bool consistent = true;
  std::optional<AlgNum> sigma;
  double approx = 0;
};
AlgebraicSlope wedge_slope(const AMat& c, const RootField& f);

struct WedgeSlopes {
  AlgebraicSlope first;   // C = P - X_{o(1)}
  AlgebraicSlope last;    // C = P - X_{o(5)}
  std::optional<bool> first_below_last;  // exact sigma_1 < sigma_5, unset if either is vertical
};
WedgeSlopes wedge_slopes(const TNWitness& w);

}  // namespace tfive
