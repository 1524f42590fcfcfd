#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tfive/mat2.hpp"
#include "tfive/rational.hpp"

namespace tfive {

class ConvexifyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hermite-type data for a strictly convex interpolant: values h_i and
/// gradients D_i at nodes x_i in R^n.
struct InterpolationData {
  std::size_t dim = 1;
  std::vector<std::vector<Rational>> x;
  std::vector<Rational> h;
  std::vector<std::vector<Rational>> d;

  std::size_t size() const { return h.size(); }
  /// max |x_i component| and |h_i| over all nodes.
  double scale() const;
};

InterpolationData data_1d(std::span<const Rational> x, std::span<const Rational> h,
                          std::span<const Rational> d);

struct EpsilonChoice {
  Rational eps_star;  // min over i != j of (h_i - h_j - D_j (x_i - x_j)) / |x_i - x_j|^2
  Rational eps0;      // eps_star / 2
  std::size_t i = 0, j = 0;  // pair attaining eps_star
};

/// Exact. Throws ConvexifyError when two nodes coincide or a strict
/// inequality fails (naming the pair, 1-based).
EpsilonChoice epsilon0_max(const InterpolationData& data);

/// Radial bump (1 - |y/delta|^2)^4 normalised to unit mass.
struct Mollifier {
  static constexpr int k = 4;
  std::size_t dim = 1;
  double delta = 0;

  double operator()(std::span<const double> y) const;
  double operator()(double y) const;  // dim = 1
  /// E|y|^2 = delta^2 n / (n + 2k + 2).
  double second_moment() const;
  /// Rational second moment for rational delta.
  static Rational second_moment(std::size_t dim, const Rational& delta);
};

/// Largest delta for which every node's delta-ball lies in the region where
/// its own paraboloid attains the max, given eps0 (exact, affine gaps).
Rational delta_max(const InterpolationData& data, const Rational& eps0);

/// eta = m_delta * eta_0 with eta_0(x) = max_i {ht_i + D_i.(x - x_i) + eps0 |x - x_i|^2}
/// and ht_i = h_i - eps0 E|y|^2, so that eta(x_i) = h_i and D eta(x_i) = D_i.
class ConvexInterpolant {
 public:
  ConvexInterpolant(const InterpolationData& data, const Rational& eps0, const Rational& delta,
                    double abs_tol = 0);

  std::size_t dim() const { return dim_; }
  double eps0() const { return eps0_; }
  double delta() const { return moll_.delta; }
  const std::vector<Rational>& adjusted_values() const { return htilde_; }
  double abs_tol() const { return abs_tol_; }

  /// eta_0, the unmollified max of paraboloids.
  double eta0(std::span<const double> x) const;
  double value(std::span<const double> x) const;
  std::vector<double> gradient(std::span<const double> x) const;

  // 1-D closed forms.
  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  /// Same value by adaptive quadrature of m * eta_0; the 1-D cross-check.
  double value_by_quadrature(double x) const;

 private:
  struct Line {
    double slope;
    double intercept;
  };
  struct Piece {
    double lo, hi;  // active range of line `idx` in the upper envelope
    std::size_t idx;
  };

  double lines_max(std::span<const double> x) const;
  double smoothed_lines(double x) const;
  double smoothed_slope(double x) const;
  // integral of m(y) times the active affine part at x - y (comp < 0) or
  // its slope component comp
  double ball_average(std::span<const double> x, int comp) const;

  std::size_t dim_;
  double eps0_;
  Mollifier moll_;
  double abs_tol_;
  std::vector<Rational> htilde_;
  // eta_0(x) = eps0 |x|^2 + max_i (c_i + g_i . x)
  std::vector<double> c_;
  std::vector<std::vector<double>> g_;
  std::vector<Line> lines_;   // 1-D
  std::vector<Piece> pieces_; // 1-D upper envelope, ascending
};

/// min over sampled (x0, v, h) of the centred second difference divided by
/// |v|^2 h^2. x0 uniform in the box, v a random unit vector, h uniform in
/// [h_lo, h_hi].
struct SecondDifferenceReport {
  double min_quotient = 0;
  int samples = 0;
  int below = 0;  // samples under the threshold
};
SecondDifferenceReport second_differences(const ConvexInterpolant& eta, std::span<const double> box_lo,
                                          std::span<const double> box_hi, double h_lo, double h_hi,
                                          int samples, double threshold, std::uint64_t seed);

/// p(v), p'(v) of a pressure law. Implemented by PressureLaw and by the test
/// pressures of the p-system checks.
class PressureModel {
 public:
  virtual ~PressureModel() = default;
  virtual double p(double v) const = 0;
  virtual double dp(double v) const = 0;
  /// Interval on which p is certified; constitutive() rejects states outside.
  virtual std::pair<double, double> domain() const {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
};

struct PressureRow {
  double v, p, dp, d2p;
};

struct PressureConfig {
  int grid = 10000;
  double margin = 0.2;       // grid spans the node hull widened by this fraction each side
  double delta_frac = 0.5;   // delta = delta_frac * delta_max, capped below
  double delta_cap = 0.01;   // ... and by this fraction of the hull width
  std::optional<std::vector<Rational>> slopes;  // override the D_i
};

/// p = -eta for 1-D data x_i = v_i = (X_i)_11, h_i = (X_i)_22 = -p(v_i).
class PressureLaw : public PressureModel {
 public:
  PressureLaw(ConvexInterpolant eta, std::vector<Rational> v, std::vector<Rational> h,
              std::vector<Rational> slopes, double grid_lo, double grid_hi, int grid);

  double p(double v) const override { return -eta_.value(v); }
  double dp(double v) const override { return -eta_.derivative(v); }
  double d2p(double v) const { return -eta_.second_derivative(v); }
  std::pair<double, double> domain() const override { return {lo_, hi_}; }

  const ConvexInterpolant& interpolant() const { return eta_; }
  const std::vector<Rational>& nodes() const { return v_; }
  const std::vector<Rational>& node_values() const { return h_; }  // h_i = -p(v_i)
  const std::vector<Rational>& slopes() const { return d_; }       // D_i = -p'(v_i)
  double grid_lo() const { return lo_; }
  double grid_hi() const { return hi_; }
  const std::vector<PressureRow>& table() const { return table_; }
  /// max |node values| and |nodes|.
  double scale() const;

 private:
  ConvexInterpolant eta_;
  std::vector<Rational> v_, h_, d_;
  double lo_, hi_;
  std::vector<PressureRow> table_;
};

struct PressureGridCheck {
  double min_dp = 0;    // finite-difference p' over interior grid points
  double max_d2p = 0;   // finite-difference p''
  double min_dp_exact = 0;
  double max_d2p_exact = 0;
  bool ok() const { return min_dp > 0 && max_d2p < 0 && min_dp_exact > 0 && max_d2p_exact < 0; }
};
PressureGridCheck check_grid(const PressureLaw& law);

struct NodeCheck {
  double max_value_error = 0;  // |eta(x_i) - h_i|
  double max_slope_error = 0;  // |eta'(x_i) - D_i|
};
NodeCheck check_nodes(const PressureLaw& law);

/// Builds the pressure law from the five certified matrices and slopes
/// (default: representatives of the D-feasibility intervals). eps0 is the
/// smaller of eps*/2 and half the cap that keeps p' > 0 on the grid.
PressureLaw pressure_from_matrices(std::span<const Rational> v, std::span<const Rational> h,
                                   std::span<const Rational> slopes, const PressureConfig& cfg = {});

/// v_i = (X_i)_11, h_i = (X_i)_22, slopes from cfg.slopes or the
/// representatives of the exact D-feasibility intervals.
PressureLaw pressure_from_set(const std::array<RMat, 5>& set, const PressureConfig& cfg = {});

/// Plain-text table: a comment header, then "v p dp" per line (%.17g).
void write_table(std::ostream& os, const PressureLaw& law);
std::vector<PressureRow> read_table(std::istream& is);

}  // namespace tfive
