#include "tfive/convexify.hpp"

#include "tfive/large_t5.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace tfive {

namespace {

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s(0);
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

std::vector<Rational> minus(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  std::vector<Rational> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

std::string pair_name(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")";
}

void check_shape(const InterpolationData& data) {
  if (data.x.size() != data.size() || data.d.size() != data.size())
    throw ConvexifyError("interpolation data: node, value and gradient counts differ");
  for (std::size_t i = 0; i < data.size(); ++i)
    if (data.x[i].size() != data.dim || data.d[i].size() != data.dim)
      throw ConvexifyError("interpolation data: node " + std::to_string(i + 1) + " has the wrong dimension");
}

// Paraboloid i minus eps0 |x|^2 is affine: c_i + g_i . x.
struct Affine {
  std::vector<Rational> g;
  Rational c;
};

std::vector<Affine> affine_parts(const InterpolationData& data, const Rational& eps0,
                                 const std::vector<Rational>& values) {
  std::vector<Affine> out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    Affine a;
    a.g.resize(data.dim);
    for (std::size_t k = 0; k < data.dim; ++k) a.g[k] = data.d[i][k] - 2 * eps0 * data.x[i][k];
    a.c = values[i] - dot(data.d[i], data.x[i]) + eps0 * dot(data.x[i], data.x[i]);
    out.push_back(std::move(a));
  }
  return out;
}

// Integral of the normalised 1-D bump density over u in [u1, u2] (u = y/delta).
double bump_mass(double u1, double u2) {
  auto f = [](double u) {
    u = std::clamp(u, -1.0, 1.0);
    const double u2 = u * u;
    return u * (1 - u2 * (4.0 / 3 - u2 * (6.0 / 5 - u2 * (4.0 / 7 - u2 / 9))));
  };
  return (f(u2) - f(u1)) * (315.0 / 256.0);
}

}  // namespace

double InterpolationData::scale() const {
  double s = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    s = std::max(s, std::abs(h[i].get_d()));
    for (const auto& c : x[i]) s = std::max(s, std::abs(c.get_d()));
  }
  return s;
}

InterpolationData data_1d(std::span<const Rational> x, std::span<const Rational> h,
                          std::span<const Rational> d) {
  InterpolationData data;
  data.dim = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    data.x.push_back({x[i]});
    data.d.push_back({d[i]});
  }
  data.h.assign(h.begin(), h.end());
  return data;
}

EpsilonChoice epsilon0_max(const InterpolationData& data) {
  check_shape(data);
  if (data.size() < 2) throw ConvexifyError("need at least two nodes");
  EpsilonChoice best;
  bool first = true;
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < data.size(); ++j) {
      if (i == j) continue;
      const auto dx = minus(data.x[i], data.x[j]);
      const Rational r2 = dot(dx, dx);
      if (r2 == 0) throw ConvexifyError("nodes " + pair_name(j, i) + " coincide");
      // h_i > h_j + D_j . (x_i - x_j)
      const Rational gap = data.h[i] - data.h[j] - dot(data.d[j], dx);
      if (gap <= 0)
        throw ConvexifyError("strict convexity inequality fails for pair " + pair_name(j, i) +
                             ": h_" + std::to_string(i + 1) + " - h_" + std::to_string(j + 1) +
                             " - D_" + std::to_string(j + 1) + ".(x_" + std::to_string(i + 1) + " - x_" +
                             std::to_string(j + 1) + ") = " + to_text(gap));
      const Rational q = gap / r2;
      if (first || q < best.eps_star) {
        best.eps_star = q;
        best.i = j;
        best.j = i;
        first = false;
      }
    }
  }
  best.eps0 = best.eps_star / 2;
  return best;
}

double Mollifier::operator()(std::span<const double> y) const {
  double r2 = 0;
  for (double c : y) r2 += c * c;
  r2 /= delta * delta;
  if (r2 >= 1) return 0;
  const double n = static_cast<double>(dim);
  const double norm = std::pow(delta, n) * std::pow(std::numbers::pi, n / 2) * std::tgamma(k + 1.0) /
                      std::tgamma(n / 2 + k + 1.0);
  return std::pow(1 - r2, k) / norm;
}

double Mollifier::operator()(double y) const {
  const double u = y / delta;
  if (std::abs(u) >= 1) return 0;
  const double w = 1 - u * u;
  return (315.0 / 256.0) * w * w * w * w / delta;
}

double Mollifier::second_moment() const {
  const double n = static_cast<double>(dim);
  return delta * delta * n / (n + 2 * k + 2);
}

Rational Mollifier::second_moment(std::size_t dim, const Rational& delta) {
  return delta * delta * ratio(static_cast<long>(dim), static_cast<long>(dim) + 2 * k + 2);
}

Rational delta_max(const InterpolationData& data, const Rational& eps0) {
  check_shape(data);
  const auto parts = affine_parts(data, eps0, data.h);
  std::optional<Rational> best;
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < data.size(); ++j) {
      if (i == j) continue;
      const Rational gap = parts[i].c - parts[j].c + dot(minus(parts[i].g, parts[j].g), data.x[i]);
      if (gap <= 0)
        throw ConvexifyError("paraboloid " + std::to_string(i + 1) + " does not attain the max at its node");
      const auto dg = minus(parts[i].g, parts[j].g);
      const Rational n2 = dot(dg, dg);
      if (n2 == 0) continue;
      Rational r;
      if (data.dim == 1) {
        r = gap / abs(dg[0]);
      } else {
        // Round the irrational ratio down, then confirm exactly on squares.
        r = from_double(gap.get_d() / std::sqrt(n2.get_d()) * (1 - 1e-12));
        while (r * r * n2 >= gap * gap) r *= ratio(999, 1000);
      }
      if (!best || r < *best) best = r;
    }
  }
  if (!best) throw ConvexifyError("no attainment constraint (all paraboloids parallel)");
  return *best;
}

ConvexInterpolant::ConvexInterpolant(const InterpolationData& data, const Rational& eps0, const Rational& delta,
                                     double abs_tol)
    : dim_(data.dim), eps0_(eps0.get_d()), abs_tol_(abs_tol) {
  check_shape(data);
  const EpsilonChoice ec = epsilon0_max(data);
  if (!(eps0 > 0) || !(eps0 < ec.eps_star))
    throw ConvexifyError("eps0 must lie in (0, eps*) with eps* = " + to_text(ec.eps_star));
  if (delta < 0) throw ConvexifyError("negative mollifier radius");
  moll_.dim = dim_;
  moll_.delta = delta.get_d();

  const Rational corr = eps0 * Mollifier::second_moment(dim_, delta);
  for (const auto& h : data.h) htilde_.push_back(h - corr);

  if (delta > 0) {
    const Rational dm = delta_max(data, eps0);
    if (!(delta < dm)) {
      std::ostringstream os;
      os << "mollifier radius too large: a node's ball leaves its attainment region; try delta <= "
         << std::setprecision(6) << Rational(dm / 2).get_d();
      throw ConvexifyError(os.str());
    }
  }
  // The uniform shift keeps every strict inequality; re-check exactly.
  InterpolationData shifted = data;
  shifted.h = htilde_;
  epsilon0_max(shifted);

  const auto parts = affine_parts(data, eps0, htilde_);
  for (const auto& p : parts) {
    c_.push_back(p.c.get_d());
    std::vector<double> g;
    for (const auto& v : p.g) g.push_back(v.get_d());
    g_.push_back(std::move(g));
  }
  if (abs_tol_ <= 0) abs_tol_ = 1e-10 * std::max(data.scale(), 1.0);

  if (dim_ == 1) {
    for (std::size_t i = 0; i < parts.size(); ++i) lines_.push_back({parts[i].g[0].get_d(), c_[i]});
    // Upper envelope in exact arithmetic: start at the least slope, then
    // repeatedly jump to the line overtaking the current one first.
    std::size_t cur = 0;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      const auto& a = parts[i];
      const auto& b = parts[cur];
      if (a.g[0] < b.g[0] || (a.g[0] == b.g[0] && a.c > b.c)) cur = i;
    }
    std::optional<Rational> from;
    while (true) {
      std::optional<Rational> best_t;
      std::size_t next = cur;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (!(parts[i].g[0] > parts[cur].g[0])) continue;
        const Rational t = (parts[cur].c - parts[i].c) / (parts[i].g[0] - parts[cur].g[0]);
        if (from && t < *from) continue;
        if (!best_t || t < *best_t || (t == *best_t && parts[i].g[0] > parts[next].g[0])) {
          best_t = t;
          next = i;
        }
      }
      const double lo = from ? from->get_d() : -std::numeric_limits<double>::infinity();
      const double hi = best_t ? best_t->get_d() : std::numeric_limits<double>::infinity();
      pieces_.push_back({lo, hi, cur});
      if (!best_t) break;
      from = best_t;
      cur = next;
    }
  }
}

double ConvexInterpolant::lines_max(std::span<const double> x) const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c_.size(); ++i) {
    double v = c_[i];
    for (std::size_t k = 0; k < dim_; ++k) v += g_[i][k] * x[k];
    m = std::max(m, v);
  }
  return m;
}

double ConvexInterpolant::eta0(std::span<const double> x) const {
  double r2 = 0;
  for (double c : x) r2 += c * c;
  return eps0_ * r2 + lines_max(x);
}

double ConvexInterpolant::smoothed_lines(double x) const {
  const double d = moll_.delta;
  double acc = 0;
  for (const auto& pc : pieces_) {
    const double a = std::max(pc.lo, x - d), b = std::min(pc.hi, x + d);
    if (!(a < b)) continue;
    const Line& l = lines_[pc.idx];
    // m(x - t) (slope t + intercept): a degree-9 polynomial, exact at 7 nodes.
    auto f = [&](double t) { return moll_(x - t) * (l.slope * t + l.intercept); };
    acc += boost::math::quadrature::gauss<double, 7>::integrate(f, a, b);
  }
  return acc;
}

double ConvexInterpolant::smoothed_slope(double x) const {
  const double d = moll_.delta;
  double acc = 0;
  for (const auto& pc : pieces_) {
    const double a = std::max(pc.lo, x - d), b = std::min(pc.hi, x + d);
    if (!(a < b)) continue;
    // t in [a, b] is y = x - t in [x - b, x - a]
    acc += lines_[pc.idx].slope * bump_mass((x - b) / d, (x - a) / d);
  }
  return acc;
}

double ConvexInterpolant::value(double x) const {
  if (dim_ != 1) throw std::logic_error("1-D evaluation on a multi-dimensional interpolant");
  if (moll_.delta == 0) return eta0(std::span<const double>(&x, 1));
  return eps0_ * (x * x + moll_.second_moment()) + smoothed_lines(x);
}

double ConvexInterpolant::derivative(double x) const {
  if (dim_ != 1) throw std::logic_error("1-D evaluation on a multi-dimensional interpolant");
  if (moll_.delta == 0) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < lines_.size(); ++i)
      if (lines_[i].slope * x + lines_[i].intercept > lines_[best].slope * x + lines_[best].intercept) best = i;
    return 2 * eps0_ * x + lines_[best].slope;
  }
  return 2 * eps0_ * x + smoothed_slope(x);
}

double ConvexInterpolant::second_derivative(double x) const {
  if (dim_ != 1) throw std::logic_error("1-D evaluation on a multi-dimensional interpolant");
  double v = 2 * eps0_;
  if (moll_.delta == 0) return v;
  for (std::size_t k = 1; k < pieces_.size(); ++k) {
    const double kink = pieces_[k].lo;
    const double jump = lines_[pieces_[k].idx].slope - lines_[pieces_[k - 1].idx].slope;
    v += jump * moll_(x - kink);
  }
  return v;
}

double ConvexInterpolant::value_by_quadrature(double x) const {
  const double d = moll_.delta;
  if (d == 0) return eta0(std::span<const double>(&x, 1));
  auto f = [&](double y) {
    const double t = x - y;
    return moll_(y) * eta0(std::span<const double>(&t, 1));
  };
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, -d, d, 20, 1e-14);
}

double ConvexInterpolant::ball_average(std::span<const double> x, int comp) const {
  const std::size_t n = dim_, last = n - 1;
  const double d2 = moll_.delta * moll_.delta;
  std::vector<double> y(n), a(c_.size()), b(c_.size());
  std::vector<double> cuts;

  // Innermost coordinate s = y_last on the chord |s| <= r: line i is
  // a_i + b_i s there, so split at the envelope's breakpoints and integrate
  // each piece with a Gauss rule that is exact for m times a line.
  auto chord = [&](double r2) {
    const double r = std::sqrt(std::max(r2, 0.0));
    if (r == 0) return 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      a[i] = c_[i] + g_[i][last] * x[last];
      for (std::size_t k = 0; k < last; ++k) a[i] += g_[i][k] * (x[k] - y[k]);
      b[i] = -g_[i][last];
    }
    cuts.assign({-r, r});
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = i + 1; j < a.size(); ++j)
        if (b[i] != b[j]) {
          const double s = (a[j] - a[i]) / (b[i] - b[j]);
          if (s > -r && s < r) cuts.push_back(s);
        }
    std::sort(cuts.begin(), cuts.end());
    double acc = 0;
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
      const double lo = cuts[p], hi = cuts[p + 1];
      if (!(lo < hi)) continue;
      const double mid = 0.5 * (lo + hi);
      std::size_t best = 0;
      for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i] + b[i] * mid > a[best] + b[best] * mid) best = i;
      auto f = [&](double s) {
        y[last] = s;
        const double w = comp < 0 ? a[best] + b[best] * s : g_[best][static_cast<std::size_t>(comp)];
        return moll_(y) * w;
      };
      acc += boost::math::quadrature::gauss<double, 7>::integrate(f, lo, hi);
    }
    return acc;
  };

  std::function<double(std::size_t, double)> level = [&](std::size_t k, double r2) -> double {
    if (k == last) return chord(r2);
    const double r = std::sqrt(std::max(r2, 0.0));
    if (r == 0) return 0.0;
    auto inner = [&](double t) {
      y[k] = t;
      return level(k + 1, r2 - t * t);
    };
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(inner, -r, r, 12, 1e-11);
  };
  return level(0, d2);
}

double ConvexInterpolant::value(std::span<const double> x) const {
  if (x.size() != dim_) throw std::invalid_argument("point has the wrong dimension");
  if (dim_ == 1) return value(x[0]);
  if (moll_.delta == 0) return eta0(x);
  double r2 = 0;
  for (double c : x) r2 += c * c;
  return eps0_ * (r2 + moll_.second_moment()) + ball_average(x, -1);
}

std::vector<double> ConvexInterpolant::gradient(std::span<const double> x) const {
  if (x.size() != dim_) throw std::invalid_argument("point has the wrong dimension");
  if (dim_ == 1) return {derivative(x[0])};
  std::vector<double> out(dim_);
  if (moll_.delta == 0) {
    std::size_t best = 0;
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c_.size(); ++i) {
      double v = c_[i];
      for (std::size_t k = 0; k < dim_; ++k) v += g_[i][k] * x[k];
      if (v > m) {
        m = v;
        best = i;
      }
    }
    for (std::size_t k = 0; k < dim_; ++k) out[k] = 2 * eps0_ * x[k] + g_[best][k];
    return out;
  }
  for (std::size_t k = 0; k < dim_; ++k) out[k] = 2 * eps0_ * x[k] + ball_average(x, static_cast<int>(k));
  return out;
}

SecondDifferenceReport second_differences(const ConvexInterpolant& eta, std::span<const double> box_lo,
                                          std::span<const double> box_hi, double h_lo, double h_hi,
                                          int samples, double threshold, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const std::size_t n = eta.dim();
  SecondDifferenceReport rep;
  rep.min_quotient = std::numeric_limits<double>::infinity();
  std::vector<double> x0(n), v(n), xp(n), xm(n);
  std::normal_distribution<double> gauss;
  for (int s = 0; s < samples; ++s) {
    for (std::size_t k = 0; k < n; ++k) x0[k] = box_lo[k] + (box_hi[k] - box_lo[k]) * unit();
    double norm = 0;
    if (n == 1) {
      v[0] = unit() < 0.5 ? -1.0 : 1.0;
      norm = 1;
    } else {
      do {
        norm = 0;
        for (std::size_t k = 0; k < n; ++k) {
          v[k] = 2 * unit() - 1;
          norm += v[k] * v[k];
        }
      } while (norm > 1 || norm < 1e-6);
      norm = std::sqrt(norm);
      for (auto& c : v) c /= norm;
    }
    const double h = h_lo + (h_hi - h_lo) * unit();
    for (std::size_t k = 0; k < n; ++k) {
      xp[k] = x0[k] + h * v[k];
      xm[k] = x0[k] - h * v[k];
    }
    const double d2 = eta.value(xp) - 2 * eta.value(x0) + eta.value(xm);
    const double q = d2 / (h * h);
    rep.min_quotient = std::min(rep.min_quotient, q);
    if (q < threshold) ++rep.below;
    ++rep.samples;
  }
  return rep;
}

PressureLaw::PressureLaw(ConvexInterpolant eta, std::vector<Rational> v, std::vector<Rational> h,
                         std::vector<Rational> slopes, double grid_lo, double grid_hi, int grid)
    : eta_(std::move(eta)), v_(std::move(v)), h_(std::move(h)), d_(std::move(slopes)), lo_(grid_lo), hi_(grid_hi) {
  if (grid < 3) throw ConvexifyError("pressure grid needs at least 3 points");
  table_.reserve(static_cast<std::size_t>(grid));
  for (int k = 0; k < grid; ++k) {
    const double x = lo_ + (hi_ - lo_) * k / (grid - 1);
    table_.push_back({x, p(x), dp(x), d2p(x)});
  }
}

double PressureLaw::scale() const {
  double s = 0;
  for (std::size_t i = 0; i < v_.size(); ++i)
    s = std::max({s, std::abs(v_[i].get_d()), std::abs(h_[i].get_d())});
  return s;
}

PressureGridCheck check_grid(const PressureLaw& law) {
  const auto& t = law.table();
  PressureGridCheck c;
  c.min_dp = c.min_dp_exact = std::numeric_limits<double>::infinity();
  c.max_d2p = c.max_d2p_exact = -std::numeric_limits<double>::infinity();
  const double step = t[1].v - t[0].v;
  for (std::size_t k = 0; k < t.size(); ++k) {
    c.min_dp_exact = std::min(c.min_dp_exact, t[k].dp);
    c.max_d2p_exact = std::max(c.max_d2p_exact, t[k].d2p);
    // one-sided stencils at the ends use the neighbour inside
    const std::size_t m = std::clamp<std::size_t>(k, 1, t.size() - 2);
    c.min_dp = std::min(c.min_dp, (t[m + 1].p - t[m - 1].p) / (2 * step));
    c.max_d2p = std::max(c.max_d2p, (t[m + 1].p - 2 * t[m].p + t[m - 1].p) / (step * step));
  }
  return c;
}

NodeCheck check_nodes(const PressureLaw& law) {
  NodeCheck c;
  const auto& eta = law.interpolant();
  for (std::size_t i = 0; i < law.nodes().size(); ++i) {
    const double x = law.nodes()[i].get_d();
    c.max_value_error = std::max(c.max_value_error, std::abs(eta.value(x) - law.node_values()[i].get_d()));
    c.max_slope_error = std::max(c.max_slope_error, std::abs(eta.derivative(x) - law.slopes()[i].get_d()));
  }
  return c;
}

PressureLaw pressure_from_matrices(std::span<const Rational> v, std::span<const Rational> h,
                                   std::span<const Rational> slopes, const PressureConfig& cfg) {
  const InterpolationData data = data_1d(v, h, slopes);
  const EpsilonChoice ec = epsilon0_max(data);
  for (const auto& d : slopes)
    if (!(d < 0)) throw ConvexifyError("slope D_i must be negative for p' > 0");

  const auto [vmin, vmax] = std::minmax_element(v.begin(), v.end());
  const Rational width = *vmax - *vmin;
  const Rational margin = from_double(cfg.margin) * width;
  const Rational grid_lo = *vmin - margin, grid_hi = *vmax + margin;
  const Rational delta_bound = from_double(cfg.delta_cap) * width;

  // eta' = D_a + 2 eps0 (x - x_a) for the active node a; keep it negative up
  // to the right end of the grid plus the mollifier reach.
  const Rational reach = grid_hi + delta_bound;
  std::optional<Rational> cap;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Rational c = -slopes[i] / (2 * (reach - v[i]));
    if (!cap || c < *cap) cap = c;
  }
  Rational eps0 = ec.eps0;
  if (*cap / 2 < eps0) eps0 = *cap / 2;

  Rational delta = from_double(cfg.delta_frac) * delta_max(data, eps0);
  if (delta > delta_bound) delta = delta_bound;
  ConvexInterpolant eta(data, eps0, delta);
  return PressureLaw(std::move(eta), {v.begin(), v.end()}, {h.begin(), h.end()}, {slopes.begin(), slopes.end()},
                     grid_lo.get_d(), grid_hi.get_d(), cfg.grid);
}

PressureLaw pressure_from_set(const std::array<RMat, 5>& set, const PressureConfig& cfg) {
  std::vector<Rational> v, h, d;
  for (const auto& m : set) {
    v.push_back(m.e11);
    h.push_back(m.e22);
  }
  if (cfg.slopes) {
    if (cfg.slopes->size() != set.size()) throw ConvexifyError("slope override needs one value per matrix");
    d = *cfg.slopes;
  } else {
    const DFeasibility feas = d_feasibility(set);
    if (!feas.feasible()) throw ConvexifyError("no admissible slopes: " + feas.failure);
    for (const auto& iv : feas.intervals) d.push_back(iv.representative());
  }
  return pressure_from_matrices(v, h, d, cfg);
}

void write_table(std::ostream& os, const PressureLaw& law) {
  os << "# pressure table: v p dp\n";
  os << "# eps0 " << std::setprecision(17) << law.interpolant().eps0() << " delta " << law.interpolant().delta()
     << '\n';
  for (const auto& r : law.table()) os << std::setprecision(17) << r.v << ' ' << r.p << ' ' << r.dp << '\n';
}

std::vector<PressureRow> read_table(std::istream& is) {
  std::vector<PressureRow> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    PressureRow r{0, 0, 0, std::numeric_limits<double>::quiet_NaN()};
    if (!(ls >> r.v >> r.p >> r.dp)) throw std::runtime_error("pressure table line " + std::to_string(lineno) + ": expected v p dp");
    rows.push_back(r);
  }
  return rows;
}

}  // namespace tfive
