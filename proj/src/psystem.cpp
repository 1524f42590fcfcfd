#include "tfive/psystem.hpp"

#include <algorithm>
#include <cmath>

namespace tfive {

DMat constitutive(const State& s, const PressureModel& p) {
  const auto [lo, hi] = p.domain();
  if (!(s.v >= lo && s.v <= hi))
    throw PsystemError("v = " + std::to_string(s.v) + " lies outside the pressure law's domain [" +
                       std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return DMat{s.v, -s.u, s.u, -p.p(s.v)};
}

State state_of(const DMat& m) { return {m.e11, m.e21}; }

std::pair<double, double> rh_residual(const ShockTriple& t, const PressureModel& p) {
  const double dv = t.right.v - t.left.v, du = t.right.u - t.left.u;
  const double dp = p.p(t.right.v) - p.p(t.left.v);
  return {du - t.sigma * dv, dp - t.sigma * du};
}

bool is_rank_one_connected(const RMat& a, const RMat& b) { return (a - b).det() == 0; }

std::optional<Rational> rh_speed(const RMat& left, const RMat& right) {
  const Rational dv = right.e11 - left.e11, du = right.e21 - left.e21;
  const Rational dp = left.e22 - right.e22;
  if (dv == 0) {
    if (du == 0 && dp == 0) return Rational(0);
    return std::nullopt;
  }
  const Rational sigma = du / dv;
  if (dp != sigma * du) return std::nullopt;
  return sigma;
}

double characteristic_speed(int family, double v, const PressureModel& p) {
  const double r = std::sqrt(std::max(p.dp(v), 0.0));
  return family == 1 ? -r : r;
}

HugoniotBranch hugoniot_trace(const State& base, int family, const PressureModel& p, double v_end, int steps) {
  if (family != 1 && family != 2) throw std::invalid_argument("family must be 1 or 2");
  if (steps < 1) throw std::invalid_argument("need at least one step");
  HugoniotBranch b;
  b.family = family;
  b.base = base;
  const double sign = family == 1 ? -1.0 : 1.0;
  const double pl = p.p(base.v);
  b.samples.push_back({0, base, characteristic_speed(family, base.v, p), characteristic_speed(family, base.v, p)});
  b.scale = std::max({std::abs(base.v), std::abs(base.u), std::abs(pl)});
  for (int m = 1; m <= steps; ++m) {
    const double v = base.v + (v_end - base.v) * m / steps;
    const double s = v - base.v;
    if (s == 0) continue;
    const double pv = p.p(v);
    const double ratio = (pv - pl) / s;
    if (ratio < 0) {
      b.truncated = true;
      b.note = "speed ratio negative at v = " + std::to_string(v) + "; branch truncated";
      break;
    }
    const double sigma = sign * std::sqrt(ratio);
    const State st{v, base.u + sigma * s};
    b.samples.push_back({s, st, sigma, characteristic_speed(family, v, p)});
    b.scale = std::max({b.scale, std::abs(st.v), std::abs(st.u), std::abs(pv)});
    const auto [r1, r2] = rh_residual({base, st, sigma}, p);
    b.max_rh_residual = std::max({b.max_rh_residual, std::abs(r1), std::abs(r2)});
  }
  return b;
}

bool lax_check(const HugoniotBranch& b, std::size_t m, double tol) {
  const HugoniotSample& r = b.samples.at(m);
  const double slack = tol * std::max(std::abs(r.sigma), 1.0);
  const double lambda_left = b.samples.front().lambda;
  return r.lambda <= r.sigma + slack && r.sigma <= lambda_left + slack;
}

LiuResult liu_check(const HugoniotBranch& b, std::size_t m, const PressureModel* p, double tol) {
  LiuResult res;
  const HugoniotSample& r = b.samples.at(m);
  const double slack = tol * std::max(std::abs(r.sigma), 1.0);
  const double sign = b.family == 1 ? -1.0 : 1.0;
  const double pl = p ? p->p(b.base.v) : 0;
  for (std::size_t k = 0; k <= m; ++k) {
    ++res.compared;
    if (k > 0) res.resolution = std::max(res.resolution, std::abs(b.samples[k].s - b.samples[k - 1].s));
    const double diff = b.samples[k].sigma - r.sigma;
    if (diff < -slack) {
      res.ok = false;
      return res;
    }
    // near-equality away from s_R: look between the neighbours too
    if (p && k != m && diff <= 10 * slack) {
      const double s0 = b.samples[k].s, s1 = b.samples[std::min(k + 1, m)].s;
      for (int q = 1; q <= 8; ++q) {
        const double s = s0 + (s1 - s0) * q / 9;
        if (s == 0) continue;
        const double sigma = sign * std::sqrt(std::max((p->p(b.base.v + s) - pl) / s, 0.0));
        ++res.refined;
        if (sigma - r.sigma < -slack) {
          res.ok = false;
          return res;
        }
      }
    }
  }
  return res;
}

RationalSlope wedge_slope(const RMat& c) {
  RationalSlope out;
  if (c.e11 == 0 && c.e21 == 0) {
    out.vertical = true;
    out.consistent = c.det() == 0;
    return out;
  }
  if (c.e11 != 0 && c.e21 != 0) {
    out.consistent = c.e12 * c.e21 == c.e22 * c.e11;
    out.sigma = Rational(-c.e12 / c.e11);
  } else if (c.e11 != 0) {
    out.consistent = c.e22 == 0;
    out.sigma = Rational(-c.e12 / c.e11);
  } else {
    out.consistent = c.e12 == 0;
    out.sigma = Rational(-c.e22 / c.e21);
  }
  return out;
}

AlgebraicSlope wedge_slope(const AMat& c, const RootField& f) {
  AlgebraicSlope out;
  const bool z11 = f.is_zero(c.e11), z21 = f.is_zero(c.e21);
  if (z11 && z21) {
    out.vertical = true;
    out.consistent = f.is_zero(c.e11 * c.e22 - c.e12 * c.e21);
    return out;
  }
  if (!z11 && !z21) {
    out.consistent = f.is_zero(c.e12 * c.e21 - c.e22 * c.e11);
    out.sigma = f.reduce(-c.e12 / c.e11);
  } else if (!z11) {
    out.consistent = f.is_zero(c.e22);
    out.sigma = f.reduce(-c.e12 / c.e11);
  } else {
    out.consistent = f.is_zero(c.e12);
    out.sigma = f.reduce(-c.e22 / c.e21);
  }
  out.approx = f.approx(*out.sigma);
  return out;
}

WedgeSlopes wedge_slopes(const TNWitness& w) {
  const RootField f = w.field();
  WedgeSlopes out;
  out.first = wedge_slope(f.reduce(w.P() - embed(w.tuple.front())), f);
  out.last = wedge_slope(f.reduce(w.P() - embed(w.tuple.back())), f);
  if (out.first.sigma && out.last.sigma) out.first_below_last = f.sign(*out.last.sigma - *out.first.sigma) > 0;
  return out;
}

}  // namespace tfive
