#include "tfive/search.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "tfive/rational.hpp"

namespace tfive {

namespace {

constexpr std::size_t kEq = 14;
constexpr std::size_t kIneq = 35;
constexpr std::size_t kRes = kEq + kIneq;

double det_d(const DMat& m) { return m.e11 * m.e22 - m.e12 * m.e21; }

double scale_of(const std::array<DMat, 5>& x) {
  double s = 0;
  for (const auto& m : x)
    for (double e : m.flat()) s = std::max(s, std::abs(e));
  return s;
}

void fill_set_residuals(ResidualRecord& r, const std::array<DMat, 5>& x, std::span<const double> d) {
  r.scale = scale_of(x);
  for (std::size_t i = 0; i < 5; ++i) r.symmetry[i] = x[i].e21 + x[i].e12;
  r.convexity.clear();
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      if (i != j) r.convexity.push_back(x[j].e22 - x[i].e22 - d[i] * (x[j].e11 - x[i].e11));
  for (std::size_t i = 0; i < 5; ++i) r.d_sign[i] = -d[i];
  r.det_margin.clear();
  const double s2 = std::max(r.scale * r.scale, std::numeric_limits<double>::min());
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) r.det_margin.push_back(std::abs(det_d(x[i] - x[j])) / s2);
}

// Targets sit above the acceptance thresholds so the final iterate clears
// them with room to spare.
struct Targets {
  double slack;
  double det;
};

// Solver residual: shifted equalities, then hinge violations.
Eigen::VectorXd solver_residual(const SearchProblem& p, const Eigen::VectorXd& z,
                                const Eigen::VectorXd& shift, const Targets& t) {
  const ResidualRecord r = residuals(p, std::span<const double>(z.data(), kUnknowns));
  Eigen::VectorXd out(kRes);
  std::size_t k = 0;
  for (double v : r.sum_c) out[k++] = v;
  for (double v : r.symmetry) out[k++] = v;
  for (double v : r.norm_a) out[k++] = v;
  for (std::size_t e = 0; e < kEq; ++e) out[e] += shift[e];
  for (double g : r.convexity) out[k++] = std::max(0.0, t.slack - g);
  for (double g : r.d_sign) out[k++] = std::max(0.0, t.slack - g);
  for (double g : r.det_margin) out[k++] = std::max(0.0, t.det - g);
  return out;
}

Eigen::MatrixXd jacobian(const SearchProblem& p, const Eigen::VectorXd& z, const Eigen::VectorXd& shift,
                         const Targets& t) {
  Eigen::MatrixXd j(kRes, kUnknowns);
  Eigen::VectorXd zp = z, zm = z;
  for (std::size_t c = 0; c < kUnknowns; ++c) {
    const double h = 1e-7 * std::max(1.0, std::abs(z[c]));
    zp[c] = z[c] + h;
    zm[c] = z[c] - h;
    j.col(c) = (solver_residual(p, zp, shift, t) - solver_residual(p, zm, shift, t)) / (2 * h);
    zp[c] = zm[c] = z[c];
  }
  return j;
}

double violation(const ResidualRecord& r, const SearchConfig& cfg) {
  return r.eq_norm() + std::max(0.0, cfg.tol_ineq - r.min_slack()) + std::max(0.0, cfg.det_margin - r.min_det());
}

bool is_feasible(const ResidualRecord& r, const SearchConfig& cfg) {
  return r.eq_norm() <= cfg.tol_eq && r.min_slack() >= cfg.tol_ineq && r.min_det() >= cfg.det_margin;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Eigen::VectorXd start_point(const SearchConfig& cfg, std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  Eigen::VectorXd z(kUnknowns);
  for (std::size_t k = 0; k < 20; ++k) z[k] = uniform(rng, -cfg.box, cfg.box);
  for (std::size_t k = 20; k < 25; ++k) z[k] = uniform(rng, -cfg.d_box, 0.0);
  return z;
}

struct Attempt {
  Eigen::VectorXd z;
  int iterations = 0;
  bool finite = true;
};

// Augmented Lagrangian on the equalities; each subproblem is a damped
// Gauss-Newton (Levenberg-Marquardt) solve with Armijo backtracking.
Attempt run_attempt(const SearchProblem& p, const SearchConfig& cfg, Eigen::VectorXd z) {
  const Targets t{10 * cfg.tol_ineq, 2 * cfg.det_margin};
  Attempt a;
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(kEq);
  double rho = 10;
  double prev_eq = std::numeric_limits<double>::infinity();
  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    const Eigen::VectorXd shift = lambda / rho;
    double damping = 1e-3;
    Eigen::VectorXd r = solver_residual(p, z, shift, t);
    double phi = 0.5 * r.squaredNorm();
    for (int inner = 0; inner < cfg.max_inner; ++inner) {
      ++a.iterations;
      if (!std::isfinite(phi)) {
        a.finite = false;
        return a;
      }
      if (phi < 1e-32) break;
      const Eigen::MatrixXd j = jacobian(p, z, shift, t);
      const Eigen::VectorXd g = j.transpose() * r;
      Eigen::MatrixXd h = j.transpose() * j;
      h.diagonal().array() += damping * (1.0 + h.diagonal().array());
      const Eigen::VectorXd step = h.ldlt().solve(-g);
      double alpha = 1;
      bool accepted = false;
      for (int ls = 0; ls < 30; ++ls) {
        const Eigen::VectorXd zn = z + alpha * step;
        const Eigen::VectorXd rn = solver_residual(p, zn, shift, t);
        const double phin = 0.5 * rn.squaredNorm();
        if (std::isfinite(phin) && phin <= phi + 1e-4 * alpha * g.dot(step)) {
          z = zn;
          r = rn;
          accepted = phin < phi;
          phi = phin;
          break;
        }
        alpha *= 0.5;
      }
      damping = accepted && alpha == 1 ? std::max(damping / 3, 1e-12) : std::min(damping * 4, 1e8);
      if (!accepted && damping >= 1e8) break;
      if (step.norm() * alpha < 1e-16 * (1 + z.norm())) break;
    }
    const ResidualRecord rec = residuals(p, std::span<const double>(z.data(), kUnknowns));
    if (is_feasible(rec, cfg)) return a.z = z, a;
    Eigen::VectorXd c(kEq);
    std::size_t k = 0;
    for (double v : rec.sum_c) c[k++] = v;
    for (double v : rec.symmetry) c[k++] = v;
    for (double v : rec.norm_a) c[k++] = v;
    lambda += rho * c;
    const double eq = rec.eq_norm();
    if (eq > 0.25 * prev_eq) rho = std::min(rho * 10, 1e10);
    prev_eq = eq;
  }
  a.z = z;
  return a;
}

}  // namespace

double ResidualRecord::eq_norm() const {
  double m = 0;
  for (double v : sum_c) m = std::max(m, std::abs(v));
  for (double v : symmetry) m = std::max(m, std::abs(v));
  for (double v : norm_a) m = std::max(m, std::abs(v));
  return m;
}

double ResidualRecord::min_slack() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : convexity) m = std::min(m, v);
  for (double v : d_sign) m = std::min(m, v);
  return m;
}

double ResidualRecord::min_det() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : det_margin) m = std::min(m, v);
  return m;
}

std::array<DMat, 5> factors_c(std::span<const double> z) {
  std::array<DMat, 5> c;
  for (std::size_t i = 0; i < 5; ++i) {
    const double a1 = z[4 * i], a2 = z[4 * i + 1], n1 = z[4 * i + 2], n2 = z[4 * i + 3];
    c[i] = DMat{a1 * n1, a1 * n2, a2 * n1, a2 * n2};
  }
  return c;
}

std::array<DMat, 5> tuple_from_unknowns(const SearchProblem& p, std::span<const double> z) {
  const auto c = factors_c(z);
  std::array<DMat, 5> x;
  DMat acc{};
  for (std::size_t i = 0; i < 5; ++i) {
    x[i] = acc + c[i] * p.kappa[i];
    acc += c[i];
  }
  return x;
}

ResidualRecord residuals(const SearchProblem& p, std::span<const double> z) {
  if (z.size() != kUnknowns) throw std::invalid_argument("search vector must have 25 entries");
  const auto c = factors_c(z);
  ResidualRecord r;
  DMat sum{};
  for (const auto& ci : c) sum += ci;
  r.sum_c = sum.flat();
  for (std::size_t i = 0; i < 5; ++i) r.norm_a[i] = z[4 * i] * z[4 * i] + z[4 * i + 1] * z[4 * i + 1] - 1;
  fill_set_residuals(r, tuple_from_unknowns(p, z), z.subspan(20, 5));
  return r;
}

ResidualRecord residual_report(const std::array<DMat, 5>& x, std::span<const double> d,
                               const std::optional<std::array<DMat, 5>>& c) {
  if (d.size() != 5) throw std::invalid_argument("residual_report needs five slopes");
  ResidualRecord r;
  if (c) {
    DMat sum{};
    for (const auto& ci : *c) sum += ci;
    r.sum_c = sum.flat();
  }
  fill_set_residuals(r, x, d);
  return r;
}

SearchResult solve(const SearchProblem& p, const SearchConfig& cfg, std::uint64_t seed,
                   const std::function<bool(const SearchResult&)>& accept) {
  if (!(cfg.tol_eq > 0) || !(cfg.tol_ineq > 0) || !(cfg.det_margin > 0))
    throw std::invalid_argument("search tolerances must be positive");
  if (cfg.restarts < 1) throw std::invalid_argument("search needs at least one restart");
  for (double k : p.kappa)
    if (!(k > 1)) throw std::invalid_argument("kappa_i must exceed 1");

  SearchResult best;
  best.seed = seed;
  double best_violation = std::numeric_limits<double>::infinity();

  if (std::isinf(cfg.tol_eq)) {
    const Eigen::VectorXd z = start_point(cfg, seed, 0);
    best.z.assign(z.data(), z.data() + kUnknowns);
    best.residuals = residuals(p, best.z);
    best.restart = 0;
    best.restarts_tried = 1;
    best.note = "tol_eq is infinite: start point returned unsolved";
    return best;
  }

  for (int k = 0; k < cfg.restarts; ++k) {
    const Attempt a = run_attempt(p, cfg, start_point(cfg, seed, k));
    if (!a.finite) continue;
    SearchResult r;
    r.z.assign(a.z.data(), a.z.data() + kUnknowns);
    r.residuals = residuals(p, r.z);
    r.feasible = is_feasible(r.residuals, cfg);
    r.restart = k;
    r.restarts_tried = k + 1;
    r.iterations = a.iterations;
    r.seed = seed;
    if (r.feasible) {
      if (!accept || accept(r)) return r;
      r.note = "feasible but rejected by the acceptance check";
    }
    const double v = violation(r.residuals, cfg);
    if (v < best_violation || best.restart < 0) {
      best_violation = v;
      best = r;
    }
  }
  best.feasible = false;
  best.restarts_tried = cfg.restarts;
  if (best.note.empty()) best.note = "no feasible attempt";
  return best;
}

std::array<RMat, 5> rationalize(const std::array<DMat, 5>& x, Promotion mode, int precision) {
  const Integer max_den = Integer(1) << precision;
  auto promote = [&](double v) {
    const Rational q = from_double(v);
    return mode == Promotion::dyadic ? q : best_approximation(q, max_den);
  };
  std::array<RMat, 5> out;
  for (std::size_t i = 0; i < 5; ++i) {
    out[i].e11 = promote(x[i].e11);
    out[i].e21 = promote(x[i].e21);
    out[i].e12 = -out[i].e21;
    out[i].e22 = promote(x[i].e22);
  }
  return out;
}

std::array<RMat, 5> rationalize(const SearchProblem& p, const SearchResult& r, Promotion mode,
                                int precision) {
  return rationalize(tuple_from_unknowns(p, r.z), mode, precision);
}

}  // namespace tfive
