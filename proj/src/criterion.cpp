#include "tfive/criterion.hpp"

#include <numeric>

namespace tfive {

Ordering identity_ordering(std::size_t n) {
  Ordering o(n);
  std::iota(o.begin(), o.end(), 0);
  return o;
}

std::string to_text(const Ordering& o) {
  std::string s;
  for (std::size_t k = 0; k < o.size(); ++k) {
    if (k) s += ' ';
    s += std::to_string(o[k] + 1);
  }
  return s;
}

PairDetMatrix pair_det_matrix(std::span<const RMat> tuple) {
  PairDetMatrix a;
  a.n = tuple.size();
  a.entries.assign(a.n * a.n, Rational(0));
  for (std::size_t i = 0; i < a.n; ++i) {
    for (std::size_t j = i + 1; j < a.n; ++j) {
      const Rational d = det2(tuple[i] - tuple[j]);
      a.entries[i * a.n + j] = d;
      a.entries[j * a.n + i] = d;
    }
  }
  return a;
}

PolyMatrix a_mu_matrix(const PairDetMatrix& a) {
  PolyMatrix m(a.n, std::vector<RatPoly>(a.n));
  for (std::size_t i = 0; i < a.n; ++i) {
    for (std::size_t j = 0; j < a.n; ++j) {
      if (i < j) m[i][j] = RatPoly(a(i, j));
      if (i > j) m[i][j] = RatPoly::monomial(a(i, j), 1);
    }
  }
  return m;
}

namespace {

// Laplace expansion along rows with memoisation over the set of used columns.
RatPoly det_rec(const std::vector<const std::vector<RatPoly>*>& rows,
                const std::vector<std::size_t>& cols, unsigned used,
                std::vector<std::optional<RatPoly>>& memo) {
  const std::size_t row = static_cast<std::size_t>(__builtin_popcount(used));
  if (row == rows.size()) return RatPoly(Rational(1));
  if (memo[used]) return *memo[used];
  RatPoly acc;
  int parity = 0;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (used & (1u << c)) continue;
    const RatPoly& entry = (*rows[row])[cols[c]];
    if (!entry.is_zero()) {
      RatPoly term = entry * det_rec(rows, cols, used | (1u << c), memo);
      if (parity) {
        acc -= term;
      } else {
        acc += term;
      }
    }
    parity ^= 1;
  }
  memo[used] = acc;
  return acc;
}

RatPoly minor_det(const PolyMatrix& m, std::size_t skip_row, std::size_t skip_col) {
  std::vector<const std::vector<RatPoly>*> rows;
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (i != skip_row) rows.push_back(&m[i]);
  for (std::size_t j = 0; j < m.size(); ++j)
    if (j != skip_col) cols.push_back(j);
  if (rows.size() > 20) throw std::invalid_argument("matrix too large for cofactor expansion");
  std::vector<std::optional<RatPoly>> memo(std::size_t{1} << cols.size());
  return det_rec(rows, cols, 0u, memo);
}

}  // namespace

RatPoly poly_det(const PolyMatrix& m) {
  return minor_det(m, m.size(), m.size());
}

PolyMatrix adjugate(const PolyMatrix& m) {
  const std::size_t n = m.size();
  PolyMatrix adj(n, std::vector<RatPoly>(n));
  if (n == 1) {
    adj[0][0] = RatPoly(Rational(1));
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      RatPoly c = minor_det(m, j, i);
      adj[i][j] = ((i + j) % 2) ? -c : c;
    }
  }
  return adj;
}

RatPoly mu_polynomial(const PairDetMatrix& a) { return poly_det(a_mu_matrix(a)); }

std::vector<AlgNum> TNWitness::lambda_normalized() const {
  std::vector<AlgNum> out;
  out.reserve(lambda.size());
  for (const auto& l : lambda) out.emplace_back(l, lambda.front());
  return out;
}

bool CriterionResult::has_degenerate() const {
  for (const auto& r : rejected)
    if (r.degenerate) return true;
  return false;
}

namespace {

struct Parameterization {
  std::vector<AMat> P;
  std::vector<AMat> C;
  std::vector<AlgNum> kappa;
};

// P_k is the lambda-weighted mean of the tuple with weight mu*lambda_j for
// positions j < k. C_k = P_{k+1} - P_k cyclically; kappa_k from
// X_k - P_k = kappa_k C_k using a component of C_k nonzero at the root.
std::optional<Parameterization> parameterize(std::span<const RMat> tuple,
                                             const std::vector<RatPoly>& lambda,
                                             const RootField& field, std::string& why) {
  const std::size_t n = tuple.size();
  const RatPoly mu = RatPoly::x();
  Parameterization out;
  out.P.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    RatPoly total;
    Mat2<RatPoly> weighted;
    for (std::size_t j = 0; j < n; ++j) {
      const RatPoly w = j < k ? mu * lambda[j] : lambda[j];
      total += w;
      weighted.e11 += w * RatPoly(tuple[j].e11);
      weighted.e12 += w * RatPoly(tuple[j].e12);
      weighted.e21 += w * RatPoly(tuple[j].e21);
      weighted.e22 += w * RatPoly(tuple[j].e22);
    }
    AMat p{AlgNum(weighted.e11, total), AlgNum(weighted.e12, total), AlgNum(weighted.e21, total),
           AlgNum(weighted.e22, total)};
    out.P.push_back(field.reduce(p));
  }
  for (std::size_t k = 0; k < n; ++k) {
    const AMat& next = out.P[(k + 1) % n];
    out.C.push_back(field.reduce(next - out.P[k]));
  }
  for (std::size_t k = 0; k < n; ++k) {
    const AMat arm = embed(tuple[k]) - out.P[k];
    const auto c = out.C[k].flat();
    const auto a = arm.flat();
    std::optional<AlgNum> kappa;
    for (std::size_t e = 0; e < 4 && !kappa; ++e) {
      if (!field.is_zero(c[e])) kappa = field.reduce(a[e] / c[e]);
    }
    if (!kappa) {
      why = "C_" + std::to_string(k + 1) + " vanishes";
      return std::nullopt;
    }
    out.kappa.push_back(*kappa);
  }
  return out;
}

// Every invariant of a witness, given its parameterization.
WitnessCheck check_parameterization(std::span<const RMat> tuple, const Parameterization& par,
                                    const RootField& field) {
  const std::size_t n = tuple.size();
  AMat sum;
  for (std::size_t k = 0; k < n; ++k) {
    const std::string pos = std::to_string(k + 1);
    if (field.rank(par.C[k]) != 1) return {false, "rank C_" + pos + " != 1"};
    if (field.sign(par.kappa[k] - AlgNum(Rational(1))) <= 0) return {false, "kappa_" + pos + " <= 1"};
    AMat rebuilt = par.P.front();
    for (std::size_t j = 0; j < k; ++j) rebuilt += par.C[j];
    rebuilt += par.C[k] * par.kappa[k];
    if (!field.is_zero(field.reduce(rebuilt - embed(tuple[k]))))
      return {false, "X_" + pos + " not reproduced by the parameterization"};
    sum += par.C[k];
  }
  if (!field.is_zero(field.reduce(sum))) return {false, "sum of C_i != 0"};
  return {};
}

}  // namespace

CriterionResult solve_criterion(std::span<const RMat> tuple) {
  return solve_criterion(tuple, identity_ordering(tuple.size()));
}

CriterionResult solve_criterion(std::span<const RMat> tuple, const Ordering& ordering) {
  const std::size_t n = tuple.size();
  if (n < 2) throw CriterionError("T_N criterion needs at least two matrices");
  if (ordering.size() != n) throw CriterionError("ordering length does not match the tuple");
  const PairDetMatrix a = pair_det_matrix(tuple);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (a(i, j) == 0) {
        throw CriterionError("rank-one connection: det(X_" + std::to_string(ordering[i] + 1) +
                             " - X_" + std::to_string(ordering[j] + 1) + ") = 0");
      }
    }
  }
  CriterionResult result;
  const PolyMatrix m = a_mu_matrix(a);
  const RatPoly d = poly_det(m);
  if (d.is_zero()) {
    result.rejected.push_back({std::nullopt, "det(A^mu) vanishes identically", true});
    return result;
  }
  const auto roots = sturm_isolate(d, Rational(1), root_bound(d) + 1);
  if (roots.empty()) return result;
  const PolyMatrix adj = adjugate(m);
  const RatPoly repeated = gcd(d, d.derivative());

  for (const auto& root : roots) {
    const RootField field(root);
    if (repeated.degree() >= 1 && sign_at_root(repeated, root) == 0) {
      result.rejected.push_back({root, "multiple root of det(A^mu)", true});
      continue;
    }
    // First adjugate column not vanishing at the root.
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < n && !col; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        if (sign_at_root(adj[i][j], root) != 0) {
          col = j;
          break;
        }
      }
    }
    if (!col) {
      result.rejected.push_back({root, "null space dimension > 1 at root", true});
      continue;
    }
    std::vector<RatPoly> lambda(n);
    std::vector<int> signs(n);
    for (std::size_t i = 0; i < n; ++i) {
      lambda[i] = adj[i][*col] % root.poly;
      signs[i] = sign_at_root(lambda[i], root);
    }
    const int s0 = signs.front();
    bool one_sign = s0 != 0;
    for (int s : signs) one_sign = one_sign && s == s0;
    if (!one_sign) {
      result.rejected.push_back({root, "null vector not of one strict sign", false});
      continue;
    }
    if (s0 < 0)
      for (auto& l : lambda) l = -l;

    std::string why;
    auto par = parameterize(tuple, lambda, field, why);
    if (!par) {
      result.rejected.push_back({root, why, true});
      continue;
    }
    const WitnessCheck check = check_parameterization(tuple, *par, field);
    if (!check.ok) {
      result.rejected.push_back({root, "witness invariant failed: " + check.failure, true});
      continue;
    }
    TNWitness w;
    w.ordering = ordering;
    w.tuple.assign(tuple.begin(), tuple.end());
    w.mu = root;
    w.lambda = std::move(lambda);
    w.P_points = std::move(par->P);
    w.C = std::move(par->C);
    w.kappa = std::move(par->kappa);
    result.witnesses.push_back(std::move(w));
  }
  return result;
}

WitnessCheck verify_witness(const TNWitness& w) {
  const std::size_t n = w.tuple.size();
  if (w.lambda.size() != n || w.ordering.size() != n) return {false, "field sizes disagree"};
  const RootField field = w.field();
  const PairDetMatrix a = pair_det_matrix(w.tuple);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (a(i, j) == 0) return {false, "rank-one connected pair in tuple"};
  if (field.sign(AlgNum::mu() - AlgNum(Rational(1))) <= 0) return {false, "mu <= 1"};
  const PolyMatrix m = a_mu_matrix(a);
  for (std::size_t i = 0; i < n; ++i) {
    RatPoly row;
    for (std::size_t j = 0; j < n; ++j) row += m[i][j] * w.lambda[j];
    if (sign_at_root(row, w.mu) != 0) return {false, "A^mu lambda != 0"};
  }
  for (std::size_t i = 0; i < n; ++i)
    if (sign_at_root(w.lambda[i], w.mu) <= 0) return {false, "lambda_" + std::to_string(i + 1) + " <= 0"};
  std::string why;
  const auto par = parameterize(w.tuple, w.lambda, field, why);
  if (!par) return {false, why};
  for (std::size_t k = 0; k < n; ++k) {
    if (w.P_points.size() != n || w.C.size() != n || w.kappa.size() != n)
      return {false, "stored parameterization incomplete"};
    if (!field.is_zero(field.reduce(par->P[k] - w.P_points[k])) ||
        !field.is_zero(field.reduce(par->C[k] - w.C[k])) ||
        !field.is_zero(field.reduce(par->kappa[k] - w.kappa[k])))
      return {false, "stored parameterization differs at position " + std::to_string(k + 1)};
  }
  return check_parameterization(w.tuple, *par, field);
}

bool check_hull_points(const TNWitness& w) {
  const RootField field = w.field();
  for (std::size_t k = 0; k < w.tuple.size(); ++k) {
    if (field.rank(field.reduce(w.P_points[k] - embed(w.tuple[k]))) != 1) return false;
    if (field.sign(w.kappa[k] - AlgNum(Rational(1))) <= 0) return false;
  }
  return true;
}

std::vector<AMat> element_directions(const TNWitness& w) {
  std::vector<AMat> out(w.tuple.size());
  for (std::size_t k = 0; k < w.tuple.size(); ++k) {
    out[static_cast<std::size_t>(w.ordering[k])] = w.P_points[k] - embed(w.tuple[k]);
  }
  return out;
}

std::vector<AMat> literal_directions(const TNWitness& w) {
  std::vector<AMat> out(w.tuple.size());
  for (std::size_t k = 0; k < w.tuple.size(); ++k) {
    // element k sits at the position where ordering[pos] == k
    std::size_t pos = 0;
    while (static_cast<std::size_t>(w.ordering[pos]) != k) ++pos;
    out[k] = w.P_points[k] - embed(w.tuple[pos]);
  }
  return out;
}

}  // namespace tfive
