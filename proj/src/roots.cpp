#include "tfive/roots.hpp"

#include <stdexcept>
#include <utility>

namespace tfive {

int count_roots(const std::vector<RatPoly>& chain, const Rational& lo, const Rational& hi) {
  // V(lo) - V(hi) counts roots in (lo, hi] for a square-free chain head.
  int n = sign_variations(chain, lo) - sign_variations(chain, hi);
  if (sign(chain.front()(hi)) == 0) --n;
  return n;
}

namespace {

void isolate_rec(const RatPoly& sq, const std::vector<RatPoly>& chain, const Rational& a,
                 const Rational& b, std::vector<RootInterval>& out) {
  const int n = count_roots(chain, a, b);
  if (n == 0) return;
  if (n == 1 && sign(sq(a)) != 0 && sign(sq(b)) != 0) {
    out.push_back({sq, a, b});
    return;
  }
  const Rational m = midpoint(a, b);
  isolate_rec(sq, chain, a, m, out);
  if (sign(sq(m)) == 0) out.push_back({sq, m, m});
  isolate_rec(sq, chain, m, b, out);
}

}  // namespace

std::vector<RootInterval> sturm_isolate(const RatPoly& p, const Rational& lo,
                                        const Rational& hi) {
  if (p.is_zero()) throw std::domain_error("indeterminate root set");
  if (!(lo < hi)) throw std::invalid_argument("sturm_isolate: empty window");
  std::vector<RootInterval> out;
  if (p.degree() == 0) return out;
  const RatPoly sq = squarefree_part(p);
  isolate_rec(sq, sturm_sequence(sq), lo, hi, out);
  return out;
}

RootInterval refine_root(RootInterval r, const Rational& width) {
  if (r.is_exact()) return r;
  int s_lo = sign(r.poly(r.lo));
  while (r.hi - r.lo > width) {
    Rational m = midpoint(r.lo, r.hi);
    const int s = sign(r.poly(m));
    if (s == 0) {
      r.lo = m;
      r.hi = m;
      break;
    }
    if (s == s_lo) {
      r.lo = std::move(m);
    } else {
      r.hi = std::move(m);
    }
  }
  return r;
}

int sign_at_root(const RatPoly& q, const RootInterval& r) {
  if (q.is_zero()) return 0;
  if (r.is_exact()) return sign(q(r.lo));
  // Fast path: an interval evaluation that already excludes zero.
  {
    const Interval v = q(r.enclosure());
    if (!v.contains_zero()) return v.sign();
  }
  // Zero test: q vanishes at the root iff gcd(q, poly) does. The gcd divides
  // a square-free poly, so it has at most the one root inside (lo, hi).
  const RatPoly g = gcd(q, r.poly);
  if (g.degree() >= 1 && sign(g(r.lo)) != sign(g(r.hi))) return 0;
  // Nonzero: shrink until q has no root in the interval.
  const RatPoly qs = squarefree_part(q);
  const auto chain = sturm_sequence(qs);
  RootInterval cur = r;
  while (true) {
    if (cur.is_exact()) return sign(q(cur.lo));
    if (count_roots(chain, cur.lo, cur.hi) == 0) {
      const Rational m = midpoint(cur.lo, cur.hi);
      return sign(q(m));
    }
    cur = refine_root(cur, Rational(cur.hi - cur.lo) / 2);
  }
}

}  // namespace tfive
