#pragma once

#include <array>
#include <string>

#include "tfive/interval.hpp"
#include "tfive/rational.hpp"

namespace tfive {

/// 2x2 matrix over a scalar ring (Rational, Interval, double, AlgNum).
template <class S>
struct Mat2 {
  S e11{};
  S e12{};
  S e21{};
  S e22{};

  S det() const { return S(e11 * e22 - e12 * e21); }
  S trace() const { return S(e11 + e22); }

  /// Row-major flattening, the order used for independence minors.
  std::array<S, 4> flat() const { return {e11, e12, e21, e22}; }

  Mat2& operator+=(const Mat2& o) {
    e11 += o.e11;
    e12 += o.e12;
    e21 += o.e21;
    e22 += o.e22;
    return *this;
  }
  Mat2& operator-=(const Mat2& o) {
    e11 -= o.e11;
    e12 -= o.e12;
    e21 -= o.e21;
    e22 -= o.e22;
    return *this;
  }
  Mat2& operator*=(const S& s) {
    e11 *= s;
    e12 *= s;
    e21 *= s;
    e22 *= s;
    return *this;
  }
  friend Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
  friend Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
  friend Mat2 operator*(Mat2 a, const S& s) { return a *= s; }
  friend Mat2 operator*(const S& s, Mat2 a) { return a *= s; }
  friend bool operator==(const Mat2& a, const Mat2& b) {
    return a.e11 == b.e11 && a.e12 == b.e12 && a.e21 == b.e21 && a.e22 == b.e22;
  }
};

using RMat = Mat2<Rational>;
using IMat = Mat2<Interval>;
using DMat = Mat2<double>;

inline Rational det2(const RMat& m) { return m.det(); }

/// Exact rank: 0 iff m = 0, 1 iff det = 0 and m != 0, else 2.
inline int rank2x2(const RMat& m) {
  if (m.e11 == 0 && m.e12 == 0 && m.e21 == 0 && m.e22 == 0) return 0;
  return m.det() == 0 ? 1 : 2;
}

/// Rank from an interval enclosure. Throws SignUndecided when the determinant
/// enclosure straddles zero.
int rank2x2(const IMat& m);

inline IMat to_interval(const RMat& m) {
  return {Interval(m.e11), Interval(m.e12), Interval(m.e21), Interval(m.e22)};
}

inline DMat to_double(const RMat& m) {
  return {m.e11.get_d(), m.e12.get_d(), m.e21.get_d(), m.e22.get_d()};
}

/// (X)_{21} + (X)_{12} == 0.
inline bool is_skew_offdiagonal(const RMat& m) { return m.e12 + m.e21 == 0; }

std::string to_text(const RMat& m);

}  // namespace tfive
