#include "tfive/mat2.hpp"

namespace tfive {

int rank2x2(const IMat& m) {
  auto is_zero = [](const Interval& x) { return x.is_point() && x.lo() == 0; };
  if (is_zero(m.e11) && is_zero(m.e12) && is_zero(m.e21) && is_zero(m.e22)) return 0;
  const int s = m.det().sign();  // throws SignUndecided when undecidable
  if (s != 0) return 2;
  return 1;
}

std::string to_text(const RMat& m) {
  return "[[" + to_text(m.e11) + ", " + to_text(m.e12) + "], [" + to_text(m.e21) + ", " +
         to_text(m.e22) + "]]";
}

}  // namespace tfive
