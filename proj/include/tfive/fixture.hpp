#pragma once

#include <array>

#include "tfive/mat2.hpp"

namespace tfive {

/// The published large T5 example (five exact 2x2 matrices, embedded
/// read-only). Element order is the published labelling X_1 .. X_5.
const std::array<RMat, 5>& reference_large_t5();

}  // namespace tfive
