#include "twistleaf/types.hpp"

#include <stdexcept>

namespace twistleaf {

UnitVec3 UnitVec3::from_components(double u, double v, double w) {
  const double n2 = u * u + v * v + w * w;
  if (!(std::abs(n2 - 1.0) <= 2.0 * kUnitTolerance)) {
    throw std::invalid_argument("UnitVec3: components are not unit length");
  }
  return UnitVec3(u, v, w);
}

UnitVec3 UnitVec3::normalize(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("UnitVec3: cannot normalize a zero or non-finite vector");
  }
  return UnitVec3(x / n, y / n, z / n);
}

}  // namespace twistleaf
