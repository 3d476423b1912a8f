#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace twistleaf {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Point (q, r, s) of Euclidean 3-space.
using Point3 = std::array<double, 3>;
/// Point (p, q, r, s) of Euclidean 4-space.
using Point4 = std::array<double, 4>;

/// Unit vector (u, v, w).
class UnitVec3 {
 public:
  static constexpr double kUnitTolerance = 1e-12;

  UnitVec3() : u_(1.0), v_(0.0), w_(0.0) {}

  /// Throws std::invalid_argument unless u^2+v^2+w^2 = 1 within kUnitTolerance.
  static UnitVec3 from_components(double u, double v, double w);
  /// Throws std::invalid_argument for the zero vector.
  static UnitVec3 normalize(double x, double y, double z);

  double u() const noexcept { return u_; }
  double v() const noexcept { return v_; }
  double w() const noexcept { return w_; }
  std::array<double, 3> array() const noexcept { return {u_, v_, w_}; }
  double operator[](int k) const noexcept { return k == 0 ? u_ : (k == 1 ? v_ : w_); }

 private:
  UnitVec3(double u, double v, double w) : u_(u), v_(v), w_(w) {}
  double u_, v_, w_;
};

inline double norm3(const std::array<double, 3>& x) {
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

}  // namespace twistleaf
