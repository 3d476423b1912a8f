#pragma once

// Coordinate maps of the twistor fibrations CP3 -> S4 and Q -> S3, the
// orthogonal complex structures of R4, and the real-subspace classification
// in C3.

#include <array>
#include <span>
#include <string_view>

#include "twistleaf/types.hpp"

namespace twistleaf {

/// Point [Z1,Z2,Z3,Z4] of CP3, stored as its canonical representative: the
/// component of largest modulus (lowest index on ties) is scaled to exactly 1.
class ProjPoint {
 public:
  /// Throws std::invalid_argument if every component is zero or any is non-finite.
  explicit ProjPoint(const std::array<Complex, 4>& z);

  const std::array<Complex, 4>& coords() const noexcept { return z_; }
  Complex operator[](std::size_t k) const noexcept { return z_[k]; }
  double norm2() const noexcept;

 private:
  std::array<Complex, 4> z_;
};

/// Point (t, zeta1, zeta2) of R (+) C^2 = R^5.
struct R5Point {
  double t = 0.0;
  Complex zeta1{};
  Complex zeta2{};
};

/// Quaternionic-span projection CP3 -> unit sphere of R^5.
R5Point tau_project(const ProjPoint& p);

/// Stereographic projection from t = 1. Throws PoleError at the pole.
std::array<Complex, 2> stereo(const R5Point& x);
R5Point stereo_inv(Complex a, Complex b);

/// (p, q, r, s) in R^4 together with the fibre coordinate (u, v, w) in S^2.
struct TwistorCoords {
  Point4 x{};
  UnitVec3 U;
};

/// Chart of CP3 minus the line [*,*,0,0]. Throws LineAtInfinityError there.
TwistorCoords coords_convenient(const ProjPoint& p);
/// The same chart in affine coordinates [z1, z2, z3, 1].
TwistorCoords coords_explicit(Complex z1, Complex z2, Complex z3);

/// Affine incidence relation of the chart: the (z1, z2) coordinates of the
/// point with fibre coordinate z3 = z/w over x = (p, q, r, s), scaled by w:
///   z1 = (r+is) z + (p-iq) w,   z2 = (p+iq) z - (r-is) w.
std::array<Complex, 2> incidence(const Point4& x, Complex z, Complex w);

using Mat4 = std::array<std::array<double, 4>, 4>;
using Mat7 = std::array<std::array<double, 7>, 7>;

/// Orthogonal complex structure of R^4 parameterised by U in S^2.
Mat4 jmat(const UnitVec3& U);
/// Complex structure of R^4 x R^3 at fibre point U: jmat(U) on R^4 and
/// X -> U x X on the fibre directions.
Mat7 big_jmat(const UnitVec3& U);

/// Contact form u dq + v dr + w ds and the complex structure at a point of Q.
struct ContactData {
  std::array<double, 3> theta{};
  Mat7 big_j{};
};
ContactData contact_data(const UnitVec3& U);

enum class QuadricConvention { modulus, hermitian };

/// modulus:   |Z1|^2 + |Z2|^2 - |Z3|^2 - |Z4|^2
/// hermitian: Z1 conj(Z4) + Z2 conj(Z3) + Z3 conj(Z2) + Z4 conj(Z1)
/// evaluated on the canonical representative.
double hyperquadric_residual(const ProjPoint& p, QuadricConvention convention);

/// Unitary change of coordinates carrying the hermitian form to the modulus form:
/// (Z1+Z4, Z2+Z3, Z1-Z4, Z2-Z3)/sqrt(2).
ProjPoint hermitian_to_modulus(const ProjPoint& p);
ProjPoint modulus_to_hermitian(const ProjPoint& p);

enum class SubspaceLabel { hypersurface, generic, complex, totally_real, cr_dim_1 };
std::string_view to_string(SubspaceLabel label);

struct SubspaceClass {
  SubspaceLabel label;
  int hdim;  // complex dimension of T intersect JT
};

/// Real 6-vector (x1, y1, x2, y2, x3, y3) for a point of C^3.
using RealVec6 = std::array<double, 6>;
/// Multiplication by i on C^3 written in RealVec6 coordinates.
RealVec6 apply_complex_structure(const RealVec6& x);

/// Classifies the real span T of `basis` by real codimension d and the
/// complex dimension of its maximal complex subspace. Ranks use singular
/// values above 1e-9 times the largest one.
/// Throws ClassificationError for a dependent basis or d outside {1, 2, 3}.
SubspaceClass classify_subspace(std::span<const RealVec6> basis);

}  // namespace twistleaf
