#pragma once

// Signed distance to a planar graph s = phi(r) and the conformal foliation
// of R^3 by the fibres of (q, r, s) -> (q, rho(r, s)).

#include <array>
#include <cstddef>
#include <vector>

#include "twistleaf/finite_diff.hpp"
#include "twistleaf/foliation.hpp"
#include "twistleaf/grid.hpp"
#include "twistleaf/types.hpp"

namespace twistleaf {

/// Smooth profile phi(t) with two derivatives.
class Profile {
 public:
  enum class Kind { polynomial, sine, bump };

  /// sum c_k t^k.
  static Profile polynomial(std::vector<double> coeffs);
  /// amplitude * sin(frequency * t + phase).
  static Profile sine(double amplitude, double frequency, double phase = 0.0);
  /// amplitude * e * exp(-1 / (1 - (t/radius)^2)) for |t| < radius, else 0.
  /// Peak value is `amplitude`; smooth everywhere, not analytic at |t| = radius.
  static Profile bump(double amplitude, double radius);

  Kind kind() const noexcept { return kind_; }
  const std::vector<double>& params() const noexcept { return params_; }

  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;

 private:
  Profile(Kind kind, std::vector<double> params) : kind_(kind), params_(std::move(params)) {}
  std::array<double, 3> jet(double t) const;
  Kind kind_;
  std::vector<double> params_;
};

struct DistanceConfig {
  int scan_points = 401;        // coarse scan over [r - d0, r + d0]
  double tie_tolerance = 1e-6;  // competing minima closer than this are a tie
  int newton_iters = 50;
};

struct DistanceResult {
  double rho = 0.0;  // signed: positive above the graph
  double t = 0.0;    // foot-point parameter
};

/// Nearest point on the graph by coarse scan and Newton polish of
/// D(t) = (r-t)^2 + (s-phi(t))^2. Throws NonUniqueNearestPointError when two
/// separated local minima tie, i.e. the point lies outside the tubular
/// neighbourhood where rho is smooth.
DistanceResult signed_distance(const Profile& phi, double r, double s,
                               const DistanceConfig& cfg = {});

/// Unit normal (-phi', 1)/sqrt(1+phi'^2) at the foot point: grad rho.
std::array<double, 2> distance_gradient(const Profile& phi, double r, double s,
                                        const DistanceConfig& cfg = {});

struct SignedDistanceField {
  Profile phi;
  Axis r_axis, s_axis;
  DistanceConfig config;
  std::vector<double> rho;    // r-major: index = i * s_count + j
  std::vector<double> t;
  std::vector<char> valid;    // false where the nearest point is not unique

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * s_axis.count + j; }
};

SignedDistanceField build_distance_field(const Profile& phi, const Axis& r_axis,
                                         const Axis& s_axis, const DistanceConfig& cfg = {});

/// | |grad rho| - 1 | by central differences of signed_distance at (r, s).
double eikonal_residual(const Profile& phi, double r, double s, double fd_step = kDefaultFdStep,
                        const DistanceConfig& cfg = {});
/// Grid form; throws BoundaryError on the grid edge.
double eikonal_residual(const SignedDistanceField& field, int i, int j,
                        double fd_step = kDefaultFdStep);

/// U = (0, -rho_s, rho_r): unit tangent to the fibres of (q, rho).
UnitVec3 distance_foliation_vector(const Profile& phi, const Point3& x,
                                   const DistanceConfig& cfg = {});
UField distance_foliation_field(Profile phi, DistanceConfig cfg = {});

}  // namespace twistleaf
