#pragma once

// Closed null 1-forms on R^3 built from holomorphic data: the Lagrangian
// (Xi) construction z = Xi_1(z1, z2), w = -Xi_2(z1, z2), its Legendre-dual
// description by a potential F(z, w), and residual tests for closedness,
// integrability and the annihilating operator.

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "twistleaf/expr.hpp"
#include "twistleaf/finite_diff.hpp"
#include "twistleaf/foliation.hpp"
#include "twistleaf/grid.hpp"
#include "twistleaf/types.hpp"

namespace twistleaf {

/// omega = a dq + b dr + c ds.
struct NullForm {
  Complex a{}, b{}, c{};

  Complex square() const { return a * a + b * b + c * c; }
  double max_abs() const;
};

/// 2wz dq + i(w^2+z^2) dr + (w^2-z^2) ds; null for every (z, w).
NullForm make_omega(Complex z, Complex w);
/// The single-function form 2z dq + i(1+z^2) dr + (1-z^2) ds, i.e. make_omega(z, 1).
inline NullForm omega_from_z(Complex z) { return make_omega(z, 1.0); }

using Mat2c = std::array<std::array<Complex, 2>, 2>;

/// A holomorphic map C^2 -> C^2 with its Jacobian, jac[i][j] = d value_i / d x_j.
struct GradJet {
  std::array<Complex, 2> value{};
  Mat2c jac{};
};
using GradientFn = std::function<GradJet(Complex, Complex)>;

/// Gradient and Hessian of a two-variable potential.
GradientFn gradient_of_potential(const HoloExpr& potential);
/// Pair of component expressions (not necessarily a gradient).
GradientFn gradient_from_components(const HoloExpr& first, const HoloExpr& second);

/// Xi_1 = 0, Xi_2 = -g(z2), where zeta = g(i(zeta^2 - 1) zeta) near zeta = 1.
/// g is evaluated by an inner Newton solve seeded at 1. The resulting field is
/// (z, w) = (0, sqrt(1 + ir + s)).
GradientFn sqrt_family_gradient();

/// d(second)/dz1 - d(first)/dz2: zero iff first dz1 + second dz2 is closed.
Complex lagrangian_residual(const HoloExpr& first, const HoloExpr& second, Complex z1, Complex z2);

struct ZW {
  Complex z{}, w{};
};

/// (z1, z2) = ((r+is)z - iqw, iqz - (r-is)w).
std::array<Complex, 2> zw_incidence(const Point3& x, const ZW& zw);

enum class FormRoute { xi, nurowski };

struct ZWSample {
  Point3 point{};
  ZW zw{};
  SampleStatus status = SampleStatus::no_converge;  // branch_point = singular Jacobian
  int iterations = 0;
  bool degenerate = false;  // omega vanishes at the solution
};

/// Two-variable Newton on the system of `route`:
///   xi:       z - Xi_1(z1, z2) = 0,  w + Xi_2(z1, z2) = 0   (map = grad Xi)
///   nurowski: (r+is)z - iqw + F_z = 0,  iqz - (r-is)w - F_w = 0   (map = grad F)
/// with a halving line search as in solve_implicit.
ZWSample solve_zw(FormRoute route, const GradientFn& map, const Point3& x, const ZW& seed,
                  const SolverConfig& cfg);

/// solve_zw for the Xi system; throws NoConvergeError or SingularJacobianError.
ZW solve_xi_point(const GradientFn& xi, const Point3& x, const ZW& seed, const SolverConfig& cfg);

struct NurowskiSolution {
  ZW zw;
  bool degenerate = false;
};
/// solve_zw for the F system; same errors as solve_xi_point.
NurowskiSolution nurowski_solve_point(const GradientFn& dF, const Point3& x, const ZW& seed,
                                      const SolverConfig& cfg);

/// Gradient of the Legendre dual F of Xi, where grad Xi(z1, z2) = (z, -w) and
/// grad F(z, w) = (-z1, z2). Each evaluation inverts grad Xi by Newton from
/// `seed`; throws SingularJacobianError where the Hessian of Xi degenerates.
GradientFn legendre_dual(GradientFn xi, std::array<Complex, 2> seed = {0.0, 0.0},
                         SolverConfig cfg = {});

struct DualityCheck {
  double defect = 0.0;  // max |Hess(Xi) K - Id|
  Mat2c hessian{};
  Mat2c inverse{};      // K, the Jacobian of the inverted gradient map
};
/// Compares the Hessian of Xi with the Jacobian K of the numerically inverted
/// gradient map (fourth-order differences of the Newton inverse). Throws
/// SingularJacobianError when the Hessian is singular, and Error when either
/// matrix is asymmetric beyond 1e-10.
DualityCheck jacobian_duality_check(const HoloExpr& xi, Complex z1, Complex z2);

/// Phi(a, b) = Xi_1(w a, w b) / w where w + Xi_2(w a, w b) = 0, solved by
/// Newton from `w_seed`. zeta = z / w then solves zeta = Phi(...) pointwise.
Complex induced_phi(const GradientFn& xi, Complex a, Complex b, Complex w_seed = 1.0);

using ZWFunction = std::function<ZW(const Point3&)>;
using FormFunction = std::function<NullForm(const Point3&)>;

/// Pointwise solver seeded with a fixed (z, w); throws on failure.
ZWFunction local_zw_function(FormRoute route, GradientFn map, SolverConfig cfg, ZW seed);
FormFunction form_of(ZWFunction zw);

struct ZWGrid {
  GridSpec spec;
  SolverConfig config;
  FormRoute route = FormRoute::xi;
  GradientFn map;
  std::vector<ZWSample> samples;
  std::size_t seed_index = 0;
  std::vector<std::size_t> order;
};

/// Breadth-first continuation as in grid_field. Throws if the seed fails.
ZWGrid zw_grid(FormRoute route, const GradientFn& map, const GridSpec& spec,
               const SolverConfig& cfg, const Point3& seed_point = {0.0, 0.0, 0.0},
               const ZW& seed = {0.0, 1.0});

/// Re-solves near sample `index` (seeded by it). Throws BoundaryError on the
/// boundary and NoConvergeError for failed samples.
ZWFunction grid_local_zw(const ZWGrid& grid, std::size_t index);
/// Evaluates anywhere in the grid box, seeded by the nearest grid sample.
ZWFunction grid_zw_function(const ZWGrid& grid);

/// max of |b_q - a_r|, |c_q - a_s|, |c_r - b_s|.
double closedness_residual(const FormFunction& omega, const Point3& x,
                           double fd_step = kDefaultFdStep);
/// Coefficient of omega ^ d omega on dq ^ dr ^ ds.
Complex wedge_residual(const FormFunction& omega, const Point3& x, double fd_step = kDefaultFdStep);
/// (L z, L w) with L = 2wz d_q + i(w^2+z^2) d_r + (w^2-z^2) d_s.
std::array<Complex, 2> key_operator_residual(const ZWFunction& zw, const Point3& x,
                                             double fd_step = kDefaultFdStep);

/// dz ^ dw on (dq^dr, dq^ds, dr^ds).
std::array<Complex, 3> dzdw_components(const ZWFunction& zw, const Point3& x,
                                       double fd_step = kDefaultFdStep);
/// Euclidean norm of dzdw_components; near zero means the F description fails.
double dzdw_degeneracy(const ZWFunction& zw, const Point3& x, double fd_step = kDefaultFdStep);
inline constexpr double kDzDwDegenerate = 1e-6;

}  // namespace twistleaf
