#pragma once

// Pointwise tests of conformality and integrability. Every test takes the
// field as a callable so that closed forms, solver fields and synthetic
// fields go through the same code; derivatives are central differences.

#include <array>
#include <cstddef>
#include <vector>

#include "twistleaf/finite_diff.hpp"
#include "twistleaf/foliation.hpp"
#include "twistleaf/types.hpp"

namespace twistleaf {

/// 2z z_q + i(1+z^2) z_r + (1-z^2) z_s.
Complex conformal_pde_value(Complex z, const std::array<Complex, 3>& dz);

/// Conformal PDE with (z_q, z_r, z_s) by central differences of `z`.
Complex conformal_pde_residual_fd(const ZFunction& z, const Point3& x,
                                  double fd_step = kDefaultFdStep);

/// (z_q, z_r, z_s) from the implicit function theorem applied to G(z) = 0.
/// Throws BranchPointError where dG/dz vanishes.
std::array<Complex, 3> implicit_gradient(const ImplicitData& data, const Point3& x, Complex z);

/// Conformal PDE with partials from implicit_gradient; z must solve G = 0 at x.
Complex conformal_pde_residual_implicit(const ImplicitData& data, const Point3& x, Complex z);

/// The frame test with X = (-v, u, 0), Y = (-uw, -vw, u^2+v^2):
///   ( -<U, D_X Y + D_Y X>, -<U, D_X X - D_Y Y> ),
/// signed so that at U = (1, 0, 0) the pair is (w_r + v_s, v_r - w_s).
/// Where u^2 + v^2 <= 1e-6 the coordinates and components are cyclically
/// permuted first.
std::array<double, 2> conformality_frame_residual(const UField& U, const Point3& x,
                                                  double fd_step = kDefaultFdStep);

/// Largest component of the Nijenhuis tensor of jmat(U(p, q, r, s)) over all
/// pairs of coordinate fields.
double nijenhuis_residual(const UField4& U, const Point4& x, double fd_step = kDefaultFdStep);

/// Largest principal-angle sine between the tangent space of the section
/// x -> (x, U(x)) in R^4 x R^3 and its image under big_jmat.
double section_complex_tangency(const UField4& U, const Point4& x,
                                double fd_step = kDefaultFdStep);

/// Largest principal-angle sine between H = ker(theta) cap T(graph U) in
/// R^3 x R^3 and its image under the induced complex structure.
double cr_tangency_residual(const UField& U, const Point3& x, double fd_step = kDefaultFdStep);

/// Largest principal-angle sine between span(a) and span(b), each given as a
/// list of linearly independent vectors of equal length.
double principal_angle_sine(const std::vector<std::vector<double>>& a,
                            const std::vector<std::vector<double>>& b);

// Grid adapters. Derivatives at a grid point re-solve at the stencil points,
// seeded with the sample's own z, so they do not depend on the grid spacing.

/// Throws BoundaryError unless `index` is an interior grid point.
void require_interior(const GridSpec& spec, std::size_t index);

/// Throws BoundaryError on boundary points and NoConvergeError on failed samples.
ZFunction grid_local_z(const FieldGrid& grid, std::size_t index);
UField grid_local_u(const FieldGrid& grid, std::size_t index);

enum class PdeMethod { fd, implicit_derivative };

Complex conformal_pde_residual(const FieldGrid& grid, std::size_t index, PdeMethod method);
std::array<double, 2> conformality_frame_residual(const FieldGrid& grid, std::size_t index);
double cr_tangency_residual(const FieldGrid& grid, std::size_t index);

}  // namespace twistleaf
