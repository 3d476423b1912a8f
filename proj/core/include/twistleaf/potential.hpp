#pragma once

// Potentials h with dh = omega for closed complex 1-forms on boxes in R^3,
// and the horizontal conformality test for complex-valued maps.

#include <array>
#include <functional>
#include <vector>

#include "twistleaf/finite_diff.hpp"
#include "twistleaf/grid.hpp"
#include "twistleaf/nullform.hpp"

namespace twistleaf {

using ComplexFunction = std::function<Complex(const Point3&)>;

/// Integral of the `axis` coefficient of omega along the segment from `from`
/// moving `length` along that axis; composite Simpson with `subintervals`
/// (rounded up to even).
Complex segment_integral(const FormFunction& omega, const Point3& from, int axis, double length,
                         int subintervals);

/// h(x) = integral of omega from `base` to x along the axis-ordered path
/// q, then r, then s.
class PathPotential {
 public:
  PathPotential(FormFunction omega, Point3 base, int subintervals = 64);
  Complex operator()(const Point3& x) const;
  const Point3& base() const noexcept { return base_; }

 private:
  FormFunction omega_;
  Point3 base_;
  int subintervals_;
};

/// Circulation of omega around the rectangle with corner `corner` spanned by
/// `len_a` along axis `a` and `len_b` along axis `b`.
Complex loop_integral(const FormFunction& omega, const Point3& corner, int a, double len_a, int b,
                      double len_b, int subintervals = 64);

struct PotentialConfig {
  int subintervals = 64;
  /// Refuse to integrate when closedness_residual exceeds this at any interior point.
  double closedness_threshold = 1e-6;
  double fd_step = kDefaultFdStep;
};

struct PotentialGrid {
  GridSpec spec;
  Point3 base{};
  std::vector<Complex> h;       // by grid index
  double max_closedness = 0.0;  // over interior points
};

/// Checks closedness on the grid interior (NotClosedError with the worst point
/// otherwise), then evaluates the path potential at every grid point.
PotentialGrid potential_from_closed_form(const FormFunction& omega, const GridSpec& spec,
                                         const Point3& base, const PotentialConfig& cfg = {});

/// max over axes of |d_k h - omega_k| by central differences of h.
double potential_gradient_defect(const ComplexFunction& h, const FormFunction& omega,
                                 const Point3& x, double fd_step = kDefaultFdStep);

/// (|grad f| - |grad g|, <grad f, grad g>) for h = f + ig.
std::array<double, 2> horizontal_conformality_check(const ComplexFunction& h, const Point3& x,
                                                    double fd_step = kDefaultFdStep);

}  // namespace twistleaf
