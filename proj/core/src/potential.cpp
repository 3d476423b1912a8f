#include "twistleaf/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "twistleaf/error.hpp"
#include "twistleaf/parallel.hpp"

namespace twistleaf {

namespace {

Complex coefficient(const NullForm& f, int axis) { return axis == 0 ? f.a : (axis == 1 ? f.b : f.c); }

}  // namespace

Complex segment_integral(const FormFunction& omega, const Point3& from, int axis, double length,
                         int subintervals) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("segment_integral: axis out of range");
  if (length == 0.0) return 0.0;
  const int n = std::max(2, subintervals + (subintervals % 2));
  const double h = length / n;
  Complex sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    Point3 x = from;
    x[axis] = k == n ? from[axis] + length : from[axis] + h * k;
    const double weight = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    sum += weight * coefficient(omega(x), axis);
  }
  return sum * (h / 3.0);
}

PathPotential::PathPotential(FormFunction omega, Point3 base, int subintervals)
    : omega_(std::move(omega)), base_(base), subintervals_(subintervals) {
  if (subintervals < 2) throw std::invalid_argument("PathPotential: need at least 2 subintervals");
}

Complex PathPotential::operator()(const Point3& x) const {
  Complex h = 0.0;
  Point3 at = base_;
  for (int axis = 0; axis < 3; ++axis) {
    h += segment_integral(omega_, at, axis, x[axis] - base_[axis], subintervals_);
    at[axis] = x[axis];
  }
  return h;
}

Complex loop_integral(const FormFunction& omega, const Point3& corner, int a, double len_a, int b,
                      double len_b, int subintervals) {
  Point3 p = corner;
  Complex total = segment_integral(omega, p, a, len_a, subintervals);
  p[a] += len_a;
  total += segment_integral(omega, p, b, len_b, subintervals);
  p[b] += len_b;
  total += segment_integral(omega, p, a, -len_a, subintervals);
  p[a] -= len_a;
  total += segment_integral(omega, p, b, -len_b, subintervals);
  return total;
}

PotentialGrid potential_from_closed_form(const FormFunction& omega, const GridSpec& spec,
                                         const Point3& base, const PotentialConfig& cfg) {
  spec.validate();
  PotentialGrid out;
  out.spec = spec;
  out.base = base;
  const std::size_t n = spec.size();

  std::vector<double> closed(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    if (spec.interior(i)) closed[i] = closedness_residual(omega, spec.point(i), cfg.fd_step);
  });
  std::size_t worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (closed[i] > closed[worst]) worst = i;
  }
  out.max_closedness = n ? closed[worst] : 0.0;
  if (out.max_closedness > cfg.closedness_threshold) {
    const Point3 p = spec.point(worst);
    std::ostringstream msg;
    msg.precision(6);
    msg << "form is not closed: closedness residual " << out.max_closedness << " at (" << p[0]
        << ", " << p[1] << ", " << p[2] << ") exceeds " << cfg.closedness_threshold;
    throw NotClosedError(msg.str());
  }

  const PathPotential h(omega, base, cfg.subintervals);
  out.h.resize(n);
  parallel_for(n, [&](std::size_t i) { out.h[i] = h(spec.point(i)); });
  return out;
}

double potential_gradient_defect(const ComplexFunction& h, const FormFunction& omega,
                                 const Point3& x, double fd_step) {
  const auto dh = central_partials<3>(h, x, fd_step);
  const NullForm f = omega(x);
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(dh[k] - coefficient(f, k)));
  return worst;
}

std::array<double, 2> horizontal_conformality_check(const ComplexFunction& h, const Point3& x,
                                                    double fd_step) {
  const auto dh = central_partials<3>(h, x, fd_step);
  double ff = 0.0, gg = 0.0, fg = 0.0;
  for (const Complex& d : dh) {
    ff += d.real() * d.real();
    gg += d.imag() * d.imag();
    fg += d.real() * d.imag();
  }
  return {std::sqrt(ff) - std::sqrt(gg), fg};
}

}  // namespace twistleaf
