#include "twistleaf/curves.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "twistleaf/error.hpp"

namespace twistleaf {

namespace {

Point3 axpy(const Point3& x, double h, const std::array<double, 3>& v) {
  return {x[0] + h * v[0], x[1] + h * v[1], x[2] + h * v[2]};
}

}  // namespace

std::vector<Point3> integrate_curve(const UField& U, const Point3& start, double step, int n,
                                    const std::optional<Box>& domain) {
  if (n < 0) throw std::invalid_argument("integrate_curve: negative step count");
  if (!std::isfinite(step)) throw std::invalid_argument("integrate_curve: step must be finite");
  auto eval = [&](const Point3& x) {
    if (domain && !domain->contains(x)) {
      throw OutOfDomainError("integral curve left the domain");
    }
    return U(x).array();
  };
  std::vector<Point3> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  Point3 x = start;
  out.push_back(x);
  for (int i = 0; i < n; ++i) {
    const auto k1 = eval(x);
    const auto k2 = eval(axpy(x, 0.5 * step, k1));
    const auto k3 = eval(axpy(x, 0.5 * step, k2));
    const auto k4 = eval(axpy(x, step, k3));
    for (int c = 0; c < 3; ++c) x[c] += step / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    if (domain && !domain->contains(x)) throw OutOfDomainError("integral curve left the domain");
    out.push_back(x);
  }
  return out;
}

double observed_order(const UField& U, const Point3& start, double step, int n) {
  const Point3 a = integrate_curve(U, start, step, n).back();
  const Point3 b = integrate_curve(U, start, step / 2.0, 2 * n).back();
  const Point3 c = integrate_curve(U, start, step / 4.0, 4 * n).back();
  double num = 0.0, den = 0.0;
  for (int k = 0; k < 3; ++k) {
    num += (a[k] - b[k]) * (a[k] - b[k]);
    den += (b[k] - c[k]) * (b[k] - c[k]);
  }
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return 0.5 * std::log2(num / den);
}

}  // namespace twistleaf
