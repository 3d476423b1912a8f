#pragma once

// Integral curves of unit vector fields.

#include <optional>
#include <vector>

#include "twistleaf/foliation.hpp"
#include "twistleaf/types.hpp"

namespace twistleaf {

/// Closed axis-aligned box in (q, r, s).
struct Box {
  Point3 lo{};
  Point3 hi{};
  bool contains(const Point3& x) const {
    for (int k = 0; k < 3; ++k) {
      if (!(x[k] >= lo[k] && x[k] <= hi[k])) return false;
    }
    return true;
  }
};

/// Classical RK4 with fixed step; returns n + 1 points starting at `start`.
/// Throws OutOfDomainError if any stage leaves `domain`; field evaluation
/// errors propagate.
std::vector<Point3> integrate_curve(const UField& U, const Point3& start, double step, int n,
                                    const std::optional<Box>& domain = std::nullopt);

/// Observed convergence order from endpoints at steps h, h/2, h/4 over the
/// same arc length: log2(|e(h) - e(h/2)| / |e(h/2) - e(h/4)|).
double observed_order(const UField& U, const Point3& start, double step, int n);

}  // namespace twistleaf
