#include "twistleaf/eikonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "twistleaf/error.hpp"
#include "twistleaf/parallel.hpp"

namespace twistleaf {

Profile Profile::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  return Profile(Kind::polynomial, std::move(coeffs));
}

Profile Profile::sine(double amplitude, double frequency, double phase) {
  return Profile(Kind::sine, {amplitude, frequency, phase});
}

Profile Profile::bump(double amplitude, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("bump radius must be positive");
  return Profile(Kind::bump, {amplitude, radius});
}

std::array<double, 3> Profile::jet(double t) const {
  switch (kind_) {
    case Kind::polynomial: {
      // Horner for value and both derivatives.
      double v = 0.0, d = 0.0, dd = 0.0;
      for (auto it = params_.rbegin(); it != params_.rend(); ++it) {
        dd = dd * t + 2.0 * d;
        d = d * t + v;
        v = v * t + *it;
      }
      return {v, d, dd};
    }
    case Kind::sine: {
      const double a = params_[0], k = params_[1], arg = k * t + params_[2];
      return {a * std::sin(arg), a * k * std::cos(arg), -a * k * k * std::sin(arg)};
    }
    case Kind::bump: {
      const double a = params_[0], R = params_[1];
      const double u = t / R;
      const double m = 1.0 - u * u;
      if (!(m > 0.0)) return {0.0, 0.0, 0.0};
      const double g = a * std::exp(1.0 - 1.0 / m);
      const double h1 = -2.0 * u / (m * m);
      const double h2 = -2.0 / (m * m) - 8.0 * u * u / (m * m * m);
      return {g, g * h1 / R, g * (h1 * h1 + h2) / (R * R)};
    }
  }
  return {0.0, 0.0, 0.0};
}

double Profile::value(double t) const { return jet(t)[0]; }
double Profile::d1(double t) const { return jet(t)[1]; }
double Profile::d2(double t) const { return jet(t)[2]; }

namespace {

struct Candidate {
  double t;
  double dist2;
};

double dist2(const Profile& phi, double r, double s, double t) {
  const double a = r - t, b = s - phi.value(t);
  return a * a + b * b;
}

// Newton on D'(t) = 0 inside [lo, hi], falling back to the bracket midpoint.
double polish(const Profile& phi, double r, double s, double t, double lo, double hi, int iters) {
  for (int it = 0; it < iters; ++it) {
    const auto j = std::array<double, 3>{phi.value(t), phi.d1(t), phi.d2(t)};
    const double e = s - j[0];
    const double g = -2.0 * (r - t) - 2.0 * e * j[1];
    const double h = 2.0 + 2.0 * j[1] * j[1] - 2.0 * e * j[2];
    if (!(h > 0.0)) break;
    double next = t - g / h;
    if (next < lo || next > hi) next = 0.5 * (t + (next < lo ? lo : hi));
    if (std::abs(next - t) <= 1e-15 * (1.0 + std::abs(t))) {
      t = next;
      break;
    }
    t = next;
  }
  return t;
}

}  // namespace

DistanceResult signed_distance(const Profile& phi, double r, double s, const DistanceConfig& cfg) {
  const double gap = s - phi.value(r);
  const double d0 = std::abs(gap);
  if (d0 == 0.0) return {0.0, r};
  const int n = std::max(3, cfg.scan_points);
  const double lo = r - d0, hi = r + d0;
  const double dt = (hi - lo) / (n - 1);
  std::vector<double> ts(static_cast<std::size_t>(n)), ds(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    ts[k] = k == n - 1 ? hi : lo + dt * k;
    ds[k] = dist2(phi, r, s, ts[k]);
  }
  std::vector<Candidate> minima;
  for (int k = 0; k < n; ++k) {
    const bool left = k == 0 || ds[k] <= ds[k - 1];
    const bool right = k == n - 1 || ds[k] <= ds[k + 1];
    if (!(left && right)) continue;
    const double a = std::max(lo, ts[k] - dt), b = std::min(hi, ts[k] + dt);
    const double t = polish(phi, r, s, ts[k], a, b, cfg.newton_iters);
    const double d = dist2(phi, r, s, t);
    minima.push_back(d <= ds[k] ? Candidate{t, d} : Candidate{ts[k], ds[k]});
  }
  const auto best = std::min_element(minima.begin(), minima.end(),
                                     [](const Candidate& x, const Candidate& y) { return x.dist2 < y.dist2; });
  const double dist = std::sqrt(best->dist2);
  for (const Candidate& c : minima) {
    // Plateaus of the scan produce repeated entries for the same minimum.
    if (std::abs(c.t - best->t) <= 2.0 * dt) continue;
    if (std::sqrt(c.dist2) - dist < cfg.tie_tolerance) {
      throw NonUniqueNearestPointError("nearest point on the graph is not unique");
    }
  }
  return {gap > 0.0 ? dist : -dist, best->t};
}

std::array<double, 2> distance_gradient(const Profile& phi, double r, double s,
                                        const DistanceConfig& cfg) {
  const DistanceResult d = signed_distance(phi, r, s, cfg);
  const double slope = phi.d1(d.t);
  const double norm = std::sqrt(1.0 + slope * slope);
  return {-slope / norm, 1.0 / norm};
}

SignedDistanceField build_distance_field(const Profile& phi, const Axis& r_axis,
                                         const Axis& s_axis, const DistanceConfig& cfg) {
  if (r_axis.count < 1 || s_axis.count < 1) throw std::invalid_argument("axis counts must be positive");
  SignedDistanceField f{phi, r_axis, s_axis, cfg, {}, {}, {}};
  const std::size_t n = static_cast<std::size_t>(r_axis.count) * s_axis.count;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  f.rho.assign(n, nan);
  f.t.assign(n, nan);
  f.valid.assign(n, 0);
  parallel_for(n, [&](std::size_t k) {
    const int i = static_cast<int>(k / s_axis.count), j = static_cast<int>(k % s_axis.count);
    try {
      const DistanceResult d = signed_distance(phi, r_axis.at(i), s_axis.at(j), cfg);
      f.rho[k] = d.rho;
      f.t[k] = d.t;
      f.valid[k] = 1;
    } catch (const NonUniqueNearestPointError&) {
      // left invalid
    }
  });
  return f;
}

double eikonal_residual(const Profile& phi, double r, double s, double fd_step,
                        const DistanceConfig& cfg) {
  auto rho = [&](const std::array<double, 2>& y) { return signed_distance(phi, y[0], y[1], cfg).rho; };
  const auto g = central_partials<2>(rho, std::array<double, 2>{r, s}, fd_step);
  return std::abs(std::hypot(g[0], g[1]) - 1.0);
}

double eikonal_residual(const SignedDistanceField& field, int i, int j, double fd_step) {
  if (i <= 0 || j <= 0 || i >= field.r_axis.count - 1 || j >= field.s_axis.count - 1) {
    throw BoundaryError("eikonal residual requested on the grid edge");
  }
  return eikonal_residual(field.phi, field.r_axis.at(i), field.s_axis.at(j), fd_step, field.config);
}

UnitVec3 distance_foliation_vector(const Profile& phi, const Point3& x, const DistanceConfig& cfg) {
  const auto g = distance_gradient(phi, x[1], x[2], cfg);
  return UnitVec3::normalize(0.0, -g[1], g[0]);
}

UField distance_foliation_field(Profile phi, DistanceConfig cfg) {
  return [phi = std::move(phi), cfg](const Point3& x) { return distance_foliation_vector(phi, x, cfg); };
}

}  // namespace twistleaf
