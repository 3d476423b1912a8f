#include "twistleaf/nullform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "twistleaf/error.hpp"

namespace twistleaf {

namespace {

constexpr double kSingularDet = 1e-12;
constexpr double kAsymmetry = 1e-10;
constexpr double kDegenerateForm = 1e-10;
constexpr int kMaxHalvings = 10;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

Complex det(const Mat2c& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

// Solves m x = b; throws SingularJacobianError when det(m) is tiny.
std::array<Complex, 2> solve2(const Mat2c& m, const std::array<Complex, 2>& b) {
  const Complex d = det(m);
  if (!(std::abs(d) >= kSingularDet)) throw SingularJacobianError("2x2 Jacobian is singular");
  return {(m[1][1] * b[0] - m[0][1] * b[1]) / d, (m[0][0] * b[1] - m[1][0] * b[0]) / d};
}

Mat2c inverse2(const Mat2c& m) {
  const Complex d = det(m);
  if (!(std::abs(d) >= kSingularDet)) throw SingularJacobianError("2x2 matrix is singular");
  return Mat2c{{{m[1][1] / d, -m[0][1] / d}, {-m[1][0] / d, m[0][0] / d}}};
}

double norm_inf(const std::array<Complex, 2>& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

struct System {
  std::array<Complex, 2> value;
  Mat2c jac;
};

System zw_system(FormRoute route, const GradientFn& map, const Point3& x, const ZW& zw) {
  const Complex alpha(x[1], x[2]);  // r + is
  const Complex iq = kI * x[0];
  const auto [z1, z2] = zw_incidence(x, zw);
  // d(z1, z2)/d(z, w)
  const Mat2c dzz{{{alpha, -iq}, {iq, -std::conj(alpha)}}};
  System s;
  if (route == FormRoute::xi) {
    const GradJet g = map(z1, z2);
    // chain rule: d g_i / d(z, w)_j
    Mat2c gj{};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) gj[i][j] = g.jac[i][0] * dzz[0][j] + g.jac[i][1] * dzz[1][j];
    }
    s.value = {zw.z - g.value[0], zw.w + g.value[1]};
    s.jac = Mat2c{{{1.0 - gj[0][0], -gj[0][1]}, {gj[1][0], 1.0 + gj[1][1]}}};
  } else {
    const GradJet g = map(zw.z, zw.w);
    s.value = {z1 + g.value[0], z2 - g.value[1]};
    s.jac = Mat2c{{{dzz[0][0] + g.jac[0][0], dzz[0][1] + g.jac[0][1]},
                   {dzz[1][0] - g.jac[1][0], dzz[1][1] - g.jac[1][1]}}};
  }
  return s;
}

// g with i(g^2 - 1) g = x near g = 1.
std::pair<Complex, Complex> cubic_branch(Complex x) {
  Complex g = 1.0;
  for (int it = 0; it < 60; ++it) {
    const Complex h = kI * (g * g - 1.0) * g - x;
    const Complex dh = kI * (3.0 * g * g - 1.0);
    if (std::abs(dh) < kSingularDet) throw BranchPointError("inner solve hit a branch point");
    const Complex step = h / dh;
    g -= step;
    // Quadratic convergence: one more step after 1e-10 reaches rounding level.
    if (std::abs(step) <= 1e-10 * std::max(1.0, std::abs(g))) {
      g -= (kI * (g * g - 1.0) * g - x) / (kI * (3.0 * g * g - 1.0));
      break;
    }
    if (it == 59) throw NoConvergeError("inner solve did not converge");
  }
  return {g, 1.0 / (kI * (3.0 * g * g - 1.0))};
}

}  // namespace

double NullForm::max_abs() const { return std::max({std::abs(a), std::abs(b), std::abs(c)}); }

NullForm make_omega(Complex z, Complex w) {
  return {2.0 * w * z, kI * (w * w + z * z), w * w - z * z};
}

GradientFn gradient_of_potential(const HoloExpr& potential) {
  if (potential.arity() != 2) throw std::invalid_argument("potential must have two variables");
  auto e = std::make_shared<const HoloExpr>(potential);
  return [e](Complex z1, Complex z2) {
    const std::array<Complex, 2> at{z1, z2};
    const Jet2 j = e->eval_jet2(at);
    GradJet g;
    g.value = {j.d[0], j.d[1]};
    g.jac = Mat2c{{{j.d2(0, 0), j.d2(0, 1)}, {j.d2(1, 0), j.d2(1, 1)}}};
    return g;
  };
}

GradientFn gradient_from_components(const HoloExpr& first, const HoloExpr& second) {
  if (first.arity() != 2 || second.arity() != 2) {
    throw std::invalid_argument("component expressions must have two variables");
  }
  auto a = std::make_shared<const HoloExpr>(first);
  auto b = std::make_shared<const HoloExpr>(second);
  return [a, b](Complex z1, Complex z2) {
    const std::array<Complex, 2> at{z1, z2};
    const Jet2 ja = a->eval_jet2(at);
    const Jet2 jb = b->eval_jet2(at);
    GradJet g;
    g.value = {ja.value, jb.value};
    g.jac = Mat2c{{{ja.d[0], ja.d[1]}, {jb.d[0], jb.d[1]}}};
    return g;
  };
}

GradientFn sqrt_family_gradient() {
  return [](Complex, Complex z2) {
    const auto [g, dg] = cubic_branch(z2);
    GradJet out;
    out.value = {0.0, -g};
    out.jac = Mat2c{{{0.0, 0.0}, {0.0, -dg}}};
    return out;
  };
}

Complex lagrangian_residual(const HoloExpr& first, const HoloExpr& second, Complex z1, Complex z2) {
  const std::array<Complex, 2> at{z1, z2};
  return second.eval_jet2(at).d[0] - first.eval_jet2(at).d[1];
}

std::array<Complex, 2> zw_incidence(const Point3& x, const ZW& zw) {
  const Complex alpha(x[1], x[2]);
  const Complex iq = kI * x[0];
  return {alpha * zw.z - iq * zw.w, iq * zw.z - std::conj(alpha) * zw.w};
}

ZWSample solve_zw(FormRoute route, const GradientFn& map, const Point3& x, const ZW& seed,
                  const SolverConfig& cfg) {
  auto residual_norm = [&](const ZW& zw) {
    try {
      const auto v = zw_system(route, map, x, zw).value;
      return finite(v[0]) && finite(v[1]) ? norm_inf(v) : std::numeric_limits<double>::infinity();
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  ZWSample out;
  out.point = x;
  ZW zw = seed;
  for (int it = 0;; ++it) {
    out.zw = zw;
    out.iterations = it;
    if (!finite(zw.z) || !finite(zw.w)) {
      out.status = SampleStatus::no_converge;
      return out;
    }
    if (std::max(std::abs(zw.z), std::abs(zw.w)) > cfg.pole_radius) {
      out.status = SampleStatus::near_pole;
      return out;
    }
    System s;
    try {
      s = zw_system(route, map, x, zw);
    } catch (const BranchPointError&) {
      out.status = SampleStatus::branch_point;
      return out;
    } catch (const Error&) {
      out.status = SampleStatus::no_converge;
      return out;
    }
    const double r = norm_inf(s.value);
    if (r < cfg.newton_tol) {
      out.status = SampleStatus::ok;
      out.degenerate = make_omega(zw.z, zw.w).max_abs() < kDegenerateForm;
      return out;
    }
    if (it >= cfg.max_iters || !std::isfinite(r)) break;
    std::array<Complex, 2> step;
    try {
      step = solve2(s.jac, s.value);
    } catch (const SingularJacobianError&) {
      out.status = SampleStatus::branch_point;
      return out;
    }
    ZW next{zw.z - step[0], zw.w - step[1]};
    if (!(residual_norm(next) < r)) {
      double scale = 1.0;
      for (int h = 0; h < kMaxHalvings; ++h) {
        scale *= 0.5;
        const ZW trial{zw.z - scale * step[0], zw.w - scale * step[1]};
        if (residual_norm(trial) < r) {
          next = trial;
          break;
        }
      }
    }
    zw = next;
  }
  out.status = SampleStatus::no_converge;
  return out;
}

namespace {

ZW zw_or_throw(const ZWSample& s) {
  switch (s.status) {
    case SampleStatus::ok:
      return s.zw;
    case SampleStatus::branch_point:
      throw SingularJacobianError("Jacobian of the (z, w) system is singular");
    case SampleStatus::near_pole:
      throw NoConvergeError("(z, w) left the pole radius");
    default:
      throw NoConvergeError("(z, w) Newton iteration did not converge");
  }
}

}  // namespace

ZW solve_xi_point(const GradientFn& xi, const Point3& x, const ZW& seed, const SolverConfig& cfg) {
  return zw_or_throw(solve_zw(FormRoute::xi, xi, x, seed, cfg));
}

NurowskiSolution nurowski_solve_point(const GradientFn& dF, const Point3& x, const ZW& seed,
                                      const SolverConfig& cfg) {
  const ZWSample s = solve_zw(FormRoute::nurowski, dF, x, seed, cfg);
  return {zw_or_throw(s), s.degenerate};
}

namespace {

// Newton inverse of the gradient map: finds x with xi(x) = y.
std::pair<std::array<Complex, 2>, Mat2c> invert_gradient(const GradientFn& xi,
                                                         const std::array<Complex, 2>& y,
                                                         std::array<Complex, 2> x,
                                                         const SolverConfig& cfg) {
  for (int it = 0; it <= cfg.max_iters; ++it) {
    const GradJet g = xi(x[0], x[1]);
    const std::array<Complex, 2> r{g.value[0] - y[0], g.value[1] - y[1]};
    const double scale = 1.0 + norm_inf(y);
    if (norm_inf(r) <= 1e-15 * scale) return {x, g.jac};
    const auto step = solve2(g.jac, r);
    x[0] -= step[0];
    x[1] -= step[1];
    if (norm_inf(step) <= 1e-16 * (1.0 + norm_inf(x))) return {x, xi(x[0], x[1]).jac};
  }
  throw NoConvergeError("inverting the gradient map did not converge");
}

}  // namespace

GradientFn legendre_dual(GradientFn xi, std::array<Complex, 2> seed, SolverConfig cfg) {
  return [xi = std::move(xi), seed, cfg](Complex z, Complex w) {
    const auto [zz, hess] = invert_gradient(xi, {z, -w}, seed, cfg);
    const Mat2c hi = inverse2(hess);
    GradJet f;
    f.value = {-zz[0], zz[1]};
    f.jac = Mat2c{{{-hi[0][0], hi[0][1]}, {hi[1][0], -hi[1][1]}}};
    return f;
  };
}

DualityCheck jacobian_duality_check(const HoloExpr& xi, Complex z1, Complex z2) {
  const GradientFn grad = gradient_of_potential(xi);
  const GradJet g0 = grad(z1, z2);
  const Mat2c& H = g0.jac;
  if (!(std::abs(det(H)) >= kSingularDet)) {
    throw SingularJacobianError("Hessian of the potential is singular; the gradient map is not invertible");
  }
  const SolverConfig cfg;
  const std::array<Complex, 2> x0{z1, z2};
  auto inverse_at = [&](const std::array<Complex, 2>& y) { return invert_gradient(grad, y, x0, cfg).first; };

  // Fourth-order central differences of the inverse along each real axis of y;
  // holomorphy makes the real direction sufficient.
  constexpr double h = 1e-3;
  Mat2c K{};
  for (int j = 0; j < 2; ++j) {
    auto shifted = [&](double t) {
      std::array<Complex, 2> y = g0.value;
      y[static_cast<std::size_t>(j)] += t;
      return inverse_at(y);
    };
    const auto p2 = shifted(2 * h), p1 = shifted(h), m1 = shifted(-h), m2 = shifted(-2 * h);
    for (int i = 0; i < 2; ++i) {
      K[i][j] = (-p2[static_cast<std::size_t>(i)] + 8.0 * p1[static_cast<std::size_t>(i)] -
                 8.0 * m1[static_cast<std::size_t>(i)] + m2[static_cast<std::size_t>(i)]) /
                (12.0 * h);
    }
  }
  if (std::abs(H[0][1] - H[1][0]) > kAsymmetry) throw Error("Hessian is not symmetric");
  if (std::abs(K[0][1] - K[1][0]) > kAsymmetry) throw Error("inverse Jacobian is not symmetric");

  DualityCheck out;
  out.hessian = H;
  out.inverse = K;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Complex hk = H[i][0] * K[0][j] + H[i][1] * K[1][j];
      out.defect = std::max(out.defect, std::abs(hk - (i == j ? 1.0 : 0.0)));
    }
  }
  return out;
}

Complex induced_phi(const GradientFn& xi, Complex a, Complex b, Complex w_seed) {
  Complex w = w_seed;
  for (int it = 0; it < 60; ++it) {
    const GradJet g = xi(w * a, w * b);
    const Complex h = w + g.value[1];
    const Complex dh = 1.0 + g.jac[1][0] * a + g.jac[1][1] * b;
    if (std::abs(h) <= 1e-14 * (1.0 + std::abs(w))) {
      if (std::abs(w) < kSingularDet) throw DomainError("induced Phi needs w != 0");
      return g.value[0] / w;
    }
    if (std::abs(dh) < kSingularDet) throw BranchPointError("induced Phi: singular w equation");
    w -= h / dh;
  }
  throw NoConvergeError("induced Phi: w equation did not converge");
}

ZWFunction local_zw_function(FormRoute route, GradientFn map, SolverConfig cfg, ZW seed) {
  return [route, map = std::move(map), cfg, seed](const Point3& x) {
    return zw_or_throw(solve_zw(route, map, x, seed, cfg));
  };
}

FormFunction form_of(ZWFunction zw) {
  return [zw = std::move(zw)](const Point3& x) {
    const ZW v = zw(x);
    return make_omega(v.z, v.w);
  };
}

ZWGrid zw_grid(FormRoute route, const GradientFn& map, const GridSpec& spec,
               const SolverConfig& cfg, const Point3& seed_point, const ZW& seed) {
  spec.validate();
  cfg.validate();
  ZWGrid grid;
  grid.spec = spec;
  grid.config = cfg;
  grid.route = route;
  grid.map = map;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  grid.samples.resize(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    grid.samples[i].point = spec.point(i);
    grid.samples[i].zw = {Complex(nan, nan), Complex(nan, nan)};
  }
  const std::size_t s0 = spec.nearest(seed_point);
  grid.seed_index = s0;
  grid.samples[s0] = solve_zw(route, map, grid.samples[s0].point, seed, cfg);
  if (grid.samples[s0].status != SampleStatus::ok) {
    throw NoConvergeError("seed point failed with status " +
                          std::string(to_string(grid.samples[s0].status)));
  }
  grid.order = bfs_continuation(spec, s0, [&](std::size_t idx, std::size_t parent) {
    grid.samples[idx] = solve_zw(route, map, grid.samples[idx].point, grid.samples[parent].zw, cfg);
    return grid.samples[idx].status == SampleStatus::ok;
  });
  return grid;
}

ZWFunction grid_local_zw(const ZWGrid& grid, std::size_t index) {
  if (index >= grid.spec.size()) throw std::out_of_range("grid index out of range");
  if (!grid.spec.interior(index)) {
    throw BoundaryError("finite-difference stencil requested at boundary grid index " +
                        std::to_string(index));
  }
  const ZWSample& s = grid.samples[index];
  if (s.status != SampleStatus::ok) {
    throw NoConvergeError("grid sample " + std::to_string(index) + " has status " +
                          std::string(to_string(s.status)));
  }
  return local_zw_function(grid.route, grid.map, grid.config, s.zw);
}

ZWFunction grid_zw_function(const ZWGrid& grid) {
  auto g = std::make_shared<const ZWGrid>(grid);
  return [g](const Point3& x) {
    const ZWSample& near = g->samples[g->spec.nearest(x)];
    if (near.status != SampleStatus::ok) {
      throw NoConvergeError("nearest grid sample has no solution");
    }
    return zw_or_throw(solve_zw(g->route, g->map, x, near.zw, g->config));
  };
}

namespace {

std::array<std::array<Complex, 3>, 3> form_partials(const FormFunction& omega, const Point3& x,
                                                    double fd_step) {
  auto coeffs = [&](const Point3& y) {
    const NullForm f = omega(y);
    return std::array<Complex, 3>{f.a, f.b, f.c};
  };
  return central_partials<3>(coeffs, x, fd_step);  // [axis][coefficient]
}

}  // namespace

double closedness_residual(const FormFunction& omega, const Point3& x, double fd_step) {
  const auto d = form_partials(omega, x, fd_step);
  return std::max({std::abs(d[0][1] - d[1][0]), std::abs(d[0][2] - d[2][0]),
                   std::abs(d[1][2] - d[2][1])});
}

Complex wedge_residual(const FormFunction& omega, const Point3& x, double fd_step) {
  const NullForm f = omega(x);
  const auto d = form_partials(omega, x, fd_step);
  const Complex qr = d[0][1] - d[1][0];  // b_q - a_r
  const Complex qs = d[0][2] - d[2][0];  // c_q - a_s
  const Complex rs = d[1][2] - d[2][1];  // c_r - b_s
  return f.a * rs - f.b * qs + f.c * qr;
}

namespace {

std::array<std::array<Complex, 2>, 3> zw_partials(const ZWFunction& zw, const Point3& x,
                                                  double fd_step) {
  auto pair = [&](const Point3& y) {
    const ZW v = zw(y);
    return std::array<Complex, 2>{v.z, v.w};
  };
  return central_partials<3>(pair, x, fd_step);  // [axis][z or w]
}

}  // namespace

std::array<Complex, 2> key_operator_residual(const ZWFunction& zw, const Point3& x, double fd_step) {
  const ZW v = zw(x);
  const auto d = zw_partials(zw, x, fd_step);
  const Complex cq = 2.0 * v.w * v.z;
  const Complex cr = kI * (v.w * v.w + v.z * v.z);
  const Complex cs = v.w * v.w - v.z * v.z;
  std::array<Complex, 2> out{};
  for (std::size_t m = 0; m < 2; ++m) out[m] = cq * d[0][m] + cr * d[1][m] + cs * d[2][m];
  return out;
}

std::array<Complex, 3> dzdw_components(const ZWFunction& zw, const Point3& x, double fd_step) {
  const auto d = zw_partials(zw, x, fd_step);
  auto wedge = [&](int i, int j) { return d[i][0] * d[j][1] - d[j][0] * d[i][1]; };
  return {wedge(0, 1), wedge(0, 2), wedge(1, 2)};
}

double dzdw_degeneracy(const ZWFunction& zw, const Point3& x, double fd_step) {
  const auto c = dzdw_components(zw, x, fd_step);
  return std::sqrt(std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2]));
}

}  // namespace twistleaf
