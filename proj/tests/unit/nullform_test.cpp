#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "rng.hpp"
#include "twistleaf/error.hpp"
#include "twistleaf/expr.hpp"
#include "twistleaf/nullform.hpp"
#include "twistleaf/twistor.hpp"
#include "twistleaf/potential.hpp"

namespace twistleaf {
namespace {

using testing::Rng;

HoloExpr xi_expr(const std::string& text) { return HoloExpr::parse(text, {"z1", "z2"}); }
GradientFn xi_grad(const std::string& text) { return gradient_of_potential(xi_expr(text)); }

GridSpec cube(double half, int n) {
  GridSpec g;
  for (Axis& a : g.axes) a = {-half, half, n};
  return g;
}

void expect_form(const NullForm& w, Complex a, Complex b, Complex c, double tol = 1e-15) {
  EXPECT_NEAR(std::abs(w.a - a), 0.0, tol);
  EXPECT_NEAR(std::abs(w.b - b), 0.0, tol);
  EXPECT_NEAR(std::abs(w.c - c), 0.0, tol);
}

const FormFunction kSqrtForm = [](const Point3& x) {  // (1 + ir + s)(i dr + ds)
  const Complex k(1.0 + x[2], x[1]);
  return NullForm{0.0, kI * k, k};
};

TEST(MakeOmega, Examples) {
  expect_form(make_omega(0.0, 1.0), 0.0, kI, 1.0);
  expect_form(make_omega(1.0, 0.0), 0.0, kI, -1.0);
  expect_form(make_omega(1.0, 1.0), 2.0, 2.0 * kI, 0.0);
  expect_form(omega_from_z(0.0), 0.0, kI, 1.0);
}

TEST(MakeOmega, NullityProperty) {
  Rng rng(401);
  for (int n = 0; n < 1000; ++n) {
    const NullForm w = make_omega(rng.complex(2.0), rng.complex(2.0));
    EXPECT_LT(std::abs(w.square()), 1e-13);
  }
}

TEST(SolveXi, Examples) {
  const SolverConfig cfg;
  Rng rng(402);
  for (int n = 0; n < 20; ++n) {
    const ZW zw = solve_xi_point(xi_grad("-z2"), rng.point(-1, 1), {0.3, 0.8}, cfg);
    EXPECT_NEAR(std::abs(zw.z), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(zw.w - 1.0), 0.0, 1e-14);
  }
  const ZW a = solve_xi_point(xi_grad("0.5*z1^2 - z2"), {1.0, 0.0, 0.0}, {0.0, 1.0}, cfg);
  EXPECT_NEAR(std::abs(a.w - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(a.z + kI), 0.0, 1e-14);

  const ZW b = solve_xi_point(sqrt_family_gradient(), {0.0, 0.0, 3.0}, {0.0, 1.0}, cfg);
  EXPECT_NEAR(std::abs(b.z), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(b.w - 2.0), 0.0, 1e-12);
}

TEST(SolveXi, SqrtFamilyMatchesPrincipalRoot) {
  Rng rng(403);
  for (int n = 0; n < 200; ++n) {
    const Point3 x = rng.point(-0.3, 0.3);
    const ZW zw = solve_xi_point(sqrt_family_gradient(), x, {0.0, 1.0}, {});
    EXPECT_NEAR(std::abs(zw.z), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(zw.w - std::sqrt(Complex(1.0 + x[2], x[1]))), 0.0, 1e-9);
  }
}

TEST(SolveXi, Failures) {
  SolverConfig one;
  one.max_iters = 1;
  EXPECT_THROW(solve_xi_point(sqrt_family_gradient(), {0.2, 0.2, 0.2}, {3.0, -2.0}, one),
               NoConvergeError);
}

TEST(Lagrangian, Examples) {
  auto lag = [](const char* a, const char* b) {
    return lagrangian_residual(xi_expr(a), xi_expr(b), Complex(0.3, 0.1), Complex(-0.2, 0.4));
  };
  EXPECT_EQ(lag("z1", "z2"), Complex(0.0));
  EXPECT_EQ(lag("z2", "0"), Complex(-1.0));
  EXPECT_NEAR(std::abs(lag("z2^2", "2*z1*z2")), 0.0, 1e-15);
}

TEST(Lagrangian, GradientsAreAlwaysLagrangian) {
  Rng rng(404);
  const std::vector<std::string> terms{"z1^2", "z1*z2", "z2^3", "exp(z1)", "sin(z2)", "z1*z2^2"};
  for (int n = 0; n < 100; ++n) {
    const std::string xi = terms[rng.below(6)] + " + " + terms[rng.below(6)];
    const GradJet g = xi_grad(xi)(rng.complex(0.5), rng.complex(0.5));
    EXPECT_EQ(g.jac[0][1], g.jac[1][0]) << xi;
  }
}

TEST(Incidence, ZWIncidenceMatchesFourDimensionalForm) {
  Rng rng(405);
  for (int n = 0; n < 100; ++n) {
    const Point3 x = rng.point(-1, 1);
    const ZW zw{rng.complex(1.0), rng.complex(1.0)};
    const auto a = zw_incidence(x, zw);
    const auto b = incidence({0.0, x[0], x[1], x[2]}, zw.z, zw.w);
    EXPECT_NEAR(std::abs(a[0] - b[0]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a[1] - b[1]), 0.0, 1e-15);
  }
}

TEST(Closedness, Examples) {
  const FormFunction constant = [](const Point3&) { return make_omega(0.0, 1.0); };
  EXPECT_EQ(closedness_residual(constant, {0.1, 0.2, 0.3}), 0.0);
  const FormFunction q1 = [](const Point3& x) { return make_omega(x[0], 1.0); };
  EXPECT_NEAR(closedness_residual(q1, {1.0, 0.0, 0.0}), 2.0, 1e-8);
  EXPECT_LT(closedness_residual(kSqrtForm, {0.1, 0.1, 0.1}), 1e-9);
}

TEST(Closedness, XiGridInterior) {
  const ZWGrid g = zw_grid(FormRoute::xi, xi_grad("0.5*z1^2 - z2"), cube(0.3, 5), {});
  for (std::size_t i = 0; i < g.samples.size(); ++i) {
    ASSERT_EQ(g.samples[i].status, SampleStatus::ok);
    if (!g.spec.interior(i)) continue;
    const ZWFunction zw = grid_local_zw(g, i);
    EXPECT_LT(closedness_residual(form_of(zw), g.samples[i].point), 1e-6);
    const auto k = key_operator_residual(zw, g.samples[i].point);
    EXPECT_LT(std::abs(k[0]), 1e-6);
    EXPECT_LT(std::abs(k[1]), 1e-6);
  }
  EXPECT_THROW(grid_local_zw(g, 0), BoundaryError);
}

TEST(Wedge, Examples) {
  const FormFunction q1 = [](const Point3& x) { return make_omega(x[0], 1.0); };
  EXPECT_NEAR(std::abs(wedge_residual(q1, {1.0, 0.0, 0.0}) - 4.0 * kI), 0.0, 1e-8);
  // Form built from the Hopf z: z = (1+iq)(r-is)/(r^2+s^2), w = 1.
  const FormFunction hopf = [](const Point3& x) {
    const Complex z = Complex(1.0, x[0]) * Complex(x[1], -x[2]) / (x[1] * x[1] + x[2] * x[2]);
    return omega_from_z(z);
  };
  EXPECT_LT(std::abs(wedge_residual(hopf, {0.2, 0.8, -0.3})), 1e-6);
}

TEST(Wedge, BoundedByClosedness) {
  Rng rng(406);
  const std::vector<std::string> xis{"-z2", "0.5*z1^2 - z2", "0.5*z1^2 + 0.5*z2^2 - z2",
                                     "0.3*z1^3 - z2 + 0.2*z1*z2"};
  for (const std::string& xi : xis) {
    const ZWFunction zw = local_zw_function(FormRoute::xi, xi_grad(xi), {}, {0.0, 1.0});
    const FormFunction w = form_of(zw);
    for (int n = 0; n < 10; ++n) {
      const Point3 x = rng.point(-0.2, 0.2);
      const double c = closedness_residual(w, x);
      EXPECT_LE(std::abs(wedge_residual(w, x)), 3.0 * c * w(x).max_abs() + 1e-9) << xi;
      EXPECT_LT(std::abs(wedge_residual(w, x)), 1e-6) << xi;
    }
  }
}

TEST(KeyOperator, Examples) {
  const ZWFunction constant = [](const Point3&) { return ZW{0.0, 1.0}; };
  const auto a = key_operator_residual(constant, {0.3, 0.1, 0.2});
  EXPECT_EQ(a[0], Complex(0.0));
  EXPECT_EQ(a[1], Complex(0.0));
  const ZWFunction q1 = [](const Point3& x) { return ZW{x[0], 1.0}; };
  EXPECT_NEAR(std::abs(key_operator_residual(q1, {1.0, 0.0, 0.0})[0] - 2.0), 0.0, 1e-8);
}

TEST(Nurowski, DegenerateLinearExample) {
  const GradientFn F = gradient_of_potential(HoloExpr::parse("0.5*(w^2 - z^2)", {"z", "w"}));
  const NurowskiSolution s = nurowski_solve_point(F, {0.0, 2.0, 0.0}, {0.3, 0.7}, {});
  EXPECT_NEAR(std::abs(s.zw.z), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s.zw.w), 0.0, 1e-14);
  EXPECT_TRUE(s.degenerate);
}

// Independent oracle: plain Newton with a difference Jacobian from many random
// starts, on the system written out by hand.
std::array<Complex, 2> cubic_system(const Point3& x, Complex z, Complex w) {
  const Complex a(x[1], x[2]), iq(0.0, x[0]);
  return {a * z - iq * w + w, iq * z - std::conj(a) * w - (z + 3.0 * w * w)};
}

TEST(Nurowski, CubicPotentialMatchesMultiStartOracle) {
  const GradientFn F = gradient_of_potential(HoloExpr::parse("z*w + w^3", {"z", "w"}));
  Rng rng(407);
  for (int n = 0; n < 10; ++n) {
    const Point3 x = rng.point(-0.3, 0.3);
    const ZW seed{rng.complex(0.5), rng.complex(0.5)};
    ZW got;
    try {
      got = nurowski_solve_point(F, x, seed, {}).zw;
    } catch (const Error&) {
      continue;
    }
    const auto res = cubic_system(x, got.z, got.w);
    EXPECT_LT(std::max(std::abs(res[0]), std::abs(res[1])), 1e-11);
    double best = INFINITY;
    for (int start = 0; start < 40; ++start) {
      Complex z = rng.complex(1.5), w = rng.complex(1.5);
      for (int it = 0; it < 60; ++it) {
        const auto f = cubic_system(x, z, w);
        const double h = 1e-7;
        const auto fz = cubic_system(x, z + h, w), fw = cubic_system(x, z, w + h);
        const Complex j00 = (fz[0] - f[0]) / h, j01 = (fw[0] - f[0]) / h;
        const Complex j10 = (fz[1] - f[1]) / h, j11 = (fw[1] - f[1]) / h;
        const Complex d = j00 * j11 - j01 * j10;
        if (std::abs(d) < 1e-14) break;
        z -= (j11 * f[0] - j01 * f[1]) / d;
        w -= (-j10 * f[0] + j00 * f[1]) / d;
      }
      const auto f = cubic_system(x, z, w);
      if (std::max(std::abs(f[0]), std::abs(f[1])) < 1e-10) {
        best = std::min(best, std::max(std::abs(z - got.z), std::abs(w - got.w)));
      }
    }
    EXPECT_LT(best, 1e-8) << "solver root not found by the oracle";
  }
}

TEST(Duality, DiagonalHessian) {
  const DualityCheck d = jacobian_duality_check(xi_expr("0.5*z1^2 + z2^2"), 0.3, Complex(0.1, 0.2));
  EXPECT_LT(d.defect, 1e-12);
  EXPECT_NEAR(std::abs(d.inverse[0][0] - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(d.inverse[1][1] - 0.5), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(d.inverse[0][1]), 0.0, 1e-12);
}

TEST(Duality, RandomQuadratics) {
  Rng rng(408);
  for (int n = 0; n < 50; ++n) {
    const Complex a = rng.complex(1.0), b = rng.complex(1.0), c = rng.complex(1.0);
    const Complex det = 4.0 * a * c - b * b;
    if (std::abs(det) < 0.1) continue;
    auto coef = [](Complex v) {
      return "(" + std::to_string(v.real()) + " + " + std::to_string(v.imag()) + "i)";
    };
    const std::string xi = coef(a) + "*z1^2 + " + coef(b) + "*z1*z2 + " + coef(c) + "*z2^2 - z2";
    const DualityCheck d = jacobian_duality_check(xi_expr(xi), rng.complex(1.0), rng.complex(1.0));
    EXPECT_LT(d.defect, 1e-8) << xi;
  }
}

TEST(Duality, SingularHessianThrows) {
  EXPECT_THROW(jacobian_duality_check(xi_expr("z2"), 0.1, 0.2), SingularJacobianError);
  EXPECT_THROW(legendre_dual(xi_grad("z2"))(0.0, 1.0), SingularJacobianError);
}

TEST(Duality, NurowskiRouteOfDualAgreesWithXiRoute) {
  const std::string xi = "0.5*z1^2 + 0.5*z2^2 - z2";
  const GradientFn F = legendre_dual(xi_grad(xi), {0.0, 0.0});
  Rng rng(409);
  for (int n = 0; n < 50; ++n) {
    const Point3 x = rng.point(-0.3, 0.3);
    const ZW a = solve_xi_point(xi_grad(xi), x, {0.0, 1.0}, {});
    const ZW b = nurowski_solve_point(F, x, {0.0, 1.0}, {}).zw;
    EXPECT_NEAR(std::abs(a.z - b.z), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(a.w - b.w), 0.0, 1e-8);
  }
}

// zeta = z / w solves the single-function implicit equation with the induced
// Phi, and omega / w^2 is the single-function form of zeta.
TEST(Routes, XiFieldReducesToPhiField) {
  const std::string xi = "0.5*z1^2 + 0.3*z1*z2 - z2";
  const GradientFn g = xi_grad(xi);
  Rng rng(410);
  for (int n = 0; n < 50; ++n) {
    const Point3 x = rng.point(-0.3, 0.3);
    const ZW zw = solve_xi_point(g, x, {0.0, 1.0}, {});
    ASSERT_GT(std::abs(zw.w), 0.1);
    const Complex zeta = zw.z / zw.w;
    const auto ab = zw_incidence(x, {zeta, 1.0});
    EXPECT_NEAR(std::abs(zeta - induced_phi(g, ab[0], ab[1], zw.w)), 0.0, 1e-8);
    const NullForm w = make_omega(zw.z, zw.w), v = omega_from_z(zeta);
    const Complex w2 = zw.w * zw.w;
    expect_form(NullForm{w.a / w2, w.b / w2, w.c / w2}, v.a, v.b, v.c, 1e-8);
  }
}

TEST(DzDw, Examples) {
  const ZWFunction eg = local_zw_function(FormRoute::xi, sqrt_family_gradient(), {}, {0.0, 1.0});
  EXPECT_LT(dzdw_degeneracy(eg, {0, 0, 0}), kDzDwDegenerate);

  // The Hopf form in another guise: w = 1 / (1 + ir + s), z = 0.
  const ZWFunction guise =
      local_zw_function(FormRoute::xi, xi_grad("-z2 - 0.5i*z2^2"), {}, {0.0, 1.0});
  const ZW at = guise({0.1, 0.2, 0.1});
  EXPECT_NEAR(std::abs(at.w - 1.0 / Complex(1.1, 0.2)), 0.0, 1e-12);
  EXPECT_LT(dzdw_degeneracy(guise, {0, 0, 0}), kDzDwDegenerate);

  const ZWFunction quad =
      local_zw_function(FormRoute::xi, xi_grad("0.5*z1^2 + 0.5*z2^2 - z2"), {}, {0.0, 1.0});
  EXPECT_GT(dzdw_degeneracy(quad, {0, 0, 0}), 0.1);
}

TEST(Potential, Examples) {
  const FormFunction flat = [](const Point3&) { return make_omega(0.0, 1.0); };
  const PathPotential h(flat, {0, 0, 0});
  const Point3 x{0.3, -0.2, 0.4};
  EXPECT_NEAR(std::abs(h(x) - Complex(0.4, -0.2)), 0.0, 1e-14);

  const PathPotential g(kSqrtForm, {0, 0, 0});
  Rng rng(411);
  for (int n = 0; n < 50; ++n) {
    const Point3 y = rng.point(-0.3, 0.3);
    const Complex k(y[2], y[1]);  // s + ir
    EXPECT_NEAR(std::abs(g(y) - (k + 0.5 * k * k)), 0.0, 1e-13);
    const auto hc = horizontal_conformality_check(g, y);
    EXPECT_LT(std::abs(hc[0]), 1e-6);
    EXPECT_LT(std::abs(hc[1]), 1e-6);
  }
}

TEST(Potential, XiFormGradientMatches) {
  const ZWGrid grid = zw_grid(FormRoute::xi, xi_grad("0.5*z1^2 - z2"), cube(0.3, 5), {});
  const FormFunction w = form_of(grid_zw_function(grid));
  const PotentialGrid pg = potential_from_closed_form(w, grid.spec, {0, 0, 0});
  EXPECT_LT(pg.max_closedness, 1e-6);
  const PathPotential h(w, {0, 0, 0});
  for (std::size_t i = 0; i < grid.samples.size(); ++i) {
    EXPECT_NEAR(std::abs(pg.h[i] - h(grid.samples[i].point)), 0.0, 1e-12);
    if (!grid.spec.interior(i)) continue;
    EXPECT_LT(potential_gradient_defect(h, w, grid.samples[i].point), 1e-6);
  }
  EXPECT_LT(std::abs(loop_integral(w, {-0.2, -0.2, -0.2}, 0, 0.4, 2, 0.3)), 1e-8);
}

TEST(Potential, RefusesFormThatIsNotClosed) {
  const FormFunction q1 = [](const Point3& x) { return make_omega(x[0], 1.0); };
  EXPECT_THROW(potential_from_closed_form(q1, cube(1.0, 5), {0, 0, 0}), NotClosedError);
  EXPECT_GT(std::abs(loop_integral(q1, {0, 0, 0}, 0, 1.0, 1, 1.0)), 0.1);
}

TEST(Potential, SimpsonIsExactForCubics) {
  const FormFunction cubic = [](const Point3& x) { return NullForm{x[0] * x[0] * x[0], 0.0, 0.0}; };
  EXPECT_NEAR(std::abs(segment_integral(cubic, {0, 0, 0}, 0, 2.0, 2) - 4.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(segment_integral(cubic, {0, 0, 0}, 0, 2.0, 3) - 4.0), 0.0, 1e-14);
}

TEST(HorizontalConformality, Examples) {
  const ComplexFunction a = [](const Point3& x) { return Complex(x[1], x[2]); };
  const auto ra = horizontal_conformality_check(a, {0.1, 0.2, 0.3});
  EXPECT_NEAR(ra[0], 0.0, 1e-9);
  EXPECT_NEAR(ra[1], 0.0, 1e-9);
  const ComplexFunction b = [](const Point3& x) { return Complex(x[0], 2.0 * x[1]); };
  const auto rb = horizontal_conformality_check(b, {0.1, 0.2, 0.3});
  EXPECT_NEAR(rb[0], -1.0, 1e-9);
  EXPECT_NEAR(rb[1], 0.0, 1e-9);
}

}  // namespace
}  // namespace twistleaf
