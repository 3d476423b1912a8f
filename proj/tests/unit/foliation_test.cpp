#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <memory>
#include <vector>

#include "rng.hpp"
#include "twistleaf/curves.hpp"
#include "twistleaf/error.hpp"
#include "twistleaf/expr.hpp"
#include "twistleaf/foliation.hpp"
#include "twistleaf/residuals.hpp"

namespace twistleaf {
namespace {

using testing::Rng;

ImplicitData graph(const char* phi) { return ImplicitData::graph(HoloExpr::parse(phi, {"z1", "z2"})); }
ImplicitData general(const char* f) {
  return ImplicitData::general(HoloExpr::parse(f, {"z1", "z2", "z3"}));
}
std::shared_ptr<const ImplicitData> shared(ImplicitData d) {
  return std::make_shared<const ImplicitData>(std::move(d));
}

GridSpec cube(double half, int n) {
  GridSpec g;
  for (Axis& a : g.axes) a = {-half, half, n};
  return g;
}

// Closed forms used as oracles.
Complex hopf_z(const Point3& x) {
  const double q = x[0], r = x[1], s = x[2];
  return Complex(1.0, q) * Complex(r, -s) / (r * r + s * s);
}
Complex linear_z(const Point3& x) {  // Phi = z1: z = (r+is) z - iq
  return Complex(0.0, -x[0]) / (1.0 - Complex(x[1], x[2]));
}

UnitVec3 bad_field(const Point3& x) { return UnitVec3::normalize(1.0, x[1], 0.0); }
UnitVec3 bad_field4(const Point4& x) { return UnitVec3::normalize(1.0, x[2], 0.0); }

void expect_unit(const UnitVec3& U, double u, double v, double w, double tol = 1e-15) {
  EXPECT_NEAR(U.u(), u, tol);
  EXPECT_NEAR(U.v(), v, tol);
  EXPECT_NEAR(U.w(), w, tol);
}

TEST(SolveImplicit, Examples) {
  const SolverConfig cfg;
  EXPECT_EQ(solve_implicit_point(graph("0"), {0.3, -0.2, 0.7}, 0.5, cfg).z, Complex(0.0));
  const FieldSample a = solve_implicit_point(graph("z1"), {1.0, 0.0, 0.0}, 0.0, cfg);
  EXPECT_EQ(a.status, SampleStatus::ok);
  EXPECT_NEAR(std::abs(a.z - Complex(0.0, -1.0)), 0.0, 1e-14);
  const FieldSample b = solve_implicit_point(general("z1 - 1"), {0.0, 1.0, 0.0}, 0.5, cfg);
  EXPECT_EQ(b.status, SampleStatus::ok);
  EXPECT_NEAR(std::abs(b.z - 1.0), 0.0, 1e-14);
}

TEST(SolveImplicit, LinearGraphMatchesClosedForm) {
  Rng rng(301);
  for (int n = 0; n < 200; ++n) {
    const Point3 x = rng.point(-0.5, 0.5);
    const FieldSample s = solve_implicit_point(graph("z1"), x, 0.0, {});
    ASSERT_EQ(s.status, SampleStatus::ok);
    EXPECT_NEAR(std::abs(s.z - linear_z(x)), 0.0, 1e-13);
  }
}

// Phi = z1 z2 gives a quadratic in z; take the root of smallest modulus.
TEST(SolveImplicit, QuadraticGraphMatchesSmallRoot) {
  Rng rng(302);
  for (int n = 0; n < 200; ++n) {
    const Point3 x = rng.point(-0.3, 0.3);
    const Complex a(x[1], x[2]), iq(0.0, x[0]);
    // z = (a z - iq)(iq z - conj(a)) -> A z^2 + B z + C = 0
    const Complex A = a * iq, B = -a * std::conj(a) - iq * iq - 1.0, C = iq * std::conj(a);
    // Cancellation-free form: the small root is C / t.
    Complex disc = std::sqrt(B * B - 4.0 * A * C);
    if (std::real(std::conj(B) * disc) < 0.0) disc = -disc;
    const Complex root = -2.0 * C / (B + disc);
    const FieldSample s = solve_implicit_point(graph("z1*z2"), x, 0.0, {});
    ASSERT_EQ(s.status, SampleStatus::ok);
    EXPECT_NEAR(std::abs(s.z - root), 0.0, 1e-12);
  }
}

TEST(SolveImplicit, StatusRules) {
  SolverConfig tight;
  tight.pole_radius = 0.5;
  const FieldSample pole = solve_implicit_point(graph("z1"), {1.0, 0.0, 0.0}, 0.0, tight);
  EXPECT_EQ(pole.status, SampleStatus::near_pole);
  expect_unit(pole.U, 1.0, 0.0, 0.0);

  // dG/dz vanishes at the seed while G does not.
  const FieldSample branch = solve_implicit_point(general("z3^2 - 0.001"), {0.0, 0.0, 0.0}, 0.0, {});
  EXPECT_EQ(branch.status, SampleStatus::branch_point);

  SolverConfig one;
  one.max_iters = 1;
  const FieldSample slow = solve_implicit_point(graph("exp(z1) - 1"), {0.4, 0.3, 0.2}, 3.0, one);
  EXPECT_EQ(slow.status, SampleStatus::no_converge);

  // log(z1) is undefined at the seed: reported, not thrown.
  const FieldSample dom = solve_implicit_point(graph("log(z1)"), {0.0, 0.0, 0.0}, 0.0, {});
  EXPECT_NE(dom.status, SampleStatus::ok);
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.newton_tol = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.max_iters = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(FieldFromZ, Examples) {
  expect_unit(field_from_z(0.0), -1.0, 0.0, 0.0);
  expect_unit(field_from_z(1.0), 0.0, 0.0, 1.0);
  expect_unit(field_from_z(kI), 0.0, 1.0, 0.0);
  expect_unit(field_from_z(Complex(INFINITY, 0.0)), 1.0, 0.0, 0.0);
}

TEST(FieldFromZ, UnitNormProperty) {
  Rng rng(303);
  for (int n = 0; n < 1000; ++n) {
    const Complex z = rng.complex(std::pow(10.0, rng.uniform(-3, 3)));
    EXPECT_NEAR(norm3(field_from_z(z).array()), 1.0, 1e-12);
  }
}

TEST(GridField, ZeroGraphIsConstant) {
  const FieldGrid g = grid_field(graph("0"), cube(1.0, 5), {});
  ASSERT_EQ(g.samples.size(), 125u);
  for (const FieldSample& s : g.samples) {
    EXPECT_EQ(s.status, SampleStatus::ok);
    EXPECT_EQ(s.z, Complex(0.0));
    expect_unit(s.U, -1.0, 0.0, 0.0);
  }
}

TEST(GridField, HopfMatchesClosedFormOffAxis) {
  GridSpec g;
  g.axes = {Axis{-1, 1, 9}, Axis{0.4, 1.2, 9}, Axis{-1, 1, 9}};  // r^2 + s^2 >= 0.16
  const FieldGrid f = grid_field(general("z1 - 1"), g, {}, {0.0, 1.0, 0.0}, 1.0);
  for (const FieldSample& s : f.samples) {
    ASSERT_EQ(s.status, SampleStatus::ok);
    EXPECT_NEAR(std::abs(s.z - hopf_z(s.point)), 0.0, 1e-9);
    const HopfValue h = hopf_closed_form(s.point);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(s.U[k], h.U[k], 1e-9);
  }
}

TEST(GridField, QuadraticGraphContinuesEverywhere) {
  const FieldGrid f = grid_field(graph("z1^2"), cube(0.4, 7), {});
  for (const FieldSample& s : f.samples) EXPECT_EQ(s.status, SampleStatus::ok);
  EXPECT_EQ(f.order.size(), f.samples.size());
  EXPECT_EQ(f.order.front(), f.seed_index);
}

TEST(GridField, SeedFailureThrows) {
  SolverConfig one;
  one.max_iters = 1;
  EXPECT_THROW(grid_field(graph("exp(z1) - 1"), cube(0.4, 3), one, {0.4, 0.4, 0.4}, 3.0),
               NoConvergeError);
}

TEST(GridField, IndependentOfThreadCount) {
  const char* old = std::getenv("TWISTLEAF_THREADS");
  const std::string saved = old ? old : "";
  setenv("TWISTLEAF_THREADS", "1", 1);
  const FieldGrid a = grid_field(graph("exp(z1) - 1"), cube(0.4, 7), {});
  setenv("TWISTLEAF_THREADS", "5", 1);
  const FieldGrid b = grid_field(graph("exp(z1) - 1"), cube(0.4, 7), {});
  if (old) setenv("TWISTLEAF_THREADS", saved.c_str(), 1); else unsetenv("TWISTLEAF_THREADS");
  ASSERT_EQ(a.samples.size(), b.samples.size());
  EXPECT_EQ(a.order, b.order);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].z, b.samples[i].z);
    EXPECT_EQ(a.samples[i].iterations, b.samples[i].iterations);
  }
}

TEST(GridSpec, IndexingAndNeighbours) {
  GridSpec g;
  g.axes = {Axis{0, 1, 3}, Axis{0, 1, 4}, Axis{0, 1, 5}};
  EXPECT_EQ(g.size(), 60u);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.flatten(g.unflatten(i)), i);
  EXPECT_EQ(g.point(g.size() - 1), (Point3{1, 1, 1}));
  const std::size_t centre = g.flatten({1, 1, 2});
  EXPECT_TRUE(g.interior(centre));
  EXPECT_FALSE(g.interior(0));
  EXPECT_EQ(g.neighbours(centre).size(), 6u);
  EXPECT_EQ(g.neighbours(0).size(), 3u);
  EXPECT_EQ(g.nearest({0.49, 0.0, 1.0}), g.flatten({1, 0, 4}));
  g.axes[0].count = 0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(ConformalPde, Examples) {
  const auto hopf = shared(general("z1 - 1"));
  const ZFunction z = local_z_function(hopf, {}, 1.0);
  // Central differences at step 1e-5: truncation error is around 1e-9 here.
  EXPECT_LT(std::abs(conformal_pde_residual_fd(z, {0.0, 1.0, 0.0})), 1e-8);

  const ZFunction q = [](const Point3& x) { return Complex(x[0]); };
  EXPECT_NEAR(std::abs(conformal_pde_residual_fd(q, {1.0, 0.0, 0.0}) - 2.0), 0.0, 1e-9);

  const ZFunction lin = local_z_function(shared(graph("z1")), {}, 0.0);
  EXPECT_LT(std::abs(conformal_pde_residual_fd(lin, {0.0, 0.0, 0.0})), 1e-10);
}

TEST(ConformalPde, ClosedFormHopfZ) {
  Rng rng(304);
  for (int n = 0; n < 100; ++n) {
    Point3 x = rng.point(-1, 1);
    if (x[1] * x[1] + x[2] * x[2] < 0.1) continue;
    EXPECT_LT(std::abs(conformal_pde_residual_fd(hopf_z, x)), 1e-6);
  }
}

TEST(ConformalPde, ImplicitRouteMatchesClosedFormDerivatives) {
  const ImplicitData d = graph("z1");
  Rng rng(305);
  for (int n = 0; n < 100; ++n) {
    const Point3 x = rng.point(-0.5, 0.5);
    const Complex z = linear_z(x);
    const auto g = implicit_gradient(d, x, z);
    // z = -iq / (1 - a): z_q = -i/(1-a), z_r = z/(1-a), z_s = iz/(1-a)
    const Complex den = 1.0 - Complex(x[1], x[2]);
    EXPECT_NEAR(std::abs(g[0] - Complex(0, -1) / den), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(g[1] - z / den), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(g[2] - kI * z / den), 0.0, 1e-13);
    EXPECT_LT(std::abs(conformal_pde_residual_implicit(d, x, z)), 1e-14);
  }
}

TEST(ConformalPde, ImplicitRouteRejectsBranchPoint) {
  EXPECT_THROW(implicit_gradient(general("z3^2"), {0.0, 0.0, 0.0}, 0.0), BranchPointError);
}

TEST(FrameTest, Examples) {
  const UField constant = [](const Point3&) { return UnitVec3::normalize(1, 2, 3); };
  const auto c = conformality_frame_residual(constant, {0.2, 0.1, -0.3});
  EXPECT_EQ(c[0], 0.0);
  EXPECT_EQ(c[1], 0.0);

  Rng rng(306);
  for (int n = 0; n < 50; ++n) {
    const Point3 x = rng.point(-1, 1);
    if (x[1] * x[1] + x[2] * x[2] < 0.1) continue;
    const auto h = conformality_frame_residual(hopf_field, x);
    EXPECT_LT(std::abs(h[0]), 1e-6);
    EXPECT_LT(std::abs(h[1]), 1e-6);
  }

  // v_r - w_s = 1 for normalize(1, r, 0) at the origin.
  const auto bad = conformality_frame_residual(bad_field, {0, 0, 0});
  EXPECT_NEAR(bad[0], 0.0, 1e-9);
  EXPECT_NEAR(bad[1], 1.0, 1e-9);
}

// Where the frame degenerates the residual is taken in rotated coordinates;
// rotating a conformal field keeps it conformal and a bad one bad.
TEST(FrameTest, DegenerateFrameIsHandled) {
  const UField rotated_bad = [](const Point3& x) { return UnitVec3::normalize(0.0, x[1], 1.0); };
  const auto b = conformality_frame_residual(rotated_bad, {0, 0, 0});
  EXPECT_GT(std::max(std::abs(b[0]), std::abs(b[1])), 0.5);
  const UField axis = [](const Point3&) { return UnitVec3::normalize(0, 0, 1); };
  const auto a = conformality_frame_residual(axis, {0.3, 0.3, 0.3});
  EXPECT_EQ(a[0], 0.0);
  EXPECT_EQ(a[1], 0.0);
}

TEST(Nijenhuis, Examples) {
  const UField4 constant = [](const Point4&) { return UnitVec3::normalize(0.3, -0.4, 0.5); };
  EXPECT_EQ(nijenhuis_residual(constant, {0.1, 0.2, 0.3, 0.4}), 0.0);
  const UField4 phi = local_u_field4(shared(graph("z1")), {}, 0.0);
  EXPECT_LT(nijenhuis_residual(phi, {0.1, -0.2, 0.1, 0.05}), 1e-6);
  EXPECT_GE(nijenhuis_residual(bad_field4, {0, 0, 0, 0}), 0.5);
}

// The structure built from the explicit chart: U is the fibre point of the
// twistor line through (z1, z2, z3) with z3 from the holomorphic graph.
TEST(Nijenhuis, IntegrableAcrossSlab) {
  const UField4 phi = local_u_field4(shared(graph("z1^2 + 0.5*z2")), {}, 0.0);
  Rng rng(307);
  for (int n = 0; n < 30; ++n) {
    const Point4 x{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2),
                   rng.uniform(-0.2, 0.2)};
    EXPECT_LT(nijenhuis_residual(phi, x), 1e-5);
  }
}

TEST(SectionTangency, Examples) {
  const UField4 constant = [](const Point4&) { return UnitVec3::normalize(0.3, -0.4, 0.5); };
  EXPECT_LT(section_complex_tangency(constant, {0.1, 0.2, 0.3, 0.4}), 1e-14);
  const UField4 phi = local_u_field4(shared(graph("z1")), {}, 0.0);
  EXPECT_LT(section_complex_tangency(phi, {0.1, -0.2, 0.1, 0.05}), 1e-6);
  EXPECT_GT(section_complex_tangency(bad_field4, {0, 0, 0, 0}), 0.1);
}

TEST(CrTangency, Examples) {
  const UField constant = [](const Point3&) { return UnitVec3::normalize(1, 1, 0); };
  EXPECT_LT(cr_tangency_residual(constant, {0.1, 0.2, 0.3}), 1e-14);
  EXPECT_LT(cr_tangency_residual(hopf_field, {0.2, 0.7, -0.3}), 1e-6);
  EXPECT_GT(cr_tangency_residual(bad_field, {0, 0, 0}), 0.1);
}

TEST(PrincipalAngle, KnownAngles) {
  const std::vector<std::vector<double>> x{{1, 0, 0}};
  const double t = 0.3;
  const std::vector<std::vector<double>> y{{std::cos(t), std::sin(t), 0}};
  EXPECT_NEAR(principal_angle_sine(x, y), std::sin(t), 1e-15);
  const std::vector<std::vector<double>> plane{{1, 0, 0}, {0, 1, 0}};
  const std::vector<std::vector<double>> plane2{{1, 1, 0}, {1, -1, 0}};
  EXPECT_NEAR(principal_angle_sine(plane, plane2), 0.0, 1e-15);
  EXPECT_THROW(principal_angle_sine({}, y), std::invalid_argument);
}

// Every conformal field passes all three tests; the non-conformal one fails all three.
TEST(ConformalityTests, AgreeOnExampleFields) {
  for (const char* phi : {"z1", "z1^2", "z1*z2", "exp(z1) - 1"}) {
    const FieldGrid g = grid_field(graph(phi), cube(0.4, 5), {});
    for (std::size_t i = 0; i < g.samples.size(); ++i) {
      if (!g.spec.interior(i)) continue;
      ASSERT_EQ(g.samples[i].status, SampleStatus::ok);
      const Complex fd = conformal_pde_residual(g, i, PdeMethod::fd);
      const Complex im = conformal_pde_residual(g, i, PdeMethod::implicit_derivative);
      EXPECT_LT(std::abs(fd), 1e-5) << phi;
      EXPECT_LT(std::abs(fd - im), 1e-5) << phi;
      const auto fr = conformality_frame_residual(g, i);
      EXPECT_LT(std::max(std::abs(fr[0]), std::abs(fr[1])), 1e-5) << phi;
      EXPECT_LT(cr_tangency_residual(g, i), 1e-5) << phi;
    }
  }
}

TEST(GridAdapters, BoundaryIsRejected) {
  const FieldGrid g = grid_field(graph("z1"), cube(0.4, 3), {});
  EXPECT_THROW(conformal_pde_residual(g, 0, PdeMethod::fd), BoundaryError);
  EXPECT_THROW(cr_tangency_residual(g, 0), BoundaryError);
  EXPECT_NO_THROW(cr_tangency_residual(g, 13));
}

TEST(Hopf, ClosedFormExamples) {
  const HopfValue a = hopf_closed_form({0.0, 1.0, 0.0});
  expect_unit(a.U, 0.0, 0.0, 1.0);
  EXPECT_NEAR(a.map[0], 0.0, 1e-15);
  EXPECT_NEAR(a.map[1], 0.0, 1e-15);
  expect_unit(hopf_closed_form({1.0, 1.0, 0.0}).U, 1.0 / 3, 2.0 / 3, 2.0 / 3);
  const HopfValue c = hopf_closed_form({0.0, 0.5, 0.0});
  EXPECT_NEAR(c.map[0], 1.5, 1e-15);
  EXPECT_NEAR(c.map[1], 0.0, 1e-15);
  EXPECT_THROW(hopf_closed_form({0.3, 0.0, 0.0}), AxisError);
  EXPECT_NO_THROW(hopf_field({0.3, 0.0, 0.0}));
}

TEST(Hopf, FieldIsFieldOfClosedFormZ) {
  Rng rng(308);
  for (int n = 0; n < 200; ++n) {
    const Point3 x = rng.point(-2, 2);
    if (x[1] * x[1] + x[2] * x[2] < 1e-3) continue;
    const UnitVec3 a = field_from_z(hopf_z(x)), b = hopf_field(x);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
  }
}

TEST(Curves, ConstantFieldIsStraight) {
  const UField up = [](const Point3&) { return UnitVec3::normalize(0, 0, 1); };
  const auto c = integrate_curve(up, {0, 0, 0}, 0.1, 10);
  ASSERT_EQ(c.size(), 11u);
  EXPECT_NEAR(c.back()[2], 1.0, 1e-14);
  EXPECT_EQ(c.back()[0], 0.0);
  EXPECT_EQ(c.back()[1], 0.0);
}

TEST(Curves, HopfMapIsConstantAlongCurves) {
  for (const Point3& start : {Point3{0, 1, 0}, Point3{0.5, -0.4, 0.6}}) {
    const auto c = integrate_curve(hopf_field, start, 0.02, 100);
    const auto m0 = hopf_closed_form(start).map;
    for (const Point3& p : c) {
      const auto m = hopf_closed_form(p).map;
      EXPECT_LT(std::hypot(m[0] - m0[0], m[1] - m0[1]), 1e-6);
    }
  }
}

TEST(Curves, SolverFieldCurvesMatchClosedFormCurves) {
  const UField solver = tracking_u_field(shared(general("z1 - 1")), {}, 1.0);
  const auto a = integrate_curve(solver, {0, 1, 0}, 0.05, 40);
  const auto b = integrate_curve(hopf_field, {0, 1, 0}, 0.05, 40);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(a.back()[k], b.back()[k], 1e-9);
}

TEST(Curves, Rk4Order) {
  const UField U = tracking_u_field(shared(graph("z1")), {}, 0.0);
  EXPECT_GE(observed_order(U, {0.05, 0.1, -0.1}, 0.1, 8), 3.5);
}

TEST(Curves, LeavingTheBoxThrows) {
  const UField up = [](const Point3&) { return UnitVec3::normalize(0, 0, 1); };
  const Box box{{-1, -1, -1}, {1, 1, 1}};
  EXPECT_NO_THROW(integrate_curve(up, {0, 0, 0}, 0.1, 9, box));
  EXPECT_THROW(integrate_curve(up, {0, 0, 0}, 0.1, 12, box), OutOfDomainError);
}

}  // namespace
}  // namespace twistleaf
