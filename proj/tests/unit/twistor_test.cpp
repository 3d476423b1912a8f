#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

#include "rng.hpp"
#include "twistleaf/error.hpp"
#include "twistleaf/twistor.hpp"

namespace twistleaf {
namespace {

using testing::Rng;

void expect_r5(const R5Point& x, double t, Complex a, Complex b, double tol = 1e-15) {
  EXPECT_NEAR(x.t, t, tol);
  EXPECT_NEAR(std::abs(x.zeta1 - a), 0.0, tol);
  EXPECT_NEAR(std::abs(x.zeta2 - b), 0.0, tol);
}

void expect_coords(const TwistorCoords& c, const std::array<double, 7>& want, double tol = 1e-15) {
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(c.x[k], want[k], tol) << "x" << k;
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(c.U[k], want[4 + k], tol) << "U" << k;
}

ProjPoint random_point(Rng& rng) {
  std::array<Complex, 4> z;
  for (Complex& c : z) c = rng.complex(1.0);
  return ProjPoint(z);
}

TEST(ProjPoint, CanonicalRepresentative) {
  const ProjPoint p({Complex(0, 2), Complex(1, 0), Complex(0, -2), Complex(0.5, 0)});
  EXPECT_EQ(p[0], Complex(1.0));  // tie between |Z1| and |Z3| goes to the lower index
  EXPECT_NEAR(std::abs(p[2] + 1.0), 0.0, 1e-16);
  EXPECT_THROW(ProjPoint({0.0, 0.0, 0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(ProjPoint({Complex(NAN, 0), 1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(ProjPoint, ScaleInvariance) {
  Rng rng(201);
  for (int n = 0; n < 100; ++n) {
    std::array<Complex, 4> z;
    for (Complex& c : z) c = rng.complex(1.0);
    const Complex lambda = rng.complex(3.0) + 0.1;
    std::array<Complex, 4> scaled;
    for (int k = 0; k < 4; ++k) scaled[k] = lambda * z[k];
    const ProjPoint a(z), b(scaled);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(a[k] - b[k]), 0.0, 1e-14);
  }
}

TEST(TauProject, Examples) {
  expect_r5(tau_project(ProjPoint({1.0, 0.0, 0.0, 0.0})), 1.0, 0.0, 0.0);
  expect_r5(tau_project(ProjPoint({0.0, 0.0, 1.0, 0.0})), -1.0, 0.0, 0.0);
  expect_r5(tau_project(ProjPoint({1.0, 0.0, 1.0, 0.0})), 0.0, 0.0, 1.0);
}

TEST(TauProject, LandsOnUnitSphere) {
  Rng rng(202);
  for (int n = 0; n < 1000; ++n) {
    const R5Point x = tau_project(random_point(rng));
    EXPECT_NEAR(x.t * x.t + std::norm(x.zeta1) + std::norm(x.zeta2), 1.0, 1e-13);
  }
}

TEST(Stereo, Examples) {
  const auto a = stereo({-1.0, 0.0, 0.0});
  EXPECT_EQ(a[0], Complex(0.0));
  EXPECT_EQ(a[1], Complex(0.0));
  const auto b = stereo({0.0, 0.0, 1.0});
  EXPECT_EQ(b[1], Complex(1.0));
  EXPECT_THROW(stereo({1.0, 0.0, 0.0}), PoleError);
}

TEST(Stereo, InverseRoundTrip) {
  Rng rng(203);
  for (int n = 0; n < 200; ++n) {
    const Complex a = rng.complex(3.0), b = rng.complex(3.0);
    const R5Point x = stereo_inv(a, b);
    EXPECT_NEAR(x.t * x.t + std::norm(x.zeta1) + std::norm(x.zeta2), 1.0, 1e-14);
    const auto back = stereo(x);
    EXPECT_NEAR(std::abs(back[0] - a), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(back[1] - b), 0.0, 1e-13);
  }
}

TEST(CoordsConvenient, Examples) {
  expect_coords(coords_convenient(ProjPoint({0.0, 0.0, 0.0, 1.0})), {0, 0, 0, 0, -1, 0, 0});
  expect_coords(coords_convenient(ProjPoint({0.0, 0.0, 1.0, 0.0})), {0, 0, 0, 0, 1, 0, 0});
  expect_coords(coords_convenient(ProjPoint({1.0, 0.0, 1.0, 0.0})), {0, 0, 1, 0, 1, 0, 0});
  EXPECT_THROW(coords_convenient(ProjPoint({1.0, 2.0, 0.0, 0.0})), LineAtInfinityError);
}

TEST(CoordsExplicit, Examples) {
  expect_coords(coords_explicit(0.0, 0.0, 0.0), {0, 0, 0, 0, -1, 0, 0});
  expect_coords(coords_explicit(1.0, 0.0, 0.0), {1, 0, 0, 0, -1, 0, 0});
  expect_coords(coords_explicit(0.0, 0.0, 1.0), {0, 0, 0, 0, 0, 0, 1});
}

// The explicit formulas and the homogeneous ones describe the same chart.
TEST(CoordsExplicit, AgreesWithConvenientOnAffinePoints) {
  Rng rng(204);
  for (int n = 0; n < 500; ++n) {
    const Complex z1 = rng.complex(2.0), z2 = rng.complex(2.0), z3 = rng.complex(2.0);
    const TwistorCoords a = coords_explicit(z1, z2, z3);
    const TwistorCoords b = coords_convenient(ProjPoint({z1, z2, z3, 1.0}));
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(a.x[k], b.x[k], 1e-12);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(a.U[k], b.U[k], 1e-12);
  }
}

// The point [z1, z2, z3, 1] is incident with the line over its base point:
// (z1, z2) = incidence(x, z3, 1).
TEST(Incidence, ReproducesChartCoordinates) {
  Rng rng(205);
  for (int n = 0; n < 500; ++n) {
    const Complex z1 = rng.complex(2.0), z2 = rng.complex(2.0), z3 = rng.complex(2.0);
    const TwistorCoords c = coords_explicit(z1, z2, z3);
    const auto back = incidence(c.x, z3, 1.0);
    EXPECT_NEAR(std::abs(back[0] - z1), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(back[1] - z2), 0.0, 1e-12);
  }
}

TEST(DiagramCommutes, StereoOfTauEqualsChartBase) {
  Rng rng(206);
  int tested = 0;
  while (tested < 1000) {
    const ProjPoint p = random_point(rng);
    if (std::abs(p[2]) + std::abs(p[3]) < 1e-3) continue;
    const auto ab = stereo(tau_project(p));
    const TwistorCoords c = coords_convenient(p);
    EXPECT_NEAR(std::abs(ab[0] - Complex(c.x[0], c.x[1])), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(ab[1] - Complex(c.x[2], c.x[3])), 0.0, 1e-12);
    ++tested;
  }
}

TEST(Jmat, DisplayedMatrixAtFirstAxis) {
  const Mat4 j = jmat(UnitVec3::from_components(1, 0, 0));
  const Mat4 want{{{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}}};
  EXPECT_EQ(j, want);
}

TEST(Jmat, SecondAxisPattern) {
  const Mat4 j = jmat(UnitVec3::from_components(0, 1, 0));
  const Mat4 want{{{0, 0, -1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, -1, 0, 0}}};
  EXPECT_EQ(j, want);
}

template <std::size_t N>
std::array<std::array<double, N>, N> square(const std::array<std::array<double, N>, N>& m) {
  std::array<std::array<double, N>, N> out{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t k = 0; k < N; ++k) out[i][j] += m[i][k] * m[k][j];
  return out;
}

UnitVec3 random_unit(Rng& rng) {
  for (;;) {
    const double x = rng.uniform(-1, 1), y = rng.uniform(-1, 1), z = rng.uniform(-1, 1);
    const double n = x * x + y * y + z * z;
    if (n > 1e-4 && n <= 1.0) return UnitVec3::normalize(x, y, z);
  }
}

TEST(Jmat, SquaresToMinusIdentityAndIsOrthogonal) {
  Rng rng(207);
  for (int n = 0; n < 1000; ++n) {
    const Mat4 j = jmat(random_unit(rng));
    const Mat4 j2 = square(j);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        EXPECT_NEAR(j2[a][b], a == b ? -1.0 : 0.0, 1e-13);
        EXPECT_NEAR(j[a][b], -j[b][a], 0.0);
      }
    }
  }
}

// On R^4 and on directions tangent to S^2 at U the big structure squares to -Id;
// the normal direction U itself is annihilated.
TEST(BigJmat, ComplexStructureOnTangentSpace) {
  Rng rng(208);
  for (int n = 0; n < 1000; ++n) {
    const UnitVec3 U = random_unit(rng);
    const Mat7 m = big_jmat(U);
    const Mat7 m2 = square(m);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 7; ++b) EXPECT_NEAR(m2[b][a], a == b ? -1.0 : 0.0, 1e-13);
    // Fibre block squared is U U^T - Id.
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        EXPECT_NEAR(m2[4 + a][4 + b], U[a] * U[b] - (a == b ? 1.0 : 0.0), 1e-13);
  }
}

TEST(ContactData, ThetaIsU) {
  const UnitVec3 U = UnitVec3::normalize(1, 2, 2);
  const ContactData c = contact_data(U);
  EXPECT_EQ(c.theta, U.array());
  EXPECT_EQ(c.big_j, big_jmat(U));
}

TEST(Hyperquadric, Examples) {
  EXPECT_EQ(hyperquadric_residual(ProjPoint({1.0, 0.0, 1.0, 0.0}), QuadricConvention::modulus), 0.0);
  EXPECT_EQ(hyperquadric_residual(ProjPoint({1.0, 0.0, 0.0, 0.0}), QuadricConvention::modulus), 1.0);
  EXPECT_EQ(hyperquadric_residual(ProjPoint({0.0, 0.0, 0.0, 1.0}), QuadricConvention::hermitian), 0.0);
}

ProjPoint random_on_hermitian_quadric(Rng& rng) {
  const Complex z2 = rng.complex(1.0), z3 = rng.complex(1.0), z4 = rng.complex(1.0) + 0.2;
  const Complex c(-(z2 * std::conj(z3)).real(), rng.uniform(-1, 1));  // z1 conj(z4)
  return ProjPoint({c / std::conj(z4), z2, z3, z4});
}

TEST(Hyperquadric, ConventionsCorrespond) {
  Rng rng(209);
  for (int n = 0; n < 300; ++n) {
    const ProjPoint p = random_on_hermitian_quadric(rng);
    EXPECT_NEAR(hyperquadric_residual(p, QuadricConvention::hermitian), 0.0, 1e-13);
    const ProjPoint m = hermitian_to_modulus(p);
    EXPECT_NEAR(hyperquadric_residual(m, QuadricConvention::modulus), 0.0, 1e-13);
    const ProjPoint back = modulus_to_hermitian(m);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(back[k] - p[k]), 0.0, 1e-13);
  }
}

TEST(Hyperquadric, QuadricSitsOverSlicePZero) {
  Rng rng(210);
  for (int n = 0; n < 1000; ++n) {
    const ProjPoint p = random_on_hermitian_quadric(rng);
    if (std::abs(p[2]) + std::abs(p[3]) < 1e-3) continue;
    EXPECT_NEAR(coords_convenient(p).x[0], 0.0, 1e-12);
  }
}

RealVec6 e(int k) {
  RealVec6 v{};
  v[static_cast<std::size_t>(k)] = 1.0;
  return v;
}

TEST(Classify, Examples) {
  const std::vector<RealVec6> real_axes{e(0), e(2), e(4)};
  const SubspaceClass a = classify_subspace(real_axes);
  EXPECT_EQ(a.label, SubspaceLabel::totally_real);
  EXPECT_EQ(a.hdim, 0);

  const std::vector<RealVec6> c2{e(0), e(1), e(2), e(3)};
  const SubspaceClass b = classify_subspace(c2);
  EXPECT_EQ(b.label, SubspaceLabel::complex);
  EXPECT_EQ(b.hdim, 2);

  const std::vector<RealVec6> line_plus{e(0), apply_complex_structure(e(0)), e(2)};
  const SubspaceClass c = classify_subspace(line_plus);
  EXPECT_EQ(c.label, SubspaceLabel::cr_dim_1);
  EXPECT_EQ(c.hdim, 1);
}

TEST(Classify, HypersurfaceAndGeneric) {
  const std::vector<RealVec6> hyper{e(0), e(1), e(2), e(3), e(4)};
  const SubspaceClass h = classify_subspace(hyper);
  EXPECT_EQ(h.label, SubspaceLabel::hypersurface);
  EXPECT_EQ(h.hdim, 2);
  const std::vector<RealVec6> generic{e(0), e(1), e(2), e(4)};
  const SubspaceClass g = classify_subspace(generic);
  EXPECT_EQ(g.label, SubspaceLabel::generic);
  EXPECT_EQ(g.hdim, 1);
}

TEST(Classify, Errors) {
  const std::vector<RealVec6> dependent{e(0), e(2), e(0)};
  EXPECT_THROW(classify_subspace(dependent), ClassificationError);
  const std::vector<RealVec6> too_small{e(0), e(1)};
  EXPECT_THROW(classify_subspace(too_small), ClassificationError);
  const std::vector<RealVec6> none;
  EXPECT_THROW(classify_subspace(none), ClassificationError);
}

// A unitary change of coordinates preserves the label: map the corpus
// through a random diagonal unitary and a coordinate swap.
TEST(Classify, InvariantUnderUnitaryMaps) {
  Rng rng(211);
  const std::vector<std::vector<RealVec6>> bases{
      {e(0), e(1), e(2), e(3), e(4)}, {e(0), e(1), e(2), e(3)}, {e(0), e(1), e(2), e(4)},
      {e(0), e(2), e(4)},             {e(0), e(1), e(2)}};
  for (int n = 0; n < 50; ++n) {
    std::array<double, 3> angle{rng.uniform(0, 6.3), rng.uniform(0, 6.3), rng.uniform(0, 6.3)};
    for (const auto& basis : bases) {
      std::vector<RealVec6> mapped;
      for (const RealVec6& v : basis) {
        RealVec6 w{};
        for (int k = 0; k < 3; ++k) {
          const Complex z = std::polar(1.0, angle[k]) * Complex(v[2 * k], v[2 * k + 1]);
          const int slot = (k + 1) % 3;  // cyclic swap of coordinates
          w[2 * slot] = z.real();
          w[2 * slot + 1] = z.imag();
        }
        mapped.push_back(w);
      }
      const SubspaceClass a = classify_subspace(basis), b = classify_subspace(mapped);
      EXPECT_EQ(a.label, b.label);
      EXPECT_EQ(a.hdim, b.hdim);
    }
  }
}

}  // namespace
}  // namespace twistleaf
