#include "twistleaf/residuals.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "twistleaf/error.hpp"
#include "twistleaf/twistor.hpp"

namespace twistleaf {

namespace {

constexpr double kFrameDegeneracy = 1e-6;
constexpr double kBranchTolerance = 1e-12;

using Vec3 = std::array<double, 3>;
using Mat4d = std::array<std::array<double, 4>, 4>;

// jmat extended linearly to arbitrary (u, v, w); used for its derivatives.
Mat4d jmat_linear(const Vec3& a) {
  const double u = a[0], v = a[1], w = a[2];
  return Mat4d{{{0.0, -u, -v, -w}, {u, 0.0, -w, v}, {v, w, 0.0, -u}, {w, -v, u, 0.0}}};
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cyclic(const Vec3& a) { return {a[2], a[0], a[1]}; }
Vec3 cyclic_inverse(const Vec3& a) { return {a[1], a[2], a[0]}; }

Eigen::MatrixXd orthonormal_basis(const std::vector<std::vector<double>>& cols) {
  if (cols.empty()) throw std::invalid_argument("principal_angle_sine: empty span");
  const auto n = static_cast<Eigen::Index>(cols.front().size());
  const auto k = static_cast<Eigen::Index>(cols.size());
  Eigen::MatrixXd m(n, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto& col = cols[static_cast<std::size_t>(c)];
    if (static_cast<Eigen::Index>(col.size()) != n) {
      throw std::invalid_argument("principal_angle_sine: vectors of unequal length");
    }
    for (Eigen::Index r = 0; r < n; ++r) m(r, c) = col[static_cast<std::size_t>(r)];
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
}

}  // namespace

Complex conformal_pde_value(Complex z, const std::array<Complex, 3>& dz) {
  return 2.0 * z * dz[0] + kI * (1.0 + z * z) * dz[1] + (1.0 - z * z) * dz[2];
}

Complex conformal_pde_residual_fd(const ZFunction& z, const Point3& x, double fd_step) {
  return conformal_pde_value(z(x), central_partials<3>(z, x, fd_step));
}

std::array<Complex, 3> implicit_gradient(const ImplicitData& data, const Point3& x, Complex z) {
  const auto [gz, gx] = data.residual_partials(lift(x), z);
  if (std::abs(gz) < kBranchTolerance) {
    throw BranchPointError("dG/dz vanishes; implicit derivative undefined");
  }
  return {-gx[1] / gz, -gx[2] / gz, -gx[3] / gz};
}

Complex conformal_pde_residual_implicit(const ImplicitData& data, const Point3& x, Complex z) {
  return conformal_pde_value(z, implicit_gradient(data, x, z));
}

std::array<double, 2> conformality_frame_residual(const UField& U, const Point3& x,
                                                  double fd_step) {
  const Vec3 u0 = U(x).array();
  const bool permute = u0[0] * u0[0] + u0[1] * u0[1] <= kFrameDegeneracy;
  // A cyclic permutation is a rotation, so conformality is unaffected.
  auto field = [&](const Point3& y) -> Vec3 {
    if (!permute) return U(y).array();
    return cyclic(U(cyclic_inverse(y)).array());
  };
  auto frame = [&](const Point3& y) -> std::array<double, 6> {
    const Vec3 a = field(y);
    const double u = a[0], v = a[1], w = a[2];
    return {-v, u, 0.0, -u * w, -v * w, u * u + v * v};
  };
  const Point3 xp = permute ? cyclic(x) : x;
  const Vec3 a = field(xp);
  const auto f0 = frame(xp);
  const auto df = central_partials<3>(frame, xp, fd_step);  // df[k][m]

  // D_A B for A, B in {X, Y}; offsets 0 (X) and 3 (Y) into the frame vector.
  auto deriv = [&](int along, int of) {
    Vec3 out{};
    for (int k = 0; k < 3; ++k) {
      for (int m = 0; m < 3; ++m) out[m] += f0[along + k] * df[k][of + m];
    }
    return out;
  };
  const Vec3 dxy = deriv(0, 3), dyx = deriv(3, 0), dxx = deriv(0, 0), dyy = deriv(3, 3);
  const double first = dot(a, {dxy[0] + dyx[0], dxy[1] + dyx[1], dxy[2] + dyx[2]});
  const double second = dot(a, {dxx[0] - dyy[0], dxx[1] - dyy[1], dxx[2] - dyy[2]});
  return {-first, -second};
}

double nijenhuis_residual(const UField4& U, const Point4& x, double fd_step) {
  const Mat4d J = jmat_linear(U(x).array());
  const auto dU = central_partials<4>([&](const Point4& y) { return U(y).array(); }, x, fd_step);
  std::array<Mat4d, 4> dJ;
  for (int k = 0; k < 4; ++k) dJ[k] = jmat_linear(dU[k]);

  // Column c of M, and J applied to a vector.
  auto col = [](const Mat4d& m, int c) {
    return std::array<double, 4>{m[0][c], m[1][c], m[2][c], m[3][c]};
  };
  auto apply = [](const Mat4d& m, const std::array<double, 4>& v) {
    std::array<double, 4> out{};
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) out[r] += m[r][c] * v[c];
    }
    return out;
  };

  // N(e_i, e_j) = J[J e_i, e_j] + J[e_i, J e_j] - [J e_i, J e_j]
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const auto a = apply(J, col(dJ[j], i));  // J d_j(J e_i)
      const auto b = apply(J, col(dJ[i], j));  // J d_i(J e_j)
      std::array<double, 4> n{};
      for (int r = 0; r < 4; ++r) n[r] = -a[r] + b[r];
      for (int k = 0; k < 4; ++k) {
        const auto dj = col(dJ[k], j);
        const auto di = col(dJ[k], i);
        for (int r = 0; r < 4; ++r) n[r] -= J[k][i] * dj[r] - J[k][j] * di[r];
      }
      for (double c : n) worst = std::max(worst, std::abs(c));
    }
  }
  return worst;
}

double principal_angle_sine(const std::vector<std::vector<double>>& a,
                            const std::vector<std::vector<double>>& b) {
  const Eigen::MatrixXd qa = orthonormal_basis(a);
  const Eigen::MatrixXd qb = orthonormal_basis(b);
  if (qa.rows() != qb.rows()) throw std::invalid_argument("principal_angle_sine: dimension mismatch");
  const Eigen::MatrixXd residual = qb - qa * (qa.transpose() * qb);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual);
  return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()(0);
}

double section_complex_tangency(const UField4& U, const Point4& x, double fd_step) {
  const UnitVec3 u0 = U(x);
  const Mat7 bj = big_jmat(u0);
  const auto dU = central_partials<4>([&](const Point4& y) { return U(y).array(); }, x, fd_step);
  std::vector<std::vector<double>> tangent, rotated;
  for (int k = 0; k < 4; ++k) {
    std::vector<double> t(7, 0.0);
    t[static_cast<std::size_t>(k)] = 1.0;
    for (int m = 0; m < 3; ++m) t[static_cast<std::size_t>(4 + m)] = dU[k][m];
    std::vector<double> jt(7, 0.0);
    for (int r = 0; r < 7; ++r) {
      for (int c = 0; c < 7; ++c) jt[static_cast<std::size_t>(r)] += bj[r][c] * t[static_cast<std::size_t>(c)];
    }
    tangent.push_back(std::move(t));
    rotated.push_back(std::move(jt));
  }
  return principal_angle_sine(tangent, rotated);
}

double cr_tangency_residual(const UField& U, const Point3& x, double fd_step) {
  const Vec3 u0 = U(x).array();
  const auto dU = central_partials<3>([&](const Point3& y) { return U(y).array(); }, x, fd_step);
  auto DU = [&](const Vec3& X) {
    Vec3 out{};
    for (int k = 0; k < 3; ++k) {
      for (int m = 0; m < 3; ++m) out[m] += dU[k][m] * X[k];
    }
    return out;
  };
  // Orthonormal basis of U-perp, i.e. of ker(theta) in the base directions.
  const Vec3 helper = std::abs(u0[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  Vec3 e1 = cross(u0, helper);
  const double n1 = std::sqrt(dot(e1, e1));
  for (double& c : e1) c /= n1;
  const Vec3 e2 = cross(u0, e1);

  std::vector<std::vector<double>> tangent, rotated;
  for (const Vec3& X : {e1, e2}) {
    const Vec3 dx = DU(X);
    const Vec3 jx = cross(u0, X);
    const Vec3 jdx = cross(u0, dx);
    tangent.push_back({X[0], X[1], X[2], dx[0], dx[1], dx[2]});
    rotated.push_back({jx[0], jx[1], jx[2], jdx[0], jdx[1], jdx[2]});
  }
  return principal_angle_sine(tangent, rotated);
}

void require_interior(const GridSpec& spec, std::size_t index) {
  if (index >= spec.size()) throw std::out_of_range("grid index out of range");
  if (!spec.interior(index)) {
    throw BoundaryError("finite-difference stencil requested at boundary grid index " +
                        std::to_string(index));
  }
}

namespace {

const FieldSample& usable_sample(const FieldGrid& grid, std::size_t index) {
  require_interior(grid.spec, index);
  const FieldSample& s = grid.samples.at(index);
  if (s.status != SampleStatus::ok) {
    throw NoConvergeError("grid sample " + std::to_string(index) + " has status " +
                          std::string(to_string(s.status)));
  }
  return s;
}

}  // namespace

ZFunction grid_local_z(const FieldGrid& grid, std::size_t index) {
  return local_z_function(grid.data, grid.config, usable_sample(grid, index).z);
}

UField grid_local_u(const FieldGrid& grid, std::size_t index) {
  return local_u_field(grid.data, grid.config, usable_sample(grid, index).z);
}

Complex conformal_pde_residual(const FieldGrid& grid, std::size_t index, PdeMethod method) {
  const FieldSample& s = usable_sample(grid, index);
  if (method == PdeMethod::implicit_derivative) {
    return conformal_pde_residual_implicit(*grid.data, s.point, s.z);
  }
  return conformal_pde_residual_fd(grid_local_z(grid, index), s.point, grid.config.fd_step);
}

std::array<double, 2> conformality_frame_residual(const FieldGrid& grid, std::size_t index) {
  return conformality_frame_residual(grid_local_u(grid, index), grid.samples[index].point,
                                     grid.config.fd_step);
}

double cr_tangency_residual(const FieldGrid& grid, std::size_t index) {
  return cr_tangency_residual(grid_local_u(grid, index), grid.samples[index].point,
                              grid.config.fd_step);
}

}  // namespace twistleaf
