#include "twistleaf/twistor.hpp"

#include <Eigen/Dense>
#include <stdexcept>

#include "twistleaf/error.hpp"

namespace twistleaf {

namespace {

double abs2(Complex z) { return std::norm(z); }

constexpr double kRankTolerance = 1e-9;

int numerical_rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > kRankTolerance * sv(0)) ++rank;
  }
  return rank;
}

}  // namespace

ProjPoint::ProjPoint(const std::array<Complex, 4>& z) {
  std::size_t best = 0;
  double best_mod = -1.0;
  for (std::size_t k = 0; k < 4; ++k) {
    if (!std::isfinite(z[k].real()) || !std::isfinite(z[k].imag())) {
      throw std::invalid_argument("ProjPoint: non-finite component");
    }
    const double m = std::abs(z[k]);
    if (m > best_mod) {
      best_mod = m;
      best = k;
    }
  }
  if (best_mod == 0.0) throw std::invalid_argument("ProjPoint: all components are zero");
  const Complex scale = z[best];
  for (std::size_t k = 0; k < 4; ++k) z_[k] = (k == best) ? Complex(1.0) : z[k] / scale;
}

double ProjPoint::norm2() const noexcept {
  return abs2(z_[0]) + abs2(z_[1]) + abs2(z_[2]) + abs2(z_[3]);
}

R5Point tau_project(const ProjPoint& p) {
  const auto& Z = p.coords();
  const double n2 = p.norm2();
  R5Point out;
  out.t = (abs2(Z[0]) + abs2(Z[1]) - abs2(Z[2]) - abs2(Z[3])) / n2;
  out.zeta1 = 2.0 * (Z[1] * std::conj(Z[2]) + Z[3] * std::conj(Z[0])) / n2;
  out.zeta2 = 2.0 * (Z[0] * std::conj(Z[2]) - Z[3] * std::conj(Z[1])) / n2;
  return out;
}

std::array<Complex, 2> stereo(const R5Point& x) {
  const double den = 1.0 - x.t;
  if (!(den > 0.0) && !(den < 0.0)) throw PoleError("stereographic projection at the pole t = 1");
  return {x.zeta1 / den, x.zeta2 / den};
}

R5Point stereo_inv(Complex a, Complex b) {
  const double n2 = abs2(a) + abs2(b);
  const double den = n2 + 1.0;
  return {(n2 - 1.0) / den, 2.0 * a / den, 2.0 * b / den};
}

TwistorCoords coords_convenient(const ProjPoint& p) {
  const auto& Z = p.coords();
  const double n = abs2(Z[2]) + abs2(Z[3]);
  if (n == 0.0) throw LineAtInfinityError("point lies on the line at infinity [*,*,0,0]");
  const Complex pq = (Z[1] * std::conj(Z[2]) + Z[3] * std::conj(Z[0])) / n;
  const Complex rs = (Z[0] * std::conj(Z[2]) - Z[3] * std::conj(Z[1])) / n;
  const double u = (abs2(Z[2]) - abs2(Z[3])) / n;
  const Complex vw = 2.0 * kI * Z[3] * std::conj(Z[2]) / n;
  TwistorCoords out;
  out.x = {pq.real(), pq.imag(), rs.real(), rs.imag()};
  out.U = UnitVec3::normalize(u, vw.real(), vw.imag());
  return out;
}

TwistorCoords coords_explicit(Complex z1, Complex z2, Complex z3) {
  const double x1 = z1.real(), y1 = z1.imag();
  const double x2 = z2.real(), y2 = z2.imag();
  const double x3 = z3.real(), y3 = z3.imag();
  const double den = x3 * x3 + y3 * y3 + 1.0;
  TwistorCoords out;
  out.x = {(x2 * x3 + y2 * y3 + x1) / den, (x3 * y2 - x2 * y3 - y1) / den,
           (x1 * x3 + y1 * y3 - x2) / den, (x3 * y1 - x1 * y3 + y2) / den};
  out.U = UnitVec3::normalize((x3 * x3 + y3 * y3 - 1.0) / den, 2.0 * y3 / den, 2.0 * x3 / den);
  return out;
}

std::array<Complex, 2> incidence(const Point4& x, Complex z, Complex w) {
  const Complex alpha(x[2], x[3]);  // r + is
  const Complex beta(x[0], x[1]);   // p + iq
  return {alpha * z + std::conj(beta) * w, beta * z - std::conj(alpha) * w};
}

Mat4 jmat(const UnitVec3& U) {
  const double u = U.u(), v = U.v(), w = U.w();
  return Mat4{{{0.0, -u, -v, -w}, {u, 0.0, -w, v}, {v, w, 0.0, -u}, {w, -v, u, 0.0}}};
}

Mat7 big_jmat(const UnitVec3& U) {
  Mat7 m{};
  const Mat4 j = jmat(U);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) m[a][b] = j[a][b];
  }
  const double u = U.u(), v = U.v(), w = U.w();
  // Cross product with U on the fibre directions.
  m[4][5] = -w;
  m[4][6] = v;
  m[5][4] = w;
  m[5][6] = -u;
  m[6][4] = -v;
  m[6][5] = u;
  return m;
}

ContactData contact_data(const UnitVec3& U) { return {U.array(), big_jmat(U)}; }

double hyperquadric_residual(const ProjPoint& p, QuadricConvention convention) {
  const auto& Z = p.coords();
  if (convention == QuadricConvention::modulus) {
    return abs2(Z[0]) + abs2(Z[1]) - abs2(Z[2]) - abs2(Z[3]);
  }
  return 2.0 * (Z[0] * std::conj(Z[3]) + Z[1] * std::conj(Z[2])).real();
}

ProjPoint hermitian_to_modulus(const ProjPoint& p) {
  const auto& Z = p.coords();
  const double s = 1.0 / std::sqrt(2.0);
  return ProjPoint({s * (Z[0] + Z[3]), s * (Z[1] + Z[2]), s * (Z[0] - Z[3]), s * (Z[1] - Z[2])});
}

ProjPoint modulus_to_hermitian(const ProjPoint& p) {
  const auto& A = p.coords();
  const double s = 1.0 / std::sqrt(2.0);
  return ProjPoint({s * (A[0] + A[2]), s * (A[1] + A[3]), s * (A[1] - A[3]), s * (A[0] - A[2])});
}

std::string_view to_string(SubspaceLabel label) {
  switch (label) {
    case SubspaceLabel::hypersurface: return "hypersurface";
    case SubspaceLabel::generic: return "generic";
    case SubspaceLabel::complex: return "complex";
    case SubspaceLabel::totally_real: return "totally-real";
    case SubspaceLabel::cr_dim_1: return "cr-dim-1";
  }
  return "unknown";
}

RealVec6 apply_complex_structure(const RealVec6& x) {
  return {-x[1], x[0], -x[3], x[2], -x[5], x[4]};
}

SubspaceClass classify_subspace(std::span<const RealVec6> basis) {
  const auto k = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd T(6, k);
  Eigen::MatrixXd TJT(6, 2 * k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const RealVec6 jv = apply_complex_structure(basis[static_cast<std::size_t>(c)]);
    for (int row = 0; row < 6; ++row) {
      T(row, c) = basis[static_cast<std::size_t>(c)][static_cast<std::size_t>(row)];
      TJT(row, c) = T(row, c);
      TJT(row, k + c) = jv[static_cast<std::size_t>(row)];
    }
  }
  if (numerical_rank(T) != k) throw ClassificationError("basis vectors are linearly dependent");
  const Eigen::Index codim = 6 - k;
  if (codim < 1 || codim > 3) {
    throw ClassificationError("unsupported real codimension " + std::to_string(codim));
  }
  // dim_R(T cap JT) = 2 dim T - dim(T + JT)
  const int real_h = static_cast<int>(2 * k) - numerical_rank(TJT);
  const int hdim = real_h / 2;
  SubspaceLabel label{};
  switch (codim) {
    case 1:
      label = SubspaceLabel::hypersurface;
      break;
    case 2:
      label = hdim == 2 ? SubspaceLabel::complex : SubspaceLabel::generic;
      break;
    default:
      label = hdim == 0 ? SubspaceLabel::totally_real : SubspaceLabel::cr_dim_1;
      break;
  }
  return {label, hdim};
}

}  // namespace twistleaf
