#include "twistleaf/foliation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "twistleaf/error.hpp"

namespace twistleaf {

namespace {

constexpr double kBranchTolerance = 1e-12;
constexpr int kMaxHalvings = 10;

struct IncidenceJet {
  Complex z1, z2;
  Complex dz1_dz, dz2_dz;
  std::array<Complex, 4> dz1_dx, dz2_dx;  // along p, q, r, s
};

// z1 = (r+is)z + (p-iq), z2 = (p+iq)z - (r-is)
IncidenceJet incidence_jet(const Point4& x, Complex z) {
  const Complex alpha(x[2], x[3]);
  const Complex beta(x[0], x[1]);
  IncidenceJet j;
  j.z1 = alpha * z + std::conj(beta);
  j.z2 = beta * z - std::conj(alpha);
  j.dz1_dz = alpha;
  j.dz2_dz = beta;
  j.dz1_dx = {1.0, -kI, z, kI * z};
  j.dz2_dx = {z, kI * z, -1.0, kI};
  return j;
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

void SolverConfig::validate() const {
  if (!(newton_tol > 0.0) || !(fd_step > 0.0) || !(pole_radius > 0.0) || max_iters < 1) {
    throw std::invalid_argument("SolverConfig: tolerances must be positive and max_iters >= 1");
  }
}

ImplicitData ImplicitData::graph(HoloFn2 phi) {
  ImplicitData d;
  d.kind_ = Kind::graph;
  d.phi_ = std::move(phi);
  return d;
}

ImplicitData ImplicitData::graph(const HoloExpr& phi) { return graph(phi.as_fn2()); }

ImplicitData ImplicitData::general(const HoloExpr& f) {
  ImplicitData d;
  d.kind_ = Kind::general;
  d.f_ = std::make_shared<const HoloExpr>(f);
  return d;
}

ImplicitData::Residual ImplicitData::residual(const Point4& x, Complex z) const {
  const IncidenceJet inc = incidence_jet(x, z);
  if (kind_ == Kind::graph) {
    const Jet2 phi = phi_(inc.z1, inc.z2);
    return {z - phi.value, 1.0 - phi.d[0] * inc.dz1_dz - phi.d[1] * inc.dz2_dz};
  }
  const std::array<Complex, 3> args{inc.z1, inc.z2, z};
  const Jet2 f = f_->eval_jet2(args);
  return {f.value, f.d[0] * inc.dz1_dz + f.d[1] * inc.dz2_dz + f.d[2]};
}

std::pair<Complex, std::array<Complex, 4>> ImplicitData::residual_partials(const Point4& x,
                                                                           Complex z) const {
  const IncidenceJet inc = incidence_jet(x, z);
  Complex g1, g2, gz;
  if (kind_ == Kind::graph) {
    const Jet2 phi = phi_(inc.z1, inc.z2);
    g1 = -phi.d[0];
    g2 = -phi.d[1];
    gz = 1.0 + g1 * inc.dz1_dz + g2 * inc.dz2_dz;
  } else {
    const std::array<Complex, 3> args{inc.z1, inc.z2, z};
    const Jet2 f = f_->eval_jet2(args);
    g1 = f.d[0];
    g2 = f.d[1];
    gz = g1 * inc.dz1_dz + g2 * inc.dz2_dz + f.d[2];
  }
  std::array<Complex, 4> gx{};
  for (std::size_t k = 0; k < 4; ++k) gx[k] = g1 * inc.dz1_dx[k] + g2 * inc.dz2_dx[k];
  return {gz, gx};
}

std::string_view to_string(SampleStatus status) {
  switch (status) {
    case SampleStatus::ok: return "ok";
    case SampleStatus::no_converge: return "no-converge";
    case SampleStatus::branch_point: return "branch-point";
    case SampleStatus::near_pole: return "near-pole";
  }
  return "unknown";
}

ImplicitSolution solve_implicit(const ImplicitData& data, const Point4& x, Complex seed,
                                const SolverConfig& cfg) {
  auto residual_norm = [&](Complex z) {
    try {
      const Complex g = data.residual(x, z).value;
      return finite(g) ? std::abs(g) : std::numeric_limits<double>::infinity();
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  ImplicitSolution sol;
  Complex z = seed;
  for (int it = 0;; ++it) {
    sol.z = z;
    sol.iterations = it;
    if (!finite(z)) {
      sol.status = SampleStatus::no_converge;
      return sol;
    }
    if (std::abs(z) > cfg.pole_radius) {
      sol.status = SampleStatus::near_pole;
      return sol;
    }
    ImplicitData::Residual g;
    try {
      g = data.residual(x, z);
    } catch (const DomainError&) {
      sol.status = SampleStatus::no_converge;
      return sol;
    }
    const double r = std::abs(g.value);
    sol.residual = r;
    if (r < cfg.newton_tol) {
      sol.status = SampleStatus::ok;
      return sol;
    }
    if (it >= cfg.max_iters || !std::isfinite(r)) break;
    if (!(std::abs(g.dz) >= kBranchTolerance)) {
      sol.status = SampleStatus::branch_point;
      return sol;
    }
    const Complex step = g.value / g.dz;
    Complex next = z - step;
    if (!(residual_norm(next) < r)) {
      double scale = 1.0;
      for (int h = 0; h < kMaxHalvings; ++h) {
        scale *= 0.5;
        const Complex trial = z - scale * step;
        if (residual_norm(trial) < r) {
          next = trial;
          break;
        }
      }
    }
    z = next;
  }
  sol.status = SampleStatus::no_converge;
  return sol;
}

FieldSample solve_implicit_point(const ImplicitData& data, const Point3& point, Complex seed,
                                 const SolverConfig& cfg) {
  const ImplicitSolution sol = solve_implicit(data, lift(point), seed, cfg);
  FieldSample s;
  s.point = point;
  s.z = sol.z;
  s.status = sol.status;
  s.iterations = sol.iterations;
  s.U = sol.status == SampleStatus::near_pole ? UnitVec3() : field_from_z(sol.z);
  return s;
}

UnitVec3 field_from_z(Complex z) {
  if (!finite(z)) return UnitVec3();
  const double m2 = std::norm(z);
  if (!std::isfinite(m2 + 1.0) || m2 > 1e300) return UnitVec3();
  const double den = m2 + 1.0;
  const Complex vw = 2.0 * kI * std::conj(z) / den;
  return UnitVec3::normalize((m2 - 1.0) / den, vw.real(), vw.imag());
}

FieldGrid grid_field(const ImplicitData& data, const GridSpec& spec, const SolverConfig& cfg,
                     const Point3& seed_point, Complex seed_z) {
  spec.validate();
  cfg.validate();
  FieldGrid grid;
  grid.spec = spec;
  grid.config = cfg;
  grid.data = std::make_shared<const ImplicitData>(data);
  const std::size_t n = spec.size();
  grid.samples.resize(n);
  const Complex unsolved(std::numeric_limits<double>::quiet_NaN(),
                         std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) {
    grid.samples[i].point = spec.point(i);
    grid.samples[i].z = unsolved;
  }

  const std::size_t seed = spec.nearest(seed_point);
  grid.seed_index = seed;
  grid.samples[seed] = solve_implicit_point(data, grid.samples[seed].point, seed_z, cfg);
  if (grid.samples[seed].status != SampleStatus::ok) {
    throw NoConvergeError("seed point failed with status " +
                          std::string(to_string(grid.samples[seed].status)));
  }
  grid.order = bfs_continuation(spec, seed, [&](std::size_t idx, std::size_t parent) {
    grid.samples[idx] =
        solve_implicit_point(data, grid.samples[idx].point, grid.samples[parent].z, cfg);
    return grid.samples[idx].status == SampleStatus::ok;
  });
  return grid;
}

Complex solve_z_or_throw(const ImplicitData& data, const Point4& x, Complex seed,
                         const SolverConfig& cfg) {
  const ImplicitSolution sol = solve_implicit(data, x, seed, cfg);
  switch (sol.status) {
    case SampleStatus::ok:
      return sol.z;
    case SampleStatus::branch_point:
      throw BranchPointError("implicit equation is singular near the requested point");
    case SampleStatus::near_pole:
      throw NoConvergeError("solution left the pole radius");
    default:
      throw NoConvergeError("Newton iteration did not converge");
  }
}

ZFunction local_z_function(std::shared_ptr<const ImplicitData> data, SolverConfig cfg, Complex seed) {
  return [data = std::move(data), cfg, seed](const Point3& x) {
    return solve_z_or_throw(*data, lift(x), seed, cfg);
  };
}

UField local_u_field(std::shared_ptr<const ImplicitData> data, SolverConfig cfg, Complex seed) {
  return [data = std::move(data), cfg, seed](const Point3& x) {
    return field_from_z(solve_z_or_throw(*data, lift(x), seed, cfg));
  };
}

UField4 local_u_field4(std::shared_ptr<const ImplicitData> data, SolverConfig cfg, Complex seed) {
  return [data = std::move(data), cfg, seed](const Point4& x) {
    return field_from_z(solve_z_or_throw(*data, x, seed, cfg));
  };
}

UField tracking_u_field(std::shared_ptr<const ImplicitData> data, SolverConfig cfg, Complex seed) {
  auto last = std::make_shared<Complex>(seed);
  return [data = std::move(data), cfg, last](const Point3& x) {
    *last = solve_z_or_throw(*data, lift(x), *last, cfg);
    return field_from_z(*last);
  };
}

UnitVec3 hopf_field(const Point3& x) {
  const double q = x[0], r = x[1], s = x[2];
  const double den = 1.0 + q * q + r * r + s * s;
  return UnitVec3::normalize((1.0 + q * q - r * r - s * s) / den, 2.0 * (q * r - s) / den,
                             2.0 * (q * s + r) / den);
}

HopfValue hopf_closed_form(const Point3& x) {
  const double q = x[0], r = x[1], s = x[2];
  const double rs2 = r * r + s * s;
  if (rs2 == 0.0) throw AxisError("Hopf map is undefined on the axis r = s = 0");
  const double k = 1.0 - q * q - r * r - s * s;
  return {hopf_field(x), {(k * r + 2.0 * q * s) / rs2, (k * s - 2.0 * q * r) / rs2}};
}

}  // namespace twistleaf
