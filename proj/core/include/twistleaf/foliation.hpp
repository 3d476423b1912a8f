#pragma once

// Unit vector fields U(q, r, s) generated by holomorphic data through the
// fibre-coordinate equation z = Phi((r+is)z - iq, iqz - (r-is)) or its
// general form f((r+is)z - iq, iqz - (r-is), z) = 0.

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "twistleaf/expr.hpp"
#include "twistleaf/grid.hpp"
#include "twistleaf/jet.hpp"
#include "twistleaf/types.hpp"

namespace twistleaf {

struct SolverConfig {
  double newton_tol = 1e-12;
  int max_iters = 50;
  double fd_step = 1e-5;  // scaled by 1 + |coordinate|
  double pole_radius = 1e6;

  /// Throws std::invalid_argument unless every field is positive.
  void validate() const;
};

/// Holomorphic data defining z(p, q, r, s) implicitly. Evaluation works over
/// R^4 (p = 0 is the R^3 slice) so the same data also defines the Hermitian
/// structure on R^4.
class ImplicitData {
 public:
  enum class Kind { graph, general };

  /// z = phi(z1, z2).
  static ImplicitData graph(HoloFn2 phi);
  static ImplicitData graph(const HoloExpr& phi);
  /// f(z1, z2, z3) = 0 with variables taken positionally.
  static ImplicitData general(const HoloExpr& f);

  Kind kind() const noexcept { return kind_; }

  struct Residual {
    Complex value;  // G
    Complex dz;     // dG/dz
  };
  /// G and dG/dz at fibre coordinate z over x = (p, q, r, s).
  Residual residual(const Point4& x, Complex z) const;
  /// dG/dz and (dG/dp, dG/dq, dG/dr, dG/ds) at (x, z).
  std::pair<Complex, std::array<Complex, 4>> residual_partials(const Point4& x, Complex z) const;

 private:
  ImplicitData() = default;
  Kind kind_ = Kind::graph;
  HoloFn2 phi_;
  std::shared_ptr<const HoloExpr> f_;
};

enum class SampleStatus { ok, no_converge, branch_point, near_pole };
std::string_view to_string(SampleStatus status);

struct FieldSample {
  Point3 point{};
  Complex z{};
  UnitVec3 U;
  SampleStatus status = SampleStatus::no_converge;
  int iterations = 0;
};

struct ImplicitSolution {
  Complex z{};
  SampleStatus status = SampleStatus::no_converge;
  int iterations = 0;
  double residual = 0.0;  // |G(z)|
};

/// Newton iteration on G(z) from `seed`, with one halving line search
/// (up to 10 halvings) whenever a full step fails to reduce |G|.
ImplicitSolution solve_implicit(const ImplicitData& data, const Point4& x, Complex seed,
                                const SolverConfig& cfg);

/// solve_implicit on the slice p = 0, packaged with the resulting U.
FieldSample solve_implicit_point(const ImplicitData& data, const Point3& point, Complex seed,
                                 const SolverConfig& cfg);

/// (u, v + iw) = (|z|^2 - 1, 2i conj(z)) / (|z|^2 + 1). Infinite z maps to (1, 0, 0).
UnitVec3 field_from_z(Complex z);

inline Point4 lift(const Point3& x) { return {0.0, x[0], x[1], x[2]}; }

/// Solver field on a grid, filled by breadth-first continuation from a seed point.
struct FieldGrid {
  GridSpec spec;
  SolverConfig config;
  std::shared_ptr<const ImplicitData> data;
  std::vector<FieldSample> samples;
  std::size_t seed_index = 0;
  /// Grid indices in the order they were solved.
  std::vector<std::size_t> order;
};

/// Solves at the grid point nearest `seed_point` from `seed_z`, then layer by
/// layer outward: each new point is seeded with the z of its lowest-index
/// solved neighbour in the previous layer. Points are not expanded through
/// failures. Throws NoConvergeError only if the seed point fails.
FieldGrid grid_field(const ImplicitData& data, const GridSpec& spec, const SolverConfig& cfg,
                     const Point3& seed_point = {0.0, 0.0, 0.0}, Complex seed_z = 0.0);

using ZFunction = std::function<Complex(const Point3&)>;
using UField = std::function<UnitVec3(const Point3&)>;
using UField4 = std::function<UnitVec3(const Point4&)>;

/// z near a known solution, by Newton seeded at `seed`. Throws NoConvergeError
/// (or BranchPointError) when the solve does not return ok.
Complex solve_z_or_throw(const ImplicitData& data, const Point4& x, Complex seed,
                         const SolverConfig& cfg);

/// Pointwise evaluators seeded with a fixed z; valid near the point that z belongs to.
ZFunction local_z_function(std::shared_ptr<const ImplicitData> data, SolverConfig cfg, Complex seed);
UField local_u_field(std::shared_ptr<const ImplicitData> data, SolverConfig cfg, Complex seed);
UField4 local_u_field4(std::shared_ptr<const ImplicitData> data, SolverConfig cfg, Complex seed);

/// Evaluator that reseeds from its previous answer; suited to walking along
/// a curve. Not safe for concurrent use.
UField tracking_u_field(std::shared_ptr<const ImplicitData> data, SolverConfig cfg, Complex seed);

struct HopfValue {
  UnitVec3 U;
  std::array<double, 2> map{};
};
/// Closed-form Clifford field and its first integral (the Hopf map in
/// stereographic coordinates). Throws AxisError when r = s = 0.
HopfValue hopf_closed_form(const Point3& x);
/// The field alone; defined everywhere.
UnitVec3 hopf_field(const Point3& x);

}  // namespace twistleaf
