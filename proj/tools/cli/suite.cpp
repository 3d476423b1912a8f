#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "commands.hpp"
#include "twistleaf/error.hpp"
#include "twistleaf/nullform.hpp"
#include "twistleaf/twistor.hpp"

namespace twistleaf::cli {

namespace {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

UnitVec3 random_unit(SplitMix64& rng) {
  for (;;) {
    const double x = rng.uniform(-1, 1), y = rng.uniform(-1, 1), z = rng.uniform(-1, 1);
    const double n = x * x + y * y + z * z;
    if (n > 1e-4 && n <= 1.0) return UnitVec3::normalize(x, y, z);
  }
}

template <std::size_t N>
double square_defect(const std::array<std::array<double, N>, N>& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < N; ++k) v += m[i][k] * m[k][j];
      worst = std::max(worst, std::abs(v + (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

// big_jmat squares to -Id on R^4 (+) T_U S^2, the tangent space of R^4 x S^2;
// on the normal direction U it is zero.
double big_square_defect(const UnitVec3& U) {
  const Mat7 m = big_jmat(U);
  const std::array<double, 3> u = U.array();
  const std::array<double, 3> helper = std::abs(u[0]) < 0.9 ? std::array<double, 3>{1, 0, 0}
                                                             : std::array<double, 3>{0, 1, 0};
  std::array<double, 3> t1{u[1] * helper[2] - u[2] * helper[1], u[2] * helper[0] - u[0] * helper[2],
                           u[0] * helper[1] - u[1] * helper[0]};
  const double n = std::sqrt(t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]);
  for (double& c : t1) c /= n;
  const std::array<double, 3> t2{u[1] * t1[2] - u[2] * t1[1], u[2] * t1[0] - u[0] * t1[2],
                                 u[0] * t1[1] - u[1] * t1[0]};
  std::vector<std::array<double, 7>> basis;
  for (int k = 0; k < 4; ++k) {
    std::array<double, 7> e{};
    e[static_cast<std::size_t>(k)] = 1.0;
    basis.push_back(e);
  }
  for (const auto& t : {t1, t2}) basis.push_back({0, 0, 0, 0, t[0], t[1], t[2]});
  auto apply = [&](const std::array<double, 7>& x) {
    std::array<double, 7> y{};
    for (int r = 0; r < 7; ++r) {
      for (int c = 0; c < 7; ++c) y[r] += m[r][c] * x[c];
    }
    return y;
  };
  double worst = 0.0;
  for (const auto& x : basis) {
    const auto y = apply(apply(x));
    for (int r = 0; r < 7; ++r) worst = std::max(worst, std::abs(y[r] + x[r]));
  }
  return worst;
}

ResidualReport algebra_identities() {
  SplitMix64 rng(1);
  ReportBuilder b("algebra/complex-structures-and-nullity", 1e-13);
  for (int k = 0; k < 1000; ++k) {
    const UnitVec3 U = random_unit(rng);
    b.add(std::max(square_defect(jmat(U)), big_square_defect(U)), {U.u(), U.v(), U.w()});
    const Complex z(rng.uniform(-2, 2), rng.uniform(-2, 2)), w(rng.uniform(-2, 2), rng.uniform(-2, 2));
    b.add(std::abs(make_omega(z, w).square()), {z.real(), z.imag(), w.real()});
  }
  return b.finish();
}

ResidualReport diagram_commutation() {
  SplitMix64 rng(2);
  ReportBuilder b("algebra/diagram-commutation", 1e-12);
  int done = 0;
  while (done < 1000) {
    std::array<Complex, 4> z;
    for (Complex& c : z) c = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    if (std::abs(z[2]) + std::abs(z[3]) < 0.1) continue;
    try {
      const ProjPoint p(z);
      const auto ab = stereo(tau_project(p));
      const TwistorCoords c = coords_convenient(p);
      const Complex a(c.x[0], c.x[1]), bb(c.x[2], c.x[3]);
      b.add(std::max(std::abs(ab[0] - a), std::abs(ab[1] - bb)), {c.x[0], c.x[1], c.x[2]});
      ++done;
    } catch (const Error&) {
      continue;  // pole of the stereographic projection; measure zero
    }
  }
  return b.finish();
}

void absorb(Document& suite, const std::string& prefix, const Outcome& run) {
  for (ResidualReport r : run.doc.reports) {
    r.name = prefix + "/" + r.name;
    suite.reports.push_back(std::move(r));
  }
  Json s{{"run", prefix}, {"exit_code", run.exit_code}, {"sample_count", run.doc.samples.size()}};
  if (run.doc.meta.contains("failed_samples")) s["failed_samples"] = run.doc.meta["failed_samples"];
  suite.samples.push_back(std::move(s));
}

CommonOptions common(const std::string& grid) {
  CommonOptions c;
  c.grid = grid;
  c.verify = true;
  return c;
}

}  // namespace

Outcome run_verify_all() {
  Outcome out;
  Document& doc = out.doc;
  doc.meta = {{"tool", "twistleaf"}, {"command", "verify-all"}};

  {
    HopfOptions o;
    o.common = common("q:-1:1:11,r:-1:1:11,s:-1:1:11");
    o.compare_implicit = true;
    o.curves = 4;
    absorb(doc, "hopf", run_hopf(o));
  }
  doc.reports.push_back(diagram_commutation());
  doc.reports.push_back(algebra_identities());
  for (const char* phi : {"z1", "z1^2", "z1*z2", "exp(z1) - 1"}) {
    FieldOptions o;
    o.common = common("q:-0.4:0.4:9,r:-0.4:0.4:9,s:-0.4:0.4:9");
    o.expr = phi;
    absorb(doc, std::string("phi-field[") + phi + "]", run_phi_field(o));
  }
  for (const char* xi : {"-z2", "0.5*z1^2 - z2", "0.5*z1^2 + 0.5*z2^2 - z2"}) {
    XiOptions o;
    o.common = common("q:-0.3:0.3:7,r:-0.3:0.3:7,s:-0.3:0.3:7");
    o.xi = xi;
    absorb(doc, std::string("xi-form[") + xi + "]", run_xi_form(o));
  }
  {
    XiOptions o;
    o.common = common("q:-0.3:0.3:7,r:-0.3:0.3:7,s:-0.3:0.3:7");
    o.example = "sqrt-family";
    absorb(doc, "xi-form[sqrt-family]", run_xi_form(o));
  }
  {
    NurowskiOptions o;
    o.common = common("q:-0.3:0.3:7,r:-0.3:0.3:7,s:-0.3:0.3:7");
    o.dual_of = "0.5*z1^2 + 0.5*z2^2 - z2";
    o.compare_xi = true;
    absorb(doc, "nurowski-form", run_nurowski_form(o));
  }
  {
    EikonalOptions o;
    o.common = common("q:-0.1:0.1:3,r:-1.2:1.2:25,s:-0.2:0.3:11");
    absorb(doc, "eikonal", run_eikonal(o));
  }
  {
    ClassifyOptions o;
    o.corpus = true;
    absorb(doc, "classify", run_classify(o));
  }

  bool ok = doc.all_pass();
  for (const Json& s : doc.samples) ok = ok && s["exit_code"].get<int>() == 0;
  out.exit_code = ok ? 0 : 1;
  return out;
}

}  // namespace twistleaf::cli
