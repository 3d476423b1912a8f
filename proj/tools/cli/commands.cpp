#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "options.hpp"
#include "twistleaf/curves.hpp"
#include "twistleaf/eikonal.hpp"
#include "twistleaf/error.hpp"
#include "twistleaf/expr.hpp"
#include "twistleaf/nullform.hpp"
#include "twistleaf/parallel.hpp"
#include "twistleaf/potential.hpp"
#include "twistleaf/residuals.hpp"
#include "twistleaf/twistor.hpp"

namespace twistleaf::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kUnitThreshold = 1e-12;
constexpr double kNullityThreshold = 1e-12;

Json config_json(const SolverConfig& c) {
  return {{"newton_tol", c.newton_tol},
          {"max_iters", c.max_iters},
          {"fd_step", c.fd_step},
          {"pole_radius", c.pole_radius}};
}

void validate_config(const SolverConfig& c) {
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

HoloExpr parse_expr(const std::string& text, std::vector<std::string> vars, const char* what) {
  if (text.empty()) throw ValidationError(std::string("missing expression for ") + what);
  try {
    return HoloExpr::parse(text, std::move(vars));
  } catch (const ParseError& e) {
    throw ValidationError(std::string(what) + ": " + e.what());
  }
}

GridSpec checked_grid(const CommonOptions& c) {
  validate_config(c.config);
  if (!(c.max_fail_fraction >= 0.0 && c.max_fail_fraction <= 1.0)) {
    throw ValidationError("max-fail-fraction must lie in [0, 1]");
  }
  const GridSpec spec = parse_grid(c.grid);
  if (c.verify) require_min_count(spec, 3);
  return spec;
}

ZW parse_zw(const std::string& text) {
  const auto pos1 = text.find(',');
  const auto pos2 = pos1 == std::string::npos ? pos1 : text.find(',', pos1 + 1);
  const auto pos3 = pos2 == std::string::npos ? pos2 : text.find(',', pos2 + 1);
  if (pos3 == std::string::npos) throw ValidationError("seed must be z_re,z_im,w_re,w_im");
  return {parse_complex(text.substr(0, pos2)), parse_complex(text.substr(pos2 + 1))};
}

// `head` keys first, then the remaining entries of `rest`.
Json with_head(Json head, const Json& rest) {
  for (auto it = rest.begin(); it != rest.end(); ++it) head[it.key()] = it.value();
  return head;
}

bool too_many_failures(std::size_t failed, std::size_t total, double allowed) {
  return total > 0 && static_cast<double>(failed) > allowed * static_cast<double>(total);
}

int exit_code(const Document& doc, bool verify, bool failures_exceeded) {
  if (failures_exceeded) return 1;
  return verify && !doc.all_pass() ? 1 : 0;
}

// Per-point residuals of a FieldGrid.
struct FieldResiduals {
  double pde_fd = kNaN, pde_implicit = kNaN, agreement = kNaN;
  double frame1 = kNaN, frame2 = kNaN, cr = kNaN;
  bool evaluated = false;
  bool error = false;
};

FieldResiduals field_residuals(const FieldGrid& grid, std::size_t i) {
  FieldResiduals r;
  r.evaluated = true;
  try {
    const Complex fd = conformal_pde_residual(grid, i, PdeMethod::fd);
    const Complex im = conformal_pde_residual(grid, i, PdeMethod::implicit_derivative);
    r.pde_fd = std::abs(fd);
    r.pde_implicit = std::abs(im);
    r.agreement = std::abs(fd - im);
    const auto fr = conformality_frame_residual(grid, i);
    r.frame1 = fr[0];
    r.frame2 = fr[1];
    r.cr = cr_tangency_residual(grid, i);
  } catch (const Error&) {
    r.error = true;
  }
  return r;
}

struct FieldRun {
  FieldGrid grid;
  Document doc;
  std::size_t failed = 0;
  std::size_t considered = 0;
};

// Solves on the grid and, with `verify`, evaluates the three conformality
// tests at every interior ok point for which `include` holds.
FieldRun field_run(const ImplicitData& data, const GridSpec& spec, const SolverConfig& cfg,
                   const Point3& seed_point, Complex seed_z, bool verify, double threshold,
                   const std::function<bool(const Point3&)>& include) {
  FieldRun run;
  try {
    run.grid = grid_field(data, spec, cfg, seed_point, seed_z);
  } catch (const NoConvergeError& e) {
    throw ValidationError(std::string("seed point: ") + e.what());
  }
  const FieldGrid& g = run.grid;
  const std::size_t n = g.samples.size();

  std::vector<FieldResiduals> res(n);
  if (verify) {
    parallel_for(n, [&](std::size_t i) {
      const FieldSample& s = g.samples[i];
      if (s.status == SampleStatus::ok && spec.interior(i) && include(s.point)) {
        res[i] = field_residuals(g, i);
      }
    });
  }

  ReportBuilder pde_fd("conformal-pde-fd", threshold), pde_im("conformal-pde-implicit", threshold),
      agree("pde-route-agreement", threshold), frame("frame-test", threshold),
      cr("cr-tangency", threshold), unit("unit-norm", kUnitThreshold);
  for (std::size_t i = 0; i < n; ++i) {
    const FieldSample& s = g.samples[i];
    const bool counted = include(s.point);
    if (counted) {
      ++run.considered;
      if (s.status != SampleStatus::ok) ++run.failed;
    }
    Json j;
    j["index"] = i;
    j["point"] = point_json(s.point);
    j["z"] = complex_json(s.z);
    j["U"] = Json::array({s.U.u(), s.U.v(), s.U.w()});
    j["status"] = std::string(to_string(s.status));
    j["iterations"] = s.iterations;
    const FieldResiduals& r = res[i];
    j["residuals"] = {{"conformal_pde_fd", r.pde_fd},
                      {"conformal_pde_implicit", r.pde_implicit},
                      {"frame_1", r.frame1},
                      {"frame_2", r.frame2},
                      {"cr_tangency", r.cr}};
    run.doc.samples.push_back(std::move(j));

    if (!verify || !counted || s.status != SampleStatus::ok) continue;
    const auto u = s.U.array();
    unit.add(norm3(u) - 1.0, s.point);
    if (!r.evaluated) continue;
    if (r.error) {
      for (ReportBuilder* b : {&pde_fd, &pde_im, &agree, &frame, &cr}) b->fail(s.point);
      continue;
    }
    pde_fd.add(r.pde_fd, s.point);
    pde_im.add(r.pde_implicit, s.point);
    agree.add(r.agreement, s.point);
    frame.add(std::max(std::abs(r.frame1), std::abs(r.frame2)), s.point);
    cr.add(r.cr, s.point);
  }
  if (verify) {
    for (const ReportBuilder* b : {&pde_fd, &pde_im, &agree, &frame, &cr, &unit}) {
      run.doc.reports.push_back(b->finish());
    }
  }
  run.doc.grid = grid_json(spec);
  run.doc.meta["config"] = config_json(cfg);
  run.doc.meta["seed_point"] = point_json(seed_point);
  run.doc.meta["seed_z"] = complex_json(seed_z);
  run.doc.meta["failed_samples"] = run.failed;
  Json order = Json::array();
  for (std::size_t k : g.order) order.push_back(k);
  run.doc.meta["continuation_order"] = std::move(order);
  return run;
}

Outcome field_command(const FieldOptions& opt, bool general) {
  const GridSpec spec = checked_grid(opt.common);
  const HoloExpr e = general ? parse_expr(opt.expr, {"z1", "z2", "z3"}, "f")
                             : parse_expr(opt.expr, {"z1", "z2"}, "phi");
  const Point3 seed_point = parse_point(opt.seed_point);
  const Complex seed_z = parse_complex(opt.seed_z);
  if (!(opt.threshold > 0.0)) throw ValidationError("threshold must be positive");
  const ImplicitData data = general ? ImplicitData::general(e) : ImplicitData::graph(e);

  FieldRun run = field_run(data, spec, opt.common.config, seed_point, seed_z, opt.common.verify,
                           opt.threshold, [](const Point3&) { return true; });
  Outcome out;
  out.doc = std::move(run.doc);
  out.doc.meta = with_head({{"tool", "twistleaf"},
                             {"command", general ? "f-field" : "phi-field"},
                             {general ? "f" : "phi", e.to_string()}},
                            out.doc.meta);
  out.exit_code = exit_code(out.doc, opt.common.verify,
                            too_many_failures(run.failed, run.considered, opt.common.max_fail_fraction));
  return out;
}

}  // namespace

Outcome run_phi_field(const FieldOptions& opt) { return field_command(opt, false); }
Outcome run_f_field(const FieldOptions& opt) { return field_command(opt, true); }

namespace {

// Fixed, well-spread starting points off the axis r = s = 0.
std::vector<Point3> hopf_curve_starts(int count, double exclude_radius2) {
  std::vector<Point3> starts{{0.0, 1.0, 0.0}, {0.3, 0.5, -0.2}, {-0.4, -0.6, 0.3}, {0.2, -0.3, 0.7}};
  std::mt19937_64 rng(20240531);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  while (static_cast<int>(starts.size()) < count) {
    const Point3 p{1.6 * unit() - 0.8, 1.6 * unit() - 0.8, 1.6 * unit() - 0.8};
    if (p[1] * p[1] + p[2] * p[2] >= exclude_radius2) starts.push_back(p);
  }
  starts.resize(static_cast<std::size_t>(std::max(count, 0)));
  return starts;
}

double hopf_map_drift(const std::vector<Point3>& curve) {
  const auto m0 = hopf_closed_form(curve.front()).map;
  double worst = 0.0;
  for (const Point3& p : curve) {
    const auto m = hopf_closed_form(p).map;
    worst = std::max(worst, std::hypot(m[0] - m0[0], m[1] - m0[1]));
  }
  return worst;
}

}  // namespace

Outcome run_hopf(const HopfOptions& opt) {
  const GridSpec spec = checked_grid(opt.common);
  if (opt.curves < 0 || opt.curve_steps < 0 || !(opt.curve_step > 0.0)) {
    throw ValidationError("curve count, steps and step size must be non-negative/positive");
  }
  const auto data = std::make_shared<const ImplicitData>(
      ImplicitData::general(HoloExpr::parse("z1 - 1", {"z1", "z2", "z3"})));
  auto include = [&](const Point3& x) { return x[1] * x[1] + x[2] * x[2] >= opt.exclude_radius2; };
  FieldRun run = field_run(*data, spec, opt.common.config, {0.0, 1.0, 0.0}, 1.0,
                           opt.common.verify, 1e-5, include);

  ReportBuilder compare("hopf-closed-form", opt.threshold);
  for (std::size_t i = 0; i < run.grid.samples.size(); ++i) {
    const FieldSample& s = run.grid.samples[i];
    Json& j = run.doc.samples[i];
    if (!include(s.point)) {
      j["closed_form_U"] = nullptr;
      j["hopf_map"] = nullptr;
      j["closed_form_error"] = nullptr;
      continue;
    }
    const HopfValue h = hopf_closed_form(s.point);
    double err = kNaN;
    if (s.status == SampleStatus::ok) {
      err = 0.0;
      for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(s.U[k] - h.U[k]));
    }
    j["closed_form_U"] = Json::array({h.U.u(), h.U.v(), h.U.w()});
    j["hopf_map"] = Json::array({h.map[0], h.map[1]});
    j["closed_form_error"] = err;
    if (opt.compare_implicit) {
      if (s.status == SampleStatus::ok) {
        compare.add(err, s.point);
      } else {
        compare.fail(s.point);
      }
    }
  }
  if (opt.compare_implicit) run.doc.reports.push_back(compare.finish());

  if (opt.curves > 0) {
    ReportBuilder drift("hopf-map-drift", opt.drift_threshold);
    Json curves = Json::array();
    for (const Point3& start : hopf_curve_starts(opt.curves, opt.exclude_radius2)) {
      try {
        const Complex seed = run.grid.samples[spec.nearest(start)].z;
        const Complex z0 = solve_z_or_throw(*data, lift(start), std::isfinite(seed.real()) ? seed : 1.0,
                                            opt.common.config);
        const auto curve = integrate_curve(tracking_u_field(data, opt.common.config, z0), start,
                                           opt.curve_step, opt.curve_steps);
        const double d = hopf_map_drift(curve);
        drift.add(d, start);
        curves.push_back({{"start", point_json(start)}, {"end", point_json(curve.back())}, {"map_drift", d}});
      } catch (const Error& e) {
        drift.fail(start);
        curves.push_back({{"start", point_json(start)}, {"error", e.what()}});
      }
    }
    run.doc.meta["curves"] = std::move(curves);
    run.doc.reports.push_back(drift.finish());
  }

  Outcome out;
  out.doc = std::move(run.doc);
  out.doc.meta = with_head({{"tool", "twistleaf"}, {"command", "hopf"}, {"f", "z1 - 1"},
                            {"exclude_radius2", opt.exclude_radius2}},
                           out.doc.meta);
  const bool any_checks = opt.common.verify || opt.compare_implicit || opt.curves > 0;
  out.exit_code = exit_code(out.doc, any_checks,
                            too_many_failures(run.failed, run.considered, opt.common.max_fail_fraction));
  return out;
}

namespace {

struct FormResiduals {
  double closedness = kNaN, key = kNaN, wedge = kNaN, dzdw = kNaN;
  bool evaluated = false, error = false;
};

FormResiduals form_residuals(const ZWGrid& grid, std::size_t i) {
  FormResiduals r;
  r.evaluated = true;
  try {
    const ZWFunction zw = grid_local_zw(grid, i);
    const FormFunction omega = form_of(zw);
    const Point3& x = grid.samples[i].point;
    const double h = grid.config.fd_step;
    r.closedness = closedness_residual(omega, x, h);
    const auto k = key_operator_residual(zw, x, h);
    r.key = std::max(std::abs(k[0]), std::abs(k[1]));
    r.wedge = std::abs(wedge_residual(omega, x, h));
    r.dzdw = dzdw_degeneracy(zw, x, h);
  } catch (const Error&) {
    r.error = true;
  }
  return r;
}

struct FormRun {
  ZWGrid grid;
  Document doc;
  std::vector<FormResiduals> residuals;
  std::size_t failed = 0;
  std::size_t degenerate = 0;
};

FormRun form_run(FormRoute route, const GradientFn& map, const GridSpec& spec,
                 const SolverConfig& cfg, const Point3& seed_point, const ZW& seed, bool verify,
                 double threshold) {
  FormRun run;
  try {
    run.grid = zw_grid(route, map, spec, cfg, seed_point, seed);
  } catch (const Error& e) {
    throw ValidationError(std::string("seed point: ") + e.what());
  }
  const ZWGrid& g = run.grid;
  const std::size_t n = g.samples.size();
  run.residuals.resize(n);
  if (verify) {
    parallel_for(n, [&](std::size_t i) {
      if (g.samples[i].status == SampleStatus::ok && spec.interior(i)) {
        run.residuals[i] = form_residuals(g, i);
      }
    });
  }
  ReportBuilder nullity("nullity", kNullityThreshold), closed("closedness", threshold),
      key("key-operator", threshold), wedge("wedge", threshold);
  for (std::size_t i = 0; i < n; ++i) {
    const ZWSample& s = g.samples[i];
    if (s.status != SampleStatus::ok) ++run.failed;
    if (s.degenerate) ++run.degenerate;
    const NullForm w = make_omega(s.zw.z, s.zw.w);
    const FormResiduals& r = run.residuals[i];
    Json j;
    j["index"] = i;
    j["point"] = point_json(s.point);
    j["z"] = complex_json(s.zw.z);
    j["w"] = complex_json(s.zw.w);
    j["exp_psi"] = complex_json(s.zw.w * s.zw.w);
    j["omega"] = {{"a", complex_json(w.a)}, {"b", complex_json(w.b)}, {"c", complex_json(w.c)}};
    j["status"] = std::string(to_string(s.status));
    j["degenerate"] = s.degenerate;
    j["residuals"] = {{"nullity", std::abs(w.square())},
                      {"closedness", r.closedness},
                      {"key_operator", r.key},
                      {"wedge", r.wedge},
                      {"dzdw", r.dzdw}};
    run.doc.samples.push_back(std::move(j));
    if (!verify || s.status != SampleStatus::ok) continue;
    nullity.add(std::abs(w.square()), s.point);
    if (!r.evaluated) continue;
    if (r.error) {
      for (ReportBuilder* b : {&closed, &key, &wedge}) b->fail(s.point);
      continue;
    }
    closed.add(r.closedness, s.point);
    key.add(r.key, s.point);
    wedge.add(r.wedge, s.point);
  }
  if (verify) {
    for (const ReportBuilder* b : {&nullity, &closed, &key, &wedge}) run.doc.reports.push_back(b->finish());
  }
  run.doc.grid = grid_json(spec);
  run.doc.meta["config"] = config_json(cfg);
  run.doc.meta["seed_point"] = point_json(seed_point);
  run.doc.meta["seed"] = {{"z", complex_json(seed.z)}, {"w", complex_json(seed.w)}};
  run.doc.meta["failed_samples"] = run.failed;
  run.doc.meta["degenerate_samples"] = run.degenerate;
  return run;
}

// Path potential checks: loop closure on random rectangles, dh = omega and
// horizontal conformality at interior points.
void potential_reports(FormRun& run, const Point3& base, const XiOptions& opt) {
  const ZWGrid& g = run.grid;
  const GridSpec& spec = g.spec;
  const ResidualReport* closed = nullptr;
  for (const auto& r : run.doc.reports) {
    if (r.name == "closedness") closed = &r;
  }
  if (closed == nullptr || !closed->pass) {
    run.doc.meta["potential"] = "refused: form failed the closedness check";
    for (const char* name : {"potential-loop-closure", "potential-gradient", "horizontal-conformality"}) {
      ReportBuilder b(name, 0.0);
      b.fail(base);
      run.doc.reports.push_back(b.finish());
    }
    return;
  }
  const FormFunction omega = form_of(grid_zw_function(g));
  const PathPotential h(omega, base);
  const ComplexFunction hf = [&h](const Point3& x) { return h(x); };

  ReportBuilder loop("potential-loop-closure", opt.loop_threshold);
  std::mt19937_64 rng(7);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int k = 0; k < opt.loops; ++k) {
    const int a = k % 3, b = (k + 1) % 3;
    Point3 corner;
    for (int c = 0; c < 3; ++c) {
      const Axis& ax = spec.axes[static_cast<std::size_t>(c)];
      corner[c] = ax.min + 0.5 * (ax.max - ax.min) * unit();
    }
    const double la = (spec.axes[a].max - corner[a]) * (0.3 + 0.7 * unit());
    const double lb = (spec.axes[b].max - corner[b]) * (0.3 + 0.7 * unit());
    const double perimeter = 2.0 * (la + lb);
    try {
      const Complex c = loop_integral(omega, corner, a, la, b, lb);
      loop.add(perimeter > 0.0 ? std::abs(c) / perimeter : 0.0, corner);
    } catch (const Error&) {
      loop.fail(corner);
    }
  }

  const std::size_t n = g.samples.size();
  std::vector<double> grad(n, kNaN), hc(n, kNaN);
  std::vector<Complex> values(n, Complex(kNaN, kNaN));
  std::vector<char> err(n, 0);
  parallel_for(n, [&](std::size_t i) {
    if (g.samples[i].status != SampleStatus::ok) return;
    try {
      values[i] = h(g.samples[i].point);
      if (!spec.interior(i)) return;
      grad[i] = potential_gradient_defect(hf, omega, g.samples[i].point, g.config.fd_step);
      const auto c = horizontal_conformality_check(hf, g.samples[i].point, g.config.fd_step);
      hc[i] = std::max(std::abs(c[0]), std::abs(c[1]));
    } catch (const Error&) {
      err[i] = 1;
    }
  });
  ReportBuilder gb("potential-gradient", opt.threshold), hb("horizontal-conformality", opt.threshold);
  for (std::size_t i = 0; i < n; ++i) {
    run.doc.samples[i]["h"] = complex_json(values[i]);
    if (g.samples[i].status != SampleStatus::ok) continue;
    if (err[i]) {
      gb.fail(g.samples[i].point);
      hb.fail(g.samples[i].point);
    } else if (spec.interior(i)) {
      gb.add(grad[i], g.samples[i].point);
      hb.add(hc[i], g.samples[i].point);
    }
  }
  run.doc.reports.push_back(loop.finish());
  run.doc.reports.push_back(gb.finish());
  run.doc.reports.push_back(hb.finish());
}

}  // namespace

Outcome run_xi_form(const XiOptions& opt) {
  const GridSpec spec = checked_grid(opt.common);
  const Point3 seed_point = parse_point(opt.seed_point);
  const ZW seed = parse_zw(opt.seed_zw);
  if (!(opt.threshold > 0.0) || !(opt.loop_threshold > 0.0) || opt.loops < 0) {
    throw ValidationError("thresholds must be positive and loops non-negative");
  }
  const int sources = (!opt.xi.empty()) + (!opt.xi1.empty() || !opt.xi2.empty()) + (!opt.example.empty());
  if (sources != 1) throw ValidationError("give exactly one of --xi, --xi1/--xi2 or --example");

  GradientFn map;
  Json input;
  std::optional<std::pair<HoloExpr, HoloExpr>> components;
  if (!opt.xi.empty()) {
    const HoloExpr e = parse_expr(opt.xi, {"z1", "z2"}, "xi");
    map = gradient_of_potential(e);
    input = {{"xi", e.to_string()}};
  } else if (!opt.example.empty()) {
    if (opt.example != "sqrt-family") throw ValidationError("unknown example '" + opt.example + "'");
    map = sqrt_family_gradient();
    input = {{"example", opt.example}};
  } else {
    const HoloExpr a = parse_expr(opt.xi1, {"z1", "z2"}, "xi1");
    const HoloExpr b = parse_expr(opt.xi2, {"z1", "z2"}, "xi2");
    map = gradient_from_components(a, b);
    components.emplace(a, b);
    input = {{"xi1", a.to_string()}, {"xi2", b.to_string()}};
  }

  FormRun run = form_run(FormRoute::xi, map, spec, opt.common.config, seed_point, seed,
                         opt.common.verify, opt.threshold);
  if (components) {
    ReportBuilder lag("lagrangian", kNullityThreshold);
    for (std::size_t i = 0; i < run.grid.samples.size(); ++i) {
      const ZWSample& s = run.grid.samples[i];
      if (s.status != SampleStatus::ok) continue;
      const auto [z1, z2] = zw_incidence(s.point, s.zw);
      const double v = std::abs(lagrangian_residual(components->first, components->second, z1, z2));
      run.doc.samples[i]["residuals"]["lagrangian"] = v;
      lag.add(v, s.point);
    }
    if (opt.common.verify) run.doc.reports.push_back(lag.finish());
  }
  if (opt.common.verify) potential_reports(run, run.grid.samples[run.grid.seed_index].point, opt);

  Outcome out;
  out.doc = std::move(run.doc);
  out.doc.meta = with_head(with_head({{"tool", "twistleaf"}, {"command", "xi-form"}}, input), out.doc.meta);
  out.exit_code = exit_code(out.doc, opt.common.verify,
                            too_many_failures(run.failed, run.grid.samples.size(), opt.common.max_fail_fraction));
  return out;
}

Outcome run_nurowski_form(const NurowskiOptions& opt) {
  const GridSpec spec = checked_grid(opt.common);
  const Point3 seed_point = parse_point(opt.seed_point);
  const ZW seed = parse_zw(opt.seed_zw);
  if ((opt.F.empty()) == (opt.dual_of.empty())) throw ValidationError("give exactly one of --F or --dual-of");
  if (opt.compare_xi && opt.dual_of.empty()) throw ValidationError("--compare-xi needs --dual-of");

  GradientFn map;
  Json input;
  std::optional<HoloExpr> xi;
  if (!opt.F.empty()) {
    const HoloExpr e = parse_expr(opt.F, {"z", "w"}, "F");
    map = gradient_of_potential(e);
    input = {{"F", e.to_string()}};
  } else {
    xi.emplace(parse_expr(opt.dual_of, {"z1", "z2"}, "dual-of"));
    map = legendre_dual(gradient_of_potential(*xi), zw_incidence(seed_point, seed), opt.common.config);
    input = {{"dual_of", xi->to_string()}};
  }
  FormRun run = form_run(FormRoute::nurowski, map, spec, opt.common.config, seed_point, seed,
                         opt.common.verify, opt.threshold);
  for (std::size_t i = 0; i < run.grid.samples.size(); ++i) {
    if (!run.residuals[i].evaluated) continue;
    run.doc.samples[i]["dzdw_degenerate"] =
        !(run.residuals[i].dzdw >= kDzDwDegenerate);
  }

  if (opt.compare_xi) {
    const ZWGrid xg = zw_grid(FormRoute::xi, gradient_of_potential(*xi), spec, opt.common.config,
                              seed_point, seed);
    ReportBuilder agree("xi-route-agreement", opt.agreement_threshold);
    ReportBuilder dual("jacobian-duality", opt.duality_threshold);
    for (std::size_t i = 0; i < xg.samples.size(); ++i) {
      const ZWSample& a = run.grid.samples[i];
      const ZWSample& b = xg.samples[i];
      if (a.status != SampleStatus::ok || b.status != SampleStatus::ok) {
        agree.fail(a.point);
        continue;
      }
      agree.add(std::max(std::abs(a.zw.z - b.zw.z), std::abs(a.zw.w - b.zw.w)), a.point);
      const auto [z1, z2] = zw_incidence(b.point, b.zw);
      try {
        dual.add(jacobian_duality_check(*xi, z1, z2).defect, b.point);
      } catch (const Error&) {
        dual.fail(b.point);
      }
    }
    run.doc.reports.push_back(agree.finish());
    run.doc.reports.push_back(dual.finish());
  }

  Outcome out;
  out.doc = std::move(run.doc);
  out.doc.meta = with_head(with_head({{"tool", "twistleaf"}, {"command", "nurowski-form"}}, input), out.doc.meta);
  out.exit_code = exit_code(out.doc, opt.common.verify || opt.compare_xi,
                            too_many_failures(run.failed, run.grid.samples.size(), opt.common.max_fail_fraction));
  return out;
}

Outcome run_eikonal(const EikonalOptions& opt) {
  const GridSpec spec = checked_grid(opt.common);
  const Profile phi = parse_profile(opt.profile);
  const double h = opt.common.config.fd_step;
  const std::size_t n = spec.size();
  const UField U = distance_foliation_field(phi);

  struct Row {
    bool valid = false, evaluated = false, error = false;
    DistanceResult d;
    UnitVec3 U;
    double eik = kNaN, f1 = kNaN, f2 = kNaN, cr = kNaN, hc1 = kNaN, hc2 = kNaN;
  };
  std::vector<Row> rows(n);
  parallel_for(n, [&](std::size_t i) {
    const Point3 x = spec.point(i);
    Row& row = rows[i];
    try {
      row.d = signed_distance(phi, x[1], x[2]);
      row.U = U(x);
      row.valid = true;
    } catch (const NonUniqueNearestPointError&) {
      return;
    }
    if (!opt.common.verify || !spec.interior(i)) return;
    row.evaluated = true;
    try {
      row.eik = eikonal_residual(phi, x[1], x[2], h);
      const auto f = conformality_frame_residual(U, x, h);
      row.f1 = f[0];
      row.f2 = f[1];
      row.cr = cr_tangency_residual(U, x, h);
      const auto c = horizontal_conformality_check(
          [&](const Point3& y) { return Complex(y[0], signed_distance(phi, y[1], y[2]).rho); }, x, h);
      row.hc1 = c[0];
      row.hc2 = c[1];
    } catch (const Error&) {
      row.error = true;
    }
  });

  Outcome out;
  ReportBuilder eik("eikonal", opt.eikonal_threshold), frame("frame-test", opt.threshold),
      cr("cr-tangency", opt.threshold), hc("horizontal-conformality", opt.eikonal_threshold);
  std::size_t outside = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Row& r = rows[i];
    const Point3 x = spec.point(i);
    Json j;
    j["index"] = i;
    j["point"] = point_json(x);
    j["rho"] = r.valid ? r.d.rho : kNaN;
    j["t"] = r.valid ? r.d.t : kNaN;
    j["U"] = Json::array({r.U.u(), r.U.v(), r.U.w()});
    j["status"] = r.valid ? "ok" : "outside-neighbourhood";
    j["residuals"] = {{"eikonal", r.eik}, {"frame_1", r.f1}, {"frame_2", r.f2},
                      {"cr_tangency", r.cr}, {"hc_norm", r.hc1}, {"hc_inner", r.hc2}};
    out.doc.samples.push_back(std::move(j));
    if (!r.valid) ++outside;
    if (!r.evaluated) continue;
    if (r.error) {
      for (ReportBuilder* b : {&eik, &frame, &cr, &hc}) b->fail(x);
      continue;
    }
    eik.add(r.eik, x);
    frame.add(std::max(std::abs(r.f1), std::abs(r.f2)), x);
    cr.add(r.cr, x);
    hc.add(std::max(std::abs(r.hc1), std::abs(r.hc2)), x);
  }
  if (opt.common.verify) {
    for (const ReportBuilder* b : {&eik, &frame, &cr, &hc}) out.doc.reports.push_back(b->finish());
  }
  Json params = Json::array();
  for (double p : phi.params()) params.push_back(p);
  out.doc.meta = {{"tool", "twistleaf"},
                  {"command", "eikonal"},
                  {"profile", opt.profile},
                  {"profile_params", params},
                  {"config", config_json(opt.common.config)},
                  {"outside_neighbourhood", outside}};
  out.doc.grid = grid_json(spec);
  out.exit_code = exit_code(out.doc, opt.common.verify, false);
  return out;
}

namespace {

struct CorpusCase {
  const char* name;
  std::vector<RealVec6> basis;
  SubspaceLabel expected;
};

RealVec6 e(int k) {
  RealVec6 v{};
  v[static_cast<std::size_t>(k)] = 1.0;
  return v;
}

RealVec6 add(const RealVec6& a, const RealVec6& b, double t = 1.0) {
  RealVec6 v{};
  for (std::size_t k = 0; k < 6; ++k) v[k] = a[k] + t * b[k];
  return v;
}

// Real coordinates (x1, y1, x2, y2, x3, y3); J e(2k) = e(2k+1).
std::vector<CorpusCase> corpus() {
  const RealVec6 x1 = e(0), y1 = e(1), x2 = e(2), y2 = e(3), x3 = e(4), y3 = e(5);
  return {
      {"drop-y3", {x1, y1, x2, y2, x3}, SubspaceLabel::hypersurface},
      {"drop-x1", {y1, x2, y2, x3, y3}, SubspaceLabel::hypersurface},
      {"tilted-hyperplane", {add(x1, y3, 0.5), y1, x2, y2, x3}, SubspaceLabel::hypersurface},
      {"mixed-hyperplane", {add(x1, x2), add(y1, y3, -2.0), x3, add(y2, x1, 0.25), y3}, SubspaceLabel::hypersurface},
      {"c2-first", {x1, y1, x2, y2}, SubspaceLabel::complex},
      {"c2-outer", {x1, y1, x3, y3}, SubspaceLabel::complex},
      {"line-plus-reals", {x1, y1, x2, x3}, SubspaceLabel::generic},
      {"skew-generic", {x1, x2, x3, add(y1, y2)}, SubspaceLabel::generic},
      {"real-axes", {x1, x2, x3}, SubspaceLabel::totally_real},
      {"rotated-real", {x1, y2, add(x3, y3)}, SubspaceLabel::totally_real},
      {"line-plus-x2", {x1, y1, x2}, SubspaceLabel::cr_dim_1},
      {"line-plus-diagonal", {x2, y2, add(x1, y3)}, SubspaceLabel::cr_dim_1},
  };
}

}  // namespace

Outcome run_classify(const ClassifyOptions& opt) {
  if (opt.corpus == !opt.basis.empty()) throw ValidationError("give exactly one of --basis or --corpus");
  Outcome out;
  out.doc.meta = {{"tool", "twistleaf"}, {"command", "classify"}};
  if (!opt.corpus) {
    const auto basis = parse_basis(opt.basis);
    SubspaceClass c;
    try {
      c = classify_subspace(basis);
    } catch (const ClassificationError& e) {
      throw ValidationError(e.what());
    }
    out.doc.samples.push_back({{"label", std::string(to_string(c.label))}, {"hdim", c.hdim}});
    return out;
  }
  ReportBuilder mis("classification", 0.5);
  for (const CorpusCase& k : corpus()) {
    const SubspaceClass c = classify_subspace(k.basis);
    const bool ok = c.label == k.expected;
    out.doc.samples.push_back({{"name", k.name},
                               {"dimension", k.basis.size()},
                               {"label", std::string(to_string(c.label))},
                               {"hdim", c.hdim},
                               {"expected", std::string(to_string(k.expected))}});
    mis.add(ok ? 0.0 : 1.0, {0.0, 0.0, 0.0});
  }
  out.doc.reports.push_back(mis.finish());
  out.exit_code = out.doc.all_pass() ? 0 : 1;
  return out;
}

Outcome run_curves(const CurveOptions& opt) {
  validate_config(opt.config);
  const int sources = (!opt.phi.empty()) + (!opt.f.empty()) + (opt.hopf ? 1 : 0);
  if (sources != 1) throw ValidationError("give exactly one of --phi, --f or --hopf");
  if (opt.start.empty()) throw ValidationError("--start is required");
  if (opt.steps < 0 || !(opt.step != 0.0) || !std::isfinite(opt.step)) {
    throw ValidationError("step must be finite and non-zero, steps non-negative");
  }
  if (opt.verify && !opt.hopf) throw ValidationError("--verify is only defined for --hopf curves");
  const Point3 start = parse_point(opt.start);
  const Complex seed = parse_complex(opt.seed_z);

  Outcome out;
  out.doc.meta = {{"tool", "twistleaf"}, {"command", "curves"}, {"start", point_json(start)},
                  {"step", opt.step}, {"steps", opt.steps}};
  UField field;
  if (opt.hopf) {
    field = hopf_field;
    out.doc.meta["field"] = "hopf";
  } else {
    const bool general = !opt.f.empty();
    const HoloExpr e = general ? parse_expr(opt.f, {"z1", "z2", "z3"}, "f")
                               : parse_expr(opt.phi, {"z1", "z2"}, "phi");
    auto data = std::make_shared<const ImplicitData>(general ? ImplicitData::general(e)
                                                             : ImplicitData::graph(e));
    out.doc.meta[general ? "f" : "phi"] = e.to_string();
    Complex z0;
    try {
      z0 = solve_z_or_throw(*data, lift(start), seed, opt.config);
    } catch (const Error& err) {
      throw ValidationError(std::string("start point: ") + err.what());
    }
    field = tracking_u_field(data, opt.config, z0);
  }
  std::vector<Point3> curve;
  try {
    curve = integrate_curve(field, start, opt.step, opt.steps);
  } catch (const Error& err) {
    out.doc.meta["error"] = err.what();
    out.exit_code = 1;
    return out;
  }
  for (std::size_t k = 0; k < curve.size(); ++k) {
    out.doc.samples.push_back({{"step", k}, {"q", curve[k][0]}, {"r", curve[k][1]}, {"s", curve[k][2]}});
  }
  if (opt.verify) {
    ReportBuilder drift("hopf-map-drift", opt.drift_threshold);
    try {
      drift.add(hopf_map_drift(curve), start);
    } catch (const Error&) {
      drift.fail(start);
    }
    out.doc.reports.push_back(drift.finish());
  }
  out.exit_code = exit_code(out.doc, opt.verify, false);
  return out;
}

}  // namespace twistleaf::cli
