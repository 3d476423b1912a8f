#include "app.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include "commands.hpp"
#include "options.hpp"
#include "twistleaf/error.hpp"

namespace twistleaf::cli {

namespace {

struct OutputOptions {
  std::string out = "-";
  std::string format = "json";
  std::string report;
};

void add_config(CLI::App* cmd, SolverConfig& c) {
  cmd->add_option("--newton-tol", c.newton_tol, "Newton residual tolerance")->capture_default_str();
  cmd->add_option("--max-iters", c.max_iters, "Newton iteration cap")->capture_default_str();
  cmd->add_option("--fd-step", c.fd_step, "Central-difference step (scaled by 1+|x|)")->capture_default_str();
  cmd->add_option("--pole-radius", c.pole_radius, "|z| beyond which a sample is a pole")->capture_default_str();
}

void add_common(CLI::App* cmd, CommonOptions& c, const std::string& default_grid) {
  c.grid = default_grid;
  cmd->add_option("--grid", c.grid, "q:min:max:count,r:min:max:count,s:min:max:count")->capture_default_str();
  add_config(cmd, c.config);
  cmd->add_flag("--verify", c.verify, "Evaluate residual tests and fail on any miss");
  cmd->add_option("--max-fail-fraction", c.max_fail_fraction,
                  "Fraction of solver failures tolerated before exiting 1")
      ->capture_default_str();
}

void add_output(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("--out", o.out, "Output file, '-' for stdout")->capture_default_str();
  cmd->add_option("--format", o.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--report", o.report, "Also write the report table to this file");
}

int emit(const Outcome& r, const OutputOptions& o) {
  const std::string text = o.format == "csv" ? to_csv_text(r.doc) : to_json_text(r.doc);
  if (o.out == "-") {
    std::cout << text << std::flush;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!(f << text)) {
      std::cerr << "error: cannot write " << o.out << "\n";
      return 1;
    }
  }
  const std::string summary = summary_text(r.doc);
  std::cerr << summary;
  if (!o.report.empty()) {
    std::ofstream f(o.report, std::ios::binary);
    if (!(f << summary)) {
      std::cerr << "error: cannot write " << o.report << "\n";
      return 1;
    }
  }
  return r.exit_code;
}

}  // namespace

int run_app(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for conformal foliations from twistor data"};
  app.require_subcommand(1);
  OutputOptions out;
  std::function<Outcome()> action;

  FieldOptions phi, f;
  HopfOptions hopf;
  XiOptions xi;
  NurowskiOptions nur;
  EikonalOptions eik;
  ClassifyOptions cls;
  CurveOptions crv;

  auto* c_phi = app.add_subcommand("phi-field", "Field from zeta = Phi(z1, z2)");
  add_common(c_phi, phi.common, "q:-0.5:0.5:11,r:-0.5:0.5:11,s:-0.5:0.5:11");
  c_phi->add_option("--phi", phi.expr, "Phi(z1, z2)")->required();
  c_phi->add_option("--seed-point", phi.seed_point, "q,r,s")->capture_default_str();
  c_phi->add_option("--seed-z", phi.seed_z, "re,im")->capture_default_str();
  c_phi->add_option("--threshold", phi.threshold)->capture_default_str();
  add_output(c_phi, out);
  c_phi->callback([&] { action = [&] { return run_phi_field(phi); }; });

  auto* c_f = app.add_subcommand("f-field", "Field from f(z1, z2, z3) = 0");
  add_common(c_f, f.common, "q:-0.5:0.5:11,r:-0.5:0.5:11,s:-0.5:0.5:11");
  c_f->add_option("--f", f.expr, "f(z1, z2, z3)")->required();
  c_f->add_option("--seed-point", f.seed_point, "q,r,s")->capture_default_str();
  c_f->add_option("--seed-z", f.seed_z, "re,im")->capture_default_str();
  c_f->add_option("--threshold", f.threshold)->capture_default_str();
  add_output(c_f, out);
  c_f->callback([&] { action = [&] { return run_f_field(f); }; });

  auto* c_hopf = app.add_subcommand("hopf", "The Hopf foliation from f = z1 - 1");
  add_common(c_hopf, hopf.common, "q:-1:1:11,r:-1:1:11,s:-1:1:11");
  c_hopf->add_flag("--compare-implicit", hopf.compare_implicit, "Compare solver field with the closed form");
  c_hopf->add_option("--exclude-radius2", hopf.exclude_radius2, "Skip points with r^2+s^2 below this")
      ->capture_default_str();
  c_hopf->add_option("--curves", hopf.curves, "Number of integral curves to trace")->capture_default_str();
  c_hopf->add_option("--curve-step", hopf.curve_step)->capture_default_str();
  c_hopf->add_option("--curve-steps", hopf.curve_steps)->capture_default_str();
  c_hopf->add_option("--threshold", hopf.threshold)->capture_default_str();
  c_hopf->add_option("--drift-threshold", hopf.drift_threshold)->capture_default_str();
  add_output(c_hopf, out);
  c_hopf->callback([&] { action = [&] { return run_hopf(hopf); }; });

  auto* c_xi = app.add_subcommand("xi-form", "Null form from a Lagrangian potential Xi(z1, z2)");
  add_common(c_xi, xi.common, "q:-0.3:0.3:7,r:-0.3:0.3:7,s:-0.3:0.3:7");
  c_xi->add_option("--xi", xi.xi, "Potential Xi(z1, z2)");
  c_xi->add_option("--xi1", xi.xi1, "First component");
  c_xi->add_option("--xi2", xi.xi2, "Second component");
  c_xi->add_option("--example", xi.example, "Built-in example: sqrt-family");
  c_xi->add_option("--seed-point", xi.seed_point)->capture_default_str();
  c_xi->add_option("--seed-zw", xi.seed_zw, "z_re,z_im,w_re,w_im")->capture_default_str();
  c_xi->add_option("--threshold", xi.threshold)->capture_default_str();
  c_xi->add_option("--loop-threshold", xi.loop_threshold)->capture_default_str();
  c_xi->add_option("--loops", xi.loops)->capture_default_str();
  add_output(c_xi, out);
  c_xi->callback([&] { action = [&] { return run_xi_form(xi); }; });

  auto* c_nur = app.add_subcommand("nurowski-form", "Null form from a potential F(z, w)");
  add_common(c_nur, nur.common, "q:-0.3:0.3:7,r:-0.3:0.3:7,s:-0.3:0.3:7");
  c_nur->add_option("--F", nur.F, "F(z, w)");
  c_nur->add_option("--dual-of", nur.dual_of, "Use the Legendre dual of Xi(z1, z2)");
  c_nur->add_flag("--compare-xi", nur.compare_xi, "Compare with the Xi route and check Jacobian duality");
  c_nur->add_option("--seed-point", nur.seed_point)->capture_default_str();
  c_nur->add_option("--seed-zw", nur.seed_zw, "z_re,z_im,w_re,w_im")->capture_default_str();
  c_nur->add_option("--threshold", nur.threshold)->capture_default_str();
  c_nur->add_option("--agreement-threshold", nur.agreement_threshold)->capture_default_str();
  c_nur->add_option("--duality-threshold", nur.duality_threshold)->capture_default_str();
  add_output(c_nur, out);
  c_nur->callback([&] { action = [&] { return run_nurowski_form(nur); }; });

  auto* c_eik = app.add_subcommand("eikonal", "Foliation by level sets of a signed distance");
  add_common(c_eik, eik.common, "q:-0.1:0.1:3,r:-1.2:1.2:25,s:-0.2:0.3:11");
  c_eik->add_option("--profile", eik.profile, "bump:A:R | sine:A:k[:phase] | poly:c0:c1:...")
      ->capture_default_str();
  c_eik->add_option("--eikonal-threshold", eik.eikonal_threshold)->capture_default_str();
  c_eik->add_option("--threshold", eik.threshold)->capture_default_str();
  add_output(c_eik, out);
  c_eik->callback([&] { action = [&] { return run_eikonal(eik); }; });

  auto* c_cls = app.add_subcommand("classify", "Classify a real subspace of C^3");
  c_cls->add_option("--basis", cls.basis, "x1,y1,x2,y2,x3,y3;...");
  c_cls->add_flag("--corpus", cls.corpus, "Run the built-in labelled corpus");
  add_output(c_cls, out);
  c_cls->callback([&] { action = [&] { return run_classify(cls); }; });

  auto* c_crv = app.add_subcommand("curves", "Integral curves of U (RK4)");
  add_config(c_crv, crv.config);
  c_crv->add_option("--phi", crv.phi, "Phi(z1, z2)");
  c_crv->add_option("--f", crv.f, "f(z1, z2, z3)");
  c_crv->add_flag("--hopf", crv.hopf, "Use the Hopf field");
  c_crv->add_option("--start", crv.start, "q,r,s")->required();
  c_crv->add_option("--seed-z", crv.seed_z)->capture_default_str();
  c_crv->add_option("--step", crv.step)->capture_default_str();
  c_crv->add_option("--steps", crv.steps)->capture_default_str();
  c_crv->add_flag("--verify", crv.verify, "Check the Hopf map is constant along the curve");
  c_crv->add_option("--drift-threshold", crv.drift_threshold)->capture_default_str();
  add_output(c_crv, out);
  c_crv->callback([&] { action = [&] { return run_curves(crv); }; });

  auto* c_all = app.add_subcommand("verify-all", "Run the fixed verification suite");
  add_output(c_all, out);
  c_all->callback([&] { action = [] { return run_verify_all(); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return emit(action(), out);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace twistleaf::cli
