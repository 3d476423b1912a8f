#pragma once

// One function per subcommand. Each validates its inputs (ValidationError),
// runs the construction and returns the document to export plus an exit code.

#include <optional>
#include <string>

#include "output.hpp"
#include "twistleaf/foliation.hpp"

namespace twistleaf::cli {

struct Outcome {
  Document doc;
  int exit_code = 0;  // 0 pass, 1 failed checks or too many solver failures
};

struct CommonOptions {
  std::string grid;
  SolverConfig config;
  bool verify = false;
  double max_fail_fraction = 0.0;
};

struct FieldOptions {
  CommonOptions common;
  std::string expr;  // Phi(z1, z2) or f(z1, z2, z3)
  std::string seed_point = "0,0,0";
  std::string seed_z = "0";
  double threshold = 1e-5;
};
Outcome run_phi_field(const FieldOptions& opt);
Outcome run_f_field(const FieldOptions& opt);

struct HopfOptions {
  CommonOptions common;
  bool compare_implicit = false;
  double exclude_radius2 = 0.1;  // skip r^2 + s^2 below this
  int curves = 0;
  double curve_step = 0.02;
  int curve_steps = 100;
  double threshold = 1e-9;
  double drift_threshold = 1e-6;
};
Outcome run_hopf(const HopfOptions& opt);

struct XiOptions {
  CommonOptions common;
  std::string xi;           // potential
  std::string xi1, xi2;     // or components
  std::string example;      // "sqrt-family"
  std::string seed_point = "0,0,0";
  std::string seed_zw = "0,0,1,0";
  double threshold = 1e-6;
  double loop_threshold = 1e-8;  // per unit loop length
  int loops = 8;
};
Outcome run_xi_form(const XiOptions& opt);

struct NurowskiOptions {
  CommonOptions common;
  std::string F;        // F(z, w)
  std::string dual_of;  // or a potential Xi to dualise
  bool compare_xi = false;
  std::string seed_point = "0,0,0";
  std::string seed_zw = "0,0,1,0";
  double threshold = 1e-6;
  double agreement_threshold = 1e-7;
  double duality_threshold = 1e-8;
};
Outcome run_nurowski_form(const NurowskiOptions& opt);

struct EikonalOptions {
  CommonOptions common;
  std::string profile = "bump:0.3:1";
  double eikonal_threshold = 1e-6;
  double threshold = 1e-5;
};
Outcome run_eikonal(const EikonalOptions& opt);

struct ClassifyOptions {
  std::string basis;
  bool corpus = false;
};
Outcome run_classify(const ClassifyOptions& opt);

struct CurveOptions {
  SolverConfig config;
  std::string phi, f;
  bool hopf = false;
  std::string start;
  std::string seed_z = "0";
  double step = 0.05;
  int steps = 20;
  bool verify = false;
  double drift_threshold = 1e-6;
};
Outcome run_curves(const CurveOptions& opt);

/// The fixed verification suite; deterministic output.
Outcome run_verify_all();

}  // namespace twistleaf::cli
