#pragma once

#include <map>
#include <string>
#include <string_view>

namespace ljet {

// Numerical thresholds shared by the whole pipeline.  Every field can be
// overridden by name (see set()).
struct Tolerances {
  double symmetry = 1e-12;       // absolute, on unit-normalized data
  double residual = 1e-10;       // relative eigen/linear residuals
  double det_threshold = 1e-10;  // |det A| / ||A||_2^m below this => singular
  double cluster = 1e-8;         // focus multiplicity clustering (x spectral radius)
  double umbilic = 1e-7;         // ||h||_F / max(1, ||g||_F) below this => umbilical
  double integrability = 1e-9;   // relative skew-part norm for Frobenius tests
  double solve_residual = 1e-9;  // back-substitution of the normalizing forms
  double fd_symmetry = 1e-5;     // symmetry tolerance for finite-difference jets
  double gauge = 1e-8;           // gauge-law residuals
  double weight = 1e-6;          // measured weight vs stated weight

  static Tolerances defaults();
  static Tolerances strict();
  // Preset named by LJET_TOL_PROFILE ("strict" | "default"); default if unset.
  static Tolerances from_environment();

  // Throws PreconditionError for unknown names or non-positive values.
  void set(std::string_view name, double value);
  std::map<std::string, double> as_map() const;
};

}  // namespace ljet
