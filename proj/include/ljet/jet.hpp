#pragma once

// Pointwise jet of a lightlike hypersurface V^{n-1} in an adapted frame
// {A_0, A_1, A_a, A_n, A_{n+1}}.  Screen indices are 0-based (see
// tensor_core.hpp); the frame index 1 is the isotropic direction A_1.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "ljet/tensor_core.hpp"
#include "ljet/tolerances.hpp"

namespace ljet {

// The components of the conformal curvature object that enter the
// normalization pipeline.  Mixed components carry the upper index first.
struct CurvatureSlice {
  Vector C1_11a;  // C^1_{11a}
  Matrix C1_1ab;  // C^1_{1ab}, skew in (a, b)
  Matrix Cn_ab1;  // C^n_{ab1}, symmetric and g-trace-free
  Tensor3 Ca_b1c; // C^a_{b1c}, stored (a, b, c)
  Tensor4 Ca_bce; // C^a_{bce}, stored (a, b, c, e), skew in (c, e)
  Vector C_11a;   // C_{11a}
  Matrix C_1ab;   // C_{1ab}, no a<->b symmetry imposed

  static CurvatureSlice zero(int m);
  bool is_zero() const;
};

struct HypersurfaceJet {
  int n = 0;
  Matrix g;         // g_ab
  Matrix lambda;    // lambda_ab
  Tensor3 lambda3;  // lambda_abc
  CurvatureSlice curvature;
  double nu = 0.0;
  Vector nu_a;
  Matrix nu_ab;
  double rho = 0.0;
  Vector rho_a;
  Matrix rho_ab;
  std::optional<double> phi1;
  std::optional<Vector> phi_a;
  // True when A_1 sits at the harmonic pole (lambda_ab = h_ab).
  bool harmonic_normalized = false;

  int m() const { return n - 2; }
  // Throws PreconditionError when g is not SPD.
  ScreenMetric metric() const { return ScreenMetric(g, 1e-9 * std::max(1.0, max_abs(g))); }

  // All-zero jet of dimension n with the given metric (identity if empty).
  static HypersurfaceJet zero(int n, const Matrix& g = Matrix());
};

struct ValidationIssue {
  std::string invariant;  // e.g. "lambda symmetry"
  std::string location;   // e.g. "lambda[0][1]"
  double magnitude = 0.0;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string summary() const;
};

// Lists every violated invariant.  symmetry_tol is absolute on data scaled to
// max(1, |entries|).
ValidationReport validate(const HypersurfaceJet& jet, const Tolerances& tol = Tolerances{});

// Mean focus coordinate (1/(n-2)) lambda_ab g^{ab}.
double harmonic_mean(const HypersurfaceJet& jet);

// Moves A_1 to the harmonic pole H = A_1 - lambda A_0: lambda_ab becomes
// h_ab = lambda_ab - lambda g_ab and the flag is set.  The higher-order blocks
// are taken to be given in the harmonic frame already and are left untouched.
HypersurfaceJet normalize_to_harmonic_pole(const HypersurfaceJet& jet);

}  // namespace ljet
