#pragma once

// Normalizing forms of a reduced frame and the two induced affine
// connections: gamma_2 (torsion + curvature, fourth order) and gamma_1
// (torsion-free, curvature needs the fifth-order coefficients phi).
//
// 1-forms on the hypersurface are (m+1)-vectors over the basis
// {omega^1, omega^2, ..., omega^{n-1}}; slot 0 is omega^1.  A 2-form is a
// skew (m+1)x(m+1) matrix W with form = sum_{k,l} W_kl omega^k ^ omega^l, so
// the coefficient of omega^k ^ omega^l (k < l) in the usual basis is 2 W_kl.

#include <vector>

#include "ljet/invariants.hpp"

namespace ljet {

using OneForm = Vector;
using TwoForm = Matrix;

TwoForm wedge(const OneForm& a, const OneForm& b);

struct NormalizingForms {
  Vector sigma_a, tau_a;
  Matrix sigma_ab, tau_ab;
  double residual = 0.0;  // relative back-substitution residual
};

// Coefficient residuals of the two relations linking (sigma, tau) to the jet.
// Returns the max abs entry, scaled by max(1, ||data||).
double normalizing_residual(const HypersurfaceJet& jet, const NormalizingForms& forms);

// Pre: harmonic-normalized, mu_a = nu_a = 0, mu > 0, H nondegenerate.
NormalizingForms solve_normalizing_forms(const HypersurfaceJet& jet,
                                         const Tolerances& tol = Tolerances{});

// The linear solve alone: needs mu > 0 and a nonsingular coefficient block,
// but neither det H != 0 nor a reduced frame.  mu_a, nu_a are ignored.
NormalizingForms solve_coefficient_system(const HypersurfaceJet& jet,
                                          const Tolerances& tol = Tolerances{});

struct Torsion {
  Vector torsion_1_1a;  // coefficient of omega^1 ^ omega^a in Theta^1, = -tau_a
  Matrix torsion_1_ab;  // skew, tau_[ab]
  Matrix torsion_a_1b;  // h^a_b
  bool vanishes(double tol) const;
};

Torsion gamma2_torsion(const HypersurfaceJet& jet, const NormalizingForms& forms);

struct Gamma2Curvature {
  Vector R1_11a;
  Matrix R1_1ab;
  Tensor3 Ra_b1c;  // (a, b, c)
  Tensor4 Ra_bce;  // (a, b, c, e)
};

Gamma2Curvature gamma2_curvature(const HypersurfaceJet& jet, const NormalizingForms& forms);

// Same components obtained by wedging the substituted connection forms, for
// cross-checking the closed formulas.
Gamma2Curvature gamma2_curvature_from_forms(const HypersurfaceJet& jet,
                                            const NormalizingForms& forms);

double max_difference(const Gamma2Curvature& x, const Gamma2Curvature& y);

struct Gamma1Curvature {
  TwoForm omega_11;                       // d(omega^1_1 - omega^0_0) block
  std::vector<TwoForm> omega_a1;          // per a: d omega^1_a block
  std::vector<TwoForm> omega_1a;          // per a: d omega^a_1 block
  std::vector<std::vector<TwoForm>> omega_ab;  // [a][b]: d(omega^a_b - ...) block
  // C^1_{akl} is not carried by the curvature slice and is left out of the
  // omega_a1 blocks.
  bool weyl_terms_complete = false;
};

// Throws DegenerateError(kMissingData, "fifth-order data required") without phi.
Gamma1Curvature gamma1_curvature(const HypersurfaceJet& jet, const NormalizingForms& forms);

struct Integrability {
  bool integrable_S = false;
  bool integrable_Stilde = false;
  double residual_S = 0.0;       // ||tau_[ab]||_F
  double residual_Stilde = 0.0;  // ||X - X^T||_F / (2 mu), X_ab = h_a^c sigma_cb + C_1ab
  double identity_residual = 0.0;
};

Integrability integrability(const HypersurfaceJet& jet, const NormalizingForms& forms,
                            const Tolerances& tol = Tolerances{});

struct GaugeGroupCheck {
  double scalar_residual = 0.0;  // d(pi^1_1 - pi^0_0) = 0
  double linear_residual = 0.0;  // Maurer-Cartan identity of the GL part
  bool ok(double tol) const { return scalar_residual < tol && linear_residual < tol; }
};

// Random two-parameter families F(s, t) = exp(sX) exp(tY) exp(st Z) in
// GL(m) and rho(s, t) > 0 in R+; the right-invariant form dF F^{-1} is
// differenced with a 5-point stencil of width `step`.
GaugeGroupCheck g2_structure_check(int m, unsigned seed, double step = 1e-3);

// Same check on caller-provided generators.
GaugeGroupCheck g2_structure_check(const Matrix& X, const Matrix& Y, const Matrix& Z,
                                   double step = 1e-3);

}  // namespace ljet
