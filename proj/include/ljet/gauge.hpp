#pragma once

// Infinitesimal frame changes fixing x = A_0 projectively, integrated as a
// linear ODE with constant pi-values.  Every transported quantity follows its
// own transformation law; recomputing derived quantities from the flowed
// primitives gives the consistency residuals.
//
// pi_ab(a, c) = pi_a^c, so dA_a contains pi_a^c A_c.  pi01 is the shift of
// A_1 along the generator: dA_1 = pi01 A_0 + pi11 A_1.

#include <optional>
#include <string>

#include "ljet/connection.hpp"

namespace ljet {

struct GaugeParams {
  double pi00 = 0.0;
  double pi11 = 0.0;
  double pi01 = 0.0;
  Matrix pi_ab;
  Vector pi_a0;
  Vector pi_a1;
  double pi_n0 = 0.0;

  static GaugeParams zero(int m);
  // Sizes must match m; empty members are filled with zeros.
  GaugeParams completed(int m) const;
};

struct HarmonicTier {
  double mu = 0.0;
  Vector mu_a;
  double nu = 0.0;
  Vector nu_a;
  Matrix H;      // H^a_b
  Matrix H_inv;  // present when H is nondegenerate (else empty)
  Vector M, N, P, Q;
  bool has_inverse() const { return H_inv.size() > 0; }
};

struct TauTier {
  Vector tau_a;
  Matrix tau_ab;
  double tau = 0.0;
  double z = 0.0;
};

struct FlowState {
  Matrix g;
  Matrix lambda_ab;
  double lambda = 0.0;
  Matrix h_ab;
  double mu = 0.0;  // (1/m) tr((g^{-1} lambda)^2), tracked in every frame
  Vector foci;      // ascending
  Matrix frame;     // 2x2, columns A_0, A_1 in the initial (A_0, A_1) basis
  std::optional<HarmonicTier> harmonic;
  std::optional<TauTier> tau;
};

struct FlowResiduals {
  double h_recompute = 0.0;      // h from flowed (lambda_ab, lambda, g)
  double lambda_recompute = 0.0; // lambda from flowed (lambda_ab, g)
  double mu_recompute = 0.0;     // mu from flowed lambda_ab
  double H_recompute = -1.0;     // H from flowed (h, g, mu, nu); -1 if not tracked
  double MN_recompute = -1.0;    // M, N from flowed (h, mu_a, nu, nu_a)
  double PQ_recompute = -1.0;    // P, Q from flowed (H_inv, M, N)
  double PQ_law = -1.0;          // invariance conditions on (P, Q) via chain rule
  double z_tau = -1.0;           // |z + tau|
  double focus = 0.0;            // projective drift of the foci F_a
  double max() const;
};

struct FlowResult {
  FlowState initial;
  FlowState state;
  FlowResiduals residuals;
  double t = 0.0;
  int steps = 0;
};

// Initial state from a jet.  The harmonic tier needs a harmonic-normalized
// jet with mu > 0 (H_inv, P, Q only when H is nondegenerate); the tau tier
// additionally needs a reduced frame.
FlowState initial_state(const HypersurfaceJet& jet, const GaugeParams& params,
                        const Tolerances& tol = Tolerances{});

// Derivative of every tracked quantity under constant params.
FlowState flow_derivative(const FlowState& s, const GaugeParams& params);

// RK4, steps >= 100.  The harmonic tier is tracked only when pi01 = 0 and
// the tau tier only when pi01 = 0, pi_a0 = pi_a1 = 0.
FlowResult integrate_gauge_flow(const HypersurfaceJet& jet, const GaugeParams& params, double t,
                                int steps = 1000, const Tolerances& tol = Tolerances{});

// Continues a flow from an arbitrary state (used for composition checks).
FlowState integrate_state(const FlowState& start, const GaugeParams& params, double t, int steps);

FlowResiduals residuals(const FlowState& initial, const FlowState& s, const GaugeParams& params);

double state_difference(const FlowState& x, const FlowState& y);

double check_focus_invariance(const HypersurfaceJet& jet, const GaugeParams& params, double t,
                              int steps = 1000);

struct WeightMeasurement {
  std::string quantity;
  double measured = 0.0;
  double expected = 0.0;
  std::string generator;  // "pi11-pi00" or "pi00+pi11"
};

// Flows with pi_ab = pi00 I and the given pi00, pi11 (other pi zero) and
// fits log ||q(t)|| linearly.  Quantities: mu, nu, h_ab, H, H_tilde, tau,
// tau_a, tau_ab.  Throws PreconditionError for unknown names or a zero
// generator.
WeightMeasurement check_weight(const std::string& quantity, const HypersurfaceJet& jet,
                               const GaugeParams& params, double t, int steps = 1000);

}  // namespace ljet
