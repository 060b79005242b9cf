#pragma once

// Pointwise invariants of a lightlike hypersurface built from its jet:
// singular points (foci) of the isotropic generator, the harmonic pole, the
// second fundamental tensor h_ab, the relative invariants mu and mu_a, the
// affinor H, the normalizing objects M, N, P, Q and the invariant point C_n
// on the normalizing line.

#include <complex>
#include <optional>
#include <vector>

#include "ljet/jet.hpp"

namespace ljet {

struct FociReport {
  std::vector<double> s;               // roots of det(lambda^a_b - s delta^a_b), ascending
  std::vector<double> distinct;        // cluster representatives (cluster means)
  std::vector<int> multiplicities;     // one per distinct value, sums to m
  double lambda_mean = 0.0;            // arithmetic mean of the foci coordinates
  double pole_coordinate = 0.0;        // H = A_1 - lambda_mean A_0
};

FociReport singular_points(const HypersurfaceJet& jet, const Tolerances& tol = Tolerances{});

struct FundamentalTensor {
  Matrix h_ab;     // lambda_ab - lambda g_ab
  Matrix h_mixed;  // h^a_b = g^{ac} h_cb
};

FundamentalTensor fundamental_tensor(const HypersurfaceJet& jet);

struct PoleRegularity {
  bool regular = false;
  double det = 0.0;           // det(h^a_b)
  double relative_det = 0.0;  // |det| / ||h||_2^m
};

// The harmonic pole is a regular point of the generator iff det(h^a_b) != 0.
PoleRegularity pole_regularity(const HypersurfaceJet& jet, const Tolerances& tol = Tolerances{});

struct MuInvariants {
  double mu = 0.0;
  Vector mu_a;
};

// mu = (1/(n-2)) g^{ab} lambda_ae g^{ec} lambda_cb,
// mu_c = -(1/(n-2)) g^{ab} lambda_abc.
MuInvariants mu_invariants(const HypersurfaceJet& jet);

struct HAffinor {
  Matrix H_mixed;               // H^a_b (upper index = row)
  std::optional<Matrix> H_inv;  // present iff H is nondegenerate
  double relative_det = 0.0;
  bool singular() const { return !H_inv.has_value(); }
};

// H = h h + (nu / 2 mu) h - mu I on a harmonic-normalized jet.
// Throws DegenerateError(kUmbilical) when mu <= 0 and PreconditionError when
// the jet is not harmonic-normalized.
HAffinor H_affinor(const HypersurfaceJet& jet, double mu, const Tolerances& tol = Tolerances{});

struct NormalizingObjects {
  Vector M, N, P, Q;
};

// Throws DegenerateError(kSpecialType) when H is singular.
NormalizingObjects normalizing_objects(const HypersurfaceJet& jet, double mu, const Vector& mu_a,
                                       const HAffinor& H);

struct ScreenFrame {
  Vector P, Q;
  // Row a holds C_a = A_a + P_a A_0 + Q_a A_1 in the frame basis
  // {A_0, A_1, A_2, ..., A_{n-1}, A_n, A_{n+1}}.
  Matrix basis;
  // Linear dimension of span{A_0, C_a}; n - 1 for every (P, Q).
  int screen_rank = 0;
};

ScreenFrame screen_frame(int n, const Vector& P, const Vector& Q);

struct InvariantPoint {
  double tau = 0.0;           // (1/(n-2)) tau_ab g^{ab}
  double Cn_coordinate = 0.0; // C_n = A_n + Cn_coordinate A_0, i.e. -tau
  std::vector<std::complex<double>> congruence_foci;  // z_a = -eig(tau^a_b)
};

InvariantPoint invariant_point(const ScreenMetric& g, const Matrix& tau_ab);

// mu_a at an umbilical point, (2/(n-3)) C^b_{1ba}.  The contraction is
// rewritten through the Weyl pair symmetry as -(2/(n-3)) C^d_{a1d}.
Vector umbilical_mu_a(const HypersurfaceJet& jet);

// ||h||_F / max(1, ||g||_F) <= tol.umbilic
bool is_umbilical(const FundamentalTensor& h, const Matrix& g, const Tolerances& tol);

}  // namespace ljet
