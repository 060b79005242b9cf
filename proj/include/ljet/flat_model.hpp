#pragma once

// Lightlike hypersurfaces of flat Minkowski space R^n_1 lifted to the Darboux
// quadric in R^{n+2} (bilinear form of signature (n, 2)).
//
// Null-ruled model: a spacelike (n-2)-ellipsoid y(u) in the hyperplane
// x^0 = time, with outward spatial unit normal nu(u); the hypersurface is
// x(u, r) = (time + r, y(u) + r nu(u)).  u are hyperspherical angles.  The
// null cone with vertex v is the unit sphere at time v^0 + 1 centred at the
// spatial part of v, with generator parameter r = distance from the vertex.
//
// Ambient coordinates: (x^0, ..., x^{n-1}, X_o, X_inf), with
//   B(X, Y) = <x, y>_eta - X_o Y_inf - X_inf Y_o,  eta = diag(-1, 1, ..., 1),
// and the lift X(x) = o + x + <x, x>/2 inf.
//
// Frame columns: A_0, A_1, A_2 .. A_{n-1}, A_n, A_{n+1}.

#include <string>
#include <vector>

#include "ljet/jet.hpp"

namespace ljet {

struct ModelGenerator {
  Vector u;        // n-2 angles
  double r = 0.0;  // position along the ruling
};

struct ModelSpec {
  enum class Variant { kNullCone, kNullRuled };
  Variant variant = Variant::kNullRuled;
  int n = 4;
  Vector axes;              // n-1 semi-axes of the base (null-ruled)
  double base_time = 0.0;   // null-ruled
  Vector vertex;            // n coordinates (null-cone)
  double h_fd = 1e-4;       // inner central-difference step for lambda_ab
  double h_outer = 1e-2;    // 5-point step for the nested higher jets
  std::vector<ModelGenerator> generators;

  static ModelSpec ellipsoid(int n, const Vector& axes, double time = 0.0);
  static ModelSpec sphere(int n, double radius, double time = 0.0);
  static ModelSpec cone(int n, const Vector& vertex);
  void validate() const;  // throws PreconditionError
  int m() const { return n - 2; }
};

std::string to_string(ModelSpec::Variant v);

// Ambient bilinear form on R^{n+2}.
Matrix ambient_form(int n);

struct AdaptedFrame {
  int n = 0;
  Matrix A;  // (n+2)x(n+2), columns in the frame order above
  Matrix gram() const;
  Matrix screen_metric() const;
  // Largest deviation of the Gram matrix from the normalization pattern,
  // screen block compared with g (or only checked for symmetry if g is empty).
  double gram_deviation(const Matrix& g = Matrix()) const;
};

// First-order frame with A_a = lift of d x / d u^a, A_1 the lifted null
// direction (1, nu), A_n = (1, -nu)/2 and A_{n+1} = inf.  Throws
// DegenerateError(kSingularChart) at cone vertices, caustics and coordinate
// poles.
AdaptedFrame frame_at(const ModelSpec& spec, const Vector& u, double r);

// lambda_ab = omega_a^n(d/du^b) by central differences of A_a, symmetrized.
Matrix raw_lambda(const ModelSpec& spec, const Vector& u, double r, double h);
// Closed form (e_a . d_b nu) used as an oracle.
Matrix analytic_lambda(const ModelSpec& spec, const Vector& u, double r);
// kappa / (1 + r kappa) with kappa the principal curvatures of the base.
std::vector<double> analytic_foci(const ModelSpec& spec, const Vector& u, double r);

// ||lambda(h) - lambda(h/2)|| / ||lambda(h/2) - lambda(h/4)||.
double lambda_richardson_ratio(const ModelSpec& spec, const ModelGenerator& gen, double h);

struct GeneratedJet {
  HypersurfaceJet jet;        // harmonic frame, curvature slice zero
  Matrix raw_lambda_ab;       // first-order frame
  double raw_lambda = 0.0;    // mean focus coordinate in the first-order frame
  AdaptedFrame frame;         // harmonic frame at the point
  // Asymmetry before symmetrization, and cross-equation consistency of the
  // differenced prolongation (omega^1 components that must match).
  double lambda_asymmetry = 0.0;
  double lambda3_asymmetry = 0.0;
  double nu_ab_asymmetry = 0.0;
  double rho_ab_asymmetry = 0.0;
  double lambda3_r_consistency = 0.0;
  double nu_a_consistency = 0.0;
  double rho_a_consistency = 0.0;
};

GeneratedJet generate_jet_report(const ModelSpec& spec, const ModelGenerator& gen);
HypersurfaceJet generate_jet(const ModelSpec& spec, const ModelGenerator& gen);

struct Development {
  std::vector<double> t;        // normalized time in [0, 1]
  std::vector<Matrix> frames;   // developed frames
  double max_principal_angle = 0.0;  // sine, spans {A_0..A_{n-1}} at both ends
  double max_gram_deviation = 0.0;
  double max_frame_error = 0.0;      // against the exact frame field
  double max_dA0_off_line = 0.0;     // |components of dA_0 outside span{A_0, A_1}|
};

// Integrates dA_i = omega_i^j A_j along the ruling from gen.r to r_end with
// omega^a = omega_0^n = omega_1^a = omega_a^n = 0 imposed (RK4).
Development develop_along_generator(const ModelSpec& spec, const ModelGenerator& gen,
                                    double r_end, int steps = 200);

// Residual of the screen and normal components of the geodesic equations
// along c(t) = (u + eps t^2 e_1, r + t (r_end - r)), t in [0, 1].  eps = 0 is
// the ruling itself; eps != 0 is a deliberately bent curve on V.
double geodesic_residual(const ModelSpec& spec, const ModelGenerator& gen, double r_end,
                         double eps = 0.0, int samples = 21);

struct FociCrossCheck {
  std::vector<double> jacobian_foci;  // from rank drops of the ruled map, expanded
  std::vector<double> jet_foci;       // pencil roots of the differenced jet
  std::vector<int> multiplicities;    // per rank drop
  double max_difference = 0.0;
  bool match = false;
};

FociCrossCheck foci_cross_check(const ModelSpec& spec, const ModelGenerator& gen,
                                double tol = 1e-6);

}  // namespace ljet
