#include "ljet/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "ljet/errors.hpp"

namespace ljet {

FociReport singular_points(const HypersurfaceJet& jet, const Tolerances& tol) {
  const ScreenMetric g = jet.metric();
  const auto pairs = pencil_eigen(g, jet.lambda);
  FociReport report;
  for (const auto& p : pairs) report.s.push_back(p.value);
  report.lambda_mean = raise_index(g, jet.lambda).trace() / jet.m();
  report.pole_coordinate = report.lambda_mean;

  double radius = 0.0;
  for (double s : report.s) radius = std::max(radius, std::abs(s));
  const double gap = tol.cluster * std::max(1.0, radius);
  std::size_t start = 0;
  for (std::size_t i = 1; i <= report.s.size(); ++i) {
    if (i == report.s.size() || report.s[i] - report.s[i - 1] > gap) {
      double sum = 0.0;
      for (std::size_t k = start; k < i; ++k) sum += report.s[k];
      report.distinct.push_back(sum / static_cast<double>(i - start));
      report.multiplicities.push_back(static_cast<int>(i - start));
      start = i;
    }
  }
  return report;
}

FundamentalTensor fundamental_tensor(const HypersurfaceJet& jet) {
  const ScreenMetric g = jet.metric();
  const double mean = raise_index(g, jet.lambda).trace() / jet.m();
  FundamentalTensor out;
  out.h_ab = symmetrize(jet.lambda) - mean * g.g();
  out.h_mixed = raise_index(g, out.h_ab);
  return out;
}

PoleRegularity pole_regularity(const HypersurfaceJet& jet, const Tolerances& tol) {
  const FundamentalTensor h = fundamental_tensor(jet);
  PoleRegularity out;
  out.det = h.h_mixed.determinant();
  out.relative_det = relative_det(h.h_mixed);
  out.regular = out.relative_det > tol.det_threshold;
  return out;
}

MuInvariants mu_invariants(const HypersurfaceJet& jet) {
  const ScreenMetric g = jet.metric();
  const int m = jet.m();
  const Matrix mixed = raise_index(g, jet.lambda);
  MuInvariants out;
  out.mu = (mixed * mixed).trace() / m;
  out.mu_a = Vector::Zero(m);
  for (int c = 0; c < m; ++c) {
    double s = 0.0;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) s += g.inv()(a, b) * jet.lambda3(a, b, c);
    out.mu_a(c) = -s / m;
  }
  return out;
}

namespace {

void require_harmonic(const HypersurfaceJet& jet, const Tolerances& tol) {
  const double mean = harmonic_mean(jet);
  const double scale = std::max(1.0, max_abs(jet.lambda));
  if (std::abs(mean) > std::max(tol.symmetry, 1e-10) * scale) {
    throw PreconditionError("jet is not harmonic-normalized (mean focus coordinate " +
                            std::to_string(mean) + ")");
  }
}

}  // namespace

HAffinor H_affinor(const HypersurfaceJet& jet, double mu, const Tolerances& tol) {
  if (!(mu > 0.0)) throw DegenerateError(Degeneracy::kUmbilical, "umbilical point: H undefined");
  require_harmonic(jet, tol);
  const ScreenMetric g = jet.metric();
  const Matrix h = raise_index(g, jet.lambda);
  const int m = jet.m();
  HAffinor out;
  out.H_mixed = h * h + (jet.nu / (2.0 * mu)) * h - mu * Matrix::Identity(m, m);
  out.relative_det = relative_det(out.H_mixed);
  // relative_det is scale-free, so H -> 0 (for n = 4, H is a multiple of h)
  // needs an absolute floor; mu sets the scale since both have weight 2
  const bool vanishing = out.H_mixed.norm() <= tol.det_threshold * mu;
  if (out.relative_det > tol.det_threshold && !vanishing) out.H_inv = out.H_mixed.inverse();
  return out;
}

NormalizingObjects normalizing_objects(const HypersurfaceJet& jet, double mu, const Vector& mu_a,
                                       const HAffinor& H) {
  if (!(mu > 0.0)) throw DegenerateError(Degeneracy::kUmbilical, "umbilical point: mu = 0");
  if (H.singular()) {
    throw DegenerateError(Degeneracy::kSpecialType,
                          "special-type hypersurface: invariants mu, nu algebraically related "
                          "(H degenerate)");
  }
  const ScreenMetric g = jet.metric();
  const Matrix h = raise_index(g, jet.lambda);
  NormalizingObjects out;
  out.M = contract_upper(h, mu_a) + (jet.nu / (2.0 * mu)) * mu_a - 0.5 * jet.nu_a;
  out.N = 0.5 * contract_upper(h, jet.nu_a) - mu * mu_a;
  out.P = contract_upper(*H.H_inv, out.M);
  out.Q = contract_upper(*H.H_inv, out.N) / mu;
  return out;
}

ScreenFrame screen_frame(int n, const Vector& P, const Vector& Q) {
  const int m = n - 2;
  if (P.size() != m || Q.size() != m) throw DimensionError("screen_frame: P, Q must have n-2 entries");
  ScreenFrame out{P, Q, Matrix::Zero(m, n + 2), 0};
  for (int a = 0; a < m; ++a) {
    out.basis(a, 0) = P(a);
    out.basis(a, 1) = Q(a);
    out.basis(a, a + kScreenIndexOffset) = 1.0;
  }
  Matrix span(m + 1, n + 2);
  span.row(0) = Eigen::RowVectorXd::Unit(n + 2, 0);
  span.bottomRows(m) = out.basis;
  out.screen_rank = static_cast<int>(Eigen::FullPivLU<Matrix>(span).rank());
  return out;
}

InvariantPoint invariant_point(const ScreenMetric& g, const Matrix& tau_ab) {
  const Matrix mixed = raise_index(g, tau_ab);
  InvariantPoint out;
  out.tau = mixed.trace() / g.m();
  out.Cn_coordinate = -out.tau;
  Eigen::EigenSolver<Matrix> solver(mixed, false);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    out.congruence_foci.push_back(-solver.eigenvalues()(i));
  }
  std::sort(out.congruence_foci.begin(), out.congruence_foci.end(),
            [](const std::complex<double>& x, const std::complex<double>& y) {
              if (x.real() != y.real()) return x.real() < y.real();
              return x.imag() < y.imag();
            });
  return out;
}

Vector umbilical_mu_a(const HypersurfaceJet& jet) {
  if (jet.n < 4) throw PreconditionError("umbilical mu_a requires n >= 4");
  const int m = jet.m();
  Vector out = Vector::Zero(m);
  for (int a = 0; a < m; ++a) {
    double trace = 0.0;
    for (int d = 0; d < m; ++d) trace += jet.curvature.Ca_b1c(d, a, d);
    out(a) = -2.0 / (jet.n - 3) * trace;
  }
  return out;
}

bool is_umbilical(const FundamentalTensor& h, const Matrix& g, const Tolerances& tol) {
  return h.h_ab.norm() <= tol.umbilic * std::max(1.0, g.norm());
}

}  // namespace ljet
