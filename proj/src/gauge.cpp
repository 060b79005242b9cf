#include "ljet/gauge.hpp"

#include <cmath>
#include <limits>

#include "ljet/errors.hpp"

namespace ljet {

GaugeParams GaugeParams::zero(int m) { return GaugeParams{}.completed(m); }

GaugeParams GaugeParams::completed(int m) const {
  GaugeParams p = *this;
  if (p.pi_ab.size() == 0) p.pi_ab = Matrix::Zero(m, m);
  if (p.pi_a0.size() == 0) p.pi_a0 = Vector::Zero(m);
  if (p.pi_a1.size() == 0) p.pi_a1 = Vector::Zero(m);
  if (p.pi_ab.rows() != m || p.pi_ab.cols() != m || p.pi_a0.size() != m || p.pi_a1.size() != m) {
    throw DimensionError("gauge parameters do not match screen dimension " + std::to_string(m));
  }
  return p;
}

double FlowResiduals::max() const {
  return std::max({h_recompute, lambda_recompute, mu_recompute, H_recompute, MN_recompute,
                   PQ_recompute, PQ_law, z_tau, focus});
}

namespace {

bool tau_tier_allowed(const GaugeParams& p) {
  return p.pi01 == 0.0 && max_abs(p.pi_a0) == 0.0 && max_abs(p.pi_a1) == 0.0;
}

Matrix mixed(const Matrix& g, const Matrix& t) { return g.llt().solve(t); }

// a + c b, field by field.
FlowState axpy(const FlowState& a, const FlowState& b, double c) {
  FlowState r = a;
  r.g += c * b.g;
  r.lambda_ab += c * b.lambda_ab;
  r.lambda += c * b.lambda;
  r.h_ab += c * b.h_ab;
  r.mu += c * b.mu;
  r.foci += c * b.foci;
  r.frame += c * b.frame;
  if (r.harmonic) {
    auto& x = *r.harmonic;
    const auto& y = *b.harmonic;
    x.mu += c * y.mu;
    x.mu_a += c * y.mu_a;
    x.nu += c * y.nu;
    x.nu_a += c * y.nu_a;
    x.H += c * y.H;
    x.M += c * y.M;
    x.N += c * y.N;
    if (x.has_inverse()) {
      x.H_inv += c * y.H_inv;
      x.P += c * y.P;
      x.Q += c * y.Q;
    }
  }
  if (r.tau) {
    r.tau->tau_a += c * b.tau->tau_a;
    r.tau->tau_ab += c * b.tau->tau_ab;
    r.tau->tau += c * b.tau->tau;
    r.tau->z += c * b.tau->z;
  }
  return r;
}

}  // namespace

FlowState initial_state(const HypersurfaceJet& jet, const GaugeParams& params_in,
                        const Tolerances& tol) {
  const GaugeParams params = params_in.completed(jet.m());
  const int m = jet.m();
  FlowState s;
  s.g = jet.g;
  s.lambda_ab = symmetrize(jet.lambda);
  s.lambda = harmonic_mean(jet);
  s.h_ab = fundamental_tensor(jet).h_ab;
  const MuInvariants mi = mu_invariants(jet);
  s.mu = mi.mu;
  const FociReport foci = singular_points(jet, tol);
  s.foci = Eigen::Map<const Vector>(foci.s.data(), m);
  s.frame = Matrix::Identity(2, 2);

  const bool harmonic = std::abs(s.lambda) <= 1e-10 * std::max(1.0, max_abs(jet.lambda));
  if (params.pi01 != 0.0 || !harmonic || !(mi.mu > tol.umbilic)) return s;

  HarmonicTier ht;
  ht.mu = mi.mu;
  ht.mu_a = mi.mu_a;
  ht.nu = jet.nu;
  ht.nu_a = jet.nu_a;
  const HAffinor H = H_affinor(jet, mi.mu, tol);
  ht.H = H.H_mixed;
  const Matrix hm = fundamental_tensor(jet).h_mixed;
  ht.M = contract_upper(hm, mi.mu_a) + (jet.nu / (2.0 * mi.mu)) * mi.mu_a - 0.5 * jet.nu_a;
  ht.N = 0.5 * contract_upper(hm, jet.nu_a) - mi.mu * mi.mu_a;
  if (!H.singular()) {
    ht.H_inv = *H.H_inv;
    const NormalizingObjects obj = normalizing_objects(jet, mi.mu, mi.mu_a, H);
    ht.P = obj.P;
    ht.Q = obj.Q;
  }
  s.harmonic = ht;

  if (ht.has_inverse() && tau_tier_allowed(params)) {
    try {
      const NormalizingForms forms = solve_normalizing_forms(jet, tol);
      TauTier tt;
      tt.tau_a = forms.tau_a;
      tt.tau_ab = forms.tau_ab;
      const InvariantPoint ip = invariant_point(jet.metric(), forms.tau_ab);
      tt.tau = ip.tau;
      tt.z = ip.Cn_coordinate;
      s.tau = tt;
    } catch (const DegenerateError&) {
      // non-reduced or singular jets carry no tau tier
    }
  }
  return s;
}

FlowState flow_derivative(const FlowState& s, const GaugeParams& p) {
  const int m = static_cast<int>(s.g.rows());
  const Matrix& Pi = p.pi_ab;
  const Matrix Psi = Pi.transpose();
  const double w = p.pi11 - p.pi00;  // weight generator for the A_0 A_1 scaling
  const double v = p.pi00 + p.pi11;
  const Matrix I = Matrix::Identity(m, m);

  FlowState d = s;
  d.g = Pi * s.g + s.g * Pi.transpose();
  d.lambda_ab = Pi * s.lambda_ab + s.lambda_ab * Pi.transpose() + w * s.lambda_ab + p.pi01 * s.g;
  d.lambda = p.pi01 + w * s.lambda;
  d.h_ab = Pi * s.h_ab + s.h_ab * Pi.transpose() + w * s.h_ab;
  d.mu = 2.0 * w * s.mu + 2.0 * s.lambda * p.pi01;
  d.foci = w * s.foci + p.pi01 * Vector::Ones(m);
  d.frame.col(0) = p.pi00 * s.frame.col(0);
  d.frame.col(1) = p.pi01 * s.frame.col(0) + p.pi11 * s.frame.col(1);

  if (s.harmonic) {
    const auto& x = *s.harmonic;
    auto& y = *d.harmonic;
    const Matrix K = mixed(s.g, s.h_ab).transpose();
    y.mu = 2.0 * w * x.mu;
    y.mu_a = Pi * x.mu_a - p.pi00 * x.mu_a + w * x.mu_a - K * p.pi_a0 - x.mu * p.pi_a1;
    y.nu = 3.0 * w * x.nu;
    y.nu_a = Pi * x.nu_a - p.pi00 * x.nu_a + 2.0 * w * x.nu_a - 2.0 * x.mu * p.pi_a0 -
             (2.0 * x.mu * K + x.nu * I) * p.pi_a1;
    y.H = x.H * Psi - Psi * x.H + 2.0 * w * x.H;
    y.M = Pi * x.M - p.pi00 * x.M + 2.0 * w * x.M - contract_upper(x.H, p.pi_a0);
    y.N = Pi * x.N - p.pi00 * x.N + 3.0 * w * x.N - x.mu * contract_upper(x.H, p.pi_a1);
    if (x.has_inverse()) {
      y.H_inv = x.H_inv * Psi - Psi * x.H_inv - 2.0 * w * x.H_inv;
      y.P = Pi * x.P - p.pi00 * x.P - p.pi_a0;
      y.Q = Pi * x.Q - p.pi00 * x.Q - w * x.Q - p.pi_a1;
    }
  }
  if (s.tau) {
    const auto& x = *s.tau;
    auto& y = *d.tau;
    y.tau_a = Pi * x.tau_a - p.pi00 * x.tau_a;
    y.tau_ab = Pi * x.tau_ab + x.tau_ab * Pi.transpose() - 2.0 * p.pi00 * x.tau_ab - w * x.tau_ab +
               p.pi_n0 * s.g;
    y.tau = -v * x.tau + p.pi_n0;
    y.z = -v * x.z - p.pi_n0;
  }
  return d;
}

FlowState integrate_state(const FlowState& start, const GaugeParams& p, double t, int steps) {
  if (steps < 1) throw PreconditionError("steps must be positive");
  const double dt = t / steps;
  if (!std::isfinite(dt) || (t != 0.0 && std::abs(dt) < 1e-14 * std::max(1.0, std::abs(t)))) {
    throw Error("gauge flow: step underflow (t = " + std::to_string(t) +
                ", steps = " + std::to_string(steps) + ")");
  }
  FlowState s = start;
  for (int i = 0; i < steps; ++i) {
    const FlowState k1 = flow_derivative(s, p);
    const FlowState k2 = flow_derivative(axpy(s, k1, dt / 2), p);
    const FlowState k3 = flow_derivative(axpy(s, k2, dt / 2), p);
    const FlowState k4 = flow_derivative(axpy(s, k3, dt), p);
    s = axpy(s, k1, dt / 6);
    s = axpy(s, k2, dt / 3);
    s = axpy(s, k3, dt / 3);
    s = axpy(s, k4, dt / 6);
  }
  return s;
}

FlowResiduals residuals(const FlowState& initial, const FlowState& s, const GaugeParams& p) {
  const int m = static_cast<int>(s.g.rows());
  const Matrix I = Matrix::Identity(m, m);
  FlowResiduals r;
  const Matrix lam_mixed = mixed(s.g, s.lambda_ab);
  const double lam = lam_mixed.trace() / m;
  r.lambda_recompute = std::abs(lam - s.lambda) / std::max(1.0, std::abs(s.lambda));
  r.h_recompute =
      max_abs(Matrix(s.h_ab - (s.lambda_ab - lam * s.g))) / std::max(1.0, max_abs(s.h_ab));
  r.mu_recompute = std::abs((lam_mixed * lam_mixed).trace() / m - s.mu) / std::max(1.0, s.mu);

  if (s.harmonic) {
    const auto& x = *s.harmonic;
    const Matrix hm = mixed(s.g, s.h_ab);
    const Matrix H = hm * hm + (x.nu / (2.0 * x.mu)) * hm - x.mu * I;
    r.H_recompute = max_abs(Matrix(H - x.H)) / std::max(1.0, max_abs(x.H));
    const Vector M = contract_upper(hm, x.mu_a) + (x.nu / (2.0 * x.mu)) * x.mu_a - 0.5 * x.nu_a;
    const Vector N = 0.5 * contract_upper(hm, x.nu_a) - x.mu * x.mu_a;
    r.MN_recompute = std::max(max_abs(Vector(M - x.M)), max_abs(Vector(N - x.N))) /
                     std::max({1.0, max_abs(x.M), max_abs(x.N)});
    if (x.has_inverse()) {
      const Vector P = contract_upper(x.H_inv, x.M);
      const Vector Q = contract_upper(x.H_inv, x.N) / x.mu;
      r.PQ_recompute = std::max(max_abs(Vector(P - x.P)), max_abs(Vector(Q - x.Q))) /
                       std::max({1.0, max_abs(x.P), max_abs(x.Q)});
      // Chain rule through M, N, H_inv, mu against the invariance conditions.
      const FlowState d = flow_derivative(s, p);
      const auto& dx = *d.harmonic;
      const Vector dP = contract_upper(dx.H_inv, x.M) + contract_upper(x.H_inv, dx.M);
      const Vector dQ = (contract_upper(dx.H_inv, x.N) + contract_upper(x.H_inv, dx.N)) / x.mu -
                        Q * (dx.mu / x.mu);
      const double w = p.pi11 - p.pi00;
      const Vector lawP = dP - (p.pi_ab * P - p.pi00 * P) + p.pi_a0;
      const Vector lawQ = dQ - (p.pi_ab * Q - p.pi00 * Q) + w * Q + p.pi_a1;
      r.PQ_law = std::max(max_abs(lawP), max_abs(lawQ)) /
                 std::max({1.0, max_abs(dP), max_abs(dQ)});
    }
  }
  if (s.tau) r.z_tau = std::abs(s.tau->z + s.tau->tau) / std::max(1.0, std::abs(s.tau->tau));

  for (int a = 0; a < m; ++a) {
    Eigen::Vector2d F0(-initial.foci(a), 1.0);
    Eigen::Vector2d Ft = s.frame.col(1) - s.foci(a) * s.frame.col(0);
    const double det = F0(0) * Ft(1) - F0(1) * Ft(0);
    r.focus = std::max(r.focus, std::abs(det) / (F0.norm() * Ft.norm()));
  }
  return r;
}

FlowResult integrate_gauge_flow(const HypersurfaceJet& jet, const GaugeParams& params_in,
                                double t, int steps, const Tolerances& tol) {
  if (steps < 100) throw PreconditionError("gauge flow needs steps >= 100");
  const GaugeParams params = params_in.completed(jet.m());
  FlowResult out;
  out.initial = initial_state(jet, params, tol);
  out.state = integrate_state(out.initial, params, t, steps);
  out.residuals = residuals(out.initial, out.state, params);
  out.t = t;
  out.steps = steps;
  return out;
}

double state_difference(const FlowState& x, const FlowState& y) {
  double d = std::max({max_abs(Matrix(x.g - y.g)), max_abs(Matrix(x.lambda_ab - y.lambda_ab)),
                       std::abs(x.lambda - y.lambda), max_abs(Matrix(x.h_ab - y.h_ab)),
                       std::abs(x.mu - y.mu), max_abs(Vector(x.foci - y.foci)),
                       max_abs(Matrix(x.frame - y.frame))});
  if (x.harmonic && y.harmonic) {
    const auto& a = *x.harmonic;
    const auto& b = *y.harmonic;
    d = std::max({d, std::abs(a.mu - b.mu), max_abs(Vector(a.mu_a - b.mu_a)),
                  std::abs(a.nu - b.nu), max_abs(Vector(a.nu_a - b.nu_a)),
                  max_abs(Matrix(a.H - b.H)), max_abs(Vector(a.M - b.M)),
                  max_abs(Vector(a.N - b.N))});
    if (a.has_inverse() && b.has_inverse()) {
      d = std::max({d, max_abs(Matrix(a.H_inv - b.H_inv)), max_abs(Vector(a.P - b.P)),
                    max_abs(Vector(a.Q - b.Q))});
    }
  }
  if (x.tau && y.tau) {
    d = std::max({d, max_abs(Vector(x.tau->tau_a - y.tau->tau_a)),
                  max_abs(Matrix(x.tau->tau_ab - y.tau->tau_ab)),
                  std::abs(x.tau->tau - y.tau->tau), std::abs(x.tau->z - y.tau->z)});
  }
  return d;
}

double check_focus_invariance(const HypersurfaceJet& jet, const GaugeParams& params, double t,
                              int steps) {
  return integrate_gauge_flow(jet, params, t, steps).residuals.focus;
}

WeightMeasurement check_weight(const std::string& quantity, const HypersurfaceJet& jet,
                               const GaugeParams& params, double t, int steps) {
  struct Spec {
    const char* name;
    double weight;
    bool sum_generator;
  };
  static const Spec kSpecs[] = {{"mu", 2, false},      {"nu", 3, false},    {"h_ab", 1, true},
                                {"H", 2, false},       {"H_tilde", -2, false}, {"tau", -1, true},
                                {"tau_a", 0, false},   {"tau_ab", -1, false}};
  const Spec* spec = nullptr;
  for (const auto& s : kSpecs)
    if (quantity == s.name) spec = &s;
  if (!spec) throw PreconditionError("unknown quantity '" + quantity + "'");

  const int m = jet.m();
  GaugeParams p = GaugeParams::zero(m);
  p.pi00 = params.pi00;
  p.pi11 = params.pi11;
  p.pi_ab = params.pi00 * Matrix::Identity(m, m);
  const double gen = spec->sum_generator ? p.pi00 + p.pi11 : p.pi11 - p.pi00;
  if (gen == 0.0) throw PreconditionError("weight generator vanishes for '" + quantity + "'");

  auto measure = [&](const FlowState& s) -> double {
    const std::string q = spec->name;
    if (q == "mu") return std::abs(s.mu);
    if (q == "h_ab") return s.h_ab.norm();
    if (q == "nu" || q == "H" || q == "H_tilde") {
      if (!s.harmonic) throw PreconditionError(q + " needs a harmonic-normalized jet with mu > 0");
      if (q == "nu") return std::abs(s.harmonic->nu);
      if (q == "H") return s.harmonic->H.norm();
      if (!s.harmonic->has_inverse()) throw PreconditionError("H is degenerate");
      return s.harmonic->H_inv.norm();
    }
    if (!s.tau) throw PreconditionError(q + " needs a reduced, solvable jet");
    if (q == "tau") return std::abs(s.tau->tau);
    if (q == "tau_a") return s.tau->tau_a.norm();
    return s.tau->tau_ab.norm();
  };

  constexpr int kSamples = 5;
  FlowState s = initial_state(jet, p);
  std::vector<double> ts, ys;
  for (int k = 0; k < kSamples; ++k) {
    if (k > 0) s = integrate_state(s, p, t / (kSamples - 1), std::max(25, steps / (kSamples - 1)));
    const double q = measure(s);
    if (!(q > 0.0)) throw PreconditionError("quantity '" + quantity + "' vanishes");
    ts.push_back(t * k / (kSamples - 1));
    ys.push_back(std::log(q));
  }
  double tm = 0, ym = 0;
  for (int k = 0; k < kSamples; ++k) {
    tm += ts[k] / kSamples;
    ym += ys[k] / kSamples;
  }
  double num = 0, den = 0;
  for (int k = 0; k < kSamples; ++k) {
    num += (ts[k] - tm) * (ys[k] - ym);
    den += (ts[k] - tm) * (ts[k] - tm);
  }
  if (den == 0.0) throw PreconditionError("weight fit needs t != 0");
  WeightMeasurement out;
  out.quantity = quantity;
  out.measured = num / den / gen;
  out.expected = spec->weight;
  out.generator = spec->sum_generator ? "pi00+pi11" : "pi11-pi00";
  return out;
}

}  // namespace ljet
