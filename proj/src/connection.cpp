#include "ljet/connection.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "ljet/errors.hpp"

namespace ljet {

TwoForm wedge(const OneForm& a, const OneForm& b) {
  return 0.5 * (a * b.transpose() - b * a.transpose());
}

namespace {

// K(a, c) = h_a^c, i.e. the transpose of the mixed tensor.
struct Setup {
  int m = 0;
  double mu = 0.0;
  double nu = 0.0;
  Matrix K;
  Matrix h_ab;
  Matrix h_mixed;
};

Setup setup(const HypersurfaceJet& jet) {
  Setup s;
  s.m = jet.m();
  const FundamentalTensor h = fundamental_tensor(jet);
  s.h_ab = h.h_ab;
  s.h_mixed = h.h_mixed;
  s.K = h.h_mixed.transpose();
  s.mu = mu_invariants(jet).mu;
  s.nu = jet.nu;
  return s;
}

OneForm basis(int m, int k) { return OneForm::Unit(m + 1, k); }

OneForm principal(double on_1, const Vector& on_a) {
  OneForm f(on_a.size() + 1);
  f(0) = on_1;
  f.tail(on_a.size()) = on_a;
  return f;
}

}  // namespace

double normalizing_residual(const HypersurfaceJet& jet, const NormalizingForms& f) {
  const Setup s = setup(jet);
  const auto& c = jet.curvature;
  const Matrix I = Matrix::Identity(s.m, s.m);
  const Matrix B = 2.0 * s.mu * s.K + s.nu * I;
  const Vector e1 = -s.K * f.sigma_a - s.mu * f.tau_a + 2.0 * c.C_11a;
  const Matrix e2 = -s.K * f.sigma_ab - s.mu * f.tau_ab - c.C_1ab - jet.nu_ab;
  const Vector e3 = 2.0 * s.mu * f.sigma_a - B * f.tau_a + 4.0 * s.mu * c.C1_11a - jet.rho_a;
  const Matrix e4 = 2.0 * s.mu * f.sigma_ab - B * f.tau_ab - 2.0 * s.mu * c.C1_1ab - jet.rho_ab;
  const double err = std::max({max_abs(e1), max_abs(e2), max_abs(e3), max_abs(e4)});
  const double scale = std::max({1.0, max_abs(c.C_11a), max_abs(c.C_1ab), max_abs(jet.nu_ab),
                                 max_abs(jet.rho_a), max_abs(jet.rho_ab),
                                 s.mu * max_abs(c.C1_11a), s.mu * max_abs(c.C1_1ab)});
  return err / scale;
}

NormalizingForms solve_normalizing_forms(const HypersurfaceJet& jet, const Tolerances& tol) {
  const Setup s = setup(jet);
  if (!(s.mu > tol.umbilic)) {
    throw DegenerateError(Degeneracy::kUmbilical, "umbilical point: mu = 0, forms undefined");
  }
  const HAffinor H = H_affinor(jet, s.mu, tol);
  if (H.singular()) {
    throw DegenerateError(Degeneracy::kSpecialType,
                          "special-type hypersurface: H degenerate, relative det " +
                              std::to_string(H.relative_det));
  }
  const Vector mu_a = mu_invariants(jet).mu_a;
  const double reduce_scale = std::max(1.0, jet.lambda3.max_abs());
  if (max_abs(mu_a) > tol.residual * reduce_scale ||
      max_abs(jet.nu_a) > tol.residual * std::max(1.0, max_abs(jet.nu_ab))) {
    throw DegenerateError(Degeneracy::kFrameNotReduced,
                          "frame not reduced: mu_a and nu_a must vanish");
  }
  return solve_coefficient_system(jet, tol);
}

NormalizingForms solve_coefficient_system(const HypersurfaceJet& jet, const Tolerances& tol) {
  const Setup s = setup(jet);
  if (!(s.mu > tol.umbilic)) {
    throw DegenerateError(Degeneracy::kUmbilical, "umbilical point: mu = 0, forms undefined");
  }
  const int m = s.m;
  const Matrix I = Matrix::Identity(m, m);
  Matrix block(2 * m, 2 * m);
  block << -s.K, -s.mu * I, 2.0 * s.mu * I, -(2.0 * s.mu * s.K + s.nu * I);
  if (relative_det(block) <= tol.det_threshold) {
    throw DegenerateError(Degeneracy::kSingularSystem,
                          "coefficient system for the normalizing forms is singular");
  }
  const Eigen::PartialPivLU<Matrix> lu(block);
  const auto& c = jet.curvature;

  NormalizingForms out;
  Vector rhs(2 * m);
  rhs << -2.0 * c.C_11a, jet.rho_a - 4.0 * s.mu * c.C1_11a;
  Vector x = lu.solve(rhs);
  out.sigma_a = x.head(m);
  out.tau_a = x.tail(m);

  out.sigma_ab = Matrix::Zero(m, m);
  out.tau_ab = Matrix::Zero(m, m);
  for (int b = 0; b < m; ++b) {
    rhs << c.C_1ab.col(b) + jet.nu_ab.col(b), jet.rho_ab.col(b) + 2.0 * s.mu * c.C1_1ab.col(b);
    x = lu.solve(rhs);
    out.sigma_ab.col(b) = x.head(m);
    out.tau_ab.col(b) = x.tail(m);
  }
  out.residual = normalizing_residual(jet, out);
  if (out.residual > tol.solve_residual) {
    throw DegenerateError(Degeneracy::kSingularSystem,
                          "normalizing forms: back-substitution residual " +
                              std::to_string(out.residual));
  }
  return out;
}

bool Torsion::vanishes(double tol) const {
  return max_abs(torsion_1_1a) <= tol && max_abs(torsion_1_ab) <= tol &&
         max_abs(torsion_a_1b) <= tol;
}

Torsion gamma2_torsion(const HypersurfaceJet& jet, const NormalizingForms& forms) {
  Torsion t;
  t.torsion_1_1a = -forms.tau_a;
  t.torsion_1_ab = alternate(forms.tau_ab);
  t.torsion_a_1b = fundamental_tensor(jet).h_mixed;
  return t;
}

Gamma2Curvature gamma2_curvature(const HypersurfaceJet& jet, const NormalizingForms& f) {
  const Setup s = setup(jet);
  const int m = s.m;
  const ScreenMetric g = jet.metric();
  const Matrix& gg = g.g();
  const Matrix& hm = s.h_mixed;
  const Matrix& h = s.h_ab;
  const Vector sig_up = g.inv() * f.sigma_a;
  const Vector tau_up = g.inv() * f.tau_a;
  const Matrix sig_mix = raise_index(g, f.sigma_ab);
  const Matrix tau_mix = raise_index(g, f.tau_ab);
  const auto& C = jet.curvature;
  auto delta = [](int i, int j) { return i == j ? 1.0 : 0.0; };

  Gamma2Curvature R;
  R.R1_11a = 2.0 * C.C1_11a - f.sigma_a - s.K * f.tau_a;
  const Matrix Kt = s.K * f.tau_ab;
  R.R1_1ab = alternate(f.sigma_ab) + alternate(Kt) + C.C1_1ab;

  R.Ra_b1c = Tensor3(m);
  R.Ra_bce = Tensor4(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        R.Ra_b1c(a, b, c) = delta(a, b) * f.sigma_a(c) + delta(a, c) * f.sigma_a(b) -
                            gg(b, c) * sig_up(a) + hm(a, c) * f.tau_a(b) - h(b, c) * tau_up(a) +
                            2.0 * C.Ca_b1c(a, b, c);
        for (int e = 0; e < m; ++e) {
          R.Ra_bce(a, b, c, e) =
              0.5 * (delta(a, e) * f.sigma_ab(b, c) - delta(a, c) * f.sigma_ab(b, e)) +
              0.5 * (gg(b, c) * sig_mix(a, e) - gg(b, e) * sig_mix(a, c)) +
              0.5 * (hm(a, e) * f.tau_ab(b, c) - hm(a, c) * f.tau_ab(b, e)) +
              0.5 * (h(b, c) * tau_mix(a, e) - h(b, e) * tau_mix(a, c)) -
              delta(a, b) * 0.5 * (f.sigma_ab(c, e) - f.sigma_ab(e, c)) + C.Ca_bce(a, b, c, e);
        }
      }
  return R;
}

namespace {

// Substituted connection forms shared by both curvature routines.
struct Forms {
  int m;
  std::vector<OneForm> w0a;  // omega_0^a = omega^a
  std::vector<OneForm> wa0;  // omega_a^0
  std::vector<OneForm> wa1;  // omega_a^1
  std::vector<OneForm> w1a;  // omega_1^a
  std::vector<OneForm> wbn;  // omega_b^n
  std::vector<OneForm> wna;  // omega_n^a
};

Forms substitute(const HypersurfaceJet& jet, const NormalizingForms& f) {
  const Setup s = setup(jet);
  const ScreenMetric g = jet.metric();
  const Vector tau_up = g.inv() * f.tau_a;
  const Matrix tau_mix = raise_index(g, f.tau_ab);
  Forms w{s.m, {}, {}, {}, {}, {}, {}};
  for (int a = 0; a < s.m; ++a) {
    w.w0a.push_back(basis(s.m, a + 1));
    w.wa0.push_back(principal(f.sigma_a(a), f.sigma_ab.row(a).transpose()));
    w.wa1.push_back(principal(f.tau_a(a), f.tau_ab.row(a).transpose()));
    w.w1a.push_back(principal(0.0, s.h_mixed.row(a).transpose()));
    w.wbn.push_back(principal(0.0, s.h_ab.row(a).transpose()));
    w.wna.push_back(principal(tau_up(a), tau_mix.row(a).transpose()));
  }
  return w;
}

// C^a_{bkl} omega^k ^ omega^l for fixed (a, b).
TwoForm weyl_block(const HypersurfaceJet& jet, int a, int b) {
  const int m = jet.m();
  const auto& C = jet.curvature;
  TwoForm W = TwoForm::Zero(m + 1, m + 1);
  for (int c = 0; c < m; ++c) {
    W(0, c + 1) = C.Ca_b1c(a, b, c);
    W(c + 1, 0) = -C.Ca_b1c(a, b, c);
    for (int e = 0; e < m; ++e) W(c + 1, e + 1) = 0.5 * (C.Ca_bce(a, b, c, e) - C.Ca_bce(a, b, e, c));
  }
  return W;
}

TwoForm weyl_11(const HypersurfaceJet& jet) {
  const int m = jet.m();
  const auto& C = jet.curvature;
  TwoForm W = TwoForm::Zero(m + 1, m + 1);
  W.block(0, 1, 1, m) = C.C1_11a.transpose();
  W.block(1, 0, m, 1) = -C.C1_11a;
  W.block(1, 1, m, m) = alternate(C.C1_1ab);
  return W;
}

// Sum over c, e of g_bc g^ae omega^c ^ omega_e^0, minus delta^a_b omega^c ^ omega_c^0.
TwoForm metric_terms(const ScreenMetric& g, const Forms& w, int a, int b) {
  TwoForm W = TwoForm::Zero(w.m + 1, w.m + 1);
  for (int c = 0; c < w.m; ++c)
    for (int e = 0; e < w.m; ++e) {
      const double coef = g.g()(b, c) * g.inv()(a, e);
      if (coef != 0.0) W += coef * wedge(w.w0a[c], w.wa0[e]);
    }
  if (a == b)
    for (int c = 0; c < w.m; ++c) W -= wedge(w.w0a[c], w.wa0[c]);
  return W;
}

}  // namespace

Gamma2Curvature gamma2_curvature_from_forms(const HypersurfaceJet& jet, const NormalizingForms& f) {
  const Forms w = substitute(jet, f);
  const ScreenMetric g = jet.metric();
  const int m = w.m;

  TwoForm O11 = weyl_11(jet);
  for (int a = 0; a < m; ++a) O11 += wedge(w.w0a[a], w.wa0[a]) + wedge(w.w1a[a], w.wa1[a]);

  Gamma2Curvature R;
  R.R1_11a = 2.0 * O11.block(0, 1, 1, m).transpose();
  R.R1_1ab = O11.block(1, 1, m, m);
  R.Ra_b1c = Tensor3(m);
  R.Ra_bce = Tensor4(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const TwoForm O = wedge(w.wa0[b], w.w0a[a]) + wedge(w.wa1[b], w.w1a[a]) +
                        wedge(w.wbn[b], w.wna[a]) + metric_terms(g, w, a, b) +
                        weyl_block(jet, a, b);
      for (int c = 0; c < m; ++c) {
        R.Ra_b1c(a, b, c) = 2.0 * O(0, c + 1);
        for (int e = 0; e < m; ++e) R.Ra_bce(a, b, c, e) = O(c + 1, e + 1);
      }
    }
  return R;
}

double max_difference(const Gamma2Curvature& x, const Gamma2Curvature& y) {
  double d = std::max(max_abs(Vector(x.R1_11a - y.R1_11a)), max_abs(Matrix(x.R1_1ab - y.R1_1ab)));
  for (std::size_t i = 0; i < x.Ra_b1c.data().size(); ++i)
    d = std::max(d, std::abs(x.Ra_b1c.data()[i] - y.Ra_b1c.data()[i]));
  for (std::size_t i = 0; i < x.Ra_bce.data().size(); ++i)
    d = std::max(d, std::abs(x.Ra_bce.data()[i] - y.Ra_bce.data()[i]));
  return d;
}

Gamma1Curvature gamma1_curvature(const HypersurfaceJet& jet, const NormalizingForms& f) {
  if (!jet.phi1 || !jet.phi_a) {
    throw DegenerateError(Degeneracy::kMissingData,
                          "fifth-order data required: phi1 and phi_a are needed for gamma_1 "
                          "curvature");
  }
  const Setup s = setup(jet);
  const Forms w = substitute(jet, f);
  const ScreenMetric g = jet.metric();
  const int m = s.m;
  const OneForm w10 = principal(s.mu, Vector::Zero(m));  // omega_1^0, reduced frame
  const OneForm w01 = basis(m, 0);                       // omega_0^1 = omega^1
  const OneForm wn0 = principal(*jet.phi1, *jet.phi_a);  // omega_n^0
  const auto& C = jet.curvature;

  Gamma1Curvature out;
  out.omega_11 = 2.0 * wedge(w10, w01) + weyl_11(jet);
  for (int a = 0; a < m; ++a) out.omega_11 += wedge(w.w0a[a], w.wa0[a]);

  // C^a_{11b} and C^a_{1bc} through the pair symmetry of the Weyl tensor.
  const Matrix Ca_11b = -(g.inv() * C.Cn_ab1);
  for (int a = 0; a < m; ++a) {
    TwoForm line2 = wedge(w.wa0[a], w10);
    for (int b = 0; b < m; ++b) line2 -= g.g()(a, b) * wedge(w.w0a[b], wn0);
    out.omega_a1.push_back(line2);

    TwoForm weyl = TwoForm::Zero(m + 1, m + 1);
    for (int b = 0; b < m; ++b) {
      weyl(0, b + 1) = Ca_11b(a, b);
      weyl(b + 1, 0) = -Ca_11b(a, b);
    }
    Matrix screen = Matrix::Zero(m, m);
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d)
          for (int e = 0; e < m; ++e)
            screen(b, c) -= g.inv()(a, d) * g.g()(b, e) * C.Ca_b1c(e, c, d);
    weyl.block(1, 1, m, m) = alternate(screen);
    out.omega_1a.push_back(wedge(w10, w.w0a[a]) + weyl);

    std::vector<TwoForm> row;
    for (int b = 0; b < m; ++b) {
      TwoForm O = wedge(w.wa0[b], w.w0a[a]) + wedge(w.wbn[b], w.wna[a]) +
                  metric_terms(g, w, a, b) + weyl_block(jet, a, b);
      if (a == b) O -= wedge(w01, w10);
      row.push_back(O);
    }
    out.omega_ab.push_back(std::move(row));
  }
  out.weyl_terms_complete = false;
  return out;
}

Integrability integrability(const HypersurfaceJet& jet, const NormalizingForms& f,
                            const Tolerances& tol) {
  const Setup s = setup(jet);
  const Matrix X = s.K * f.sigma_ab + jet.curvature.C_1ab;
  const Matrix tau_skew = alternate(f.tau_ab);
  Integrability out;
  out.residual_S = tau_skew.norm();
  out.residual_Stilde = (X - X.transpose()).norm() / (2.0 * s.mu);
  const double scale = std::max(1.0, f.tau_ab.norm());
  out.integrable_S = out.residual_S <= tol.integrability * scale;
  out.integrable_Stilde = out.residual_Stilde <= tol.integrability * scale;
  const Matrix identity = (X - X.transpose()) + 2.0 * s.mu * tau_skew;
  out.identity_residual =
      identity.norm() / std::max({1.0, X.norm(), s.mu * f.tau_ab.norm()});
  return out;
}

namespace {

template <class F>
auto five_point(const F& f, double x, double h) -> decltype(f(x)) {
  return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}

}  // namespace

GaugeGroupCheck g2_structure_check(const Matrix& X, const Matrix& Y, const Matrix& Z,
                                   double step) {
  // dF F^{-1} for F = exp(sX) exp(tY) exp(st Z).
  auto pi_s = [&](double s, double t) -> Matrix {
    const Matrix E = Matrix((s * X).exp()) * Matrix((t * Y).exp());
    return X + E * (t * Z) * E.inverse();
  };
  auto pi_t = [&](double s, double t) -> Matrix {
    const Matrix A = (s * X).exp();
    const Matrix E = A * Matrix((t * Y).exp());
    return A * Y * A.inverse() + E * (s * Z) * E.inverse();
  };
  // rho = exp(a s + b t + c s t + d s^2 t), pi = d log rho.
  const double ca = 0.7, cb = -0.4, cc = 1.3, cd = 0.5;
  auto rho_s = [&](double s, double t) { return ca + cc * t + 2.0 * cd * s * t; };
  auto rho_t = [&](double s, double) { return cb + cc * s + cd * s * s; };

  GaugeGroupCheck out;
  const double points[][2] = {{0.0, 0.0}, {0.3, -0.2}, {-0.25, 0.4}};
  for (const auto& p : points) {
    const double s = p[0], t = p[1];
    const Matrix d_s_pt = five_point([&](double x) -> Matrix { return pi_t(x, t); }, s, step);
    const Matrix d_t_ps = five_point([&](double y) -> Matrix { return pi_s(s, y); }, t, step);
    const Matrix Ps = pi_s(s, t), Pt = pi_t(s, t);
    const Matrix res = d_s_pt - d_t_ps - (Ps * Pt - Pt * Ps);
    const double scale = std::max({1.0, Ps.norm() * Pt.norm(), d_s_pt.norm()});
    out.linear_residual = std::max(out.linear_residual, res.norm() / scale);

    const double ds = five_point([&](double x) { return rho_t(x, t); }, s, step);
    const double dt = five_point([&](double y) { return rho_s(s, y); }, t, step);
    out.scalar_residual = std::max(out.scalar_residual, std::abs(ds - dt));
  }
  return out;
}

GaugeGroupCheck g2_structure_check(int m, unsigned seed, double step) {
  if (m < 1) throw DimensionError("g2_structure_check: m must be positive");
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.5 / std::sqrt(static_cast<double>(m)));
  auto draw = [&]() {
    Matrix A(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) A(i, j) = normal(rng);
    return A;
  };
  const Matrix X = draw(), Y = draw(), Z = draw();
  return g2_structure_check(X, Y, Z, step);
}

}  // namespace ljet
