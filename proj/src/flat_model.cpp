#include "ljet/flat_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/SVD>

#include "ljet/errors.hpp"

namespace ljet {

namespace {

[[noreturn]] void singular_chart() {
  throw DegenerateError(Degeneracy::kSingularChart, "singular chart point");
}

// Point of the hypersurface with its first-order data in Minkowski space.
struct Surface {
  Vector x, L, N;  // n
  Matrix E;        // n x m, columns e_a = dx/du^a
  Vector nu;       // spatial unit normal, n-1
  Matrix dnu;      // (n-1) x m
};

// Hyperspherical embedding of S^m in R^{m+1} and its Jacobian.
void sphere_chart(const Vector& u, Vector& th, Matrix& dth) {
  const int m = static_cast<int>(u.size());
  th.resize(m + 1);
  dth = Matrix::Zero(m + 1, m);
  for (int k = 0; k <= m; ++k) {
    // th_k = prod_{i<k} sin u_i * (k < m ? cos u_k : 1)
    double v = 1.0;
    for (int i = 0; i < k; ++i) v *= std::sin(u(i));
    if (k < m) v *= std::cos(u(k));
    th(k) = v;
    for (int j = 0; j < m; ++j) {
      if (j > k || (j == k && k == m)) continue;
      double d = 1.0;
      for (int i = 0; i < k; ++i) d *= (i == j) ? std::cos(u(i)) : std::sin(u(i));
      if (k < m) d *= (j == k) ? -std::sin(u(k)) : std::cos(u(k));
      dth(k, j) = d;
    }
  }
}

struct BaseData {
  Vector axes, centre;
  double time = 0.0;
  double shift = 0.0;  // internal ruling parameter = r - shift
};

BaseData base_of(const ModelSpec& spec) {
  BaseData b;
  const int d = spec.n - 1;
  if (spec.variant == ModelSpec::Variant::kNullCone) {
    b.axes = Vector::Ones(d);
    b.centre = spec.vertex.tail(d);
    b.time = spec.vertex(0) + 1.0;
    b.shift = 1.0;
  } else {
    b.axes = spec.axes;
    b.centre = Vector::Zero(d);
    b.time = spec.base_time;
  }
  return b;
}

Surface surface(const ModelSpec& spec, const Vector& u, double r, bool check) {
  const int n = spec.n, m = spec.m();
  if (u.size() != m) throw DimensionError("generator angles must have n-2 entries");
  if (check) {
    for (int i = 0; i + 1 < m; ++i)
      if (std::abs(std::sin(u(i))) < 1e-6) singular_chart();
    if (spec.variant == ModelSpec::Variant::kNullCone && std::abs(r) < 1e-9) singular_chart();
  }
  const BaseData b = base_of(spec);
  Vector th;
  Matrix dth;
  sphere_chart(u, th, dth);
  const Vector y = b.centre + b.axes.cwiseProduct(th);
  const Matrix dy = b.axes.asDiagonal() * dth;
  const Vector N0 = th.cwiseQuotient(b.axes);
  const Matrix dN0 = b.axes.cwiseInverse().asDiagonal() * dth;
  const double len = N0.norm();
  const Vector nu = N0 / len;
  Matrix dnu = dN0 / len - N0 * (N0.transpose() * dN0) / (len * len * len);
  const double rr = r - b.shift;

  Surface s;
  s.nu = nu;
  s.dnu = dnu;
  s.x.resize(n);
  s.x(0) = b.time + rr;
  s.x.tail(n - 1) = y + rr * nu;
  s.L.resize(n);
  s.L(0) = 1.0;
  s.L.tail(n - 1) = nu;
  s.N.resize(n);
  s.N(0) = 0.5;
  s.N.tail(n - 1) = -0.5 * nu;
  s.E = Matrix::Zero(n, m);
  s.E.bottomRows(n - 1) = dy + rr * dnu;
  return s;
}

double mink(const Vector& a, const Vector& b) { return a.dot(b) - 2.0 * a(0) * b(0); }

Vector lift_point(const Vector& x) {
  const int n = static_cast<int>(x.size());
  Vector X(n + 2);
  X.head(n) = x;
  X(n) = 1.0;
  X(n + 1) = 0.5 * mink(x, x);
  return X;
}

Vector lift_vec(const Vector& e, const Vector& x) {
  const int n = static_cast<int>(x.size());
  Vector X(n + 2);
  X.head(n) = e;
  X(n) = 0.0;
  X(n + 1) = mink(x, e);
  return X;
}

Matrix frame_from(const Surface& s, int n) {
  const int m = n - 2;
  Matrix F = Matrix::Zero(n + 2, n + 2);
  F.col(0) = lift_point(s.x);
  F.col(1) = lift_vec(s.L, s.x);
  for (int a = 0; a < m; ++a) F.col(a + 2) = lift_vec(s.E.col(a), s.x);
  F.col(n) = lift_vec(s.N, s.x);
  F(n + 1, n + 1) = 1.0;
  return F;
}

Matrix raw_frame(const ModelSpec& spec, const Vector& u, double r) {
  return frame_from(surface(spec, u, r, true), spec.n);
}

Matrix screen_gram(const Surface& s) {
  Matrix g = s.E.transpose() * s.E;
  g -= 2.0 * s.E.row(0).transpose() * s.E.row(0);
  return g;
}

// Parameter point p = (r, u^1 .. u^m); direction 0 is the ruling.
Vector shifted(const Vector& p, int k, double h) {
  Vector q = p;
  q(k) += h;
  return q;
}

template <class F>
auto five_point(F&& f, const Vector& p, int k, double h) -> decltype(f(p)) {
  return (f(shifted(p, k, -2 * h)) - 8.0 * f(shifted(p, k, -h)) + 8.0 * f(shifted(p, k, h)) -
          f(shifted(p, k, 2 * h))) /
         (12.0 * h);
}

Matrix lambda_at(const ModelSpec& spec, const Vector& u, double r, double h, double* asym) {
  const int n = spec.n, m = spec.m();
  const Matrix B = ambient_form(n);
  const Vector A1 = raw_frame(spec, u, r).col(1);
  Matrix lam(m, m);
  for (int b = 0; b < m; ++b) {
    Vector up = u, um = u;
    up(b) += h;
    um(b) -= h;
    const Matrix Fp = raw_frame(spec, up, r), Fm = raw_frame(spec, um, r);
    for (int a = 0; a < m; ++a) {
      const Vector dA = (Fp.col(a + 2) - Fm.col(a + 2)) / (2.0 * h);
      lam(a, b) = -dA.dot(B * A1);
    }
  }
  if (asym) *asym = max_abs(Matrix(lam - lam.transpose()));
  return symmetrize(lam);
}

struct Level1 {
  Matrix g, lam_raw, h, F;
  double lam = 0.0, mu = 0.0, asym = 0.0;
};

struct Level2 {
  Level1 base;
  std::vector<Matrix> C;  // C[k](j, i) = omega_i^j(d_k)
  Matrix hmix, ginv;
  Tensor3 lam3;
  double lam3_r = 0.0;  // omega^1 consistency
  Vector mu_a;
  double nu = 0.0;
  Vector nu_a;
};

class Evaluator {
 public:
  explicit Evaluator(const ModelSpec& spec) : spec_(spec), m_(spec.m()) {}

  Level1 level1(const Vector& p) const {
    const Vector u = p.tail(m_);
    const double r = p(0);
    Level1 L;
    const Surface s = surface(spec_, u, r, true);
    L.g = screen_gram(s);
    L.lam_raw = lambda_at(spec_, u, r, spec_.h_fd, &L.asym);
    const Matrix gi = L.g.inverse();
    L.lam = (gi * L.lam_raw).trace() / m_;
    L.h = L.lam_raw - L.lam * L.g;
    const Matrix K = gi * L.h;
    L.mu = (K * K).trace() / m_;
    L.F = frame_from(s, spec_.n);
    const int n = spec_.n;
    L.F.col(1) -= L.lam * L.F.col(0);
    L.F.col(n + 1) += L.lam * L.F.col(n);
    return L;
  }

  Level2 level2(const Vector& p) const {
    const int m = m_, K = m_ + 1;
    const double ho = spec_.h_outer;
    Level2 L;
    L.base = level1(p);
    const Matrix& g = L.base.g;
    const Matrix& h = L.base.h;
    L.ginv = g.inverse();
    L.hmix = L.ginv * h;  // hmix(c, a) = h^c_a
    const Eigen::PartialPivLU<Matrix> lu(L.base.F);

    std::vector<Matrix> dh(K);
    Vector dmu(K);
    L.C.resize(K);
    for (int k = 0; k < K; ++k) {
      Level1 s[4];
      const double off[4] = {-2 * ho, -ho, ho, 2 * ho};
      for (int i = 0; i < 4; ++i) s[i] = level1(shifted(p, k, off[i]));
      const double w = 12.0 * ho;
      dh[k] = (s[0].h - 8.0 * s[1].h + 8.0 * s[2].h - s[3].h) / w;
      dmu(k) = (s[0].mu - 8.0 * s[1].mu + 8.0 * s[2].mu - s[3].mu) / w;
      const Matrix dF = (s[0].F - 8.0 * s[1].F + 8.0 * s[2].F - s[3].F) / w;
      L.C[k] = lu.solve(dF);
    }
    const auto w = [&](int k, int i, int j) { return L.C[k](j, i); };

    // lambda_abc along d_c, plus the omega^1 component for consistency.
    const auto lam3_row = [&](int k, int a, int b) {
      double v = dh[k](a, b);
      for (int d = 0; d < m; ++d) v -= h(d, b) * w(k, a + 2, d + 2) + h(a, d) * w(k, b + 2, d + 2);
      v += 2.0 * h(a, b) * w(k, 0, 0);
      v -= h(a, b) * (w(k, 0, 0) + w(k, 1, 1));
      v -= g(a, b) * w(k, 1, 0);
      return v;
    };
    Tensor3 t(m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) t(a, b, c) = lam3_row(c + 1, a, b);
    L.lam3 = t;
    const Matrix hgh = h * L.ginv * h;
    double r_cons = 0.0;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) r_cons = std::max(r_cons, std::abs(lam3_row(0, a, b) + hgh(a, b)));
    L.lam3_r = r_cons;

    L.mu_a = Vector::Zero(m);
    for (int c = 0; c < m; ++c) {
      double v = 0.0;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) v += L.ginv(a, b) * t(a, b, c);
      L.mu_a(c) = -v / m;
    }
    const double mu = L.base.mu;
    L.nu = dmu(0) + 2.0 * mu * (w(0, 0, 0) - w(0, 1, 1));
    L.nu_a.resize(m);
    for (int a = 0; a < m; ++a) L.nu_a(a) = dmu(a + 1) + 2.0 * mu * (w(a + 1, 0, 0) - w(a + 1, 1, 1));
    return L;
  }

 private:
  const ModelSpec& spec_;
  int m_;
};

}  // namespace

std::string to_string(ModelSpec::Variant v) {
  return v == ModelSpec::Variant::kNullCone ? "null-cone" : "null-ruled";
}

ModelSpec ModelSpec::ellipsoid(int n, const Vector& axes, double time) {
  ModelSpec s;
  s.variant = Variant::kNullRuled;
  s.n = n;
  s.axes = axes;
  s.base_time = time;
  s.validate();
  return s;
}

ModelSpec ModelSpec::sphere(int n, double radius, double time) {
  return ellipsoid(n, Vector::Constant(n - 1, radius), time);
}

ModelSpec ModelSpec::cone(int n, const Vector& vertex) {
  ModelSpec s;
  s.variant = Variant::kNullCone;
  s.n = n;
  s.vertex = vertex;
  s.validate();
  return s;
}

void ModelSpec::validate() const {
  if (n < 4) throw PreconditionError("model requires n >= 4");
  if (variant == Variant::kNullRuled) {
    if (axes.size() != n - 1) throw DimensionError("base axes must have n-1 entries");
    if ((axes.array() <= 0.0).any()) throw PreconditionError("base axes must be positive");
  } else if (vertex.size() != n) {
    throw DimensionError("cone vertex must have n entries");
  }
  if (!(h_fd > 0.0) || !(h_outer > 0.0)) throw PreconditionError("difference steps must be positive");
  for (const auto& gen : generators)
    if (gen.u.size() != n - 2) throw DimensionError("generator angles must have n-2 entries");
}

Matrix ambient_form(int n) {
  Matrix B = Matrix::Identity(n + 2, n + 2);
  B(0, 0) = -1.0;
  B(n, n) = 0.0;
  B(n + 1, n + 1) = 0.0;
  B(n, n + 1) = B(n + 1, n) = -1.0;
  return B;
}

Matrix AdaptedFrame::gram() const { return A.transpose() * ambient_form(n) * A; }

Matrix AdaptedFrame::screen_metric() const { return gram().block(2, 2, n - 2, n - 2); }

double AdaptedFrame::gram_deviation(const Matrix& g) const {
  const Matrix G = gram();
  const int m = n - 2;
  Matrix E = Matrix::Zero(n + 2, n + 2);
  E(0, n + 1) = E(n + 1, 0) = -1.0;
  E(1, n) = E(n, 1) = -1.0;
  E.block(2, 2, m, m) = g.size() ? g : symmetrize(G.block(2, 2, m, m));
  return max_abs(Matrix(G - E));
}

AdaptedFrame frame_at(const ModelSpec& spec, const Vector& u, double r) {
  const Surface s = surface(spec, u, r, true);
  const Matrix g = screen_gram(s);
  if (relative_det(g) < 1e-10) singular_chart();
  return AdaptedFrame{spec.n, frame_from(s, spec.n)};
}

Matrix raw_lambda(const ModelSpec& spec, const Vector& u, double r, double h) {
  return lambda_at(spec, u, r, h, nullptr);
}

Matrix analytic_lambda(const ModelSpec& spec, const Vector& u, double r) {
  const Surface s = surface(spec, u, r, true);
  // e_a . d_b nu, spatial parts
  const int n = spec.n;
  return symmetrize(s.E.bottomRows(n - 1).transpose() * s.dnu);
}

std::vector<double> analytic_foci(const ModelSpec& spec, const Vector& u, double r) {
  const BaseData b = base_of(spec);
  const Surface s0 = surface(spec, u, b.shift, false);
  const int n = spec.n;
  const Matrix dy = s0.E.bottomRows(n - 1);
  const Matrix g0 = dy.transpose() * dy;
  const Matrix S0 = symmetrize(dy.transpose() * s0.dnu);
  const double rr = r - b.shift;
  std::vector<double> out;
  for (const auto& ep : pencil_eigen(ScreenMetric(g0, 1e-9), S0))
    out.push_back(ep.value / (1.0 + rr * ep.value));
  std::sort(out.begin(), out.end());
  return out;
}

double lambda_richardson_ratio(const ModelSpec& spec, const ModelGenerator& gen, double h) {
  const Matrix l1 = raw_lambda(spec, gen.u, gen.r, h);
  const Matrix l2 = raw_lambda(spec, gen.u, gen.r, h / 2);
  const Matrix l3 = raw_lambda(spec, gen.u, gen.r, h / 4);
  const double den = (l2 - l3).norm();
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return (l1 - l2).norm() / den;
}

GeneratedJet generate_jet_report(const ModelSpec& spec, const ModelGenerator& gen) {
  spec.validate();
  const int n = spec.n, m = spec.m(), K = m + 1;
  const double ho = spec.h_outer;
  // Nested stencils reach 4 h_outer + h_fd away from the point.
  const double reach = 4.0 * ho + spec.h_fd;
  if (spec.variant == ModelSpec::Variant::kNullCone && std::abs(gen.r) < 5.0 * reach)
    singular_chart();
  for (double dr : {-reach, 0.0, reach}) {
    const Surface s = surface(spec, gen.u, gen.r + dr, true);
    if (relative_det(screen_gram(s)) < 1e-8) singular_chart();
  }
  for (int i = 0; i + 1 < m; ++i)
    if (std::abs(std::sin(gen.u(i))) < 5.0 * reach) singular_chart();

  Evaluator ev(spec);
  Vector p(K);
  p(0) = gen.r;
  p.tail(m) = gen.u;

  const Level2 c = ev.level2(p);
  const Matrix& g = c.base.g;
  const Matrix& h = c.base.h;
  const double mu = c.base.mu;
  const auto w = [&](int k, int i, int j) { return c.C[k](j, i); };

  std::vector<Vector> dmu_a(K), dnu_a(K);
  Vector dnu(K);
  for (int k = 0; k < K; ++k) {
    Level2 s[4];
    const double off[4] = {-2 * ho, -ho, ho, 2 * ho};
    for (int i = 0; i < 4; ++i) s[i] = ev.level2(shifted(p, k, off[i]));
    const double den = 12.0 * ho;
    dmu_a[k] = (s[0].mu_a - 8.0 * s[1].mu_a + 8.0 * s[2].mu_a - s[3].mu_a) / den;
    dnu_a[k] = (s[0].nu_a - 8.0 * s[1].nu_a + 8.0 * s[2].nu_a - s[3].nu_a) / den;
    dnu(k) = (s[0].nu - 8.0 * s[1].nu + 8.0 * s[2].nu - s[3].nu) / den;
  }

  const Vector& mu_a = c.mu_a;
  const Vector& nu_a = c.nu_a;
  const double nu = c.nu;
  const Matrix& hm = c.hmix;

  const auto nu_row = [&](int k, int a) {
    double v = dmu_a[k](a);
    for (int d = 0; d < m; ++d) v -= mu_a(d) * w(k, a + 2, d + 2);
    v += mu_a(a) * w(k, 0, 0) + mu_a(a) * (w(k, 0, 0) - w(k, 1, 1));
    for (int e = 0; e < m; ++e) v += hm(e, a) * w(k, e + 2, 0);
    v -= mu * w(k, a + 2, 1);
    return v;
  };
  const auto rho_row = [&](int k, int a) {
    double v = dnu_a[k](a);
    for (int d = 0; d < m; ++d) v -= nu_a(d) * w(k, a + 2, d + 2);
    v += nu_a(a) * w(k, 0, 0) + 2.0 * nu_a(a) * (w(k, 0, 0) - w(k, 1, 1));
    v += 2.0 * mu * w(k, a + 2, 0);
    for (int e = 0; e < m; ++e) v -= (2.0 * mu * hm(e, a) + (e == a ? nu : 0.0)) * w(k, e + 2, 1);
    return v;
  };

  Matrix nu_ab(m, m), rho_ab(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      nu_ab(a, b) = nu_row(b + 1, a);
      rho_ab(a, b) = rho_row(b + 1, a);
    }

  GeneratedJet out;
  out.raw_lambda_ab = c.base.lam_raw;
  out.raw_lambda = c.base.lam;
  out.frame = AdaptedFrame{n, c.base.F};
  out.lambda_asymmetry = c.base.asym;
  out.lambda3_asymmetry = c.lam3.symmetry_defect();
  out.nu_ab_asymmetry = max_abs(Matrix(nu_ab - nu_ab.transpose()));
  out.rho_ab_asymmetry = max_abs(Matrix(rho_ab - rho_ab.transpose()));
  out.lambda3_r_consistency = c.lam3_r;
  double nc = 0.0, rc = 0.0;
  const Vector nu_h = hm.transpose() * nu_a;  // nu_c h^c_a
  const Vector mu_h = hm.transpose() * mu_a;
  for (int a = 0; a < m; ++a) {
    nc = std::max(nc, std::abs(nu_row(0, a) + mu_h(a) - nu_a(a)));
    rc = std::max(rc, std::abs(rho_row(0, a) + nu_h(a) - 4.0 * mu * mu_a(a) - (dnu(a + 1) + 3.0 * nu * (w(a + 1, 0, 0) - w(a + 1, 1, 1)))));
  }
  out.nu_a_consistency = nc;
  out.rho_a_consistency = rc;

  HypersurfaceJet& j = out.jet;
  j.n = n;
  j.g = symmetrize(g);
  j.lambda = symmetrize(h);
  j.lambda3 = c.lam3.symmetrized();
  j.curvature = CurvatureSlice::zero(m);
  j.nu = nu;
  j.nu_a = nu_a;
  j.nu_ab = symmetrize(nu_ab);
  j.rho = dnu(0) + 3.0 * nu * (w(0, 0, 0) - w(0, 1, 1));
  j.rho_a.resize(m);
  for (int a = 0; a < m; ++a) j.rho_a(a) = dnu(a + 1) + 3.0 * nu * (w(a + 1, 0, 0) - w(a + 1, 1, 1));
  j.rho_ab = symmetrize(rho_ab);
  j.harmonic_normalized = true;
  return out;
}

HypersurfaceJet generate_jet(const ModelSpec& spec, const ModelGenerator& gen) {
  return generate_jet_report(spec, gen).jet;
}

Development develop_along_generator(const ModelSpec& spec, const ModelGenerator& gen,
                                    double r_end, int steps) {
  spec.validate();
  if (steps < 1) throw PreconditionError("steps must be positive");
  const int n = spec.n, m = spec.m();
  const double r0 = gen.r, dr = (r_end - r0) / steps;
  // Stay clear of vertices and caustics along the whole segment.
  for (int i = 0; i <= 16; ++i) frame_at(spec, gen.u, r0 + (r_end - r0) * i / 16.0);

  Development dev;
  double off_line = 0.0;
  const auto conn = [&](double r) {
    const auto f = [&](double rr) { return raw_frame(spec, gen.u, rr); };
    const double h = 1e-3;
    const Matrix F = f(r);
    const Matrix dF = (f(r - 2 * h) - 8.0 * f(r - h) + 8.0 * f(r + h) - f(r + 2 * h)) / (12.0 * h);
    Matrix C = F.partialPivLu().solve(dF);
    off_line = std::max(off_line, max_abs(Vector(C.col(0).tail(n))));
    for (int a = 0; a < m; ++a) {
      C(a + 2, 0) = 0.0;  // omega^a
      C(a + 2, 1) = 0.0;  // omega_1^a
      C(n, a + 2) = 0.0;  // omega_a^n
    }
    C(n, 0) = 0.0;  // omega_0^n
    return C;
  };

  Matrix F = raw_frame(spec, gen.u, r0);
  const auto record = [&](int i, const Matrix& Fd) {
    const double r = r0 + i * dr;
    const Surface s = surface(spec, gen.u, r, true);
    const Matrix Ft = frame_from(s, n);
    dev.t.push_back(static_cast<double>(i) / steps);
    dev.frames.push_back(Fd);
    dev.max_gram_deviation =
        std::max(dev.max_gram_deviation, AdaptedFrame{n, Fd}.gram_deviation(screen_gram(s)));
    dev.max_frame_error = std::max(dev.max_frame_error, max_abs(Matrix(Fd - Ft)) / std::max(1.0, max_abs(Ft)));
  };
  record(0, F);
  for (int i = 0; i < steps; ++i) {
    const double r = r0 + i * dr;
    const Matrix C0 = conn(r), Ch = conn(r + dr / 2), C1 = conn(r + dr);
    const Matrix k1 = F * C0;
    const Matrix k2 = (F + 0.5 * dr * k1) * Ch;
    const Matrix k3 = (F + 0.5 * dr * k2) * Ch;
    const Matrix k4 = (F + dr * k3) * C1;
    F += dr / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    record(i + 1, F);
  }
  dev.max_dA0_off_line = off_line;

  // Tangent spans {A_0 .. A_{n-1}} at the two ends.
  const auto basis = [&](const Matrix& Fm) {
    const Matrix S = Fm.leftCols(n);
    Eigen::HouseholderQR<Matrix> qr(S);
    return Matrix(qr.householderQ() * Matrix::Identity(n + 2, n));
  };
  const Matrix Q1 = basis(dev.frames.front()), Q2 = basis(dev.frames.back());
  const Matrix R = Q2 - Q1 * (Q1.transpose() * Q2);
  dev.max_principal_angle = Eigen::JacobiSVD<Matrix>(R).singularValues()(0);
  return dev;
}

double geodesic_residual(const ModelSpec& spec, const ModelGenerator& gen, double r_end,
                         double eps, int samples) {
  spec.validate();
  if (samples < 2) throw PreconditionError("need at least two samples");
  const int n = spec.n;
  const double dr = r_end - gen.r;
  const auto frame_t = [&](double t) {
    Vector u = gen.u;
    u(0) += eps * t * t;
    return raw_frame(spec, u, gen.r + t * dr);
  };
  const auto cmat = [&](double t) {
    const double h = 1e-3;
    const Matrix dF = (frame_t(t - 2 * h) - 8.0 * frame_t(t - h) + 8.0 * frame_t(t + h) -
                       frame_t(t + 2 * h)) /
                      (12.0 * h);
    return Matrix(frame_t(t).partialPivLu().solve(dF));
  };
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) / (samples - 1);
    const Matrix C = cmat(t);
    const double h = 1e-2;
    const Vector dom = (cmat(t - 2 * h).col(0) - 8.0 * cmat(t - h).col(0) +
                        8.0 * cmat(t + h).col(0) - cmat(t + 2 * h).col(0)) /
                       (12.0 * h);
    const Vector om = C.col(0);  // omega^i(c')
    Vector E(n + 1);
    for (int i = 1; i <= n; ++i) {
      double v = dom(i);
      for (int j = 1; j <= n; ++j) v += om(j) * C(i, j);
      E(i) = v;
    }
    if (std::abs(om(1)) < 1e-12) throw PreconditionError("curve tangent has no omega^1 part");
    const double alpha = E(1) / om(1);
    const double scale = std::max(1.0, om.tail(n).cwiseAbs().maxCoeff());
    for (int i = 2; i <= n; ++i) worst = std::max(worst, std::abs(E(i) - alpha * om(i)) / scale);
  }
  return worst;
}

FociCrossCheck foci_cross_check(const ModelSpec& spec, const ModelGenerator& gen, double tol) {
  spec.validate();
  const int n = spec.n, m = spec.m();
  frame_at(spec, gen.u, gen.r);

  FociCrossCheck out;
  for (const auto& ep : pencil_eigen(ScreenMetric(screen_gram(surface(spec, gen.u, gen.r, true)), 1e-9),
                                     raw_lambda(spec, gen.u, gen.r, spec.h_fd)))
    out.jet_foci.push_back(ep.value);

  const auto sv = [&](double r) {
    const Matrix E = surface(spec, gen.u, r, false).E.bottomRows(n - 1);
    return Vector(Eigen::JacobiSVD<Matrix>(E).singularValues());
  };
  const auto smin = [&](double r) { return sv(r)(m - 1); };

  double span = 2.0 * std::abs(gen.r) + 2.0;
  if (spec.variant == ModelSpec::Variant::kNullRuled) {
    const double amax = spec.axes.maxCoeff(), amin = spec.axes.minCoeff();
    span += 4.0 * amax * amax / amin;
  }
  const int N = 4001;
  std::vector<double> rs(N), vals(N);
  for (int i = 0; i < N; ++i) {
    rs[i] = gen.r - span + 2.0 * span * i / (N - 1);
    vals[i] = smin(rs[i]);
  }
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 1; i + 1 < N; ++i) {
    if (!(vals[i] <= vals[i - 1] && vals[i] < vals[i + 1])) continue;
    double a = rs[i - 1], b = rs[i + 1];
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = smin(x1), f2 = smin(x2);
    for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - phi * (b - a);
        f1 = smin(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + phi * (b - a);
        f2 = smin(x2);
      }
    }
    const double rstar = 0.5 * (a + b);
    const Vector s = sv(rstar);
    const double scale = std::max(1.0, s(0));
    if (s(m - 1) > 1e-7 * scale) continue;
    int mult = 0;
    for (int k = 0; k < m; ++k)
      if (s(k) < 1e-6 * scale) ++mult;
    out.multiplicities.push_back(mult);
    const double focus = -1.0 / (rstar - gen.r);
    for (int k = 0; k < mult; ++k) out.jacobian_foci.push_back(focus);
  }
  std::sort(out.jacobian_foci.begin(), out.jacobian_foci.end());
  if (out.jacobian_foci.size() != out.jet_foci.size()) {
    out.max_difference = std::numeric_limits<double>::infinity();
    out.match = false;
    return out;
  }
  for (std::size_t i = 0; i < out.jet_foci.size(); ++i)
    out.max_difference = std::max(out.max_difference, std::abs(out.jet_foci[i] - out.jacobian_foci[i]) /
                                                          std::max(1.0, std::abs(out.jet_foci[i])));
  out.match = out.max_difference < tol;
  return out;
}

}  // namespace ljet
