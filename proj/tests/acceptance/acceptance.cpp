// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ljet/cartan.hpp"
#include "ljet/connection.hpp"
#include "ljet/errors.hpp"
#include "ljet/flat_model.hpp"
#include "ljet/gauge.hpp"
#include "ljet/invariants.hpp"
#include "ljet/pipeline.hpp"
#include "random_jet.hpp"

using namespace ljet;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// jet with prescribed pencil roots: g = L L^T, lambda = L diag(s) L^T
HypersurfaceJet jet_with_roots(const Vector& s, std::mt19937_64& rng) {
  const int m = static_cast<int>(s.size());
  const Matrix g = testing::random_spd(m, rng);
  const Matrix L = Eigen::LLT<Matrix>(g).matrixL();
  HypersurfaceJet j = HypersurfaceJet::zero(m + 2, g);
  j.lambda = L * s.asDiagonal() * L.transpose();
  j.lambda = 0.5 * (j.lambda + j.lambda.transpose());
  return j;
}

Outcome cartan() {
  const auto t0 = Clock::now();
  bool ok = true;
  int runs = 0;
  for (unsigned seed = 1; seed <= 5; ++seed)
    for (int n = 4; n <= 12; ++n) {
      const auto r = characters(n, seed);
      ++runs;
      ok = ok && r.s == std::vector<int>(n - 2, 1) && r.Q == (n - 1) * (n - 2) / 2 && r.N == r.Q &&
           r.involutive;
    }
  const double dt = seconds_since(t0);
  return {ok && dt < 1.0, std::to_string(runs) + " runs (n=4..12, 5 seeds), " + fmt("%.3f s", dt)};
}

Outcome real_foci() {
  std::mt19937_64 rng(2024);
  double worst_imag = 0.0, worst_match = 0.0, worst_pole = 0.0;
  int count = 0;
  for (int m = 2; m <= 5; ++m)
    for (int k = 0; k < 1000; ++k) {
      HypersurfaceJet j = HypersurfaceJet::zero(m + 2, testing::random_spd(m, rng));
      j.lambda = testing::random_symmetric(m, rng);
      const FociReport f = singular_points(j);
      Eigen::EigenSolver<Matrix> es(Matrix(j.g.inverse() * j.lambda), false);
      std::vector<double> re;
      for (int i = 0; i < m; ++i) {
        const auto z = es.eigenvalues()(i);
        worst_imag = std::max(worst_imag, std::abs(z.imag()));
        re.push_back(z.real());
      }
      std::sort(re.begin(), re.end());
      double mean = 0.0;
      for (int i = 0; i < m; ++i) {
        worst_match = std::max(worst_match, std::abs(re[i] - f.s[i]) / std::max(1.0, std::abs(f.s[i])));
        mean += f.s[i];
      }
      mean /= m;
      worst_pole = std::max(worst_pole, std::abs(f.pole_coordinate - mean));
      ++count;
    }
  const bool ok = worst_imag < 1e-12 && worst_match < 1e-9 && worst_pole < 1e-10;
  return {ok, std::to_string(count) + " jets, max |Im| " + fmt("%.2e", worst_imag) +
                  ", root mismatch " + fmt("%.2e", worst_match) + ", pole vs mean " +
                  fmt("%.2e", worst_pole)};
}

Outcome umbilical_cones() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> ang(0.4, 1.2), rad(0.6, 2.5), vert(-0.5, 0.5);
  bool ok = true;
  double worst_h = 0.0, worst_mu_a = 0.0;
  int count = 0;
  for (int n = 4; n <= 7; ++n)
    for (int k = 0; k < 5; ++k) {
      Vector v(n);
      for (int i = 0; i < n; ++i) v(i) = vert(rng);
      const auto spec = ModelSpec::cone(n, v);
      Vector u(n - 2);
      for (int i = 0; i < n - 2; ++i) u(i) = ang(rng);
      const HypersurfaceJet j = generate_jet(spec, {u, rad(rng)});
      const auto h = fundamental_tensor(j);
      worst_h = std::max(worst_h, max_abs(h.h_ab));
      const auto a = analyze(j);
      ok = ok && a.classification == "umbilical" &&
           a.result.foci.multiplicities == std::vector<int>{n - 2};
      if (a.result.umbilical_mu_a) worst_mu_a = std::max(worst_mu_a, max_abs(*a.result.umbilical_mu_a));
      worst_mu_a = std::max(worst_mu_a, max_abs(mu_invariants(j).mu_a));
      ++count;
    }
  const double dt = seconds_since(t0);
  ok = ok && worst_h < 1e-8 && worst_mu_a < 1e-8 && dt < 10.0;
  return {ok, std::to_string(count) + " cone jets (n=4..7), max |h| " + fmt("%.2e", worst_h) +
                  ", max |mu_a| " + fmt("%.2e", worst_mu_a) + ", " + fmt("%.2f s", dt)};
}

Outcome pole_regular() {
  std::mt19937_64 rng(44);
  std::normal_distribution<double> nd;
  int right = 0;
  for (int k = 0; k < 100; ++k) {
    const int m = 3 + k % 3;
    Vector s(m);
    for (int i = 0; i < m; ++i) s(i) = nd(rng);
    const bool singular = k % 2 == 0;
    if (singular) s(0) = s.tail(m - 1).mean();  // one focus at the pole
    const auto j = jet_with_roots(s, rng);
    const auto p = pole_regularity(j);
    right += p.regular != singular;
  }
  return {right == 100, std::to_string(right) + "/100 verdicts correct"};
}

Outcome h_affinor() {
  std::mt19937_64 rng(55);
  double tr = 0.0, diag = 0.0, prop = 0.0;
  for (int k = 0; k < 400; ++k) {
    const int n = 4 + k % 4;
    const auto j = testing::random_jet(n, rng);
    const double mu = mu_invariants(j).mu;
    const auto H = H_affinor(j, mu);
    const Matrix& Hm = H.H_mixed;
    tr = std::max(tr, std::abs(Hm.trace()) / std::max(1.0, Hm.norm()));
    // eigenbasis of the self-adjoint pencil (g, h) diagonalizes H too
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(j.lambda, j.g);
    const Matrix V = es.eigenvectors();
    const Matrix D = V.inverse() * Hm * V;
    Matrix off = D;
    off.diagonal().setZero();
    diag = std::max(diag, max_abs(off) / std::max(1.0, max_abs(D)));
  }
  for (int k = 0; k < 100; ++k) {
    const auto j = testing::random_jet(4, rng);
    const double mu = mu_invariants(j).mu;
    const auto H = H_affinor(j, mu);
    const Matrix h = fundamental_tensor(j).h_mixed;
    prop = std::max(prop, (H.H_mixed - (j.nu / (2 * mu)) * h).norm() / H.H_mixed.norm());
  }
  return {tr < 1e-10 && diag < 1e-9 && prop < 1e-10,
          "trace " + fmt("%.2e", tr) + ", diagonalization " + fmt("%.2e", diag) +
              ", n=4 proportionality " + fmt("%.2e", prop)};
}

Outcome normalizing_solve() {
  std::mt19937_64 rng(66);
  double worst = 0.0;
  int solved = 0;
  for (int m = 2; m <= 5; ++m)
    for (int k = 0; k < 100; ++k) {
      const auto j = testing::random_jet(m + 2, rng);
      const auto f = solve_normalizing_forms(j);
      worst = std::max(worst, std::max(f.residual, normalizing_residual(j, f)));
      ++solved;
    }
  // degenerate H: one eigenvalue k of h with k^2 + (nu/2mu) k - mu = 0
  int rejected = 0;
  for (int k = 0; k < 20; ++k) {
    const int m = 2 + k % 4;
    auto j = testing::random_jet(m + 2, rng);
    const Matrix hm = j.g.inverse() * j.lambda;
    Eigen::EigenSolver<Matrix> es(hm, false);
    double kk = es.eigenvalues()(0).real();
    for (int i = 1; i < m; ++i)
      if (std::abs(es.eigenvalues()(i).real()) > std::abs(kk)) kk = es.eigenvalues()(i).real();
    const double mu = mu_invariants(j).mu;
    j.nu = 2 * mu * (mu - kk * kk) / kk;
    const auto a = analyze(j);
    rejected += a.classification == "special-type";
  }
  return {worst < 1e-9 && rejected == 20,
          std::to_string(solved) + " solves, max residual " + fmt("%.2e", worst) + ", special-type " +
              std::to_string(rejected) + "/20"};
}

Outcome invariant_point_check() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  int complex_cases = 0;
  for (int k = 0; k < 400; ++k) {
    const auto j = testing::random_jet(4 + k % 4, rng);
    const auto f = solve_normalizing_forms(j);
    const auto p = invariant_point(j.metric(), f.tau_ab);
    std::complex<double> sum = 0.0;
    bool cplx = false;
    for (const auto& z : p.congruence_foci) {
      sum += z;
      cplx = cplx || z.imag() != 0.0;
    }
    complex_cases += cplx;
    const double scale = std::max(1.0, max_abs(f.tau_ab));
    worst = std::max(worst, std::abs(sum + double(j.m()) * p.tau) / scale);
  }
  int real = 0;
  for (int k = 0; k < 100; ++k) {
    const int m = 2 + k % 4;
    const Matrix g = testing::random_spd(m, rng);
    const Matrix t = testing::random_symmetric(m, rng);
    const auto p = invariant_point(ScreenMetric(g), t);
    bool all_real = true;
    for (const auto& z : p.congruence_foci) all_real = all_real && std::abs(z.imag()) < 1e-12;
    real += all_real;
  }
  return {worst < 1e-9 && real == 100,
          "sum residual " + fmt("%.2e", worst) + " (" + std::to_string(complex_cases) +
              " complex cases), symmetric real " + std::to_string(real) + "/100"};
}

Outcome integrability_check() {
  std::mt19937_64 rng(88);
  int agree = 0, total = 0, both_true = 0;
  double worst = 0.0;
  for (int k = 0; k < 400; ++k) {
    const auto j = testing::random_jet(4 + k % 4, rng);
    const auto f = solve_normalizing_forms(j);
    const auto r = integrability(j, f);
    agree += r.integrable_S == r.integrable_Stilde;
    worst = std::max(worst, r.identity_residual);
    ++total;
  }
  // jets built backwards from a symmetric tau_ab: pick tau, rho_ab, nu_ab,
  // then sigma_ab from the second relation and C_1ab from the first
  for (int k = 0; k < 100; ++k) {
    const int m = 2 + k % 4;
    auto j = testing::random_jet(m + 2, rng);
    const double mu = mu_invariants(j).mu;
    const Matrix K = (j.g.inverse() * j.lambda).transpose();
    const Matrix T = testing::random_symmetric(m, rng);
    j.rho_ab = testing::random_symmetric(m, rng);
    j.nu_ab = testing::random_symmetric(m, rng);
    j.curvature.C1_1ab.setZero();
    const Matrix S = K * T + (j.nu / (2 * mu)) * T + j.rho_ab / (2 * mu);
    j.curvature.C_1ab = -K * S - mu * T - j.nu_ab;
    NormalizingForms f;
    try {
      f = solve_normalizing_forms(j);
    } catch (const Error&) {
      continue;
    }
    const auto r = integrability(j, f);
    agree += r.integrable_S == r.integrable_Stilde;
    both_true += r.integrable_S && r.integrable_Stilde;
    worst = std::max(worst, r.identity_residual);
    ++total;
  }
  return {agree == total && worst < 1e-9,
          std::to_string(agree) + "/" + std::to_string(total) + " agree (" + std::to_string(both_true) +
              " integrable), identity residual " + fmt("%.2e", worst)};
}

Outcome gauge_laws() {
  std::mt19937_64 rng(99);
  double weight_err = 0.0, focus = 0.0, comp = 0.0;
  std::string missing;
  for (int k = 0; k < 10; ++k) {
    const auto j = testing::random_jet(4 + k % 4, rng);
    const int m = j.m();
    GaugeParams scale = GaugeParams::zero(m);
    scale.pi00 = 0.25;
    scale.pi11 = -0.15;
    for (const char* q : {"mu", "nu", "h_ab", "tau_a"}) {
      try {
        const auto w = check_weight(q, j, scale, 0.5);
        weight_err = std::max(weight_err, std::abs(w.measured - w.expected));
      } catch (const Error& e) {
        missing += std::string(q) + ": " + e.what() + "; ";
      }
    }
    GaugeParams p = GaugeParams::zero(m);
    p.pi00 = 0.1;
    p.pi11 = 0.2;
    p.pi01 = 0.15;
    p.pi_ab = testing::random_matrix(m, rng) * 0.2;
    p.pi_a0 = testing::random_vector(m, rng) * 0.2;
    p.pi_a1 = testing::random_vector(m, rng) * 0.2;
    p.pi_n0 = 0.1;
    focus = std::max(focus, check_focus_invariance(j, p, 0.5));
    const auto full = integrate_gauge_flow(j, p, 0.5, 1000);
    // different step size from the full flow, so this is not a replay
    const auto half = integrate_state(full.initial, p, 0.25, 1000);
    comp = std::max(comp, state_difference(integrate_state(half, p, 0.25, 1000), full.state));
  }
  const bool ok = missing.empty() && weight_err < 1e-6 && focus < 1e-8 && comp < 1e-9;
  return {ok, "weight error " + fmt("%.2e", weight_err) + ", focus drift " + fmt("%.2e", focus) +
                  ", composition " + fmt("%.2e", comp) + (missing.empty() ? "" : ", skipped: " + missing)};
}

Outcome development() {
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> a0(0.5, 2.6), a1(0.3, 2.8), rr(-0.2, 0.25), len(0.3, 0.8);
  Vector axes(3);
  axes << 1.0, 1.5, 2.2;
  const auto spec = ModelSpec::ellipsoid(4, axes);
  double angle = 0.0, geo = 0.0, control = 1e300;
  int used = 0;
  while (used < 50) {
    Vector u(2);
    u << a0(rng), a1(rng);
    const ModelGenerator gen{u, rr(rng)};
    const double r_end = gen.r + len(rng);
    // the ruled segment must stay clear of the foci
    bool clear = true;
    for (double s : analytic_foci(spec, u, gen.r))
      for (double r : {0.0, r_end - gen.r})
        if (std::abs(1.0 - r * s) < 0.2) clear = false;
    if (!clear) continue;
    try {
      const auto d = develop_along_generator(spec, gen, r_end);
      angle = std::max(angle, d.max_principal_angle);
      geo = std::max(geo, geodesic_residual(spec, gen, r_end));
      control = std::min(control, geodesic_residual(spec, gen, r_end, 0.3));
      ++used;
    } catch (const DegenerateError&) {
    }
  }
  return {angle < 1e-8 && geo < 1e-8 && control > 1e-2,
          "50 generators, max angle " + fmt("%.2e", angle) + ", geodesic " + fmt("%.2e", geo) +
              ", min control " + fmt("%.2e", control)};
}

Outcome richardson() {
  Vector axes(3);
  axes << 1.0, 1.5, 2.2;
  Vector vertex(4);
  vertex << 0.1, 0.2, -0.3, 0.5;
  Vector u(2);
  u << 0.9, 0.4;
  const double re = lambda_richardson_ratio(ModelSpec::ellipsoid(4, axes), {u, 0.3}, 1e-2);
  const double rc = lambda_richardson_ratio(ModelSpec::cone(4, vertex), {u, 1.2}, 1e-2);
  auto in = [](double x) { return x >= 3.5 && x <= 4.5; };
  return {in(re) && in(rc), "null-ruled " + fmt("%.4f", re) + ", null-cone " + fmt("%.4f", rc)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"cartan characters and involutivity", cartan},
      {"real foci and harmonic pole", real_foci},
      {"umbilical null cones", umbilical_cones},
      {"pole regularity verdicts", pole_regular},
      {"H affinor properties", h_affinor},
      {"normalizing form solve", normalizing_solve},
      {"invariant point", invariant_point_check},
      {"integrability equivalence", integrability_check},
      {"gauge laws", gauge_laws},
      {"development along rulings", development},
      {"finite-difference convergence", richardson},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
