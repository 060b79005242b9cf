#include <doctest.h>

#include <random>

#include "ljet/connection.hpp"
#include "ljet/errors.hpp"
#include "oracle.hpp"
#include "random_jet.hpp"

using namespace ljet;
using ljet::testing::as_matrix;
using ljet::testing::as_vector;
using ljet::testing::oracle;

namespace {

HypersurfaceJet example_n4() {
  HypersurfaceJet j = HypersurfaceJet::zero(4);
  j.lambda << 1, 0, 0, -1;
  j.harmonic_normalized = true;
  j.nu_ab = Matrix::Identity(2, 2);
  return j;
}

HypersurfaceJet oracle_m3() {
  const auto& in = oracle()["forms_m3"]["input"];
  HypersurfaceJet j = HypersurfaceJet::zero(5, as_matrix(in["g"]));
  j.lambda = as_matrix(in["lambda"]);
  j.harmonic_normalized = true;
  j.nu = in["nu"].get<double>();
  j.nu_ab = as_matrix(in["nu_ab"]);
  j.rho_a = as_vector(in["rho_a"]);
  j.rho_ab = as_matrix(in["rho_ab"]);
  j.curvature.C_11a = as_vector(in["C_11a"]);
  j.curvature.C_1ab = as_matrix(in["C_1ab"]);
  j.curvature.C1_11a = as_vector(in["C1_11a"]);
  j.curvature.C1_1ab = as_matrix(in["C1_1ab"]);
  return j;
}

}  // namespace

TEST_CASE("wedge") {
  Vector a(3), b(3);
  a << 1, 0, 0;
  b << 0, 1, 0;
  const Matrix w = wedge(a, b);
  CHECK(w(0, 1) == doctest::Approx(0.5));
  CHECK(max_abs(Matrix(w + w.transpose())) == 0.0);
}

TEST_CASE("n=4 example: block solve against the dense oracle") {
  const auto& o = oracle()["forms_n4"];
  const auto j = example_n4();
  // H = 0 here, so the full precondition rejects it
  CHECK_THROWS_AS(solve_normalizing_forms(j), DegenerateError);
  try {
    solve_normalizing_forms(j);
  } catch (const DegenerateError& e) {
    CHECK(e.kind() == Degeneracy::kSpecialType);
  }
  const auto f = solve_coefficient_system(j);
  CHECK(max_abs(Matrix(f.tau_ab - as_matrix(o["tau_ab"]))) < 1e-14);
  CHECK(max_abs(Matrix(f.sigma_ab - as_matrix(o["sigma_ab"]))) < 1e-14);
  CHECK(max_abs(f.sigma_a) + max_abs(f.tau_a) == 0.0);
  CHECK(f.residual < 1e-14);
}

TEST_CASE("m=3 rational case against the symbolic solve") {
  const auto& o = oracle()["forms_m3"];
  const auto j = oracle_m3();
  const auto f = solve_normalizing_forms(j);
  const double sc = 1e-12 * std::max(1.0, as_matrix(o["tau_ab"]).cwiseAbs().maxCoeff());
  CHECK(max_abs(Vector(f.sigma_a - as_vector(o["sigma_a"]))) < sc);
  CHECK(max_abs(Vector(f.tau_a - as_vector(o["tau_a"]))) < sc);
  CHECK(max_abs(Matrix(f.sigma_ab - as_matrix(o["sigma_ab"]))) < sc);
  CHECK(max_abs(Matrix(f.tau_ab - as_matrix(o["tau_ab"]))) < sc);
  CHECK(normalizing_residual(j, f) < 1e-12);
}

TEST_CASE("homogeneous system gives zero forms") {
  auto j = example_n4();
  j.nu = 1.0;  // H nondegenerate
  j.nu_ab.setZero();
  const auto f = solve_normalizing_forms(j);
  CHECK(max_abs(f.sigma_ab) + max_abs(f.tau_ab) + max_abs(f.sigma_a) + max_abs(f.tau_a) == 0.0);
}

TEST_CASE("solve preconditions") {
  std::mt19937_64 rng(12);
  auto j = testing::random_jet(5, rng, {.reduced = false});
  try {
    solve_normalizing_forms(j);
    FAIL("expected a degenerate error");
  } catch (const DegenerateError& e) {
    CHECK(e.kind() == Degeneracy::kFrameNotReduced);
  }
  auto u = testing::random_jet(5, rng);
  u.lambda.setZero();
  try {
    solve_normalizing_forms(u);
    FAIL("expected a degenerate error");
  } catch (const DegenerateError& e) {
    CHECK(e.kind() == Degeneracy::kUmbilical);
  }
}

TEST_CASE("random reduced jets solve with small residual") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 40; ++k) {
    const auto j = testing::random_jet(4 + k % 4, rng);
    const auto f = solve_normalizing_forms(j);
    CHECK(f.residual < 1e-9);
  }
}

TEST_CASE("torsion") {
  auto j = example_n4();
  NormalizingForms f;
  f.sigma_a = f.tau_a = Vector::Zero(2);
  f.sigma_ab = Matrix::Zero(2, 2);
  f.tau_ab.resize(2, 2);
  f.tau_ab << 0, 1, -1, 0;
  const auto t = gamma2_torsion(j, f);
  CHECK(t.torsion_1_ab(0, 1) == doctest::Approx(1.0));
  CHECK(max_abs(Matrix(t.torsion_a_1b - j.lambda)) == 0.0);

  f.tau_ab << 1, 2, 2, 3;
  CHECK(max_abs(gamma2_torsion(j, f).torsion_1_ab) == 0.0);

  HypersurfaceJet z = HypersurfaceJet::zero(4);
  z.harmonic_normalized = true;
  f.tau_ab.setZero();
  CHECK(gamma2_torsion(z, f).vanishes(0.0));
}

TEST_CASE("gamma_2 curvature") {
  SUBCASE("zero inputs") {
    HypersurfaceJet z = HypersurfaceJet::zero(5);
    z.harmonic_normalized = true;
    NormalizingForms f{Vector::Zero(3), Vector::Zero(3), Matrix::Zero(3, 3), Matrix::Zero(3, 3), 0};
    const auto c = gamma2_curvature(z, f);
    CHECK(max_abs(c.R1_11a) + max_abs(c.R1_1ab) + c.Ra_b1c.max_abs() + c.Ra_bce.max_abs() == 0.0);
  }
  SUBCASE("single surviving term") {
    auto j = example_n4();
    NormalizingForms f{Vector::Zero(2), Vector::Zero(2), Matrix::Zero(2, 2), Matrix::Zero(2, 2), 0};
    f.tau_a(0) = 1.0;
    const auto c = gamma2_curvature(j, f);
    const Vector expect = -(j.lambda * f.tau_a);  // h_a^c tau_c with g = I
    CHECK(max_abs(Vector(c.R1_11a - expect)) < 1e-15);
  }
  SUBCASE("closed form equals the wedge expansion") {
    std::mt19937_64 rng(44);
    for (int k = 0; k < 20; ++k) {
      const auto j = testing::random_jet(4 + k % 4, rng);
      const auto f = solve_normalizing_forms(j);
      const auto a = gamma2_curvature(j, f);
      const auto b = gamma2_curvature_from_forms(j, f);
      CHECK(max_difference(a, b) < 1e-10);
      CHECK(max_abs(Matrix(a.R1_1ab + a.R1_1ab.transpose())) < 1e-12);
      CHECK(a.Ra_bce.last_pair_skew_defect() < 1e-12);
    }
  }
}

TEST_CASE("gamma_1 curvature") {
  std::mt19937_64 rng(45);
  auto j = testing::random_jet(5, rng);
  const auto f = solve_normalizing_forms(j);
  try {
    gamma1_curvature(j, f);
    FAIL("expected missing data");
  } catch (const DegenerateError& e) {
    CHECK(e.kind() == Degeneracy::kMissingData);
  }
  j.phi1 = 0.0;
  j.phi_a = Vector::Zero(3);
  const auto g0 = gamma1_curvature(j, f);
  CHECK_FALSE(g0.weyl_terms_complete);
  CHECK(max_abs(Matrix(g0.omega_11 + g0.omega_11.transpose())) < 1e-15);
  for (const auto& w : g0.omega_a1) CHECK(max_abs(Matrix(w + w.transpose())) < 1e-15);
  // phi enters linearly and only through one block family
  j.phi1 = 1.0;
  const auto g1 = gamma1_curvature(j, f);
  double moved = 0.0, fixed = 0.0;
  for (int a = 0; a < 3; ++a) {
    moved += max_abs(Matrix(g1.omega_a1[a] - g0.omega_a1[a]));
    fixed += max_abs(Matrix(g1.omega_1a[a] - g0.omega_1a[a]));
  }
  fixed += max_abs(Matrix(g1.omega_11 - g0.omega_11));
  CHECK(moved > 0.0);
  CHECK(fixed == 0.0);

  // flat slice with all forms zero gives zero curvature
  HypersurfaceJet z = HypersurfaceJet::zero(4);
  z.harmonic_normalized = true;
  z.phi1 = 0.0;
  z.phi_a = Vector::Zero(2);
  NormalizingForms zf{Vector::Zero(2), Vector::Zero(2), Matrix::Zero(2, 2), Matrix::Zero(2, 2), 0};
  const auto gz = gamma1_curvature(z, zf);
  CHECK(max_abs(gz.omega_11) == 0.0);
}

TEST_CASE("integrability") {
  auto j = oracle_m3();
  const auto f = solve_normalizing_forms(j);
  const auto r = integrability(j, f);
  CHECK(r.integrable_S == r.integrable_Stilde);
  CHECK(r.identity_residual < 1e-12);

  // symmetric tau_ab: pick rho_ab so that the solve lands on it
  std::mt19937_64 rng(46);
  int agree = 0;
  for (int k = 0; k < 30; ++k) {
    const auto jj = testing::random_jet(4 + k % 4, rng);
    const auto ff = solve_normalizing_forms(jj);
    const auto rr = integrability(jj, ff);
    agree += rr.integrable_S == rr.integrable_Stilde;
    CHECK(rr.identity_residual < 1e-9);
  }
  CHECK(agree == 30);

  HypersurfaceJet s = example_n4();
  s.nu = 1.0;
  NormalizingForms sym{Vector::Zero(2), Vector::Zero(2), Matrix::Zero(2, 2), Matrix::Identity(2, 2), 0};
  sym.sigma_ab = s.lambda;  // X = K sigma symmetric
  auto rs = integrability(s, sym);
  CHECK(rs.integrable_S);
  CHECK(rs.integrable_Stilde);
}

TEST_CASE("g2 structure equations") {
  const Matrix D1 = Vector((Vector(3) << 1, 2, 3).finished()).asDiagonal();
  const Matrix D2 = Vector((Vector(3) << -1, 0.5, 2).finished()).asDiagonal();
  const auto c = g2_structure_check(D1, D2, Matrix::Zero(3, 3));
  CHECK(c.linear_residual < 1e-9);
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const auto r = g2_structure_check(3, seed, 1e-3);
    CHECK(r.ok(1e-8));
  }
  CHECK(g2_structure_check(1, 3).ok(1e-9));
}
