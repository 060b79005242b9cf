#include <doctest.h>

#include <random>

#include "ljet/errors.hpp"
#include "ljet/tensor_core.hpp"
#include "oracle.hpp"
#include "random_jet.hpp"

using namespace ljet;
using ljet::testing::as_matrix;
using ljet::testing::oracle;

TEST_CASE("metric must be symmetric positive definite") {
  Matrix g(2, 2);
  g << 1, 0, 0, -1;
  CHECK_THROWS_AS(ScreenMetric{g}, PreconditionError);
  g << 1, 0.5, 0, 1;
  CHECK_THROWS_AS(ScreenMetric{g}, PreconditionError);
  CHECK_NOTHROW(ScreenMetric::identity(3));
}

TEST_CASE("raising an index") {
  std::mt19937_64 rng(3);
  const Matrix t = testing::random_matrix(3, rng);
  CHECK(max_abs(Matrix(raise_index(ScreenMetric::identity(3), t) - t)) == 0.0);

  Matrix g(2, 2), t2(2, 2);
  g << 2, 0, 0, 2;
  t2 << 2, 0, 0, 4;
  const Matrix expect = as_matrix(oracle()["raise_diag"]);
  CHECK(max_abs(Matrix(raise_index(ScreenMetric(g), t2) - expect)) < 1e-15);

  // lower undoes raise
  const ScreenMetric G(testing::random_spd(4, rng));
  const Matrix s = testing::random_symmetric(4, rng);
  CHECK(max_abs(Matrix(lower_index(G, raise_index(G, s)) - s)) < 1e-12);
}

TEST_CASE("contract_upper sums over the upper slot") {
  Matrix T(2, 2);
  T << 1, 2, 3, 4;  // T^a_b with a the row
  Vector v(2);
  v << 1, -1;
  const Vector r = contract_upper(T, v);
  CHECK(r(0) == doctest::Approx(1 - 3));
  CHECK(r(1) == doctest::Approx(2 - 4));
}

TEST_CASE("pencil roots") {
  const auto& o = oracle();
  SUBCASE("diagonal") {
    Matrix lam = Vector((Vector(3) << 1, 2, 4).finished()).asDiagonal();
    const auto e = pencil_eigen(ScreenMetric::identity(3), lam);
    REQUIRE(e.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(e[i].value == doctest::Approx(o["diag124"]["foci"][i].get<double>()));
  }
  SUBCASE("off-diagonal 2x2") {
    Matrix lam(2, 2);
    lam << 0, 1, 1, 0;
    const auto e = pencil_eigen(ScreenMetric::identity(2), lam);
    CHECK(e[0].value == doctest::Approx(o["swap_foci"][0].get<double>()));
    CHECK(e[1].value == doctest::Approx(o["swap_foci"][1].get<double>()));
  }
  SUBCASE("umbilical pencil") {
    std::mt19937_64 rng(11);
    const Matrix g = testing::random_spd(4, rng);
    for (const auto& p : pencil_eigen(ScreenMetric(g), 2.5 * g)) CHECK(p.value == doctest::Approx(2.5).epsilon(1e-12));
  }
  SUBCASE("random m=5 against characteristic polynomial roots") {
    const Matrix g = as_matrix(o["pencil_m5"]["g"]);
    const Matrix lam = as_matrix(o["pencil_m5"]["lambda"]);
    const auto e = pencil_eigen(ScreenMetric(g, 1e-9), lam);
    for (int i = 0; i < 5; ++i)
      CHECK(std::abs(e[i].value - o["pencil_m5"]["roots"][i].get<double>()) < 1e-10);
    for (const auto& p : e) {
      // lambda v = s g v
      CHECK(max_abs(Vector(lam * p.vector - p.value * g * p.vector)) < 1e-10);
      Eigen::Index k;
      p.vector.cwiseAbs().maxCoeff(&k);
      CHECK(p.vector(k) > 0);
    }
  }
}

TEST_CASE("alternation and symmetrization") {
  Matrix t(2, 2);
  t << 0, 1, 3, 0;
  CHECK(max_abs(Matrix(alternate(t) - as_matrix(oracle()["alternate_example"]))) < 1e-15);
  Matrix s(2, 2);
  s << 5, 2, 2, 5;
  CHECK(max_abs(alternate(s)) == 0.0);
  CHECK(max_abs(Matrix(alternate(t) + symmetrize(t) - t)) == 0.0);
}

TEST_CASE("relative determinant is scale free") {
  std::mt19937_64 rng(5);
  const Matrix a = testing::random_matrix(4, rng);
  CHECK(relative_det(a) == doctest::Approx(relative_det(Matrix(1e6 * a))).epsilon(1e-9));
  CHECK(relative_det(Matrix::Zero(3, 3)) == 0.0);
  Matrix sing = a;
  sing.col(3) = sing.col(0) + sing.col(1);
  CHECK(relative_det(sing) < 1e-14);
}

TEST_CASE("rank-3 and rank-4 arrays") {
  std::mt19937_64 rng(8);
  Tensor3 t(3);
  for (auto& x : t.data()) x = std::normal_distribution<double>()(rng);
  CHECK(t.symmetry_defect() > 1e-3);
  const Tensor3 s = t.symmetrized();
  CHECK(s.symmetry_defect() < 1e-15);
  CHECK(s(0, 1, 2) == doctest::Approx((t(0, 1, 2) + t(0, 2, 1) + t(1, 0, 2) + t(1, 2, 0) + t(2, 0, 1) + t(2, 1, 0)) / 6));

  Tensor4 w(2);
  w(0, 1, 0, 1) = 1.0;
  CHECK(w.last_pair_skew_defect() == doctest::Approx(1.0));
  w(0, 1, 1, 0) = -1.0;
  CHECK(w.last_pair_skew_defect() == 0.0);
}
