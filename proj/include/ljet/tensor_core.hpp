#pragma once

// Dense small-tensor algebra on the screen space.
//
// Screen indices run a = 2..n-1 in the geometric formulas; storage is
// 0-based, so array slot i holds screen index i + 2.  All other modules use
// this map and never shift indices themselves.
//
// Mixed tensors (affinors) T^a_b are stored as matrices with the upper index
// as the row: T(a, b) = T^a_b.  Raising a covariant tensor is then the matrix
// product g^{-1} t.

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace ljet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

constexpr int kScreenIndexOffset = 2;

class ScreenMetric {
 public:
  // Throws PreconditionError("metric not positive definite") if g is not
  // symmetric (within symmetry_tol, relative to ||g||) or not SPD.
  explicit ScreenMetric(const Matrix& g, double symmetry_tol = 1e-12);

  static ScreenMetric identity(int m) { return ScreenMetric(Matrix::Identity(m, m)); }

  int m() const { return static_cast<int>(g_.rows()); }
  const Matrix& g() const { return g_; }
  const Matrix& inv() const { return inv_; }

 private:
  Matrix g_;
  Matrix inv_;
};

// Fully symmetric or general rank-3 array with m^3 dense storage.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int m) : m_(m), data_(static_cast<std::size_t>(m) * m * m, 0.0) {}

  int m() const { return m_; }
  double& operator()(int a, int b, int c) { return data_[index(a, b, c)]; }
  double operator()(int a, int b, int c) const { return data_[index(a, b, c)]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  // Largest |T_abc - T_sigma(abc)| over the 6 permutations.
  double symmetry_defect() const;
  Tensor3 symmetrized() const;
  // Largest |T_abc + T_acb| (skew in the last pair).
  double last_pair_skew_defect() const;
  double max_abs() const;

 private:
  std::size_t index(int a, int b, int c) const {
    return (static_cast<std::size_t>(a) * m_ + b) * m_ + c;
  }
  int m_ = 0;
  std::vector<double> data_;
};

class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int m) : m_(m), data_(static_cast<std::size_t>(m) * m * m * m, 0.0) {}

  int m() const { return m_; }
  double& operator()(int a, int b, int c, int d) { return data_[index(a, b, c, d)]; }
  double operator()(int a, int b, int c, int d) const { return data_[index(a, b, c, d)]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  // Largest |T_abcd + T_abdc|.
  double last_pair_skew_defect() const;
  double max_abs() const;

 private:
  std::size_t index(int a, int b, int c, int d) const {
    return ((static_cast<std::size_t>(a) * m_ + b) * m_ + c) * m_ + d;
  }
  int m_ = 0;
  std::vector<double> data_;
};

struct EigenPair {
  double value;
  Vector vector;
};

// g^{ac} t_cb.  The result is g-self-adjoint when t is symmetric.
Matrix raise_index(const ScreenMetric& g, const Matrix& t);
// g_ac T^c_b.
Matrix lower_index(const ScreenMetric& g, const Matrix& mixed);
// T_a^b v_b contracted on the upper index: (T^T v)_a = T^b_a v_b.
Vector contract_upper(const Matrix& mixed, const Vector& covector);

// Roots of det(g^{-1} lambda - s I) = 0 with eigenvectors, ascending.
// Eigenvector sign is fixed so the largest-magnitude component is positive.
std::vector<EigenPair> pencil_eigen(const ScreenMetric& g, const Matrix& lambda);

// (t - t^T) / 2 and (t + t^T) / 2.
Matrix alternate(const Matrix& t);
Matrix symmetrize(const Matrix& t);

// |det A| / ||A||_2^m; zero for the zero matrix.  Scale-free singularity
// measure used for every nondegeneracy test.
double relative_det(const Matrix& a);

double max_abs(const Matrix& a);
double max_abs(const Vector& v);

}  // namespace ljet
