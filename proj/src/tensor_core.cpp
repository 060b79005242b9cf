#include "ljet/tensor_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "ljet/errors.hpp"

namespace ljet {

ScreenMetric::ScreenMetric(const Matrix& g, double symmetry_tol) : g_(g) {
  if (g.rows() != g.cols() || g.rows() == 0) {
    throw DimensionError("screen metric must be a non-empty square matrix");
  }
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > symmetry_tol * scale) {
    throw PreconditionError("metric not symmetric");
  }
  g_ = symmetrize(g);
  Eigen::LLT<Matrix> llt(g_);
  if (llt.info() != Eigen::Success) {
    throw PreconditionError("metric not positive definite");
  }
  inv_ = llt.solve(Matrix::Identity(g_.rows(), g_.cols()));
  inv_ = symmetrize(inv_);
}

double Tensor3::symmetry_defect() const {
  double worst = 0.0;
  for (int a = 0; a < m_; ++a)
    for (int b = 0; b < m_; ++b)
      for (int c = 0; c < m_; ++c) {
        const double v = (*this)(a, b, c);
        const std::array<double, 5> others = {(*this)(a, c, b), (*this)(b, a, c), (*this)(b, c, a),
                                              (*this)(c, a, b), (*this)(c, b, a)};
        for (double o : others) worst = std::max(worst, std::abs(v - o));
      }
  return worst;
}

Tensor3 Tensor3::symmetrized() const {
  Tensor3 out(m_);
  for (int a = 0; a < m_; ++a)
    for (int b = 0; b < m_; ++b)
      for (int c = 0; c < m_; ++c) {
        out(a, b, c) = ((*this)(a, b, c) + (*this)(a, c, b) + (*this)(b, a, c) + (*this)(b, c, a) +
                        (*this)(c, a, b) + (*this)(c, b, a)) /
                       6.0;
      }
  return out;
}

double Tensor3::last_pair_skew_defect() const {
  double worst = 0.0;
  for (int a = 0; a < m_; ++a)
    for (int b = 0; b < m_; ++b)
      for (int c = 0; c < m_; ++c)
        worst = std::max(worst, std::abs((*this)(a, b, c) + (*this)(a, c, b)));
  return worst;
}

double Tensor3::max_abs() const {
  double worst = 0.0;
  for (double v : data_) worst = std::max(worst, std::abs(v));
  return worst;
}

double Tensor4::last_pair_skew_defect() const {
  double worst = 0.0;
  for (int a = 0; a < m_; ++a)
    for (int b = 0; b < m_; ++b)
      for (int c = 0; c < m_; ++c)
        for (int d = 0; d < m_; ++d)
          worst = std::max(worst, std::abs((*this)(a, b, c, d) + (*this)(a, b, d, c)));
  return worst;
}

double Tensor4::max_abs() const {
  double worst = 0.0;
  for (double v : data_) worst = std::max(worst, std::abs(v));
  return worst;
}

namespace {

void require_square(const Matrix& t, int m, const char* what) {
  if (t.rows() != m || t.cols() != m) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(m) + "x" +
                         std::to_string(m) + ", got " + std::to_string(t.rows()) + "x" +
                         std::to_string(t.cols()));
  }
}

}  // namespace

Matrix raise_index(const ScreenMetric& g, const Matrix& t) {
  require_square(t, g.m(), "raise_index");
  return g.inv() * t;
}

Matrix lower_index(const ScreenMetric& g, const Matrix& mixed) {
  require_square(mixed, g.m(), "lower_index");
  return g.g() * mixed;
}

Vector contract_upper(const Matrix& mixed, const Vector& covector) {
  if (mixed.rows() != covector.size()) throw DimensionError("contract_upper: size mismatch");
  return mixed.transpose() * covector;
}

std::vector<EigenPair> pencil_eigen(const ScreenMetric& g, const Matrix& lambda) {
  require_square(lambda, g.m(), "pencil_eigen");
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(symmetrize(lambda), g.g());
  if (solver.info() != Eigen::Success) {
    throw PreconditionError("metric not positive definite");
  }
  std::vector<EigenPair> out;
  out.reserve(static_cast<std::size_t>(g.m()));
  for (int i = 0; i < g.m(); ++i) {
    Vector v = solver.eigenvectors().col(i);
    v.normalize();
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    if (v(k) < 0.0) v = -v;
    out.push_back({solver.eigenvalues()(i), v});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const EigenPair& x, const EigenPair& y) { return x.value < y.value; });
  return out;
}

Matrix alternate(const Matrix& t) {
  if (t.rows() != t.cols()) throw DimensionError("alternate: square matrix required");
  return 0.5 * (t - t.transpose());
}

Matrix symmetrize(const Matrix& t) {
  if (t.rows() != t.cols()) throw DimensionError("symmetrize: square matrix required");
  return 0.5 * (t + t.transpose());
}

double relative_det(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("relative_det: square matrix required");
  if (a.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  const double top = s(0);
  if (top == 0.0) return 0.0;
  double r = 1.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r *= s(i) / top;
  return r;
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }
double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace ljet
