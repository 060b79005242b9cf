#include "ljet/cartan.hpp"

#include <random>

#include "ljet/errors.hpp"

namespace ljet {

namespace {

constexpr double kPivot = 1e-9;

// Incremental rank on unit-normalized vectors.  Residuals inside
// (kPivot * 1e-3, kPivot * 1e3) are too close to call.
class RankTracker {
 public:
  RankTracker() = default;
  // Returns false on a borderline pivot.
  bool add(Vector v, int& rank) {
    const double nv = v.norm();
    if (nv == 0.0) return true;
    v /= nv;
    for (const auto& b : basis_) v -= b.dot(v) * b;
    for (const auto& b : basis_) v -= b.dot(v) * b;  // second pass
    const double r = v.norm();
    if (r > kPivot * 1e3) {
      basis_.push_back(v / r);
      ++rank;
      return true;
    }
    return r < kPivot * 1e-3;
  }

 private:
  std::vector<Vector> basis_;
};

bool try_characters(const std::vector<Matrix>& forms, int p, int q, std::mt19937_64& rng,
                    std::vector<int>& s) {
  std::normal_distribution<double> nd;
  RankTracker tracker;
  s.assign(p, 0);
  int rank = 0;
  for (int k = 0; k < p; ++k) {
    Vector v(p + q);
    for (int i = 0; i < p + q; ++i) v(i) = nd(rng);
    const int before = rank;
    for (const auto& W : forms) {
      // fiber part of v _| W
      const Vector polar = (W * v).tail(q);
      if (!tracker.add(polar, rank)) return false;
    }
    s[k] = rank - before;
  }
  return true;
}

int integral_dimension(const std::vector<Matrix>& forms, int p, int q) {
  // Unknown P (q x p), element spanned by (e_a, P e_a).  Equations
  // W(w_a, w_b) = 0 for a < b are affine in P; only the linear part counts.
  const int unknowns = p * q;
  std::vector<Vector> rows;
  for (const auto& W : forms) {
    const Matrix Wbf = W.topRightCorner(p, q);  // omega x pi block
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b) {
        Vector row = Vector::Zero(unknowns);
        // W(w_a, w_b) linear part: sum_i Wbf(a, i) P(i, b) - Wbf(b, i) P(i, a)
        for (int i = 0; i < q; ++i) {
          row(i * p + b) += Wbf(a, i);
          row(i * p + a) -= Wbf(b, i);
        }
        rows.push_back(row);
      }
  }
  if (rows.empty()) return unknowns;
  Matrix A(rows.size(), unknowns);
  for (std::size_t r = 0; r < rows.size(); ++r) A.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  Eigen::ColPivHouseholderQR<Matrix> qr(A);
  qr.setThreshold(kPivot);
  return unknowns - static_cast<int>(qr.rank());
}

}  // namespace

CartanReport tableau_characters(const std::vector<Matrix>& two_forms, int p, int q,
                                unsigned seed) {
  if (p < 1 || q < 1) throw PreconditionError("tableau needs p, q >= 1");
  for (const auto& W : two_forms) {
    if (W.rows() != p + q || W.cols() != p + q) throw DimensionError("2-form has wrong size");
    if (max_abs(Matrix(W + W.transpose())) > 1e-12 * std::max(1.0, max_abs(W)))
      throw PreconditionError("2-form is not skew");
    if (max_abs(Matrix(W.bottomRightCorner(q, q))) > 0.0)
      throw PreconditionError("system is not quasi-linear");
  }
  std::mt19937_64 rng(seed);
  CartanReport rep;
  bool ok = false;
  for (int attempt = 0; attempt < 16 && !ok; ++attempt) ok = try_characters(two_forms, p, q, rng, rep.s);
  if (!ok) throw Error("characters undetermined: every flag hit a borderline pivot");
  for (int k = 0; k < p; ++k) rep.Q += (k + 1) * rep.s[k];
  rep.N = integral_dimension(two_forms, p, q);
  rep.involutive = rep.N == rep.Q;
  return rep;
}

CartanReport characters(int n, unsigned seed) {
  if (n < 4) throw PreconditionError("characters require n >= 4");
  const int m = n - 2;
  Matrix W = Matrix::Zero(2 * m, 2 * m);
  for (int a = 0; a < m; ++a) {
    W(a, m + a) = 0.5;
    W(m + a, a) = -0.5;
  }
  CartanReport rep = tableau_characters({W}, m, m, seed);
  rep.n = n;
  return rep;
}

}  // namespace ljet
