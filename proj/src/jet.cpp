#include "ljet/jet.hpp"

#include <cmath>
#include <sstream>

#include "ljet/errors.hpp"

namespace ljet {

CurvatureSlice CurvatureSlice::zero(int m) {
  CurvatureSlice c;
  c.C1_11a = Vector::Zero(m);
  c.C1_1ab = Matrix::Zero(m, m);
  c.Cn_ab1 = Matrix::Zero(m, m);
  c.Ca_b1c = Tensor3(m);
  c.Ca_bce = Tensor4(m);
  c.C_11a = Vector::Zero(m);
  c.C_1ab = Matrix::Zero(m, m);
  return c;
}

bool CurvatureSlice::is_zero() const {
  return max_abs(C1_11a) == 0.0 && max_abs(C1_1ab) == 0.0 && max_abs(Cn_ab1) == 0.0 &&
         Ca_b1c.max_abs() == 0.0 && Ca_bce.max_abs() == 0.0 && max_abs(C_11a) == 0.0 &&
         max_abs(C_1ab) == 0.0;
}

HypersurfaceJet HypersurfaceJet::zero(int n, const Matrix& g) {
  const int m = n - 2;
  HypersurfaceJet jet;
  jet.n = n;
  jet.g = g.size() == 0 ? Matrix(Matrix::Identity(m, m)) : g;
  jet.lambda = Matrix::Zero(m, m);
  jet.lambda3 = Tensor3(m);
  jet.curvature = CurvatureSlice::zero(m);
  jet.nu_a = Vector::Zero(m);
  jet.nu_ab = Matrix::Zero(m, m);
  jet.rho_a = Vector::Zero(m);
  jet.rho_ab = Matrix::Zero(m, m);
  return jet;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& issue : issues) {
    os << issue.invariant << " at " << issue.location << " (magnitude " << issue.magnitude
       << ")\n";
  }
  return os.str();
}

namespace {

class Checker {
 public:
  Checker(ValidationReport& report, double tol) : report_(report), tol_(tol) {}

  void add(std::string invariant, std::string location, double magnitude) {
    report_.issues.push_back({std::move(invariant), std::move(location), magnitude});
  }

  bool vector_shape(const Vector& v, int m, const std::string& name) {
    if (v.size() != m) {
      add("shape", name + " has length " + std::to_string(v.size()) + ", expected " +
                       std::to_string(m),
          0.0);
      return false;
    }
    return true;
  }

  bool matrix_shape(const Matrix& a, int m, const std::string& name) {
    if (a.rows() != m || a.cols() != m) {
      add("shape", name + " is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                       ", expected " + std::to_string(m) + "x" + std::to_string(m),
          0.0);
      return false;
    }
    return true;
  }

  void symmetric(const Matrix& a, const std::string& name) {
    const double scale = std::max(1.0, max_abs(a));
    double worst = 0.0;
    int wi = 0, wj = 0;
    for (int i = 0; i < a.rows(); ++i)
      for (int j = i + 1; j < a.cols(); ++j) {
        const double d = std::abs(a(i, j) - a(j, i));
        if (d > worst) {
          worst = d;
          wi = i;
          wj = j;
        }
      }
    if (worst > tol_ * scale) {
      add(name + " symmetry", name + "[" + std::to_string(wi) + "][" + std::to_string(wj) + "]",
          worst);
    }
  }

  void skew(const Matrix& a, const std::string& name) {
    const double scale = std::max(1.0, max_abs(a));
    const double worst = max_abs(Matrix(a + a.transpose()));
    if (worst > tol_ * scale) add(name + " skew-symmetry", name, worst);
  }

  double tol() const { return tol_; }

 private:
  ValidationReport& report_;
  double tol_;
};

}  // namespace

ValidationReport validate(const HypersurfaceJet& jet, const Tolerances& tol) {
  ValidationReport report;
  Checker check(report, tol.symmetry);

  if (jet.n < 4) {
    check.add("dimension n >= 4", "n", static_cast<double>(jet.n));
    return report;
  }
  const int m = jet.m();
  bool shapes = true;
  shapes &= check.matrix_shape(jet.g, m, "g");
  shapes &= check.matrix_shape(jet.lambda, m, "lambda");
  if (jet.lambda3.m() != m) {
    check.add("shape", "lambda3 dimension", static_cast<double>(jet.lambda3.m()));
    shapes = false;
  }
  shapes &= check.vector_shape(jet.nu_a, m, "nu_a");
  shapes &= check.matrix_shape(jet.nu_ab, m, "nu_ab");
  shapes &= check.vector_shape(jet.rho_a, m, "rho_a");
  shapes &= check.matrix_shape(jet.rho_ab, m, "rho_ab");
  const auto& c = jet.curvature;
  shapes &= check.vector_shape(c.C1_11a, m, "C1_11a");
  shapes &= check.matrix_shape(c.C1_1ab, m, "C1_1ab");
  shapes &= check.matrix_shape(c.Cn_ab1, m, "Cn_ab1");
  if (c.Ca_b1c.m() != m) {
    check.add("shape", "Ca_b1c dimension", static_cast<double>(c.Ca_b1c.m()));
    shapes = false;
  }
  if (c.Ca_bce.m() != m) {
    check.add("shape", "Ca_bce dimension", static_cast<double>(c.Ca_bce.m()));
    shapes = false;
  }
  shapes &= check.vector_shape(c.C_11a, m, "C_11a");
  shapes &= check.matrix_shape(c.C_1ab, m, "C_1ab");
  if (jet.phi1.has_value() != jet.phi_a.has_value()) {
    check.add("phi pairing", "phi1/phi_a must be given together", 0.0);
  }
  if (jet.phi_a) shapes &= check.vector_shape(*jet.phi_a, m, "phi_a");
  if (!shapes) return report;

  check.symmetric(jet.g, "g");
  Eigen::SelfAdjointEigenSolver<Matrix> g_eig(symmetrize(jet.g), Eigen::EigenvaluesOnly);
  if (g_eig.eigenvalues()(0) <= 0.0) {
    check.add("metric positive definite", "g", g_eig.eigenvalues()(0));
    return report;
  }
  const Matrix g_inv = symmetrize(jet.g).inverse();

  check.symmetric(jet.lambda, "lambda");
  const double l3_scale = std::max(1.0, jet.lambda3.max_abs());
  if (const double d = jet.lambda3.symmetry_defect(); d > tol.symmetry * l3_scale) {
    check.add("lambda3 symmetry", "lambda3", d);
  }
  check.symmetric(jet.nu_ab, "nu_ab");
  check.symmetric(jet.rho_ab, "rho_ab");

  check.symmetric(c.Cn_ab1, "Cn_ab1");
  const double cn_scale = std::max(1.0, max_abs(c.Cn_ab1));
  if (const double tr = (g_inv * c.Cn_ab1).trace(); std::abs(tr) > tol.symmetry * cn_scale * m) {
    check.add("trace condition g^{ab} Cn_ab1 = 0", "Cn_ab1", std::abs(tr));
  }
  check.skew(c.C1_1ab, "C1_1ab");
  const double cb_scale = std::max(1.0, c.Ca_bce.max_abs());
  if (const double d = c.Ca_bce.last_pair_skew_defect(); d > tol.symmetry * cb_scale) {
    check.add("Ca_bce skew-symmetry", "Ca_bce", d);
  }

  if (jet.harmonic_normalized) {
    const double scale = std::max(1.0, max_abs(jet.lambda));
    if (const double tr = (g_inv * jet.lambda).trace(); std::abs(tr) > tol.symmetry * scale * m) {
      check.add("harmonic normalization (mean focus = 0)", "lambda", std::abs(tr) / m);
    }
  }
  return report;
}

double harmonic_mean(const HypersurfaceJet& jet) {
  const ScreenMetric g = jet.metric();
  return raise_index(g, jet.lambda).trace() / jet.m();
}

HypersurfaceJet normalize_to_harmonic_pole(const HypersurfaceJet& jet) {
  HypersurfaceJet out = jet;
  const double mean = harmonic_mean(jet);
  out.lambda = symmetrize(jet.lambda - mean * jet.g);
  out.harmonic_normalized = true;
  return out;
}

}  // namespace ljet
