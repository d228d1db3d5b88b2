#include "ttbc/system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ttbc/errors.hpp"
#include "ttbc/linalg.hpp"

namespace ttbc {

void SystemCoefficients::normalize() {
  n = static_cast<int>(a.rows());
  if (c0.size() == 0) c0 = Matrix::Zero(n, n);
  for (auto& block : b) {
    if (block.size() == 0) block = Matrix::Zero(n, n);
  }
  for (auto& block : d_tau_a_inv_sqrt) {
    if (block.size() == 0) block = Matrix::Zero(n, n);
  }
}

void SystemCoefficients::validate(const ToleranceConfig& tol) const {
  if (n <= 0 || a.rows() != n || a.cols() != n) {
    throw ConfigError("coefficients: block a must be square and non-empty");
  }
  if (tangential_dims != 1 && tangential_dims != 2) {
    throw ConfigError("coefficients: tangential_dims must be 1 or 2");
  }
  auto check_block = [&](const Matrix& m, const char* name) {
    if (m.rows() != n || m.cols() != n) {
      std::ostringstream os;
      os << "coefficients: block " << name << " must be " << n << "x" << n;
      throw ConfigError(os.str());
    }
    if (!all_finite(m)) {
      std::ostringstream os;
      os << "coefficients: block " << name << " has non-finite entries";
      throw ConfigError(os.str());
    }
  };
  check_block(a, "a");
  check_block(c0, "c0");
  check_block(b[0], "b1");
  check_block(b[1], "b2");
  check_block(d_tau_a_inv_sqrt[0], "d_tau_a_inv_sqrt_1");
  check_block(d_tau_a_inv_sqrt[1], "d_tau_a_inv_sqrt_2");
  if (j) {
    check_block(*j, "j");
    if (!is_symmetric(*j, tol.symmetry_tol())) {
      throw NotSymmetric("coefficients: mass matrix j is not symmetric");
    }
  }
}

HyperbolicityReport validate_hyperbolicity(const SystemCoefficients& coeffs,
                                           const ToleranceConfig& tol) {
  coeffs.validate(tol);
  HyperbolicityReport report;

  const Matrix& a = coeffs.a;
  const int n = coeffs.n;
  const double a_scale = a.cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i) {
    double row_col_max = 0.0;
    for (int k = 0; k < n; ++k) {
      row_col_max = std::max({row_col_max, std::abs(a(i, k)), std::abs(a(k, i))});
    }
    if (row_col_max <= tol.positivity_tol() * a_scale) {
      report.degenerate_indices.push_back(i);
    }
  }
  if (a_scale == 0.0 || static_cast<int>(report.degenerate_indices.size()) == n) {
    report.ok = false;
    report.message = "every component of the normal-normal block is degenerate";
    report.eigenvalues.assign(n, 0.0);
    return report;
  }

  try {
    const bool a_sym = is_symmetric(a, tol.symmetry_tol());
    if (coeffs.j) {
      linalg::SpectralDecomposition dj = linalg::eig_sym(*coeffs.j, tol);
      const double j_min = dj.eigenvalues(0);
      const double j_max = dj.eigenvalues(dj.eigenvalues.size() - 1);
      if (j_max <= 0.0 || j_min <= tol.positivity_tol() * j_max) {
        report.ok = false;
        std::ostringstream os;
        os << "mass matrix is not positive definite (eigenvalue " << j_min << ")";
        report.message = os.str();
        report.eigenvalues.assign(dj.eigenvalues.data(),
                                  dj.eigenvalues.data() + dj.eigenvalues.size());
        return report;
      }
      if (a_sym) {
        Eigen::LLT<Matrix> llt(0.5 * (*coeffs.j + coeffs.j->transpose()));
        Matrix g = llt.matrixL();
        Matrix y = g.triangularView<Eigen::Lower>().solve(
            Matrix(g.triangularView<Eigen::Lower>()
                       .solve(0.5 * (a + a.transpose()))
                       .transpose()));
        y = 0.5 * (y + y.transpose());
        linalg::SpectralDecomposition dy = linalg::eig_sym(y, tol);
        report.eigenvalues.assign(dy.eigenvalues.data(),
                                  dy.eigenvalues.data() + dy.eigenvalues.size());
      } else {
        Eigen::LLT<Matrix> llt(0.5 * (*coeffs.j + coeffs.j->transpose()));
        Matrix m = llt.solve(a);
        Eigen::EigenSolver<Matrix> es(m, false);
        if (es.info() != Eigen::Success) {
          report.ok = false;
          report.message = "eigenvalue iteration failed on j^{-1} a";
          return report;
        }
        const double imag_budget = tol.separation_tol() * std::max(m.norm(), 1.0);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
          if (std::abs(es.eigenvalues()(i).imag()) > imag_budget) {
            report.ok = false;
            report.message = "spectrum of j^{-1} a is not real";
            return report;
          }
          report.eigenvalues.push_back(es.eigenvalues()(i).real());
        }
        std::sort(report.eigenvalues.begin(), report.eigenvalues.end());
      }
    } else if (a_sym) {
      linalg::SpectralDecomposition d = linalg::eig_sym(a, tol);
      report.eigenvalues.assign(d.eigenvalues.data(),
                                d.eigenvalues.data() + d.eigenvalues.size());
    } else {
      Eigen::EigenSolver<Matrix> es(a, false);
      if (es.info() != Eigen::Success) {
        report.ok = false;
        report.message = "eigenvalue iteration failed on the normal-normal block";
        return report;
      }
      const double imag_budget = tol.separation_tol() * std::max(a.norm(), 1.0);
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (std::abs(es.eigenvalues()(i).imag()) > imag_budget) {
          report.ok = false;
          report.message = "spectrum of the normal-normal block is not real";
          return report;
        }
        report.eigenvalues.push_back(es.eigenvalues()(i).real());
      }
      std::sort(report.eigenvalues.begin(), report.eigenvalues.end());
    }
  } catch (const Error& err) {
    report.ok = false;
    report.message = err.what();
    return report;
  }

  const double lambda_min = report.eigenvalues.front();
  const double lambda_max = report.eigenvalues.back();
  if (lambda_max > 0.0 && lambda_min > tol.positivity_tol() * lambda_max) {
    report.ok = true;
    std::ostringstream os;
    os << "spectrum strictly positive (" << n << " eigenvalues in [" << lambda_min
       << ", " << lambda_max << "])";
    report.message = os.str();
  } else {
    report.ok = false;
    std::ostringstream os;
    os << "spectrum is not strictly positive (smallest eigenvalue " << lambda_min
       << ")";
    if (!report.degenerate_indices.empty()) {
      os << "; degenerate components:";
      for (int idx : report.degenerate_indices) os << ' ' << idx;
    }
    report.message = os.str();
  }
  return report;
}

}  // namespace ttbc
