#include "ttbc/linalg.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "ttbc/errors.hpp"

namespace ttbc::linalg {

namespace {

void require_square(const Matrix& m, const char* who) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << who << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw Error(os.str());
  }
  if (!all_finite(m)) {
    std::ostringstream os;
    os << who << ": matrix has non-finite entries";
    throw Error(os.str());
  }
}

void require_symmetric(const Matrix& m, const ToleranceConfig& tol, const char* who) {
  if (!is_symmetric(m, tol.symmetry_tol())) {
    std::ostringstream os;
    os << who << ": matrix is not symmetric to relative tolerance "
       << tol.symmetry_tol();
    throw NotSymmetric(os.str());
  }
}

// lambda_min > positivity_tol * lambda_max, both taken from an ascending
// eigenvalue vector.
void require_positive_spectrum(const Vector& eigenvalues, const ToleranceConfig& tol,
                               const char* who) {
  const double lambda_min = eigenvalues(0);
  const double lambda_max = eigenvalues(eigenvalues.size() - 1);
  if (lambda_max <= 0.0 || lambda_min <= tol.positivity_tol() * lambda_max) {
    std::ostringstream os;
    os << who << ": matrix is not positive definite (eigenvalue " << lambda_min
       << ", largest " << lambda_max << ")";
    throw NotPositiveDefinite(os.str(), lambda_min);
  }
}

void check_residual(double residual, double reference, const ToleranceConfig& tol,
                    const char* who) {
  if (!(residual <= tol.residual_tol() * reference)) {
    std::ostringstream os;
    os << who << ": residual " << residual << " exceeds "
       << tol.residual_tol() * reference;
    throw ConvergenceFailure(os.str());
  }
}

Matrix spectral_power(const SpectralDecomposition& d, double exponent) {
  Vector powered = d.eigenvalues.array().pow(exponent).matrix();
  Matrix out = d.eigenvectors * powered.asDiagonal() * d.eigenvectors.transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace

SpectralDecomposition eig_sym(const Matrix& m, const ToleranceConfig& tol) {
  require_square(m, "eig_sym");
  require_symmetric(m, tol, "eig_sym");
  Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("eig_sym: eigenvalue iteration failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix spd_sqrt(const Matrix& m, const ToleranceConfig& tol) {
  SpectralDecomposition d = eig_sym(m, tol);
  require_positive_spectrum(d.eigenvalues, tol, "spd_sqrt");
  Matrix root = spectral_power(d, 0.5);
  check_residual((root * root - m).norm(), m.norm(), tol, "spd_sqrt");
  return root;
}

Matrix spd_inv_sqrt(const Matrix& m, const ToleranceConfig& tol) {
  SpectralDecomposition d = eig_sym(m, tol);
  require_positive_spectrum(d.eigenvalues, tol, "spd_inv_sqrt");
  Matrix root = spectral_power(d, -0.5);
  const double n = static_cast<double>(m.rows());
  // The identity residual is amplified by the condition number, so the check
  // reference must scale with it or legal ill-conditioned input would throw.
  const double cond =
      d.eigenvalues(d.eigenvalues.size() - 1) / d.eigenvalues(0);
  check_residual((root * root * m - Matrix::Identity(m.rows(), m.cols())).norm(),
                 std::sqrt(n) * std::max(1.0, cond), tol, "spd_inv_sqrt");
  return root;
}

Matrix solve_sylvester_sym(const Matrix& l, const Matrix& r,
                           const ToleranceConfig& tol) {
  require_square(l, "solve_sylvester_sym");
  if (r.rows() != l.rows() || r.cols() != l.cols()) {
    throw Error("solve_sylvester_sym: right-hand side shape mismatch");
  }
  if (!all_finite(r)) {
    throw Error("solve_sylvester_sym: right-hand side has non-finite entries");
  }
  SpectralDecomposition d = eig_sym(l, tol);
  require_positive_spectrum(d.eigenvalues, tol, "solve_sylvester_sym");

  Matrix rt = d.eigenvectors.transpose() * r * d.eigenvectors;
  for (Eigen::Index i = 0; i < rt.rows(); ++i) {
    for (Eigen::Index j = 0; j < rt.cols(); ++j) {
      rt(i, j) /= d.eigenvalues(i) + d.eigenvalues(j);
    }
  }
  Matrix x = d.eigenvectors * rt * d.eigenvectors.transpose();
  check_residual((l * x + x * l - r).norm(), l.norm() * x.norm() + r.norm(), tol,
                 "solve_sylvester_sym");
  return x;
}

Matrix solve_sylvester_general(const Matrix& a, const Matrix& b, const Matrix& c,
                               const ToleranceConfig& tol) {
  require_square(a, "solve_sylvester_general");
  require_square(b, "solve_sylvester_general");
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.rows();
  if (c.rows() != n || c.cols() != m) {
    throw Error("solve_sylvester_general: right-hand side shape mismatch");
  }
  if (!all_finite(c)) {
    throw Error("solve_sylvester_general: right-hand side has non-finite entries");
  }

  Eigen::EigenSolver<Matrix> ea(a, false);
  Eigen::EigenSolver<Matrix> eb(b, false);
  if (ea.info() != Eigen::Success || eb.info() != Eigen::Success) {
    throw ConvergenceFailure("solve_sylvester_general: eigenvalue iteration failed");
  }
  const double scale = a.norm() + b.norm();
  double min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      min_gap = std::min(min_gap, std::abs(ea.eigenvalues()(i) + eb.eigenvalues()(j)));
    }
  }
  if (!(min_gap > tol.separation_tol() * scale)) {
    std::ostringstream os;
    os << "solve_sylvester_general: spectra of a and -b overlap (minimum gap "
       << min_gap << ")";
    throw SpectraOverlap(os.str());
  }

  // vec(a X + X b) = (I (x) a + b^T (x) I) vec(X), columns stacked.
  Matrix k = Matrix::Zero(n * m, n * m);
  for (Eigen::Index j = 0; j < m; ++j) {
    k.block(j * n, j * n, n, n) += a;
    for (Eigen::Index i = 0; i < m; ++i) {
      k.block(i * n, j * n, n, n) += b(j, i) * Matrix::Identity(n, n);
    }
  }
  Vector rhs(n * m);
  for (Eigen::Index j = 0; j < m; ++j) rhs.segment(j * n, n) = c.col(j);

  Eigen::PartialPivLU<Matrix> lu(k);
  Vector xv = lu.solve(rhs);
  Matrix x(n, m);
  for (Eigen::Index j = 0; j < m; ++j) x.col(j) = xv.segment(j * n, n);

  check_residual((a * x + x * b - c).norm(), scale * x.norm() + c.norm(), tol,
                 "solve_sylvester_general");
  return x;
}

Matrix j_weighted_sqrt(const Matrix& j, const Matrix& s, const ToleranceConfig& tol) {
  require_square(j, "j_weighted_sqrt");
  if (s.rows() != j.rows() || s.cols() != j.cols()) {
    throw Error("j_weighted_sqrt: shape mismatch between j and s");
  }
  require_symmetric(s, tol, "j_weighted_sqrt");
  SpectralDecomposition dj = eig_sym(j, tol);
  require_positive_spectrum(dj.eigenvalues, tol, "j_weighted_sqrt");

  Eigen::LLT<Matrix> llt(0.5 * (j + j.transpose()));
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("j_weighted_sqrt: Cholesky factorization failed",
                              dj.eigenvalues(0));
  }
  Matrix g = llt.matrixL();
  // Y = G^{-1} s G^{-T} is congruent to s and similar to j^{-1} s.
  Matrix y = g.triangularView<Eigen::Lower>().solve(
      Matrix(g.triangularView<Eigen::Lower>()
                 .solve(0.5 * (s + s.transpose()))
                 .transpose()));
  y = 0.5 * (y + y.transpose());
  SpectralDecomposition dy = eig_sym(y, tol);
  const double lambda_min = dy.eigenvalues(0);
  const double lambda_max = dy.eigenvalues(dy.eigenvalues.size() - 1);
  if (lambda_max <= 0.0 || lambda_min <= tol.positivity_tol() * lambda_max) {
    std::ostringstream os;
    os << "j_weighted_sqrt: j^{-1} s has non-positive spectrum (eigenvalue "
       << lambda_min << ")";
    throw NonPositiveSpectrum(os.str());
  }
  Matrix sqrt_y = spectral_power(dy, 0.5);
  Matrix gt = g.transpose();
  Matrix r = gt.triangularView<Eigen::Upper>().solve(Matrix(sqrt_y * gt));

  Matrix target = llt.solve(0.5 * (s + s.transpose()));
  check_residual((r * r - target).norm(), target.norm(), tol, "j_weighted_sqrt");
  return r;
}

Matrix general_sqrt(const Matrix& m, const ToleranceConfig& tol) {
  require_square(m, "general_sqrt");
  Eigen::EigenSolver<Matrix> solver(m, true);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("general_sqrt: eigenvalue iteration failed");
  }
  const auto& values = solver.eigenvalues();
  double max_re = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    max_re = std::max(max_re, values(i).real());
  }
  const double imag_budget = tol.separation_tol() * std::max(m.norm(), 1.0);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values(i).imag()) > imag_budget ||
        values(i).real() <= tol.positivity_tol() * max_re) {
      std::ostringstream os;
      os << "general_sqrt: eigenvalue " << values(i).real();
      if (values(i).imag() != 0.0) os << " + " << values(i).imag() << "i";
      os << " is not strictly positive";
      throw NonPositiveSpectrum(os.str());
    }
  }
  Eigen::MatrixXcd v = solver.eigenvectors();
  Eigen::VectorXcd sqrt_values(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    sqrt_values(i) = std::sqrt(values(i));
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(v);
  Eigen::MatrixXcd root_c = v * sqrt_values.asDiagonal() * lu.inverse();
  Matrix root = root_c.real();
  check_residual((root * root - m).norm(), m.norm(), tol, "general_sqrt");
  return root;
}

Matrix inverse(const Matrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw Error("inverse: expected a non-empty square matrix");
  }
  Eigen::FullPivLU<Matrix> lu(m);
  if (!lu.isInvertible()) {
    throw SingularMatrix("inverse: matrix is singular to working precision");
  }
  return lu.inverse();
}

}  // namespace ttbc::linalg
