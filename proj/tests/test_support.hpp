#pragma once

// Helpers shared by the test binaries: seeded random matrix generators and
// entrywise comparisons.

#include <cmath>
#include <limits>
#include <random>

#include "ttbc/types.hpp"

namespace test_support {

using ttbc::Matrix;

inline Matrix random_orthogonal(std::mt19937& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  return Matrix(qr.householderQ());
}

/// SPD matrix with eigenvalues log-uniform in [1/sqrt(cond), sqrt(cond)].
inline Matrix random_spd(std::mt19937& rng, int n, double cond) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Matrix q = random_orthogonal(rng, n);
  Eigen::VectorXd lambda(n);
  for (int i = 0; i < n; ++i) {
    lambda(i) = std::pow(cond, uni(rng)) / std::sqrt(cond);
  }
  Matrix m = q * lambda.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

inline Matrix random_matrix(std::mt19937& rng, int n, double span = 1.0) {
  std::uniform_real_distribution<double> uni(-span, span);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = uni(rng);
  }
  return m;
}

inline Matrix random_symmetric(std::mt19937& rng, int n, double span = 1.0) {
  Matrix m = random_matrix(rng, n, span);
  return 0.5 * (m + m.transpose());
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

inline bool bitwise_equal(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a.data()[i] != b.data()[i]) return false;
  }
  return true;
}

}  // namespace test_support
