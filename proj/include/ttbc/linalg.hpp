#pragma once

#include "ttbc/types.hpp"

namespace ttbc::linalg {

/// Result of eig_sym: input = eigenvectors * diag(eigenvalues) * eigenvectors^T
/// with eigenvalues in ascending order and orthonormal columns.
struct SpectralDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;
};

/// Eigendecomposition of a symmetric matrix. Throws NotSymmetric when the
/// symmetry check fails, ConvergenceFailure when the iteration does not
/// converge.
SpectralDecomposition eig_sym(const Matrix& m, const ToleranceConfig& tol = {});

/// Principal square root of a symmetric positive-definite matrix.
/// Positive definiteness requires lambda_min > positivity_tol * lambda_max.
Matrix spd_sqrt(const Matrix& m, const ToleranceConfig& tol = {});

/// Inverse principal square root: returns S with S * S * m = I.
Matrix spd_inv_sqrt(const Matrix& m, const ToleranceConfig& tol = {});

/// Solves l*X + X*l = r in the eigenbasis of the symmetric positive-definite
/// matrix l. The divisor for entry (i, j) is lambda_i + lambda_j.
Matrix solve_sylvester_sym(const Matrix& l, const Matrix& r,
                           const ToleranceConfig& tol = {});

/// Solves a*X + X*b = c for square a (n x n) and b (m x m) whose spectra
/// sigma(a) and -sigma(b) are disjoint. Dense Kronecker formulation solved by
/// LU; sized for the small systems this library works with.
Matrix solve_sylvester_general(const Matrix& a, const Matrix& b, const Matrix& c,
                               const ToleranceConfig& tol = {});

/// Returns R with R * R = j^{-1} * s for symmetric positive-definite j and
/// symmetric s such that j^{-1} * s has positive spectrum. Computed by
/// Cholesky congruence: j = G G^T, Y = G^{-1} s G^{-T}, R = G^{-T} sqrt(Y) G^T.
Matrix j_weighted_sqrt(const Matrix& j, const Matrix& s,
                       const ToleranceConfig& tol = {});

/// Principal square root of a diagonalizable matrix whose spectrum is real
/// and positive. Route for non-symmetric coefficient matrices; throws
/// NonPositiveSpectrum when an eigenvalue is non-positive or materially
/// complex.
Matrix general_sqrt(const Matrix& m, const ToleranceConfig& tol = {});

/// Dense inverse; throws SingularMatrix when the matrix is not invertible.
Matrix inverse(const Matrix& m);

}  // namespace ttbc::linalg
