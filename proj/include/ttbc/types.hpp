#pragma once

#include <Eigen/Dense>

namespace ttbc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative tolerances shared by the linear-algebra kernels and the
/// derivation pipeline. `scale` multiplies every tolerance; the CLI maps the
/// TTBC_TOLERANCE_SCALE environment variable onto it.
struct ToleranceConfig {
  double symmetry = 1e-10;
  double positivity = 1e-12;
  double residual = 1e-10;
  double spectra_separation = 1e-10;
  double scale = 1.0;

  double symmetry_tol() const { return symmetry * scale; }
  double positivity_tol() const { return positivity * scale; }
  double residual_tol() const { return residual * scale; }
  double separation_tol() const { return spectra_separation * scale; }
};

bool all_finite(const Matrix& m);

/// ||m - m^T||_F <= rel_tol * ||m||_F. A zero or empty matrix is symmetric.
bool is_symmetric(const Matrix& m, double rel_tol = 1e-10);

}  // namespace ttbc
