#include "ttbc/types.hpp"

namespace ttbc {

bool all_finite(const Matrix& m) { return m.allFinite(); }

bool is_symmetric(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double norm = m.norm();
  if (norm == 0.0) return true;
  return (m - m.transpose()).norm() <= rel_tol * norm;
}

}  // namespace ttbc
