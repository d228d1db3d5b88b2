#include "ttbc/operator.hpp"

#include "ttbc/errors.hpp"
#include "ttbc/linalg.hpp"

namespace ttbc {

namespace {

bool symmetric_standard_path(const SystemCoefficients& coeffs,
                             const ToleranceConfig& tol) {
  return !coeffs.j && is_symmetric(coeffs.a, tol.symmetry_tol());
}

// (j^{-1} a)^{1/2}, with j = I when absent.
Matrix normal_root(const SystemCoefficients& coeffs, const ToleranceConfig& tol) {
  const bool a_sym = is_symmetric(coeffs.a, tol.symmetry_tol());
  if (!coeffs.j) {
    return a_sym ? linalg::spd_sqrt(coeffs.a, tol)
                 : linalg::general_sqrt(coeffs.a, tol);
  }
  if (a_sym) return linalg::j_weighted_sqrt(*coeffs.j, coeffs.a, tol);
  return linalg::general_sqrt(linalg::inverse(*coeffs.j) * coeffs.a, tol);
}

// a^{-1/2} of the bare normal-normal block (no mass weighting); feeds the
// Sylvester right-hand sides.
Matrix bare_inv_root(const SystemCoefficients& coeffs, const ToleranceConfig& tol) {
  if (is_symmetric(coeffs.a, tol.symmetry_tol())) {
    return linalg::spd_inv_sqrt(coeffs.a, tol);
  }
  return linalg::inverse(linalg::general_sqrt(coeffs.a, tol));
}

Matrix solve_for(const Matrix& l, const Matrix& rhs, bool symmetric_path,
                 const ToleranceConfig& tol) {
  if (symmetric_path) return linalg::solve_sylvester_sym(l, rhs, tol);
  return linalg::solve_sylvester_general(l, l, rhs, tol);
}

}  // namespace

Matrix derive_p1(const SystemCoefficients& coeffs, const ToleranceConfig& tol) {
  coeffs.validate(tol);
  if (symmetric_standard_path(coeffs, tol)) {
    return -linalg::spd_inv_sqrt(coeffs.a, tol);
  }
  return -linalg::inverse(normal_root(coeffs, tol));
}

std::array<Matrix, 2> derive_q(const SystemCoefficients& coeffs,
                               const ToleranceConfig& tol) {
  coeffs.validate(tol);
  const int n = coeffs.n;
  const bool sym_path = symmetric_standard_path(coeffs, tol);
  const Matrix l = -derive_p1(coeffs, tol);
  const Matrix a_inv = linalg::inverse(coeffs.a);
  const Matrix a_inv_root = bare_inv_root(coeffs, tol);
  const Matrix j_root = coeffs.j ? linalg::spd_sqrt(*coeffs.j, tol) : Matrix{};

  std::array<Matrix, 2> q{Matrix::Zero(n, n), Matrix::Zero(n, n)};
  for (int i = 0; i < coeffs.tangential_dims; ++i) {
    Matrix rhs = -(a_inv * coeffs.b[i] * a_inv_root);
    if (coeffs.j) rhs = rhs * j_root;
    q[i] = solve_for(l, rhs, sym_path, tol);
  }
  return q;
}

Matrix derive_p(const SystemCoefficients& coeffs, const std::array<Matrix, 2>& q,
                const ToleranceConfig& tol) {
  coeffs.validate(tol);
  const bool sym_path = symmetric_standard_path(coeffs, tol);
  const Matrix l = -derive_p1(coeffs, tol);
  const Matrix a_inv = linalg::inverse(coeffs.a);
  const Matrix a_inv_root = bare_inv_root(coeffs, tol);

  Matrix rhs = -(a_inv * coeffs.c0 * a_inv_root);
  if (coeffs.j) rhs = rhs * linalg::spd_sqrt(*coeffs.j, tol);
  for (int i = 0; i < coeffs.tangential_dims; ++i) {
    const Matrix& d_i = coeffs.d_tau_a_inv_sqrt[i];
    if (d_i.isZero(0.0)) continue;
    rhs -= a_inv * coeffs.b[i] * d_i;
    rhs -= q[i] * d_i;
  }
  return solve_for(l, rhs, sym_path, tol);
}

TtbcOperator derive_operator(const SystemCoefficients& coeffs,
                             const ToleranceConfig& tol) {
  TtbcOperator op;
  op.tangential_dims = coeffs.tangential_dims;
  op.p1 = derive_p1(coeffs, tol);
  op.q = derive_q(coeffs, tol);
  op.p_alg = derive_p(coeffs, op.q, tol);
  return to_resolved_form(std::move(op), tol);
}

TtbcOperator to_resolved_form(TtbcOperator op, const ToleranceConfig& tol) {
  (void)tol;
  if (op.p1.rows() == 0 || op.p1.rows() != op.p1.cols()) {
    throw Error("to_resolved_form: operator has no p1 block");
  }
  const int n = op.size();
  if (op.p_alg.size() == 0) op.p_alg = Matrix::Zero(n, n);
  for (auto& block : op.q) {
    if (block.size() == 0) block = Matrix::Zero(n, n);
  }
  op.resolved_p1 = linalg::inverse(op.p1);
  op.resolved_p_alg = op.resolved_p1 * op.p_alg;
  for (int i = 0; i < 2; ++i) op.resolved_q[i] = op.resolved_p1 * op.q[i];
  return op;
}

Matrix evaluate_symbol(const TtbcOperator& op, double s, std::array<double, 2> xi) {
  const int n = op.size();
  Matrix out = s * op.p1;
  if (op.p_alg.size() != 0) out += op.p_alg;
  for (int i = 0; i < 2; ++i) {
    if (op.q[i].size() != 0) out += xi[i] * op.q[i];
  }
  return out.rows() == n ? out : Matrix::Zero(n, n);
}

}  // namespace ttbc
