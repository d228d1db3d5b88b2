#pragma once

#include <array>

#include "ttbc/system.hpp"
#include "ttbc/types.hpp"

namespace ttbc {

/// The local (differential) boundary operator
///
///   p1 * du/dt - du/dn + (p_alg + q[0] d/dtau_1 + q[1] d/dtau_2) u = 0
///
/// together with its resolved form, normalized so the time derivative has a
/// unit coefficient:
///
///   du/dt - resolved_p1 * du/dn
///         + (resolved_p_alg + resolved_q[0] d/dtau_1 + resolved_q[1] d/dtau_2) u = 0.
struct TtbcOperator {
  Matrix p1;
  Matrix p_alg;
  std::array<Matrix, 2> q{};

  Matrix resolved_p1;
  Matrix resolved_p_alg;
  std::array<Matrix, 2> resolved_q{};

  int tangential_dims = 2;

  int size() const { return static_cast<int>(p1.rows()); }
};

/// Time-derivative coefficient: -a^{-1/2}, or -(j^{-1} a)^{-1/2} with a mass
/// matrix. Throws the underlying linear-algebra errors on invalid input.
Matrix derive_p1(const SystemCoefficients& coeffs, const ToleranceConfig& tol = {});

/// Tangential-derivative coefficients q_i, one per tangential direction,
/// obtained from the Sylvester equation
///   a^{-1/2} q_i + q_i a^{-1/2} = -a^{-1} b_i a^{-1/2}
/// (right-multiplied by j^{1/2} and with a^{-1/2} read as (j^{-1}a)^{-1/2}
/// when a mass matrix is present). Zero b_i yields exactly zero q_i.
std::array<Matrix, 2> derive_q(const SystemCoefficients& coeffs,
                               const ToleranceConfig& tol = {});

/// Algebraic coefficient p, obtained from the Sylvester equation
///   a^{-1/2} p + p a^{-1/2} = -a^{-1} c0 a^{-1/2}
///                             - sum_i (a^{-1} b_i + q_i) d_tau_a_inv_sqrt[i]
/// with the same mass-matrix weighting as derive_q.
Matrix derive_p(const SystemCoefficients& coeffs, const std::array<Matrix, 2>& q,
                const ToleranceConfig& tol = {});

/// Full pipeline: hyperbolicity-checked derivation of p1, q, p plus the
/// resolved form. Identical inputs produce bitwise identical outputs.
TtbcOperator derive_operator(const SystemCoefficients& coeffs,
                             const ToleranceConfig& tol = {});

/// Fills the resolved fields: resolved_p1 = p1^{-1}, resolved_p_alg =
/// p1^{-1} p_alg, resolved_q[i] = p1^{-1} q[i].
TtbcOperator to_resolved_form(TtbcOperator op, const ToleranceConfig& tol = {});

/// Frequency-domain symbol s * p1 + p_alg + i-less tangential part
/// xi_1 * q[0] + xi_2 * q[1]; handy for spot checks and plotting.
Matrix evaluate_symbol(const TtbcOperator& op, double s, std::array<double, 2> xi);

}  // namespace ttbc
